"""Pure-Python coordinate ascent for discretized concave dual objectives.

The problem is described by flat arrays so that this module and the compiled
extension share one calling convention.

PLQ tables: function ``i`` owns pieces ``poff[i] .. poff[i+1]-1``; piece ``j``
lives on ``[plo[j], phi[j]]`` with coefficients ``pq, ps, pc``.

Segments: segment ``k`` has length ``seg_len``, base density ``seg_rho``,
pairing density ``seg_d``, PLQ index ``seg_plq`` and the indices of the
variables holding its left and right end values.

Variables: box ``[lo, hi]``, pairing atom ``wt``, base atom ``wm`` with PLQ
index ``node_plq`` (``-1`` if none).  ``adj_ptr``/``adj_idx`` list the
segments touching each variable in CSR form.

The objective is ``sum_k d_k len_k (y_l + y_r)/2 - rho_k ∫ f_k(y)
+ sum_v wt_v y_v - wm_v f_v(y_v)``.
"""

import math

INF = math.inf
GOLD = 0.5 * (math.sqrt(5.0) - 1.0)
DOM_TOL = 1e-9


class Problem:
    __slots__ = (
        "plo", "phi", "pq", "ps", "pc", "poff",
        "seg_len", "seg_rho", "seg_d", "seg_plq", "seg_l", "seg_r",
        "lo", "hi", "wt", "wm", "node_plq", "adj_ptr", "adj_idx",
    )

    def __init__(self, **arrays):
        for name in self.__slots__:
            setattr(self, name, [x.item() if hasattr(x, "item") else x for x in arrays[name]])


def _plq_value(P, i, x):
    j0, j1 = P.poff[i], P.poff[i + 1]
    lo, hi = P.plo[j0], P.phi[j1 - 1]
    if x < lo - DOM_TOL or x > hi + DOM_TOL:
        return INF
    x = min(max(x, lo), hi)
    j = j0
    while j < j1 - 1 and x > P.phi[j]:
        j += 1
    return 0.5 * P.pq[j] * x * x + P.ps[j] * x + P.pc[j]


def _plq_integral(P, i, y0, y1, length):
    if y0 > y1:
        y0, y1 = y1, y0
    j0, j1 = P.poff[i], P.poff[i + 1]
    lo, hi = P.plo[j0], P.phi[j1 - 1]
    if y0 < lo - DOM_TOL or y1 > hi + DOM_TOL:
        return INF
    y0 = min(max(y0, lo), hi)
    y1 = min(max(y1, lo), hi)
    if y1 <= y0:
        return length * _plq_value(P, i, y0)
    total = 0.0
    scale = length / (y1 - y0)
    for j in range(j0, j1):
        a = max(P.plo[j], y0)
        b = min(P.phi[j], y1)
        if b <= a:
            continue
        q, s, c = P.pq[j], P.ps[j], P.pc[j]
        m = 0.5 * (a + b)
        ga = 0.5 * q * a * a + s * a + c
        gm = 0.5 * q * m * m + s * m + c
        gb = 0.5 * q * b * b + s * b + c
        total += scale * (b - a) * (ga + 4.0 * gm + gb) / 6.0
    return total


def _seg_term(P, k, yl, yr):
    val = P.seg_d[k] * P.seg_len[k] * 0.5 * (yl + yr)
    rho = P.seg_rho[k]
    if rho != 0.0:
        val -= rho * _plq_integral(P, P.seg_plq[k], yl, yr, P.seg_len[k])
    return val


def _node_term(P, v, x):
    val = P.wt[v] * x
    if P.wm[v] != 0.0:
        val -= P.wm[v] * _plq_value(P, P.node_plq[v], x)
    return val


def objective(y, P):
    total = 0.0
    for k in range(len(P.seg_len)):
        total += _seg_term(P, k, y[P.seg_l[k]], y[P.seg_r[k]])
    for v in range(len(P.lo)):
        total += _node_term(P, v, y[v])
    return total


def _local(P, y, v, x):
    val = _node_term(P, v, x)
    for e in range(P.adj_ptr[v], P.adj_ptr[v + 1]):
        k = P.adj_idx[e]
        yl = x if P.seg_l[k] == v else y[P.seg_l[k]]
        yr = x if P.seg_r[k] == v else y[P.seg_r[k]]
        val += _seg_term(P, k, yl, yr)
    return val


def _bracket(P, y, v, x0, lo, hi):
    """Finite search interval around ``x0`` inside ``[lo, hi]``."""
    f0 = _local(P, y, v, x0)
    a, b = lo, hi
    if a == -INF:
        step = 1.0
        a = x0 - step
        while _local(P, y, v, a) >= f0 and step < 1e12:
            step *= 2.0
            a = x0 - step
    if b == INF:
        step = 1.0
        b = x0 + step
        while _local(P, y, v, b) >= f0 and step < 1e12:
            step *= 2.0
            b = x0 + step
    return a, b


def _line_max(P, y, v, xtol):
    x0 = y[v]
    lo, hi = P.lo[v], P.hi[v]
    best_x, best_f = x0, _local(P, y, v, x0)
    if hi - lo <= 0.0:
        return best_x, best_f
    a, b = _bracket(P, y, v, x0, lo, hi)
    c = b - GOLD * (b - a)
    d = a + GOLD * (b - a)
    fc, fd = _local(P, y, v, c), _local(P, y, v, d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLD * (b - a)
            fc = _local(P, y, v, c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLD * (b - a)
            fd = _local(P, y, v, d)
    for x in (0.5 * (a + b), lo, hi):
        if math.isinf(x):
            continue
        fx = _local(P, y, v, x)
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def ascent(y, P, xtol=1e-10, max_sweeps=500, ftol=1e-13):
    """Cyclic coordinate ascent in place; returns ``(objective, sweeps)``."""
    f_prev = objective(y, P)
    sweeps = 0
    n = len(P.lo)
    while sweeps < max_sweeps:
        sweeps += 1
        for v in range(n):
            x, _ = _line_max(P, y, v, xtol)
            y[v] = x
        f = objective(y, P)
        if f - f_prev <= ftol * (1.0 + abs(f)):
            f_prev = max(f, f_prev)
            break
        f_prev = f
    return f_prev, sweeps
