# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled coordinate ascent; mirrors ``_kernels_py`` line for line."""

from libc.math cimport INFINITY, fabs, sqrt, isinf

import numpy as np

cdef double GOLD = 0.5 * (sqrt(5.0) - 1.0)
cdef double DOM_TOL = 1e-9


cdef class Problem:
    cdef double[::1] plo, phi, pq, ps, pc
    cdef long[::1] poff
    cdef double[::1] seg_len, seg_rho, seg_d
    cdef long[::1] seg_plq, seg_l, seg_r
    cdef double[::1] lo, hi, wt, wm
    cdef long[::1] node_plq, adj_ptr, adj_idx
    cdef Py_ssize_t nseg, nvar

    def __init__(self, **a):
        f = lambda k: np.ascontiguousarray(a[k], dtype=np.float64)
        i = lambda k: np.ascontiguousarray(a[k], dtype=np.int_)
        self.plo, self.phi, self.pq, self.ps, self.pc = f("plo"), f("phi"), f("pq"), f("ps"), f("pc")
        self.poff = i("poff")
        self.seg_len, self.seg_rho, self.seg_d = f("seg_len"), f("seg_rho"), f("seg_d")
        self.seg_plq, self.seg_l, self.seg_r = i("seg_plq"), i("seg_l"), i("seg_r")
        self.lo, self.hi, self.wt, self.wm = f("lo"), f("hi"), f("wt"), f("wm")
        self.node_plq, self.adj_ptr, self.adj_idx = i("node_plq"), i("adj_ptr"), i("adj_idx")
        self.nseg = self.seg_len.shape[0]
        self.nvar = self.lo.shape[0]


cdef inline double _clamp(double x, double lo, double hi) noexcept nogil:
    if x < lo:
        return lo
    if x > hi:
        return hi
    return x


cdef double _plq_value(Problem P, long i, double x) noexcept nogil:
    cdef long j0 = P.poff[i], j1 = P.poff[i + 1], j
    cdef double lo = P.plo[j0], hi = P.phi[j1 - 1]
    if x < lo - DOM_TOL or x > hi + DOM_TOL:
        return INFINITY
    x = _clamp(x, lo, hi)
    j = j0
    while j < j1 - 1 and x > P.phi[j]:
        j += 1
    return 0.5 * P.pq[j] * x * x + P.ps[j] * x + P.pc[j]


cdef double _plq_integral(Problem P, long i, double y0, double y1, double length) noexcept nogil:
    cdef double tmp, lo, hi, total, scale, a, b, q, s, c, m, ga, gm, gb
    cdef long j0 = P.poff[i], j1 = P.poff[i + 1], j
    if y0 > y1:
        tmp = y0
        y0 = y1
        y1 = tmp
    lo = P.plo[j0]
    hi = P.phi[j1 - 1]
    if y0 < lo - DOM_TOL or y1 > hi + DOM_TOL:
        return INFINITY
    y0 = _clamp(y0, lo, hi)
    y1 = _clamp(y1, lo, hi)
    if y1 <= y0:
        return length * _plq_value(P, i, y0)
    total = 0.0
    scale = length / (y1 - y0)
    for j in range(j0, j1):
        a = P.plo[j] if P.plo[j] > y0 else y0
        b = P.phi[j] if P.phi[j] < y1 else y1
        if b <= a:
            continue
        q = P.pq[j]
        s = P.ps[j]
        c = P.pc[j]
        m = 0.5 * (a + b)
        ga = 0.5 * q * a * a + s * a + c
        gm = 0.5 * q * m * m + s * m + c
        gb = 0.5 * q * b * b + s * b + c
        total += scale * (b - a) * (ga + 4.0 * gm + gb) / 6.0
    return total


cdef inline double _seg_term(Problem P, long k, double yl, double yr) noexcept nogil:
    cdef double val = P.seg_d[k] * P.seg_len[k] * 0.5 * (yl + yr)
    cdef double rho = P.seg_rho[k]
    if rho != 0.0:
        val -= rho * _plq_integral(P, P.seg_plq[k], yl, yr, P.seg_len[k])
    return val


cdef inline double _node_term(Problem P, long v, double x) noexcept nogil:
    cdef double val = P.wt[v] * x
    if P.wm[v] != 0.0:
        val -= P.wm[v] * _plq_value(P, P.node_plq[v], x)
    return val


cdef double _objective(double[::1] y, Problem P) noexcept nogil:
    cdef double total = 0.0
    cdef Py_ssize_t k, v
    for k in range(P.nseg):
        total += _seg_term(P, k, y[P.seg_l[k]], y[P.seg_r[k]])
    for v in range(P.nvar):
        total += _node_term(P, v, y[v])
    return total


cdef double _local(Problem P, double[::1] y, long v, double x) noexcept nogil:
    cdef double val = _node_term(P, v, x), yl, yr
    cdef long e, k
    for e in range(P.adj_ptr[v], P.adj_ptr[v + 1]):
        k = P.adj_idx[e]
        yl = x if P.seg_l[k] == v else y[P.seg_l[k]]
        yr = x if P.seg_r[k] == v else y[P.seg_r[k]]
        val += _seg_term(P, k, yl, yr)
    return val


cdef double _line_max(Problem P, double[::1] y, long v, double xtol) noexcept nogil:
    cdef double x0 = y[v], lo = P.lo[v], hi = P.hi[v]
    cdef double best_x = x0, best_f = _local(P, y, v, x0)
    cdef double a, b, c, d, fc, fd, step, x, fx
    cdef int r
    if hi - lo <= 0.0:
        return best_x
    a = lo
    b = hi
    if isinf(a):
        step = 1.0
        a = x0 - step
        while _local(P, y, v, a) >= best_f and step < 1e12:
            step *= 2.0
            a = x0 - step
    if isinf(b):
        step = 1.0
        b = x0 + step
        while _local(P, y, v, b) >= best_f and step < 1e12:
            step *= 2.0
            b = x0 + step
    c = b - GOLD * (b - a)
    d = a + GOLD * (b - a)
    fc = _local(P, y, v, c)
    fd = _local(P, y, v, d)
    while b - a > xtol:
        if fc >= fd:
            b = d
            d = c
            fd = fc
            c = b - GOLD * (b - a)
            fc = _local(P, y, v, c)
        else:
            a = c
            c = d
            fc = fd
            d = a + GOLD * (b - a)
            fd = _local(P, y, v, d)
    for r in range(3):
        x = 0.5 * (a + b) if r == 0 else (lo if r == 1 else hi)
        if isinf(x):
            continue
        fx = _local(P, y, v, x)
        if fx > best_f:
            best_x = x
            best_f = fx
    return best_x


def objective(double[::1] y, Problem P):
    return _objective(y, P)


def ascent(double[::1] y, Problem P, double xtol=1e-10, long max_sweeps=500, double ftol=1e-13):
    """Cyclic coordinate ascent in place; returns ``(objective, sweeps)``."""
    cdef double f_prev, f
    cdef long sweeps = 0
    cdef Py_ssize_t v
    with nogil:
        f_prev = _objective(y, P)
        while sweeps < max_sweeps:
            sweeps += 1
            for v in range(P.nvar):
                y[v] = _line_max(P, y, v, xtol)
            f = _objective(y, P)
            if f - f_prev <= ftol * (1.0 + fabs(f)):
                if f > f_prev:
                    f_prev = f
                break
            f_prev = f
    return f_prev, sweeps
