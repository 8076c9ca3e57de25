"""Brute-force evaluation of limit definitions on dyadic samples.

Nothing here uses the one-sided-limit reduction of :mod:`varsel.setmap`.
The mapping is only sampled: at points ``t + j*step`` for ``li``/``ls`` and at
the midpoints of step-wide cells (weighted by their measure) plus the atoms
for ``mli``.  Intersections and unions run over the neighborhoods of radius
``2^-k`` and the balls of radius ``2^-k``, down to the sampling step.
Parts closer than one step are merged in the results.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ._config import INF
from .intervals import IntervalUnion, hausdorff
from .measure import Measure, Span, measure_of
from .setmap import LEFT, STANDARD, PiecewiseSetMap, Component, Topology, _top

__all__ = [
    "oracle_limits",
    "oracle_mli",
    "oracle_conjugate",
    "oracle_Ih",
    "snap",
    "staircase_truncation",
    "compare_limits",
]

EPS_NUM = 1e-12


def _schedule(step: float) -> list[float]:
    """Radii 1/2, 1/4, ... down to ``step``."""
    k = round(-math.log2(step))
    if 2.0 ** (-k) != step:
        raise ValueError(f"step must be a power of two, got {step}")
    return [2.0 ** (-j) for j in range(1, k + 1)]


def snap(s: IntervalUnion, step: float) -> IntervalUnion:
    """Merge parts closer than ``step``: the set as seen at lattice resolution."""
    return IntervalUnion(s.parts, tol=step)


def _samples(t: float, radius: float, step: float, left: bool) -> list[float]:
    n = round(radius / step)
    js = range(-n, 1) if left else range(-n, n + 1)
    return [t + j * step for j in js if 0.0 <= t + j * step <= 1.0]


def oracle_limits(
    gamma: Callable[[float], IntervalUnion], t: float, kind: str, top=STANDARD, step: float = 2.0**-10
) -> IntervalUnion:
    """``li`` or ``ls`` at ``t`` from samples of ``gamma`` on the step lattice around ``t``.

    ``ls`` intersects, over neighborhood radii, the union of sampled values.
    ``li`` unites, over radii, the intersection of the sampled values fattened
    by one step, which absorbs the drift of affine endpoints (slope at most 1)
    between neighbouring samples.
    """
    top = _top(top)
    left = top.kind == "left"
    radii = _schedule(step)
    if left and t == 0.0:
        return snap(gamma(0.0), step)
    cache: dict[int, IntervalUnion] = {}

    def val(s):
        key = round((s - t) / step)
        if key not in cache:
            cache[key] = gamma(s)
        return cache[key]

    if kind == "ls":
        out = None
        for r in radii:
            u = IntervalUnion.empty().union(*[val(s) for s in _samples(t, r, step, left)])
            out = u if out is None else out.intersect(u)
        return snap(out, step)
    if kind == "li":
        acc = IntervalUnion.empty()
        for r in radii:
            inter = IntervalUnion.real_line()
            for s in _samples(t, r, step, left):
                inter = inter.intersect(val(s).fatten(step))
                if inter.is_empty:
                    break
            acc = acc.union(inter)
        return snap(acc, step)
    raise ValueError(f"kind must be 'li' or 'ls', got {kind!r}")


def _mli_charges(gamma, t, mu, step, left):
    """``(distance from t, sampled value)`` for every charged cell and atom near ``t``."""
    items = []
    n = round(1.0 / step)
    lo_i = -n
    hi_i = -1 if left else n - 1
    for i in range(lo_i, hi_i + 1):
        a, b = t + i * step, t + (i + 1) * step
        a, b = max(a, 0.0), min(b, 1.0)
        if b <= a:
            continue
        if measure_of(mu, [Span(a, b, False, False)]) <= EPS_NUM:
            continue
        reach = max(abs(a - t), abs(b - t))
        items.append((reach, gamma(0.5 * (a + b))))
    for s, w in mu.atoms:
        if w <= EPS_NUM:
            continue
        if left and s > t:
            continue
        items.append((abs(s - t), gamma(s)))
    items.sort(key=lambda it: it[0])
    return items


def oracle_mli(
    gamma: Callable[[float], IntervalUnion],
    t: float,
    mu: Measure,
    top=STANDARD,
    step: float = 2.0**-10,
    depth: int | None = None,
) -> IntervalUnion:
    """``mli`` at ``t`` by the ball criterion.

    For a ball radius ``e`` a point is accepted when some neighborhood of
    ``t`` carries no charged sample whose value misses the ``e``-ball around
    it.  The accepted sets are intersected over ``e = 2^-1 .. 2^-depth``.
    """
    top = _top(top)
    left = top.kind == "left"
    radii = _schedule(step)
    balls = radii if depth is None else [2.0 ** (-k) for k in range(1, depth + 1)]
    if left and t == 0.0 and mu.atom_weight(0.0) == 0.0:
        return snap(gamma(0.0), step)
    items = _mli_charges(gamma, t, mu, step, left)
    out = IntervalUnion.real_line()
    for e in balls:
        accepted = IntervalUnion.empty()
        inter = IntervalUnion.real_line()
        pos = 0
        last = None
        for r in sorted(radii):
            while pos < len(items) and items[pos][0] <= r + 1e-15:
                value = items[pos][1]
                if value != last:  # repeated values leave the intersection unchanged
                    inter = inter.intersect(value.fatten(e))
                    last = value
                pos += 1
            if inter.is_empty:
                break
            accepted = accepted.union(inter)
        out = out.intersect(accepted)
    return snap(out, step)


def oracle_conjugate(f, xs, vs) -> np.ndarray:
    """``max_x x v - f(x)`` over the sample points ``xs``."""
    xs = np.asarray(xs, dtype=float)
    fx = f.evaluate(xs) if hasattr(f, "evaluate") else np.asarray([f(x) for x in xs], dtype=float)
    keep = np.isfinite(fx)
    xs, fx = xs[keep], fx[keep]
    out = np.empty(len(vs))
    for i, v in enumerate(vs):
        out[i] = np.max(xs * v - fx)
    return out


def oracle_Ih(h, y, mu: Measure, n: int = 2**16) -> float:
    """Midpoint Riemann sum of ``h_t(y_t)`` against the density, plus atom terms."""
    ts = (np.arange(n) + 0.5) / n
    ys = np.array([y(t) for t in ts])
    rho = np.array([mu.density_at(t) for t in ts])
    vals = np.empty(n)
    cells = np.searchsorted(np.asarray(h.tgrid), ts, side="right") - 1
    for k, f in enumerate(h.piece_plq):
        m = cells == k
        vals[m] = f.evaluate(ys[m])
    charged = rho > 0
    if np.any(~np.isfinite(vals[charged])):
        return INF
    total = float(np.sum(vals[charged] * rho[charged]) / n)
    for t, w in mu.atoms:
        v = float(h.at(t)(y(t)))
        if v == INF:
            return INF
        total += w * v
    return total


def staircase_truncation(N: int) -> PiecewiseSetMap:
    """Dyadic staircase: ``{2^-n} ∪ [1, 2]`` on ``(2^-(n+1), 2^-n)`` for ``n <= N``.

    The last cell ``(0, 2^-(N+1))`` keeps the value ``{2^-(N+1)} ∪ [1, 2]``;
    grid points carry ``[1, 2]``.
    """
    grid = [0.0] + [2.0 ** (-n) for n in range(N + 1, -1, -1)]
    pieces = []
    for a, b in zip(grid, grid[1:]):
        p = b if b < 1.0 else 1.0
        comps = [Component.const(p, p)]
        if p < 1.0:
            comps.append(Component.const(1.0, 2.0))
        else:
            comps = [Component.const(1.0, 2.0)]
        pieces.append(comps)
    pieces[0] = [Component.const(grid[1], grid[1]), Component.const(1.0, 2.0)]
    bps = [IntervalUnion.interval(1.0, 2.0) for _ in grid]
    return PiecewiseSetMap(grid, pieces, bps)


def compare_limits(gamma: PiecewiseSetMap, mu: Measure | None, step: float, top=STANDARD) -> dict:
    """Largest Hausdorff distance between exact and sampled limits over the breakpoints."""
    from .setmap import inner_limit, mu_inner_limit, outer_limit

    worst = {"li": 0.0, "ls": 0.0, "mli": 0.0}
    for t in gamma.grid:
        worst["li"] = max(worst["li"], hausdorff(inner_limit(gamma, t, top), oracle_limits(gamma, t, "li", top, step)))
        worst["ls"] = max(worst["ls"], hausdorff(outer_limit(gamma, t, top), oracle_limits(gamma, t, "ls", top, step)))
        if mu is not None:
            worst["mli"] = max(
                worst["mli"], hausdorff(mu_inner_limit(gamma, t, mu, top), oracle_mli(gamma, t, mu, top, step))
            )
    return worst
