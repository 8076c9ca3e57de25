"""Piecewise set-valued mappings from [0, 1] into the real line.

A :class:`PiecewiseSetMap` has a grid ``0 = g_0 < ... < g_m = 1``.  On every
open cell its value is a finite union of closed intervals with affine
endpoints ``a(t) = a0 + a1*t`` and ``b(t) = b0 + b1*t``; at every grid point
the value is an explicit :class:`IntervalUnion`.

On [0, 1] the neighborhood filters, grills and full-measure filters that
define the limit operators reduce to one-sided limits of the cell formulas:

* every neighborhood of ``t`` contains an interval around ``t``, and a member of
  the grill (a set meeting every neighborhood) either contains ``t`` or
  accumulates at ``t`` from one side, so
  ``li(t) = cl G(t) ∩ L(t) ∩ R(t)`` and ``ls(t) = cl G(t) ∪ L(t) ∪ R(t)``;
* a set that has positive mass in every neighborhood either contains an atom
  at ``t`` or has positive mass arbitrarily close to ``t`` on some side; a
  strictly positive density puts mass on both sides of ``t``, so
  ``mli(t) = L(t) ∩ R(t)``, further intersected with ``cl G(t)`` when ``t``
  is an atom.  Values at grid points that carry no mass never matter.

``L`` and ``R`` are the Painlevé-Kuratowski limits of the adjacent cell
formulas, which for affine endpoints is the componentwise limit.  With the
left half-open topology only the left side exists, and the point 0 is
isolated: every operator returns ``cl G(0)`` there.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ._config import CLIP, EPS, INF
from .functions import PiecewiseFunction
from .intervals import IntervalUnion, parse_number
from .measure import Measure, Span, measure_of, merge_grids, require_base

__all__ = [
    "Topology",
    "STANDARD",
    "LEFT",
    "Component",
    "PiecewiseSetMap",
    "Violation",
    "RegularityReport",
    "SelectionCheck",
    "SetMapError",
    "one_sided_limit_set",
    "inner_limit",
    "outer_limit",
    "mu_inner_limit",
    "mli_map",
    "is_inner_semicontinuous",
    "is_outer_semicontinuous",
    "is_outer_mu_regular",
    "is_fully_lsc",
    "is_solid_valued",
    "mu_essential_supremum",
    "continuous_selection",
    "left_continuous_selection",
    "michael_representation",
    "michael_density",
    "essential_selection_counterexample",
    "check_essential_selection",
]


class SetMapError(ValueError):
    """A precondition on a set-valued mapping is violated."""


@dataclass(frozen=True)
class Topology:
    kind: str = "standard"

    def __post_init__(self):
        if self.kind not in ("standard", "left"):
            raise ValueError(f"unknown topology {self.kind!r}")


STANDARD = Topology("standard")
LEFT = Topology("left")


def _top(top) -> Topology:
    if isinstance(top, Topology):
        return top
    return Topology(top or "standard")


@dataclass(frozen=True)
class Component:
    """Closed interval with affine endpoints ``[a0 + a1 t, b0 + b1 t]``."""

    a0: float
    a1: float
    b0: float
    b1: float

    def __post_init__(self):
        for c0, c1 in ((self.a0, self.a1), (self.b0, self.b1)):
            if math.isinf(c0) and c1 != 0:
                raise ValueError("an infinite endpoint must have zero slope")
            if math.isnan(c0) or math.isnan(c1) or math.isinf(c1):
                raise ValueError("endpoint coefficients must be real")

    @classmethod
    def const(cls, a: float, b: float) -> "Component":
        return cls(float(a), 0.0, float(b), 0.0)

    def lower(self, t: float) -> float:
        return self.a0 if self.a1 == 0 else self.a0 + self.a1 * t

    def upper(self, t: float) -> float:
        return self.b0 if self.b1 == 0 else self.b0 + self.b1 * t

    def at(self, t: float) -> tuple[float, float]:
        return self.lower(t), self.upper(t)


class PiecewiseSetMap:
    """Set-valued mapping with affine-endpoint components on each grid cell."""

    __slots__ = ("grid", "pieces", "breakpoints")

    def __init__(
        self,
        grid: Sequence[float],
        pieces: Sequence[Sequence[Component]],
        breakpoints: Sequence[IntervalUnion] | None = None,
        tol: float = EPS,
    ):
        grid = tuple(float(g) for g in grid)
        if len(grid) < 2 or grid[0] != 0.0 or grid[-1] != 1.0:
            raise SetMapError(f"grid must run from 0 to 1, got {grid}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise SetMapError("grid must be strictly increasing")
        if len(pieces) != len(grid) - 1:
            raise SetMapError("need one component list per cell")
        self.grid = grid
        self.pieces = tuple(tuple(sorted(p, key=lambda c: c.lower(_mid(grid, k)))) for k, p in enumerate(pieces))
        for k, comps in enumerate(self.pieces):
            t0, t1 = grid[k], grid[k + 1]
            for c in comps:
                for t in (t0, t1):
                    a, b = c.at(t)
                    if a > b + tol:
                        raise SetMapError(f"component {c} reversed at t={t}")
            for c, d in zip(comps, comps[1:]):
                for t in (t0, t1):
                    if c.upper(t) > d.lower(t) + tol:
                        raise SetMapError(f"components {c} and {d} overlap on cell {k}")
        if breakpoints is None:
            breakpoints = [self._continuous_value(k) for k in range(len(grid))]
        if len(breakpoints) != len(grid):
            raise SetMapError("need one explicit value per grid point")
        self.breakpoints = tuple(
            b if isinstance(b, IntervalUnion) else IntervalUnion(b) for b in breakpoints
        )

    # -- construction helpers ----------------------------------------
    @classmethod
    def constant(cls, a: float, b: float) -> "PiecewiseSetMap":
        return cls((0.0, 1.0), [[Component.const(a, b)]])

    @classmethod
    def from_steps(cls, grid, cell_values, point_values=None) -> "PiecewiseSetMap":
        """Constant values per cell, given as ``(a, b)`` pairs or lists of pairs."""
        def pairs(v):
            if isinstance(v, IntervalUnion):
                return list(v.parts)
            return [v] if isinstance(v[0], (int, float)) else list(v)

        pieces = [[Component.const(a, b) for a, b in pairs(v)] for v in cell_values]
        bps = None
        if point_values is not None:
            bps = [IntervalUnion(pairs(v)) for v in point_values]
        return cls(grid, pieces, bps)

    def _continuous_value(self, k: int) -> IntervalUnion:
        """Union of the adjacent one-sided limits at grid point ``k``."""
        sides = []
        if k > 0:
            sides.append(self.piece_value(k - 1, self.grid[k]))
        if k < len(self.grid) - 1:
            sides.append(self.piece_value(k, self.grid[k]))
        return sides[0].union(*sides[1:])

    def with_breakpoints(self, values: Sequence[IntervalUnion]) -> "PiecewiseSetMap":
        return PiecewiseSetMap(self.grid, self.pieces, values)

    def refine(self, points: Iterable[float]) -> "PiecewiseSetMap":
        """Insert grid points; inserted points take the (continuous) cell value."""
        new = [float(p) for p in points if self.locate(float(p))[0] == "piece"]
        if not new:
            return self
        grid = merge_grids(self.grid, new)
        pieces, bps = [], []
        for t in grid:
            kind, k = self.locate(t)
            bps.append(self.breakpoints[k] if kind == "break" else self.piece_value(k, t))
        for a, b in zip(grid, grid[1:]):
            pieces.append(self.pieces[self.locate(0.5 * (a + b))[1]])
        return PiecewiseSetMap(grid, pieces, bps)

    def perturbed(self, changes: dict) -> "PiecewiseSetMap":
        """Copy with the values at the given points replaced."""
        out = self.refine(changes.keys())
        bps = list(out.breakpoints)
        for t, v in changes.items():
            bps[out.grid.index(float(t))] = v if isinstance(v, IntervalUnion) else IntervalUnion(v)
        return out.with_breakpoints(bps)

    # -- evaluation ---------------------------------------------------
    def locate(self, t: float) -> tuple[str, int]:
        if not 0.0 <= t <= 1.0:
            raise SetMapError(f"t={t} outside [0, 1]")
        i = bisect.bisect_left(self.grid, t)
        if i < len(self.grid) and self.grid[i] == t:
            return "break", i
        return "piece", i - 1

    def piece_value(self, k: int, t: float) -> IntervalUnion:
        return IntervalUnion(c.at(t) for c in self.pieces[k])

    def value(self, t: float) -> IntervalUnion:
        kind, k = self.locate(t)
        if kind == "break":
            return self.breakpoints[k]
        return self.piece_value(k, t)

    __call__ = value

    @property
    def is_convex_valued(self) -> bool:
        return all(len(p) == 1 for p in self.pieces) and all(b.is_convex for b in self.breakpoints)

    def same_pieces(self, other: "PiecewiseSetMap") -> bool:
        return self.grid == other.grid and self.pieces == other.pieces

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseSetMap):
            return NotImplemented
        return self.same_pieces(other) and self.breakpoints == other.breakpoints

    def __hash__(self):
        return hash((self.grid, self.pieces, self.breakpoints))

    def __repr__(self) -> str:
        return f"PiecewiseSetMap(grid={self.grid}, pieces={self.pieces}, breakpoints={self.breakpoints})"

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        def num(x):
            return "inf" if x == INF else "-inf" if x == -INF else x

        return {
            "grid": list(self.grid),
            "pieces": [
                {"components": [{"a0": num(c.a0), "a1": c.a1, "b0": num(c.b0), "b1": c.b1} for c in p]}
                for p in self.pieces
            ],
            "breakpoints": [b.to_json() for b in self.breakpoints],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PiecewiseSetMap":
        try:
            grid = [parse_number(g) for g in data["grid"]]
            pieces = []
            for p in data["pieces"]:
                comps = p["components"] if isinstance(p, dict) else p
                pieces.append(
                    [
                        Component(
                            parse_number(c["a0"]),
                            parse_number(c.get("a1", 0)),
                            parse_number(c["b0"]),
                            parse_number(c.get("b1", 0)),
                        )
                        for c in comps
                    ]
                )
            bps = data.get("breakpoints")
            if bps is not None:
                bps = [IntervalUnion.from_json(b) for b in bps]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SetMapError):
                raise
            raise SetMapError(f"malformed set-map description: {exc}") from exc
        return cls(grid, pieces, bps)


def _mid(grid, k):
    return 0.5 * (grid[k] + grid[k + 1])


# ---------------------------------------------------------------------------
# limit operators
# ---------------------------------------------------------------------------


def one_sided_limit_set(gamma: PiecewiseSetMap, t: float, side: str) -> IntervalUnion:
    """Limit of the values as ``s -> t`` from ``side`` ("left" or "right")."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if (side == "left" and t <= 0.0) or (side == "right" and t >= 1.0):
        raise SetMapError(f"no {side} side at t={t}")
    kind, k = gamma.locate(t)
    if kind == "break" and side == "left":
        k -= 1
    return gamma.piece_value(k, t)


def _sides(gamma, t, top):
    out = []
    if t > 0.0:
        out.append(one_sided_limit_set(gamma, t, "left"))
    if top.kind == "standard" and t < 1.0:
        out.append(one_sided_limit_set(gamma, t, "right"))
    return out


def inner_limit(gamma: PiecewiseSetMap, t: float, top=STANDARD) -> IntervalUnion:
    out = gamma.value(t)
    for s in _sides(gamma, t, _top(top)):
        out = out.intersect(s)
    return out


def outer_limit(gamma: PiecewiseSetMap, t: float, top=STANDARD) -> IntervalUnion:
    return gamma.value(t).union(*_sides(gamma, t, _top(top)))


def mu_inner_limit(gamma: PiecewiseSetMap, t: float, mu: Measure, top=STANDARD) -> IntervalUnion:
    require_base(mu)
    top = _top(top)
    sides = _sides(gamma, t, top)
    if not sides:
        # t = 0 under the left topology: {0} is open
        return gamma.value(t)
    out = sides[0]
    for s in sides[1:]:
        out = out.intersect(s)
    if mu.atom_weight(t) > 0:
        out = out.intersect(gamma.value(t))
    return out


def mli_map(gamma: PiecewiseSetMap, mu: Measure, top=STANDARD) -> PiecewiseSetMap:
    """The mapping ``t -> mli(t)``; it agrees with ``gamma`` off the grid."""
    return gamma.with_breakpoints([mu_inner_limit(gamma, t, mu, top) for t in gamma.grid])


# ---------------------------------------------------------------------------
# regularity checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    t: float
    x: float
    kind: str
    distance: float = 0.0

    def to_json(self) -> dict:
        return {"t": self.t, "x": self.x, "kind": self.kind, "distance": self.distance}


@dataclass
class RegularityReport:
    verdict: bool
    violations: list = field(default_factory=list)
    name: str = ""

    def __bool__(self) -> bool:
        return self.verdict

    @property
    def witness(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def to_json(self) -> dict:
        return {
            "property": self.name,
            "verdict": self.verdict,
            "violations": [v.to_json() for v in self.violations],
        }


def _inclusion_report(gamma, pairs, kind, prop) -> RegularityReport:
    """``pairs`` yields ``(t, A, B)``; records where ``A`` is not inside ``B``."""
    violations = []
    for t, inner, outer in pairs:
        if inner.issubset(outer):
            continue
        w = inner.farthest_point_outside(outer)
        if w is None:
            continue
        violations.append(Violation(t, w[0], kind, w[1]))
    return RegularityReport(not violations, violations, prop)


def is_inner_semicontinuous(gamma: PiecewiseSetMap, top=STANDARD) -> RegularityReport:
    """Values are contained in the inner limit (checked at grid points)."""
    top = _top(top)
    pairs = ((t, gamma.breakpoints[k], inner_limit(gamma, t, top)) for k, t in enumerate(gamma.grid))
    return _inclusion_report(gamma, pairs, "value-not-in-inner-limit", f"inner semicontinuity ({top.kind})")


def is_outer_semicontinuous(gamma: PiecewiseSetMap, top=STANDARD) -> RegularityReport:
    top = _top(top)
    pairs = ((t, outer_limit(gamma, t, top), gamma.breakpoints[k]) for k, t in enumerate(gamma.grid))
    return _inclusion_report(gamma, pairs, "outer-limit-not-in-value", f"outer semicontinuity ({top.kind})")


def is_outer_mu_regular(gamma: PiecewiseSetMap, mu: Measure, top=STANDARD) -> RegularityReport:
    """``mli(t) ⊆ cl G(t)`` for all t; inside cells the inclusion is automatic."""
    top = _top(top)
    pairs = ((t, mu_inner_limit(gamma, t, mu, top), gamma.breakpoints[k]) for k, t in enumerate(gamma.grid))
    return _inclusion_report(gamma, pairs, "mli-not-in-closure", f"outer mu-regularity ({top.kind})")


def is_solid_valued(gamma: PiecewiseSetMap, tol: float = EPS) -> RegularityReport:
    """Convex values with nonempty interior everywhere."""
    violations = []
    for k, comps in enumerate(gamma.pieces):
        t0, t1 = gamma.grid[k], gamma.grid[k + 1]
        if len(comps) != 1:
            violations.append(Violation(_mid(gamma.grid, k), math.nan, "cell-not-single-interval"))
            continue
        w0 = comps[0].upper(t0) - comps[0].lower(t0)
        w1 = comps[0].upper(t1) - comps[0].lower(t1)
        if max(w0, w1) <= tol:
            a, b = comps[0].at(_mid(gamma.grid, k))
            violations.append(Violation(_mid(gamma.grid, k), 0.5 * (a + b), "cell-without-interior"))
    for t, v in zip(gamma.grid, gamma.breakpoints):
        if not v.is_solid(tol):
            x = 0.5 * (v.parts[0][0] + v.parts[0][1]) if len(v) == 1 else math.nan
            violations.append(Violation(t, x, "value-without-interior"))
    return RegularityReport(not violations, violations, "solid convex values")


def _require_convex(gamma):
    if not gamma.is_convex_valued:
        raise SetMapError("mapping is not convex-valued (some value is not a single interval)")


def is_fully_lsc(gamma: PiecewiseSetMap) -> RegularityReport:
    """Full lower semicontinuity: isc, solid, and ``int(L ∩ R) ⊆ cl G`` at grid points.

    A set ``A`` is included in ``G(s)`` for a dense set of ``s`` in a two-sided
    neighborhood of a grid point exactly when ``A`` sits inside both one-sided
    limits with some room to spare, i.e. inside ``int(L ∩ R)``.  Points on the
    boundary of ``int(L ∩ R)`` are never flagged.
    """
    _require_convex(gamma)
    isc = is_inner_semicontinuous(gamma)
    solid = is_solid_valued(gamma)
    violations = list(isc.violations) + list(solid.violations)
    for k, t in enumerate(gamma.grid):
        sides = _sides(gamma, t, STANDARD)
        both = sides[0]
        for s in sides[1:]:
            both = both.intersect(s)
        value = gamma.breakpoints[k]
        gaps = []
        for a, b in both.clip(CLIP).interior_parts():
            piece = IntervalUnion.interval(a, b)
            for lo, hi in piece.excess_pieces(value):
                if hi - lo > EPS:
                    gaps.append((lo, hi))
        if gaps:
            lo, hi = max(gaps, key=lambda g: (g[1] - g[0], g[1]))
            violations.append(Violation(t, 0.5 * (lo + hi), "dense-inclusion-outside-closure", value.distance(0.5 * (lo + hi))))
    return RegularityReport(not violations, violations, "full lower semicontinuity")


# ---------------------------------------------------------------------------
# essential supremum
# ---------------------------------------------------------------------------


def _crossings(funcs, t0, t1):
    """Interior points of (t0, t1) where two affine functions meet."""
    pts = set()
    finite = [(c0, c1) for c0, c1 in funcs if math.isfinite(c0)]
    for i in range(len(finite)):
        for j in range(i + 1, len(finite)):
            (p0, p1), (q0, q1) = finite[i], finite[j]
            if p1 == q1:
                continue
            s = (q0 - p0) / (p1 - q1)
            if t0 < s < t1 and s - t0 > EPS and t1 - s > EPS:
                pts.add(s)
    return sorted(pts)


def mu_essential_supremum(maps: Sequence[PiecewiseSetMap], mu: Measure) -> PiecewiseSetMap:
    """Smallest closed-valued mapping containing every input almost everywhere.

    The result is only determined up to null sets; the representative returned
    takes, at each grid point without an atom, the union of its two one-sided
    limits, and at atoms the union of the input values.
    """
    if not maps:
        raise SetMapError("essential supremum of an empty family")
    require_base(mu)
    base = merge_grids(*(g.grid for g in maps))
    grid = [0.0]
    pieces = []
    for a, b in zip(base, base[1:]):
        m = 0.5 * (a + b)
        comps = []
        for g in maps:
            comps.extend(g.pieces[g.locate(m)[1]])
        funcs = [(c.a0, c.a1) for c in comps] + [(c.b0, c.b1) for c in comps]
        cuts = [a] + _crossings(funcs, a, b) + [b]
        for s0, s1 in zip(cuts, cuts[1:]):
            pieces.append(_union_components(comps, 0.5 * (s0 + s1)))
            grid.append(s1)
    grid[-1] = 1.0
    draft = PiecewiseSetMap(grid, pieces)
    bps = []
    for k, t in enumerate(draft.grid):
        if mu.atom_weight(t) > 0:
            bps.append(draft._continuous_value(k).union(*(g.value(t) for g in maps)))
        else:
            bps.append(draft._continuous_value(k))
    return draft.with_breakpoints(bps)


def _union_components(comps, m):
    """Merge overlapping affine components; the ordering is fixed on the sub-cell."""
    order = sorted(comps, key=lambda c: (c.lower(m), -c.upper(m)))
    out = []
    for c in order:
        if out and c.lower(m) <= out[-1].upper(m) + EPS:
            if c.upper(m) > out[-1].upper(m):
                out[-1] = Component(out[-1].a0, out[-1].a1, c.b0, c.b1)
        else:
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# selections
# ---------------------------------------------------------------------------


def _pick(iv: tuple[float, float]) -> float:
    a, b = iv
    if math.isfinite(a) and math.isfinite(b):
        return 0.5 * (a + b)
    if math.isfinite(a):
        return a + 1.0
    if math.isfinite(b):
        return b - 1.0
    return 0.0


def _node_sets(gamma, nodes, top):
    """Feasible interval at each node: the value, cut down by the one-sided limits."""
    out = []
    for t in nodes:
        v = gamma.value(t)
        for s in _sides(gamma, t, top):
            v = v.intersect(s)
        if v.is_empty:
            raise SetMapError(f"empty feasible value at t={t}")
        out.append(v.parts[0])
    return out


def continuous_selection(
    gamma: PiecewiseSetMap, anchor: tuple[float, float] | None = None, max_refinements: int = 20
) -> PiecewiseFunction:
    """Continuous piecewise-affine ``y`` with ``y(t) ∈ G(t)`` for every t.

    Nodes take the midpoint of their feasible interval (the anchor, if given,
    is passed through).  Cells where the interpolant leaves the tube are split
    at their midpoint; with affine endpoints one pass always suffices.
    """
    _require_convex(gamma)
    if any(not p for p in gamma.pieces) or any(b.is_empty for b in gamma.breakpoints):
        raise SetMapError("mapping has empty values")
    isc = is_inner_semicontinuous(gamma)
    if not isc:
        w = isc.witness
        raise SetMapError(f"mapping is not inner semicontinuous (at t={w.t}, x={w.x})")
    nodes = list(gamma.grid)
    if anchor is not None:
        t0, x0 = float(anchor[0]), float(anchor[1])
        if not gamma.value(t0).contains(x0):
            raise SetMapError(f"anchor ({t0}, {x0}) is not in the value at {t0}")
        nodes = list(merge_grids(nodes, [t0]))
    for _ in range(max_refinements + 1):
        feas = _node_sets(gamma, nodes, STANDARD)
        vals = [_pick(iv) for iv in feas]
        if anchor is not None:
            vals[nodes.index(t0)] = x0
        y = PiecewiseFunction(nodes, vals)
        bad = _infeasible_cells(gamma, y)
        if not bad:
            return y
        nodes = list(merge_grids(nodes, [0.5 * (y.grid[k] + y.grid[k + 1]) for k in bad]))
    raise SetMapError("could not build a selection within the refinement budget")


def left_continuous_selection(gamma: PiecewiseSetMap, anchor: tuple[float, float] | None = None) -> PiecewiseFunction:
    """Left-continuous piecewise-affine selection (continuous for the left topology)."""
    _require_convex(gamma)
    isc = is_inner_semicontinuous(gamma, LEFT)
    if not isc:
        w = isc.witness
        raise SetMapError(f"mapping is not left-inner semicontinuous (at t={w.t}, x={w.x})")
    nodes = list(gamma.grid)
    if anchor is not None:
        t0, x0 = float(anchor[0]), float(anchor[1])
        if not gamma.value(t0).contains(x0):
            raise SetMapError(f"anchor ({t0}, {x0}) is not in the value at {t0}")
        nodes = list(merge_grids(nodes, [t0]))
    vals = [_pick(iv) for iv in _node_sets(gamma, nodes, LEFT)]
    if anchor is not None:
        vals[nodes.index(t0)] = x0
    rights = []
    for t, v in zip(nodes, vals):
        if t < 1.0:
            r = one_sided_limit_set(gamma, t, "right")
            if r.is_empty:
                raise SetMapError(f"empty right limit at t={t}")
            rights.append(v if r.contains(v) else _pick(r.parts[0]))
        else:
            rights.append(v)
    y = PiecewiseFunction.left_pwa(nodes, vals, rights)
    if _infeasible_cells(gamma, y):
        raise SetMapError("left-continuous selection left the tube")
    return y


def michael_representation(gamma: PiecewiseSetMap, n: int) -> list[PiecewiseFunction]:
    """``n`` continuous selections whose values fill each ``G(t)`` as ``n`` grows.

    Selection ``j`` follows the convex combination ``(1 - l_j) a(t) + l_j b(t)``
    of the (clipped) endpoints, with ``l_j = j / (n - 1)``; near each grid point
    it bends over a window of relative width ``2**-(n+1)`` to reach the same
    combination of the grid-point value.
    """
    if n <= 0:
        return []
    # validates isc / convexity / nonemptiness
    continuous_selection(gamma)
    lambdas = [0.5] if n == 1 else [j / (n - 1) for j in range(n)]
    nodes = set(gamma.grid)
    frac = 2.0 ** -(n + 1)
    for a, b in zip(gamma.grid, gamma.grid[1:]):
        d = (b - a) * frac
        nodes.update((a + d, b - d))
    nodes = sorted(nodes)
    feas = [IntervalUnion([iv]).clip(CLIP).parts[0] for iv in _node_sets(gamma, nodes, STANDARD)]
    return [PiecewiseFunction(nodes, [(1 - lam) * lo + lam * hi for lo, hi in feas]) for lam in lambdas]


def michael_density(gamma: PiecewiseSetMap, selections: Sequence[PiecewiseFunction], ts: Sequence[float] | None = None) -> float:
    """Max over ``ts`` of the Hausdorff distance between the selection values and ``G(t)``."""
    from .intervals import hausdorff

    if ts is None:
        ts = [i / 256 for i in range(257)]
    worst = 0.0
    for t in ts:
        pts = IntervalUnion((y(t), y(t)) for y in selections)
        worst = max(worst, hausdorff(pts, gamma.value(t).clip(CLIP)))
    return worst


def essential_selection_counterexample(gamma: PiecewiseSetMap, mu: Measure, top=STANDARD) -> PiecewiseFunction | None:
    """Continuous essential selection that is not a selection, or ``None`` if regular.

    The mapping ``t -> mli(t)`` is inner semicontinuous with solid convex values
    and equals ``gamma`` off the grid, so a selection of it through a point of
    ``mli(t*)`` outside ``cl G(t*)`` does the job.
    """
    top = _top(top)
    require_base(mu)
    _require_convex(gamma)
    solid = is_solid_valued(gamma)
    if not solid:
        raise SetMapError("mapping is not solid-valued")
    isc = is_inner_semicontinuous(gamma, top)
    if not isc:
        raise SetMapError(f"mapping is not inner semicontinuous ({top.kind} topology)")
    report = is_outer_mu_regular(gamma, mu, top)
    if report:
        return None
    w = report.witness
    m = mli_map(gamma, mu, top)
    if top.kind == "left":
        return left_continuous_selection(m, anchor=(w.t, w.x))
    return continuous_selection(m, anchor=(w.t, w.x))


@dataclass
class SelectionCheck:
    kind: str  # "selection" | "essential_only" | "not_essential"
    violations: list
    measure: float

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "measure": self.measure,
            "violations": [[s.lo, s.hi, s.lo_closed, s.hi_closed] for s in self.violations],
        }


def _feasible_span(g0, g1, t0, t1):
    """Closed sub-interval of [t0, t1] where the affine g (g0 at t0, g1 at t1) is >= 0."""
    if g0 >= 0 and g1 >= 0:
        return t0, t1
    if g0 < 0 and g1 < 0:
        return None
    s = t0 + (t1 - t0) * g0 / (g0 - g1)
    return (t0, s) if g0 >= 0 else (s, t1)


def _cell_violations(gamma, y, t0, t1, tol):
    """Violation spans of ``y`` against ``gamma`` on the open cell (t0, t1).

    Span ends are exact crossing points; a span is kept only when ``y`` gets
    farther than ``tol`` from the value somewhere on it.
    """
    mid = 0.5 * (t0 + t1)
    kk = gamma.locate(mid)[1]
    ky = y._locate(mid)[1]
    ya = y._interp(ky, t0) if y.grid[ky] != t0 else y.right_values[ky]
    yb = y._interp(ky, t1) if y.grid[ky + 1] != t1 else y.values[ky + 1]
    ok = []
    for c in gamma.pieces[kk]:
        lo_span = (t0, t1) if c.a0 == -INF else _feasible_span(ya - c.lower(t0), yb - c.lower(t1), t0, t1)
        hi_span = (t0, t1) if c.b0 == INF else _feasible_span(c.upper(t0) - ya, c.upper(t1) - yb, t0, t1)
        if lo_span is None or hi_span is None:
            continue
        p, q = max(lo_span[0], hi_span[0], t0), min(lo_span[1], hi_span[1], t1)
        if p <= q:
            ok.append((p, q))
    ok.sort()
    gaps = []
    cur, cur_closed = t0, False
    for p, q in ok:
        if p > cur:
            gaps.append(Span(cur, p, cur_closed, False))
        if q >= cur:
            cur, cur_closed = q, False
    if cur < t1:
        gaps.append(Span(cur, t1, cur_closed, False))

    def excess(t):
        yt = ya + (yb - ya) * (t - t0) / (t1 - t0)
        return gamma.piece_value(kk, t).distance(yt)

    out = []
    for g in gaps:
        probes = [g.lo + (g.hi - g.lo) * i / 8 for i in range(9)]
        if max(excess(t) for t in probes) > tol:
            out.append(g)
    return out


def _merge_spans(spans):
    out = []
    for s in sorted(spans, key=lambda s: (s.lo, s.hi)):
        if out and s.lo == out[-1].hi and (out[-1].hi_closed or s.lo_closed):
            prev = out.pop()
            if s.hi > prev.hi:
                hi_closed = s.hi_closed
            else:
                hi_closed = prev.hi_closed or s.hi_closed
            out.append(Span(prev.lo, max(prev.hi, s.hi), prev.lo_closed, hi_closed))
        else:
            out.append(s)
    return out


def _violation_set(gamma, y, tol=EPS):
    grid = merge_grids(gamma.grid, y.grid)
    spans = []
    for t in grid:
        if not gamma.value(t).contains(y(t), tol):
            spans.append(Span.point(t))
    for t0, t1 in zip(grid, grid[1:]):
        spans.extend(_cell_violations(gamma, y, t0, t1, tol))
    return _merge_spans(spans)


def _infeasible_cells(gamma, y) -> list[int]:
    spans = _violation_set(gamma, y)
    bad = set()
    for s in spans:
        if s.hi > s.lo:
            bad.add(y._locate(0.5 * (s.lo + s.hi))[1])
        else:
            node, k = y._locate(s.lo)
            bad.add(k if k < len(y.grid) - 1 else k - 1)
    return sorted(bad)


def check_essential_selection(gamma: PiecewiseSetMap, y: PiecewiseFunction, mu: Measure) -> SelectionCheck:
    """Classify ``y`` by the exact set ``{t : y(t) ∉ G(t)}`` and its measure."""
    spans = _violation_set(gamma, y)
    if not spans:
        return SelectionCheck("selection", [], 0.0)
    mass = measure_of(mu, spans)
    return SelectionCheck("essential_only" if mass <= 0.0 else "not_essential", spans, mass)
