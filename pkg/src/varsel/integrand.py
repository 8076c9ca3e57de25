"""Convex normal integrands that are piecewise constant in t.

``h_t`` is one :class:`PLQFunction` on each open cell of ``tgrid`` and one at
each grid point.  The integral functional ``I_h(y) = ∫ h_t(y_t) dμ_t`` is
evaluated in closed form: on a cell where ``y`` is affine the composition is
piecewise quadratic in t, so Simpson's rule between the crossings of the
x-breaks is exact.
"""

from __future__ import annotations

from typing import Sequence

from ._config import EPS, INF
from .functions import PiecewiseFunction
from .intervals import IntervalUnion, parse_number
from .measure import Measure, merge_grids
from .plq import PLQError, PLQFunction
from .setmap import Component, PiecewiseSetMap

__all__ = [
    "NormalIntegrand",
    "PLQFunction",
    "PLQError",
    "conjugate",
    "recession",
    "domain_map",
    "eval_Ih",
    "integrate_along",
]


class NormalIntegrand:
    __slots__ = ("tgrid", "piece_plq", "break_plq")

    def __init__(
        self,
        tgrid: Sequence[float],
        piece_plq: Sequence[PLQFunction],
        break_plq: Sequence[PLQFunction] | None = None,
    ):
        tgrid = tuple(float(t) for t in tgrid)
        if len(tgrid) < 2 or tgrid[0] != 0.0 or tgrid[-1] != 1.0:
            raise ValueError(f"t-grid must run from 0 to 1, got {tgrid}")
        if any(b <= a for a, b in zip(tgrid, tgrid[1:])):
            raise ValueError("t-grid must be strictly increasing")
        if len(piece_plq) != len(tgrid) - 1:
            raise ValueError("need one PLQ function per t-cell")
        if break_plq is None:
            # default: inherit the left cell (the right cell at 0)
            break_plq = [piece_plq[max(k - 1, 0)] for k in range(len(tgrid))]
        if len(break_plq) != len(tgrid):
            raise ValueError("need one PLQ function per t-breakpoint")
        self.tgrid = tgrid
        self.piece_plq = tuple(piece_plq)
        self.break_plq = tuple(break_plq)

    @classmethod
    def constant(cls, f: PLQFunction) -> "NormalIntegrand":
        return cls((0.0, 1.0), [f], [f, f])

    def locate(self, t: float) -> tuple[str, int]:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t={t} outside [0, 1]")
        if t in self.tgrid:
            return "break", self.tgrid.index(t)
        k = sum(1 for g in self.tgrid if g < t) - 1
        return "piece", k

    def at(self, t: float) -> PLQFunction:
        kind, k = self.locate(t)
        return self.break_plq[k] if kind == "break" else self.piece_plq[k]

    def cell_plq(self, t: float) -> PLQFunction:
        """PLQ on the cell whose interior contains ``t`` (or starts at it)."""
        kind, k = self.locate(t)
        if kind == "break":
            k = min(k, len(self.piece_plq) - 1)
        return self.piece_plq[k]

    def conjugate(self) -> "NormalIntegrand":
        return NormalIntegrand(
            self.tgrid, [f.conjugate() for f in self.piece_plq], [f.conjugate() for f in self.break_plq]
        )

    def __repr__(self) -> str:
        return f"NormalIntegrand(tgrid={self.tgrid}, pieces={len(self.piece_plq)})"

    def to_json(self) -> dict:
        return {
            "tgrid": list(self.tgrid),
            "piece_plq": [f.to_json() for f in self.piece_plq],
            "break_plq": [f.to_json() for f in self.break_plq],
        }

    @classmethod
    def from_json(cls, data: dict, plqs: dict | None = None) -> "NormalIntegrand":
        """Build from a scenario fragment; PLQs may be inline or names into ``plqs``."""

        def get(item):
            if isinstance(item, str):
                if plqs is None or item not in plqs:
                    raise KeyError(f"unknown PLQ function {item!r}")
                return plqs[item]
            return PLQFunction.from_json(item)

        tgrid = [parse_number(t) for t in data.get("tgrid", [0, 1])]
        pieces = [get(p) for p in data["piece_plq"]]
        breaks = data.get("break_plq")
        return cls(tgrid, pieces, None if breaks is None else [get(b) for b in breaks])


def conjugate(f: PLQFunction) -> PLQFunction:
    return f.conjugate()


def recession(f: PLQFunction) -> PLQFunction:
    return f.recession()


def domain_map(h: NormalIntegrand) -> PiecewiseSetMap:
    """``t -> cl dom h_t`` as a piecewise-constant set-valued map."""
    pieces = []
    for f in h.piece_plq:
        lo, hi = f.dom
        pieces.append([Component(float(lo), 0.0, float(hi), 0.0)])
    bps = [IntervalUnion.interval(float(f.dom[0]), float(f.dom[1])) for f in h.break_plq]
    return PiecewiseSetMap(h.tgrid, pieces, bps)


def integrate_along(f: PLQFunction, y0: float, y1: float, length: float, tol: float = EPS) -> float:
    """``∫_0^length f(y(s)) ds`` for ``y`` affine from ``y0`` to ``y1``.

    Returns ``+inf`` when the path leaves ``dom f`` by more than ``tol``.
    """
    lo, hi = float(f.dom[0]), float(f.dom[1])
    a, b = min(y0, y1), max(y0, y1)
    if a < lo - tol or b > hi + tol:
        return INF
    a, b = min(max(a, lo), hi), min(max(b, lo), hi)
    if b <= a:
        return length * float(f(a))
    total = 0.0
    for j, (q, s, c) in enumerate(f.pieces):
        p0, p1 = max(a, float(f.breaks[j])), min(b, float(f.breaks[j + 1]))
        if p1 <= p0:
            continue
        q, s, c = float(q), float(s), float(c)
        m = 0.5 * (p0 + p1)
        g0 = 0.5 * q * p0 * p0 + s * p0 + c
        gm = 0.5 * q * m * m + s * m + c
        g1 = 0.5 * q * p1 * p1 + s * p1 + c
        total += length * (p1 - p0) / (b - a) * (g0 + 4.0 * gm + g1) / 6.0
    return total


def eval_Ih(h: NormalIntegrand, y: PiecewiseFunction, mu: Measure, tol: float = EPS) -> float:
    """``∫ h_t(y_t) dμ_t`` evaluated exactly; ``+inf`` if ``y`` leaves ``dom h`` on a charged set."""
    grid = merge_grids(h.tgrid, y.grid, mu.grid)
    total = 0.0
    for t0, t1 in zip(grid, grid[1:]):
        mid = 0.5 * (t0 + t1)
        rho = mu.density_at(mid)
        if rho == 0.0:
            continue
        ky = y._locate(mid)[1]
        ya = y._interp(ky, t0) if y.grid[ky] != t0 else y.right_values[ky]
        yb = y._interp(ky, t1) if y.grid[ky + 1] != t1 else y.values[ky + 1]
        val = integrate_along(h.at(mid), ya, yb, t1 - t0, tol)
        if val == INF:
            return INF
        total += rho * val
    for t, w in mu.atoms:
        val = float(h.at(t)(y(t), tol))
        if val == INF:
            return INF
        total += w * val
    return total
