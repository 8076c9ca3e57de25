"""Finite Borel measures on [0, 1]: piecewise-constant density plus atoms.

A measure is described by a grid ``0 = g_0 < ... < g_m = 1``, one constant
density per open cell ``(g_k, g_{k+1})`` and a finite list of atoms.  Sets
are finite unions of :class:`Span` objects (intervals with open/closed ends,
or single points), on which every measure evaluates exactly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .intervals import parse_number

__all__ = [
    "Span",
    "SignedMeasure",
    "Measure",
    "Decomposition",
    "measure_of",
    "lebesgue_decompose",
    "total_variation",
    "is_strictly_positive",
    "merge_grids",
    "lebesgue",
    "MeasureError",
]


class MeasureError(ValueError):
    """Malformed measure or set description."""


class Span(NamedTuple):
    """Interval ``lo..hi`` in [0, 1]; ``lo == hi`` with both ends closed is a point."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    @classmethod
    def point(cls, t: float) -> "Span":
        return cls(t, t, True, True)

    def contains(self, t: float) -> bool:
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and not self.lo_closed:
            return False
        if t == self.hi and not self.hi_closed:
            return False
        return True


def merge_grids(*grids: Iterable[float]) -> tuple[float, ...]:
    """Sorted union of breakpoint sets (exact float equality)."""
    pts = set()
    for g in grids:
        pts.update(float(x) for x in g)
    return tuple(sorted(pts))


def _check_grid(grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(float(x) for x in grid)
    if len(grid) < 2 or grid[0] != 0.0 or grid[-1] != 1.0:
        raise MeasureError(f"grid must start at 0 and end at 1, got {grid}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise MeasureError(f"grid must be strictly increasing, got {grid}")
    return grid


class SignedMeasure:
    """Finite signed measure with piecewise-constant density and finitely many atoms."""

    __slots__ = ("grid", "densities", "atoms")

    def __init__(
        self,
        grid: Sequence[float] = (0.0, 1.0),
        densities: Sequence[float] = (0.0,),
        atoms: Iterable[Sequence[float]] = (),
    ):
        self.grid = _check_grid(grid)
        self.densities = tuple(float(d) for d in densities)
        if len(self.densities) != len(self.grid) - 1:
            raise MeasureError("need exactly one density per grid cell")
        atom_list = sorted((float(t), float(w)) for t, w in atoms)
        for t, w in atom_list:
            if not 0.0 <= t <= 1.0:
                raise MeasureError(f"atom location {t} outside [0, 1]")
            if w == 0.0:
                raise MeasureError(f"atom at {t} has zero weight")
        locs = [t for t, _ in atom_list]
        if len(set(locs)) != len(locs):
            raise MeasureError("atom locations must be distinct")
        self.atoms: tuple[tuple[float, float], ...] = tuple(atom_list)
        self._validate()

    def _validate(self) -> None:
        pass

    # -- lookup -------------------------------------------------------
    def cell_index(self, t: float) -> int:
        """Index of the cell whose closure contains ``t`` from the right (last cell at 1)."""
        return min(bisect.bisect_right(self.grid, t) - 1, len(self.densities) - 1)

    def density_at(self, t: float) -> float:
        return self.densities[self.cell_index(t)]

    def atom_weight(self, t: float) -> float:
        i = bisect.bisect_left(self.atoms, (t, -float("inf")))
        if i < len(self.atoms) and self.atoms[i][0] == t:
            return self.atoms[i][1]
        return 0.0

    @property
    def atom_locations(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.atoms)

    def densities_on(self, grid: Sequence[float]) -> list[float]:
        """Density on every cell of a refinement ``grid`` of this measure's grid."""
        return [self.density_at(0.5 * (a + b)) for a, b in zip(grid, grid[1:])]

    def total_mass(self) -> float:
        return measure_of(self, [Span(0.0, 1.0)])

    # -- algebra ------------------------------------------------------
    def _combine(self, other: "SignedMeasure", sign: float, cls=None):
        grid = merge_grids(self.grid, other.grid)
        dens = [a + sign * b for a, b in zip(self.densities_on(grid), other.densities_on(grid))]
        weights: dict[float, float] = {}
        for t, w in self.atoms:
            weights[t] = weights.get(t, 0.0) + w
        for t, w in other.atoms:
            weights[t] = weights.get(t, 0.0) + sign * w
        atoms = [(t, w) for t, w in weights.items() if w != 0.0]
        return (cls or SignedMeasure)(grid, dens, atoms)

    def __add__(self, other: "SignedMeasure") -> "SignedMeasure":
        cls = Measure if isinstance(self, Measure) and isinstance(other, Measure) else None
        return self._combine(other, 1.0, cls)

    def __sub__(self, other: "SignedMeasure") -> "SignedMeasure":
        return self._combine(other, -1.0)

    def scaled(self, factor: float) -> "SignedMeasure":
        cls = Measure if isinstance(self, Measure) and factor > 0 else SignedMeasure
        if factor == 0:
            return SignedMeasure(self.grid, [0.0] * len(self.densities))
        return cls(self.grid, [factor * d for d in self.densities], [(t, factor * w) for t, w in self.atoms])

    def equivalent(self, other: "SignedMeasure", tol: float = 0.0) -> bool:
        """Same measure, compared on a common grid."""
        grid = merge_grids(self.grid, other.grid)
        if any(abs(a - b) > tol for a, b in zip(self.densities_on(grid), other.densities_on(grid))):
            return False
        locs = set(self.atom_locations) | set(other.atom_locations)
        return all(abs(self.atom_weight(t) - other.atom_weight(t)) <= tol for t in locs)

    def __repr__(self) -> str:
        name = type(self).__name__
        return f"{name}(grid={self.grid}, densities={self.densities}, atoms={self.atoms})"

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {
            "grid": list(self.grid),
            "densities": list(self.densities),
            "atoms": [[t, w] for t, w in self.atoms],
        }

    @classmethod
    def from_json(cls, data: dict):
        try:
            grid = [parse_number(x) for x in data.get("grid", [0, 1])]
            dens = [parse_number(x) for x in data["densities"]]
            atoms = [(parse_number(t), parse_number(w)) for t, w in data.get("atoms", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise MeasureError(f"malformed measure description: {exc}") from exc
        return cls(grid, dens, atoms)


class Measure(SignedMeasure):
    """Nonnegative finite measure."""

    __slots__ = ()

    def _validate(self) -> None:
        if any(d < 0 for d in self.densities):
            raise MeasureError("densities of a positive measure must be >= 0")
        if any(w < 0 for _, w in self.atoms):
            raise MeasureError("atom weights of a positive measure must be > 0")


def lebesgue() -> Measure:
    return Measure((0.0, 1.0), (1.0,))


def _normalize_spans(spans: Iterable[Span]) -> list[Span]:
    out = []
    for s in spans:
        s = Span(float(s[0]), float(s[1]), bool(s[2]) if len(s) > 2 else True, bool(s[3]) if len(s) > 3 else True)
        if not (0.0 <= s.lo <= s.hi <= 1.0):
            raise MeasureError(f"span {s} not inside [0, 1]")
        if s.lo == s.hi and not (s.lo_closed and s.hi_closed):
            raise MeasureError(f"degenerate span {s} must be a closed point")
        out.append(s)
    out.sort(key=lambda s: (s.lo, s.hi))
    for p, q in zip(out, out[1:]):
        if q.lo < p.hi or (q.lo == p.hi and p.hi_closed and q.lo_closed):
            raise MeasureError(f"spans {p} and {q} overlap")
    return out


def measure_of(m: SignedMeasure, spans: Iterable[Span]) -> float:
    """Exact measure of a finite disjoint union of spans."""
    total = 0.0
    for s in _normalize_spans(spans):
        if s.hi > s.lo:
            for k, d in enumerate(m.densities):
                if d == 0.0:
                    continue
                lo = max(s.lo, m.grid[k])
                hi = min(s.hi, m.grid[k + 1])
                if hi > lo:
                    total += d * (hi - lo)
        for t, w in m.atoms:
            if s.contains(t):
                total += w
    return total


def total_variation(theta: SignedMeasure) -> Measure:
    return Measure(theta.grid, [abs(d) for d in theta.densities], [(t, abs(w)) for t, w in theta.atoms])


def is_strictly_positive(mu: SignedMeasure) -> bool:
    """Every nonempty open subset of [0, 1] has positive mass."""
    return all(d > 0 for d in mu.densities)


def require_base(mu: SignedMeasure) -> None:
    if not isinstance(mu, Measure) or not is_strictly_positive(mu):
        raise MeasureError("reference measure must be strictly positive (positive density on every cell)")


@dataclass(frozen=True)
class Decomposition:
    """Lebesgue decomposition of a signed measure against a strictly positive base.

    ``ac_values[k]`` is the Radon-Nikodym derivative on cell ``k`` of ``grid``;
    ``atom_ratios`` maps every atom of the base measure to the derivative
    there.  ``singular`` carries the atoms of the decomposed measure that sit
    where the base has no atom.
    """

    grid: tuple[float, ...]
    ac_values: tuple[float, ...]
    atom_ratios: dict = field(hash=False)
    singular: SignedMeasure
    base: Measure

    def ac_at(self, t: float) -> float:
        if t in self.atom_ratios:
            return self.atom_ratios[t]
        return self.ac_density(t)

    def ac_density(self, t: float) -> float:
        """Derivative on the cell containing ``t``, ignoring base atoms."""
        k = min(bisect.bisect_right(self.grid, t) - 1, len(self.ac_values) - 1)
        return self.ac_values[k]

    def absolutely_continuous_part(self) -> SignedMeasure:
        base = self.base.densities_on(self.grid)
        dens = [r * b for r, b in zip(self.ac_values, base)]
        atoms = [(t, r * self.base.atom_weight(t)) for t, r in self.atom_ratios.items() if r != 0.0]
        return SignedMeasure(self.grid, dens, atoms)

    def reconstruct(self) -> SignedMeasure:
        return self.absolutely_continuous_part() + self.singular


def lebesgue_decompose(theta: SignedMeasure, mu: Measure) -> Decomposition:
    require_base(mu)
    grid = merge_grids(theta.grid, mu.grid)
    td, md = theta.densities_on(grid), mu.densities_on(grid)
    ac = tuple(a / b for a, b in zip(td, md))
    ratios = {t: theta.atom_weight(t) / w for t, w in mu.atoms}
    sing = [(t, w) for t, w in theta.atoms if mu.atom_weight(t) == 0.0]
    singular = SignedMeasure((0.0, 1.0), (0.0,), sing)
    return Decomposition(grid, ac, ratios, singular, mu)
