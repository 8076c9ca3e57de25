"""Finite unions of closed real intervals.

Values of a set-valued mapping into the real line are stored as
:class:`IntervalUnion` objects: sorted, pairwise disjoint closed intervals
whose endpoints may be infinite.  Intervals closer than the global tolerance
are merged on construction, so two unions describing the same set up to the
tolerance have the same representation.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Sequence

from ._config import CLIP, EPS, INF

__all__ = ["IntervalUnion", "hausdorff"]


class IntervalUnion:
    """Sorted union of disjoint closed intervals ``[a_j, b_j]``."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[Sequence[float]] = (), tol: float = EPS):
        raw = []
        for p in parts:
            a, b = float(p[0]), float(p[1])
            if math.isnan(a) or math.isnan(b):
                raise ValueError("interval endpoint is NaN")
            if a > b:
                if a - b > tol:
                    raise ValueError(f"reversed interval [{a}, {b}]")
                a, b = b, a
            if a == INF or b == -INF:
                raise ValueError(f"interval [{a}, {b}] contains no real number")
            raw.append((a, b))
        raw.sort()
        merged: list[tuple[float, float]] = []
        for a, b in raw:
            if merged and a <= merged[-1][1] + tol:
                if b > merged[-1][1]:
                    merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        self.parts: tuple[tuple[float, float], ...] = tuple(merged)

    # -- constructors -------------------------------------------------
    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(())

    @classmethod
    def interval(cls, a: float, b: float) -> "IntervalUnion":
        return cls(((a, b),))

    @classmethod
    def point(cls, x: float) -> "IntervalUnion":
        return cls(((x, x),))

    @classmethod
    def real_line(cls) -> "IntervalUnion":
        return cls(((-INF, INF),))

    # -- basic protocol -----------------------------------------------
    def __iter__(self) -> Iterator[tuple[float, float]]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        if not self.parts:
            return "IntervalUnion(∅)"
        body = " ∪ ".join(f"[{a:g}, {b:g}]" for a, b in self.parts)
        return f"IntervalUnion({body})"

    # -- predicates ---------------------------------------------------
    @property
    def is_empty(self) -> bool:
        return not self.parts

    @property
    def is_convex(self) -> bool:
        return len(self.parts) <= 1

    def is_solid(self, tol: float = EPS) -> bool:
        """Single interval with nonempty interior."""
        return len(self.parts) == 1 and self.parts[0][1] - self.parts[0][0] > tol

    def contains(self, x: float, tol: float = EPS) -> bool:
        return any(a - tol <= x <= b + tol for a, b in self.parts)

    def issubset(self, other: "IntervalUnion", tol: float = EPS) -> bool:
        for a, b in self.parts:
            if not any(c - tol <= a and b <= d + tol for c, d in other.parts):
                return False
        return True

    # -- set algebra --------------------------------------------------
    def union(self, *others: "IntervalUnion") -> "IntervalUnion":
        parts = list(self.parts)
        for o in others:
            parts.extend(o.parts)
        return IntervalUnion(parts)

    def intersect(self, other: "IntervalUnion", tol: float = EPS) -> "IntervalUnion":
        out = []
        i = j = 0
        p, q = self.parts, other.parts
        while i < len(p) and j < len(q):
            lo = max(p[i][0], q[j][0])
            hi = min(p[i][1], q[j][1])
            if lo <= hi:
                out.append((lo, hi))
            elif lo - hi <= tol:
                # touching within tolerance: keep the contact point
                out.append((hi, lo))
            if p[i][1] < q[j][1]:
                i += 1
            else:
                j += 1
        return IntervalUnion(out)

    def fatten(self, r: float) -> "IntervalUnion":
        return IntervalUnion((a - r, b + r) for a, b in self.parts)

    def clip(self, bound: float = CLIP) -> "IntervalUnion":
        out = []
        for a, b in self.parts:
            a, b = max(a, -bound), min(b, bound)
            if a <= b:
                out.append((a, b))
        return IntervalUnion(out)

    def hull(self) -> "IntervalUnion":
        if not self.parts:
            return self
        return IntervalUnion.interval(self.parts[0][0], self.parts[-1][1])

    def interior_parts(self, tol: float = EPS) -> list[tuple[float, float]]:
        """Parts with nonempty interior; read them as open intervals."""
        return [(a, b) for a, b in self.parts if b - a > tol]

    # -- distances ----------------------------------------------------
    def distance(self, x: float) -> float:
        if not self.parts:
            return INF
        best = INF
        for a, b in self.parts:
            if a <= x <= b:
                return 0.0
            best = min(best, a - x if x < a else x - b)
        return best

    def excess_pieces(self, other: "IntervalUnion", tol: float = EPS) -> list[tuple[float, float]]:
        """Closures of the pieces of ``self \\ other`` that reach farther than ``tol``."""
        pieces = []
        for a, b in self.parts:
            cur = a
            for c, d in other.parts:
                if d < cur or c > b:
                    continue
                if c > cur:
                    pieces.append((cur, c))
                cur = max(cur, d)
                if cur >= b:
                    break
            if cur < b or (a == b and not other.contains(a, 0.0)):
                pieces.append((cur, b))
        return [pc for pc in pieces if _piece_reach(pc, other)[0] > tol]

    def farthest_point_outside(
        self, other: "IntervalUnion", tol: float = EPS, bound: float = CLIP
    ) -> tuple[float, float] | None:
        """Point of ``self`` farthest from ``other`` as ``(x, distance)``.

        Both sets are clipped to ``[-bound, bound]``; ties go to the largest x.
        Returns ``None`` when every point of ``self`` is within ``tol``.
        """
        me, ot = self.clip(bound), other.clip(bound)
        best = None
        for piece in me.excess_pieces(ot, tol):
            dist, x = _piece_reach(piece, ot)
            dist = min(dist, 2 * bound)
            if best is None or dist > best[1] or (dist == best[1] and x > best[0]):
                best = (x, dist)
        if best is None or best[1] <= tol:
            return None
        return best

    def to_json(self) -> list[list]:
        return [[_num_json(a), _num_json(b)] for a, b in self.parts]

    @classmethod
    def from_json(cls, data) -> "IntervalUnion":
        return cls((parse_number(a), parse_number(b)) for a, b in data)


def _piece_reach(piece: tuple[float, float], other: IntervalUnion) -> tuple[float, float]:
    """Largest distance to ``other`` attained on the closed piece, with its location."""
    lo, hi = piece
    cands = [lo, hi]
    if other.parts:
        # apex of the distance tent inside each gap of ``other``
        for (c0, d0), (c1, d1) in zip(other.parts, other.parts[1:]):
            m = 0.5 * (d0 + c1)
            if lo < m < hi:
                cands.append(m)
    best = (-1.0, hi)
    for x in cands:
        d = other.distance(x)
        if d > best[0] or (d == best[0] and x > best[1]):
            best = (d, x)
    return best


def hausdorff(a: IntervalUnion, b: IntervalUnion, bound: float = CLIP) -> float:
    """Hausdorff distance after clipping both sets to ``[-bound, bound]``."""
    a, b = a.clip(bound), b.clip(bound)
    if a.is_empty and b.is_empty:
        return 0.0
    if a.is_empty or b.is_empty:
        return INF
    d1 = a.farthest_point_outside(b, tol=0.0, bound=bound)
    d2 = b.farthest_point_outside(a, tol=0.0, bound=bound)
    return max(d1[1] if d1 else 0.0, d2[1] if d2 else 0.0)


def parse_number(value) -> float:
    """Parse a scenario literal: numbers, decimal strings, ``"inf"``, ``"-inf"``."""
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity"):
            return INF
        if text in ("-inf", "-infinity"):
            return -INF
        out = float(text)
        if math.isnan(out):
            raise ValueError("NaN is not allowed")
        return out
    raise ValueError(f"not a number: {value!r}")


def _num_json(x: float):
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return x
