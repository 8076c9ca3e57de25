"""Closed proper convex piecewise linear-quadratic functions of one variable.

A :class:`PLQFunction` is ``+inf`` outside its domain ``[l, u]`` and equals
``q*x**2/2 + s*x + c`` on each piece ``[x_j, x_{j+1}]``.  The arithmetic is
generic: coefficients may be floats or :class:`fractions.Fraction`, and with
fractions the conjugate, the recession function and their compositions are
computed exactly.

The conjugate is built from the subdifferential: a quadratic piece maps to a
quadratic piece over its slope range, a kink maps to a linear piece whose
slope is the kink location, a linear piece collapses to a kink, and a finite
domain end becomes a linear ray.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._config import EPS, INF
from .intervals import parse_number

__all__ = ["PLQFunction", "PLQError"]


class PLQError(ValueError):
    pass


def _close(a, b, tol) -> bool:
    if a == b:
        return True
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return False
    return abs(a - b) <= tol * (1.0 + max(abs(a), abs(b)))


def _nz(x):
    """Drop the sign of floating zero so representations compare cleanly."""
    if isinstance(x, float) and x == 0.0:
        return 0.0
    return x


def _json_num(x):
    if isinstance(x, Fraction):
        x = float(x)
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return x


class PLQFunction:
    __slots__ = ("breaks", "pieces")

    def __init__(self, breaks: Sequence, pieces: Sequence[Sequence], tol: float = EPS, canonical: bool = True):
        breaks = tuple(_nz(b) for b in breaks)
        pieces = tuple(tuple(_nz(v) for v in p) for p in pieces)
        if len(pieces) < 1 or len(breaks) != len(pieces) + 1:
            raise PLQError("need len(breaks) == len(pieces) + 1 >= 2")
        if any(len(p) != 3 for p in pieces):
            raise PLQError("pieces are (q, s, c) triples")
        if breaks[0] == INF or breaks[-1] == -INF:
            raise PLQError("empty domain")
        point = breaks[0] == breaks[-1]
        if point:
            if len(pieces) != 1:
                raise PLQError("a point domain carries a single piece")
            x = breaks[0]
            if math.isinf(x):
                raise PLQError("point domain must be finite")
            q, s, c = pieces[0]
            pieces = ((0 * q, 0 * s, q * x * x / 2 + s * x + c),)
        else:
            if any(b <= a for a, b in zip(breaks, breaks[1:])):
                raise PLQError(f"breaks must be strictly increasing, got {breaks}")
            for j, (q, s, c) in enumerate(pieces):
                if q < 0:
                    raise PLQError(f"piece {j} has negative curvature")
                if any(isinstance(v, float) and not math.isfinite(v) for v in (q, s, c)):
                    raise PLQError(f"piece {j} has non-finite coefficients")
            # continuity and nondecreasing slopes at interior breaks
            for j in range(1, len(pieces)):
                x = breaks[j]
                (q0, s0, c0), (q1, s1, c1) = pieces[j - 1], pieces[j]
                v0 = q0 * x * x / 2 + s0 * x + c0
                v1 = q1 * x * x / 2 + s1 * x + c1
                if not _close(v0, v1, tol):
                    raise PLQError(f"discontinuous at x={x}: {v0} vs {v1}")
                if q0 * x + s0 > q1 * x + s1 + (0 if isinstance(x, Fraction) else tol) * (1 + abs(q1 * x + s1)):
                    raise PLQError(f"slopes decrease at x={x} (not convex)")
        self.breaks = breaks
        self.pieces = pieces
        if canonical:
            self._canonicalize()

    def _canonicalize(self) -> None:
        if len(self.pieces) == 1:
            return
        bks, pcs = [self.breaks[0]], []
        for j, p in enumerate(self.pieces):
            if pcs and pcs[-1] == p:
                bks[-1] = self.breaks[j + 1]
            else:
                pcs.append(p)
                bks.append(self.breaks[j + 1])
        self.breaks, self.pieces = tuple(bks), tuple(pcs)

    # -- constructors -------------------------------------------------
    @classmethod
    def indicator(cls, a, b) -> "PLQFunction":
        """Indicator of the closed interval [a, b]."""
        zero = 0 * a if not math.isinf(a) else (0 * b if not math.isinf(b) else 0.0)
        return cls((a, b), [(zero, zero, zero)])

    @classmethod
    def support(cls, a, b) -> "PLQFunction":
        """Support function ``v -> sup{v x : x in [a, b]}``."""
        if a > b:
            raise PLQError("empty interval")
        if a == -INF and b == INF:
            return cls.indicator(0.0, 0.0)
        if a == -INF:
            return cls((0.0, INF), [(0.0, b, 0.0)])
        if b == INF:
            return cls((-INF, 0.0), [(0.0, a, 0.0)])
        z = 0 * a
        return cls((-INF, z, INF), [(z, a, z), (z, b, z)])

    @classmethod
    def quadratic(cls, q=1.0, s=0.0, c=0.0, dom=(-INF, INF)) -> "PLQFunction":
        return cls(dom, [(q, s, c)])

    @classmethod
    def linear(cls, s, c=0.0) -> "PLQFunction":
        return cls((-INF, INF), [(0 * s, s, c)])

    # -- basic queries ------------------------------------------------
    @property
    def dom(self) -> tuple:
        return self.breaks[0], self.breaks[-1]

    @property
    def is_point_domain(self) -> bool:
        return self.breaks[0] == self.breaks[-1]

    def piece_index(self, x) -> int:
        for j in range(len(self.pieces)):
            if x <= self.breaks[j + 1]:
                return j
        return len(self.pieces) - 1

    def __call__(self, x, tol: float = 0.0):
        lo, hi = self.dom
        if x < lo - tol or x > hi + tol:
            return INF
        x = min(max(x, lo), hi)
        q, s, c = self.pieces[self.piece_index(x)]
        if q == 0 and s == 0:
            return c
        return q * x * x / 2 + s * x + c

    def evaluate(self, xs) -> np.ndarray:
        """Vectorized float evaluation."""
        xs = np.asarray(xs, dtype=float)
        out = np.full(xs.shape, np.inf)
        bks = [float(b) for b in self.breaks]
        for j, (q, s, c) in enumerate(self.pieces):
            q, s, c = float(q), float(s), float(c)
            m = (xs >= bks[j]) & (xs <= bks[j + 1])
            x = xs[m]
            out[m] = 0.5 * q * x * x + s * x + c
        return out

    def value_at_break(self, j: int):
        """Value at ``breaks[j]`` (finite breaks only)."""
        x = self.breaks[j]
        q, s, c = self.pieces[min(j, len(self.pieces) - 1)]
        return q * x * x / 2 + s * x + c

    def _slope_range(self, j: int) -> tuple:
        """Slopes at the start and end of piece ``j`` (limits at infinite ends)."""
        q, s, _ = self.pieces[j]
        x0, x1 = self.breaks[j], self.breaks[j + 1]
        start = (-INF if q > 0 else s) if x0 == -INF else q * x0 + s
        end = (INF if q > 0 else s) if x1 == INF else q * x1 + s
        return start, end

    # -- transforms ---------------------------------------------------
    def conjugate(self) -> "PLQFunction":
        """Exact Legendre-Fenchel conjugate ``v -> sup_x {x v - f(x)}``."""
        lo, hi = self.dom
        if self.is_point_domain:
            z = 0 * lo
            return PLQFunction((-INF, INF), [(z, lo, -self.pieces[0][2])])
        events = []  # (v_end, coefficients); consecutive events tile dom f*
        p = len(self.pieces)
        slopes = [self._slope_range(j) for j in range(p)]
        if lo != -INF:
            events.append((slopes[0][0], (0 * lo, lo, -self.value_at_break(0))))
        for j, (q, s, c) in enumerate(self.pieces):
            if q > 0:
                events.append((slopes[j][1], (1 / q, -s / q, s * s / (2 * q) - c)))
            if j + 1 < p and slopes[j + 1][0] > slopes[j][1]:
                x = self.breaks[j + 1]
                events.append((slopes[j + 1][0], (0 * x, x, -self.value_at_break(j + 1))))
        if hi != INF:
            events.append((INF, (0 * hi, hi, -self.value_at_break(p))))
        vlo = -INF if lo != -INF else slopes[0][0]
        if not events:
            # affine on the whole line: the conjugate lives on one point
            q, s, c = self.pieces[0]
            return PLQFunction((s, s), [(0 * s, 0 * s, -c)])
        breaks = [vlo] + [e[0] for e in events]
        return PLQFunction(breaks, [e[1] for e in events])

    def recession(self) -> "PLQFunction":
        """Asymptotic function ``v -> lim (f(x + a v) - f(x)) / a``."""
        lo, hi = self.dom
        q0, s0, _ = self.pieces[0]
        q1, s1, _ = self.pieces[-1]
        zero = 0 * s0
        neg = lo == -INF and q0 == 0 and not self.is_point_domain
        pos = hi == INF and q1 == 0 and not self.is_point_domain
        if neg and pos:
            return PLQFunction((-INF, zero, INF), [(zero, s0, zero), (zero, s1, zero)])
        if neg:
            return PLQFunction((-INF, zero), [(zero, s0, zero)])
        if pos:
            return PLQFunction((zero, INF), [(zero, s1, zero)])
        return PLQFunction((zero, zero), [(zero, zero, zero)])

    def tilt(self, v) -> "PLQFunction":
        """``x -> f(x) - v x``."""
        return PLQFunction(self.breaks, [(q, s - v, c) for q, s, c in self.pieces])

    def minimize_over(self, a, b):
        """``inf {f(x) : a <= x <= b}``; ``+inf`` when the interval misses the domain."""
        lo, hi = max(a, self.breaks[0]), min(b, self.breaks[-1])
        if lo > hi:
            return INF
        best = INF
        for j, (q, s, c) in enumerate(self.pieces):
            p0, p1 = max(lo, self.breaks[j]), min(hi, self.breaks[j + 1])
            if p0 > p1:
                continue
            if q > 0:
                x = min(max(-s / q, p0), p1)
                val = q * x * x / 2 + s * x + c
            elif s > 0:
                val = -INF if p0 == -INF else s * p0 + c
            elif s < 0:
                val = -INF if p1 == INF else s * p1 + c
            else:
                val = c
            best = min(best, val)
        return best

    # -- comparison / io ----------------------------------------------
    def equals(self, other: "PLQFunction", tol: float = 0.0) -> bool:
        if len(self.breaks) != len(other.breaks):
            return False
        if tol == 0.0:
            return self.breaks == other.breaks and self.pieces == other.pieces
        for a, b in zip(self.breaks, other.breaks):
            if not (a == b or _close(a, b, tol)):
                return False
        for p, q in zip(self.pieces, other.pieces):
            if not all(_close(x, y, tol) for x, y in zip(p, q)):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLQFunction):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        return hash((self.breaks, self.pieces))

    def __repr__(self) -> str:
        return f"PLQFunction(breaks={self.breaks}, pieces={self.pieces})"

    def as_float(self) -> "PLQFunction":
        return PLQFunction([float(b) for b in self.breaks], [[float(v) for v in p] for p in self.pieces])

    def to_json(self) -> dict:
        return {
            "dom": [_json_num(self.breaks[0]), _json_num(self.breaks[-1])],
            "xbreaks": [_json_num(b) for b in self.breaks],
            "pieces": [[_json_num(v) for v in p] for p in self.pieces],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PLQFunction":
        try:
            pieces = [[parse_number(v) for v in p] for p in data["pieces"]]
            dom = [parse_number(v) for v in data.get("dom", ["-inf", "inf"])]
            xb = [parse_number(v) for v in data.get("xbreaks", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise PLQError(f"malformed PLQ description: {exc}") from exc
        if len(xb) == len(pieces) + 1:
            breaks = xb
        elif len(xb) == len(pieces) - 1:
            breaks = [dom[0]] + xb + [dom[1]]
        else:
            raise PLQError("xbreaks must list either all breaks or the interior ones")
        if breaks[0] != dom[0] or breaks[-1] != dom[1]:
            raise PLQError("xbreaks disagree with dom")
        return cls(breaks, pieces)
