"""Piecewise-affine scalar functions on [0, 1].

One representation covers continuous piecewise-affine functions and
left-continuous piecewise-affine functions with jumps (which include left
continuous step functions).  On the cell ``(g_k, g_{k+1}]`` the function is
affine, running from ``right_values[k]`` (its right limit at ``g_k``) to
``values[k+1]`` (its value at ``g_{k+1}``).  ``values[k]`` is the value at the
node itself, which is also the left limit there.
"""

from __future__ import annotations

import bisect
from typing import Sequence

from .intervals import parse_number

__all__ = ["PiecewiseFunction"]

MODES = ("continuous", "left-step", "left-pwa")


class PiecewiseFunction:
    __slots__ = ("grid", "values", "right_values", "mode")

    def __init__(
        self,
        grid: Sequence[float],
        values: Sequence[float],
        right_values: Sequence[float] | None = None,
        mode: str = "continuous",
    ):
        grid = tuple(float(g) for g in grid)
        if len(grid) < 2 or grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError(f"grid must run from 0 to 1, got {grid}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        values = tuple(float(v) for v in values)
        if len(values) != len(grid):
            raise ValueError("need one value per node")
        if right_values is None:
            right_values = values
        right_values = tuple(float(v) for v in right_values)
        if len(right_values) != len(grid):
            raise ValueError("need one right limit per node")
        if mode == "continuous" and right_values != values:
            raise ValueError("continuous functions have matching one-sided values")
        if mode == "left-step" and right_values[:-1] != values[1:]:
            raise ValueError("a left-continuous step function is constant on (g_k, g_k+1]")
        self.grid = grid
        self.values = values
        self.right_values = right_values
        self.mode = mode

    @classmethod
    def continuous(cls, grid, values) -> "PiecewiseFunction":
        return cls(grid, values)

    @classmethod
    def constant(cls, c: float) -> "PiecewiseFunction":
        return cls((0.0, 1.0), (c, c))

    @classmethod
    def left_step(cls, grid, values) -> "PiecewiseFunction":
        """Left-continuous step function equal to ``values[k+1]`` on ``(g_k, g_{k+1}]``."""
        values = tuple(values)
        return cls(grid, values, values[1:] + values[-1:], mode="left-step")

    @classmethod
    def left_pwa(cls, grid, values, right_values) -> "PiecewiseFunction":
        return cls(grid, values, right_values, mode="left-pwa")

    # -- evaluation ---------------------------------------------------
    def _locate(self, t: float) -> tuple[bool, int]:
        i = bisect.bisect_left(self.grid, t)
        if i < len(self.grid) and self.grid[i] == t:
            return True, i
        if i == 0 or i == len(self.grid):
            raise ValueError(f"t={t} outside [0, 1]")
        return False, i - 1

    def segment(self, k: int) -> tuple[float, float, float, float]:
        """``(t0, t1, y0, y1)`` describing the affine branch on cell ``k``."""
        return self.grid[k], self.grid[k + 1], self.right_values[k], self.values[k + 1]

    def _interp(self, k: int, t: float) -> float:
        t0, t1, y0, y1 = self.segment(k)
        if y0 == y1:
            return y0
        return y0 + (y1 - y0) * (t - t0) / (t1 - t0)

    def __call__(self, t: float) -> float:
        node, k = self._locate(t)
        if node:
            return self.values[k]
        return self._interp(k, t)

    def right_limit(self, t: float) -> float:
        node, k = self._locate(t)
        if node:
            if k == len(self.grid) - 1:
                raise ValueError("no right limit at 1")
            return self.right_values[k]
        return self._interp(k, t)

    def left_limit(self, t: float) -> float:
        node, k = self._locate(t)
        if node and k == 0:
            raise ValueError("no left limit at 0")
        return self(t)

    @property
    def is_continuous(self) -> bool:
        return self.right_values[:-1] == self.values[:-1]

    def refine(self, grid: Sequence[float]) -> "PiecewiseFunction":
        """Same function on a finer grid (new nodes lie where it is continuous)."""
        grid = tuple(sorted(set(float(g) for g in grid) | set(self.grid)))
        vals, rights = [], []
        for t in grid:
            vals.append(self(t))
            rights.append(self.right_limit(t) if t < 1.0 else self(t))
        mode = self.mode if self.mode != "left-step" else "left-pwa"
        if self.mode == "continuous":
            return PiecewiseFunction(grid, vals)
        return PiecewiseFunction(grid, vals, rights, mode=mode)

    def __repr__(self) -> str:
        return f"PiecewiseFunction(mode={self.mode!r}, grid={self.grid}, values={self.values})"

    def to_json(self) -> dict:
        out = {"mode": self.mode, "grid": list(self.grid), "values": list(self.values)}
        if self.mode != "continuous":
            out["right_values"] = list(self.right_values)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PiecewiseFunction":
        mode = data.get("mode", "continuous")
        grid = [parse_number(g) for g in data["grid"]]
        values = [parse_number(v) for v in data["values"]]
        if mode == "left-step":
            return cls.left_step(grid, values)
        rights = data.get("right_values")
        if rights is not None:
            rights = [parse_number(v) for v in rights]
        return cls(grid, values, rights, mode=mode)
