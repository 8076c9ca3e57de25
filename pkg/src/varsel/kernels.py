"""Selects the compiled ascent kernel, falling back to pure Python.

Set ``VARSEL_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("VARSEL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "compiled"


def make_problem(arrays: dict, backend: str | None = None):
    impl = _select(backend)
    return impl.Problem(**arrays)


def _select(backend):
    if backend is None:
        return _impl
    if backend == "python":
        return _kernels_py
    if backend == "compiled":
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    raise ValueError(f"unknown backend {backend!r}")


def ascent(y: np.ndarray, arrays: dict, backend: str | None = None, **opts) -> tuple[np.ndarray, float, int]:
    """Run coordinate ascent from ``y``; returns ``(y_opt, objective, sweeps)``."""
    impl = _select(backend)
    prob = impl.Problem(**arrays)
    if impl is _kernels_py:
        work = [float(v) for v in y]
        f, sweeps = impl.ascent(work, prob, **opts)
        return np.asarray(work), f, sweeps
    work = np.array(y, dtype=np.float64)
    f, sweeps = impl.ascent(work, prob, **opts)
    return work, f, sweeps


def objective(y: np.ndarray, arrays: dict, backend: str | None = None) -> float:
    impl = _select(backend)
    prob = impl.Problem(**arrays)
    if impl is _kernels_py:
        return impl.objective([float(v) for v in y], prob)
    return impl.objective(np.array(y, dtype=np.float64), prob)
