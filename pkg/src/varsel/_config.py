"""Global numeric settings shared by every module."""

import math
import os


def _read_tol():
    raw = os.environ.get("VARSEL_TOL")
    if raw is None:
        return 1e-9
    value = float(raw)
    if not (value >= 0 and math.isfinite(value)):
        raise ValueError(f"VARSEL_TOL must be a finite non-negative number, got {raw!r}")
    return value


#: set-comparison tolerance (merging, inclusion, feasibility)
EPS = _read_tol()

#: clipping bound used whenever a distance involves an unbounded set
CLIP = 1e6

INF = math.inf
