"""Geometric tolerance handling.

The absolute coincidence/parallelism tolerance defaults to 1e-9 and can be
overridden through the FLOATGEO_TOL environment variable.
"""

import os

DEFAULT_GEO_TOL = 1e-9


def geo_tol() -> float:
    """Current geometric tolerance (reads FLOATGEO_TOL on every call)."""
    raw = os.environ.get("FLOATGEO_TOL")
    if raw is None:
        return DEFAULT_GEO_TOL
    value = float(raw)
    if value <= 0:
        raise ValueError("FLOATGEO_TOL must be positive")
    return value
