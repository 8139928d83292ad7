"""Numerical tolerances.

Every comparison in the package goes through one of these constants.  The
phase tolerance can be overridden with the ``QW1D_TOLERANCE_PHASE``
environment variable (read once, at import).
"""

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-12
    phase: float = 1e-9
    unitary: float = 1e-12
    radius: float = 1e-9
    gauge: float = 1e-10


def _from_env() -> Tolerances:
    raw = os.environ.get("QW1D_TOLERANCE_PHASE")
    if raw is None:
        return Tolerances()
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"QW1D_TOLERANCE_PHASE must be a float, got {raw!r}") from None
    if not value > 0:
        raise ValueError("QW1D_TOLERANCE_PHASE must be positive")
    return Tolerances(phase=value)


TOL = _from_env()
