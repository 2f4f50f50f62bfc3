"""Centralized numerical tolerances.

All modules pull their thresholds from a single ``Tolerances`` instance so
there is one tuning point.  The environment variable ``RESOLAB_TOL_SCALE``
multiplies every tolerance globally (default 1).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    trim: float = 1e-12      # trailing-coefficient trim for polynomials
    gcd: float = 1e-10       # numerator/denominator common-root cancellation
    root: float = 1e-10      # acceptable residual for polished roots
    cluster: float = 1e-7    # root clustering radius for multiplicity
    pole: float = 1e-9       # "evaluation at pole" guard distance
    alg: float = 1e-10       # pointwise algebra agreement checks
    real: float = 1e-9       # distance from the real axis counting as "real"
    grid: float = 1e-4       # relative tolerance for Hardy-grid operations

    def scaled(self, factor: float) -> "Tolerances":
        if factor <= 0:
            raise ValueError("tolerance scale must be positive")
        return replace(
            self,
            **{name: getattr(self, name) * factor for name in
               ("trim", "gcd", "root", "cluster", "pole", "alg", "real", "grid")},
        )


def _default() -> Tolerances:
    scale = float(os.environ.get("RESOLAB_TOL_SCALE", "1"))
    tol = Tolerances()
    return tol if scale == 1 else tol.scaled(scale)


TOL = _default()
