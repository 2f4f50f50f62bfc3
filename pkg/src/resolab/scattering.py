"""Scattering matrix of a Friedrichs model as one global rational function.

Assembled as I - 2*pi*i * M * L_upper^{-1} * M# and reduced; the single
rational matrix is simultaneously the boundary value on the real axis and
the meromorphic continuation to both half planes.  Pole bookkeeping,
unitarity probes, and the four spectral-characterization hypotheses
(finitely many upper poles, boundedness at infinity, no conjugate pole
pairs, at least one lower pole) live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import TOL, Tolerances
from .livsic import livsic_branch
from .model import FriedrichsModel
from .ratfun import PoleRecord, RatMat, laurent_leading

__all__ = ["SMatrix", "ConditionsReport", "smatrix", "unitarity_defect",
           "theorem2_conditions", "leading_coefficient"]

_TWO_PI_I = 2j * np.pi
_CONJ_PAIR_TOL = 1e-7


@dataclass(frozen=True)
class SMatrix:
    s: RatMat
    poles_upper: list[PoleRecord] = field(default_factory=list)
    poles_lower: list[PoleRecord] = field(default_factory=list)

    @property
    def all_poles(self) -> list[PoleRecord]:
        return list(self.poles_upper) + list(self.poles_lower)

    def is_pole(self, z: complex, radius: float = 1e-6) -> bool:
        return any(abs(z - p.location) <= radius * max(1.0, abs(z))
                   for p in self.all_poles)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "poles_upper": [p.to_json() for p in self.poles_upper],
            "poles_lower": [p.to_json() for p in self.poles_lower],
        }


def smatrix(m: FriedrichsModel, *, tol: Tolerances = TOL,
            livsic_upper: RatMat | None = None) -> SMatrix:
    """Scattering matrix with its poles classified by half plane.

    ``livsic_upper`` may inject an alternative Livšic branch (e.g. the
    lower branch plus the jump) to cross-check assembly equivalence.
    """
    L = livsic_upper if livsic_upper is not None else livsic_branch(m, "upper", tol=tol)
    Linv = L.inverse()
    correction = (m.coupling @ Linv @ m.coupling_flip()).scale(_TWO_PI_I)
    s = RatMat.identity(m.dim_k, tol=tol) - correction
    upper: list[PoleRecord] = []
    lower: list[PoleRecord] = []
    for pole, _m in s.pole_clusters():
        if abs(pole.imag) <= tol.real:
            raise ValueError(f"scattering matrix pole on the real axis at {pole}")
        rec = laurent_leading(s, pole, tol=tol)
        (upper if pole.imag > 0 else lower).append(rec)
    return SMatrix(s=s, poles_upper=upper, poles_lower=lower)


def unitarity_defect(sm: SMatrix | FriedrichsModel, lam: float, *, tol: Tolerances = TOL) -> float:
    """Operator norm of S(lambda)^* S(lambda) - I at a real energy."""
    s = sm.s if isinstance(sm, SMatrix) else smatrix(sm, tol=tol).s
    v = s(float(lam))
    g = v.conj().T @ v - np.eye(v.shape[0])
    return float(np.linalg.svd(g, compute_uv=False)[0])


@dataclass(frozen=True)
class ConditionsReport:
    """Measured status of the four scattering-matrix hypotheses."""

    finitely_many_upper_poles: bool
    k_bound: float
    radius: float
    no_conjugate_pairs: bool
    conjugate_pairs: list[tuple[complex, complex]]
    has_lower_pole: bool

    @property
    def all_pass(self) -> bool:
        return (self.finitely_many_upper_poles and np.isfinite(self.k_bound)
                and self.no_conjugate_pairs and self.has_lower_pole)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "finitely_many_upper_poles": self.finitely_many_upper_poles,
            "k_bound": self.k_bound,
            "radius": self.radius,
            "no_conjugate_pairs": self.no_conjugate_pairs,
            "conjugate_pairs": [[[a.real, a.imag], [b.real, b.imag]]
                                for a, b in self.conjugate_pairs],
            "has_lower_pole": self.has_lower_pole,
            "all_pass": self.all_pass,
        }


def theorem2_conditions(m: FriedrichsModel | SMatrix, *, tol: Tolerances = TOL,
                        mesh: int = 24) -> ConditionsReport:
    """Check the four hypotheses on the scattering matrix.

    The bound constant is measured as the max of the operator norm over a
    mesh of the upper-half annulus R <= |z| <= 10R with
    R = 2 * (1 + max pole modulus).
    """
    sm = m if isinstance(m, SMatrix) else smatrix(m, tol=tol)
    poles = sm.all_poles
    # a rational matrix always has finitely many poles; record it measured
    finitely_many = len(sm.poles_upper) < np.inf

    max_mod = max((abs(p.location) for p in poles), default=0.0)
    radius = 2.0 * (1.0 + max_mod)
    radii = np.geomspace(radius, 10 * radius, mesh)
    angles = np.linspace(1e-3, np.pi - 1e-3, mesh)
    k_bound = 0.0
    for r in radii:
        zs = r * np.exp(1j * angles)
        for z in zs:
            k_bound = max(k_bound, float(np.linalg.norm(sm.s(z), 2)))

    pairs = []
    for a in poles:
        for b in poles:
            if a.location.imag > 0 and b.location.imag < 0 \
                    and abs(a.location - np.conj(b.location)) <= _CONJ_PAIR_TOL:
                pairs.append((a.location, b.location))
    return ConditionsReport(
        finitely_many_upper_poles=bool(finitely_many),
        k_bound=k_bound,
        radius=radius,
        no_conjugate_pairs=not pairs,
        conjugate_pairs=pairs,
        has_lower_pole=bool(sm.poles_lower),
    )


def leading_coefficient(m: FriedrichsModel | SMatrix, eta: complex, *,
                        tol: Tolerances = TOL) -> PoleRecord:
    """Leading Laurent coefficient of S at a pole, with singular values."""
    sm = m if isinstance(m, SMatrix) else smatrix(m, tol=tol)
    return laurent_leading(sm.s, eta, tol=tol)
