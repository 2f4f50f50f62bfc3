"""Livšic matrix of a Friedrichs model on both half planes.

The branch on each half plane is (z*I - h_e) minus the closed-form Cauchy
transform of M#(z)M(z), where M# is the continued adjoint coupling.  Both
branches are computed independently from residue data, so the continuation
identity

    L_upper(z) = L_lower(z) + 2*pi*i * (M# M)(z)

is a genuine cross-check rather than a definition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL, Tolerances
from .model import FriedrichsModel
from .ratfun import Poly, RatFun, RatMat, cauchy_transform

__all__ = ["LivsicPair", "livsic_branch", "livsic_pair", "livsic_symmetry_defect"]

_TWO_PI_I = 2j * np.pi


def _z_minus_he(m: FriedrichsModel, tol: Tolerances) -> RatMat:
    n = m.dim_e
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            lin = [-m.h_e[i, j], 1.0] if i == j else [-m.h_e[i, j]]
            row.append(RatFun(Poly(lin), Poly([1.0]), tol=tol))
        entries.append(row)
    return RatMat(entries, tol=tol)


def coupling_gram(m: FriedrichsModel) -> RatMat:
    """The dim_e x dim_e rational function continuing M(lambda)^* M(lambda)."""
    return m.coupling_flip() @ m.coupling


def livsic_branch(m: FriedrichsModel, branch: str, *, tol: Tolerances = TOL) -> RatMat:
    """Livšic matrix on the chosen half plane, as one global rational matrix."""
    gram = coupling_gram(m)
    return _z_minus_he(m, tol) - cauchy_transform(gram, branch, tol=tol)


@dataclass(frozen=True)
class LivsicPair:
    upper: RatMat
    lower: RatMat
    jump: RatMat  # 2*pi*i * M# M

    def continuation_defect(self) -> float:
        """Max cross-multiplied coefficient residual of upper - lower - jump."""
        worst = 0.0
        diff = self.upper - self.lower
        for i in range(diff.rows):
            for j in range(diff.cols):
                d = diff[i, j] - self.jump[i, j]
                if d.is_zero:
                    continue
                scale = max(np.abs(self.jump[i, j].num.coeffs).max(initial=0.0), 1.0)
                worst = max(worst, float(np.abs(d.num.coeffs).max() / scale))
        return worst


def livsic_pair(m: FriedrichsModel, *, tol: Tolerances = TOL) -> LivsicPair:
    gram = coupling_gram(m)
    return LivsicPair(
        upper=livsic_branch(m, "upper", tol=tol),
        lower=livsic_branch(m, "lower", tol=tol),
        jump=gram.scale(_TWO_PI_I),
    )


def livsic_symmetry_defect(m: FriedrichsModel, z: complex, *, tol: Tolerances = TOL,
                           pair: LivsicPair | None = None) -> float:
    """Operator-norm defect of adjoint(L_upper(conj(z))) == L_lower(z)."""
    p = pair or livsic_pair(m, tol=tol)
    lhs = p.upper(np.conj(z)).conj().T
    rhs = p.lower(z)
    return float(np.linalg.norm(lhs - rhs, 2))
