"""Resonance location and the kernel/multiplicity correspondence.

Resonances are the zeros of the determinant of the continued Livšic matrix
in the lower half plane.  Three independent mechanisms are combined: global
numerator root finding, local Newton polish on the determinant itself, and
an argument-principle contour count as an audit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import subspace_angles

from .config import TOL, Tolerances
from .livsic import livsic_branch
from .model import FriedrichsModel
from .oracle import Contour, argument_principle_count
from .ratfun import RatFun, RatMat, poly_roots
from .scattering import SMatrix, smatrix

__all__ = ["ResonanceRecord", "LemmaReport", "ConjugatePoleError",
           "det_livsic", "find_resonances", "livsic_kernel", "verify_lemma"]

_MERGE_TOL = 1e-7
_NULL_REL = 1e-8


class ConjugatePoleError(ValueError):
    """Both zeta and conj(zeta) are poles; the kernel correspondence is undefined there."""


def det_livsic(m: FriedrichsModel, *, tol: Tolerances = TOL,
               livsic_upper: RatMat | None = None) -> RatFun:
    """Determinant of the (continued) upper Livšic branch as a rational function."""
    L = livsic_upper if livsic_upper is not None else livsic_branch(m, "upper", tol=tol)
    return L.det()


@dataclass(frozen=True)
class ResonanceRecord:
    zeta: complex
    order: int
    det_residual: float
    kernel_e: np.ndarray          # dim_e x r orthonormal null basis of L(zeta)
    mult_k: np.ndarray            # dim_k x r images M(zeta) e
    degenerate_coupling: bool
    newton_residuals: tuple[float, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "zeta": [self.zeta.real, self.zeta.imag],
            "order": self.order,
            "det_residual": self.det_residual,
            "kernel_dim": int(self.kernel_e.shape[1]),
            "kernel_e": _mat_json(self.kernel_e),
            "mult_k": _mat_json(self.mult_k),
            "degenerate_coupling": self.degenerate_coupling,
        }


def _mat_json(a: np.ndarray) -> list:
    return [[[x.real, x.imag] for x in row] for row in np.atleast_2d(a)]


def _newton_polish(det: RatFun, z0: complex, steps: int = 12,
                   target: float = 1e-13) -> tuple[complex, list[float]]:
    ddet = det.derivative()
    z = complex(z0)
    residuals = [abs(det(z))]
    for _ in range(steps):
        d = ddet(z)
        if d == 0:
            break
        z_next = z - det(z) / d
        r = abs(det(z_next))
        if not np.isfinite(r):
            break
        z = z_next
        residuals.append(r)
        if r < target:
            break
    return z, residuals


def find_resonances(m: FriedrichsModel, region: Contour, *, tol: Tolerances = TOL,
                    audit: bool = True) -> list[ResonanceRecord]:
    """All Livšic-determinant zeros inside a closed rectangle below the real axis.

    Zeros closer than 1e-7 are merged with combined multiplicity.  When the
    audit contour passes too close to a zero, the region is inflated by 1%
    and retried once.
    """
    if region.im_max > 0:
        raise ValueError("region must lie below the real axis")
    L = livsic_branch(m, "upper", tol=tol)
    det = det_livsic(m, tol=tol, livsic_upper=L)
    if det.is_zero:
        raise ZeroDivisionError("identically singular Livšic matrix")

    found: list[tuple[complex, int, list[float]]] = []
    for root, mult in poly_roots(det.num, tol=tol):
        if not region.contains(root):
            continue
        z, residuals = _newton_polish(det, root)
        for i, (z0, m0, r0) in enumerate(found):
            if abs(z - z0) <= _MERGE_TOL * max(1.0, abs(z)):
                found[i] = (z0, m0 + mult, r0)
                break
        else:
            found.append((z, mult, residuals))
    found.sort(key=lambda t: (t[0].real, t[0].imag))

    if audit:
        n_expected = sum(mult for _, mult, _ in found)
        contour = region
        # audit the numerator: the determinant itself has poles (from the
        # Cauchy transform) that would offset the winding count
        for attempt in range(2):
            try:
                n_contour = argument_principle_count(det.num, contour)
                break
            except ValueError:
                if attempt == 0:
                    contour = contour.inflate(1.01)
                else:
                    raise
        else:  # pragma: no cover
            raise AssertionError
        if n_contour != n_expected:
            raise ArithmeticError(
                f"argument-principle count {n_contour} disagrees with "
                f"{n_expected} polished zeros in {region}")

    out = []
    for z, mult, residuals in found:
        kernel = livsic_kernel(m, z, tol=tol, livsic_upper=L)
        mult_k = m.coupling(z) @ kernel
        degenerate = bool(kernel.shape[1]) and bool(
            np.any(np.linalg.norm(mult_k, axis=0) <= 1e-10))
        out.append(ResonanceRecord(
            zeta=z, order=mult, det_residual=abs(det(z)),
            kernel_e=kernel, mult_k=mult_k,
            degenerate_coupling=degenerate,
            newton_residuals=tuple(residuals)))
    return out


def livsic_kernel(m: FriedrichsModel, zeta: complex, *, tol: Tolerances = TOL,
                  livsic_upper: RatMat | None = None) -> np.ndarray:
    """Orthonormal null-space basis of the continued Livšic matrix at zeta.

    SVD with relative threshold 1e-8 * sigma_max; raises when no singular
    value is below threshold.
    """
    L = livsic_upper if livsic_upper is not None else livsic_branch(m, "upper", tol=tol)
    val = L(zeta)
    u, s, vh = np.linalg.svd(val)
    smax = s.max(initial=0.0)
    thresh = _NULL_REL * max(smax, 1.0)
    null_mask = s <= thresh
    if not np.any(null_mask):
        raise ValueError(
            f"no null vector: smallest singular value {s.min():.3g} exceeds "
            f"threshold {thresh:.3g} at {zeta}")
    return vh[null_mask].conj().T


@dataclass(frozen=True)
class LemmaReport:
    """Alignment of ker S(conj(zeta))^* with span{M(zeta) e : L(zeta) e = 0}."""

    zeta: complex
    dim_ker_s: int
    dim_span_mult: int
    max_principal_angle: float
    verdict: str  # "pass", "fail", or "vacuous"

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "zeta": [self.zeta.real, self.zeta.imag],
            "dim_ker_s": self.dim_ker_s,
            "dim_span_mult": self.dim_span_mult,
            "max_principal_angle": self.max_principal_angle,
            "verdict": self.verdict,
        }


def verify_lemma(m: FriedrichsModel, zeta: complex, *, tol: Tolerances = TOL,
                 sm: SMatrix | None = None, angle_tol: float = 1e-6) -> LemmaReport:
    """Check, at one lower-half-plane point, that the two kernel constructions agree.

    Computes ker S(conj(zeta))^* by SVD of the evaluated scattering matrix
    and compares it with the coupling image of the Livšic null space via
    principal angles.  Refuses when conj(zeta) is itself a pole.
    """
    if zeta.imag >= 0:
        raise ValueError("zeta must lie in the lower half plane")
    s = sm or smatrix(m, tol=tol)
    zbar = np.conj(zeta)
    if s.is_pole(zbar):
        raise ConjugatePoleError(
            f"conjugate pole: S has a pole at {zbar}, the correspondence is inapplicable there")

    sval = s.s(zbar).conj().T
    u, sig, vh = np.linalg.svd(sval)
    thresh = _NULL_REL * max(sig.max(initial=0.0), 1.0)
    ker = vh[sig <= thresh].conj().T  # dim_k x r

    try:
        kernel_e = livsic_kernel(m, zeta, tol=tol)
        span = m.coupling(zeta) @ kernel_e
        # drop numerically zero images, orthonormalize
        keep = np.linalg.norm(span, axis=0) > 1e-12
        span = span[:, keep]
        if span.shape[1]:
            span, _ = np.linalg.qr(span)
    except ValueError:
        span = np.zeros((m.dim_k, 0))

    dim_ker = ker.shape[1]
    dim_span = span.shape[1]
    if dim_ker == 0 and dim_span == 0:
        return LemmaReport(zeta, 0, 0, 0.0, "vacuous")
    if dim_ker != dim_span:
        return LemmaReport(zeta, dim_ker, dim_span, float(np.pi / 2), "fail")
    angle = float(np.max(subspace_angles(ker, span)))
    verdict = "pass" if angle <= angle_tol else "fail"
    return LemmaReport(zeta, dim_ker, dim_span, angle, verdict)
