"""Breit-Wigner states, survival amplitudes, and the half-line obstruction.

On the full line the survival amplitude of a Breit-Wigner state is the
exact exponential exp(-i*t*zeta).  Restricting the same line shape to the
positive half axis destroys exponential decay: the survival probability
picks up a power-law t**-2 tail.  ``nogo_report`` measures that deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .config import TOL, Tolerances
from .oracle import QuadratureError
from .ratfun import Poly, RatFun

__all__ = ["BreitWigner", "NoGoReport", "bw_amplitude", "survival_full",
           "truncated_survival", "nogo_report", "write_survival_csv"]


@dataclass(frozen=True)
class BreitWigner:
    """Lorentzian line shape with resonance energy c and half-width alpha."""

    c: float
    alpha: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("half-width alpha must be positive")

    @property
    def zeta(self) -> complex:
        return complex(self.c, -self.alpha)

    def amplitude_value(self, lam) -> complex:
        return math.sqrt(self.alpha / math.pi) / (np.asarray(lam, dtype=complex) - self.zeta)

    @property
    def half_line_norm_sq(self) -> float:
        """Closed-form squared norm of the restriction to lambda > 0."""
        return (math.pi / 2 + math.atan(self.c / self.alpha)) / math.pi


def bw_amplitude(bw: BreitWigner, *, tol: Tolerances = TOL) -> RatFun:
    """The normalized amplitude sqrt(alpha/pi) / (lambda - zeta) as a rational function."""
    return RatFun(Poly([math.sqrt(bw.alpha / math.pi)]),
                  Poly([-bw.zeta, 1.0]), tol=tol)


def survival_full(bw: BreitWigner, t: float) -> complex:
    """Full-line survival amplitude: exp(-i*t*zeta) for t > 0, conjugate branch for t < 0."""
    if t >= 0:
        return complex(np.exp(-1j * t * bw.zeta))
    return complex(np.exp(-1j * t * np.conj(bw.zeta)))


def truncated_survival(bw: BreitWigner, t: float, *, quad_tol: float = 1e-11) -> complex:
    """Survival amplitude of the half-line restriction of the line shape.

    The state is the normalized restriction of the Breit-Wigner density to
    lambda > 0.  For t > 0 the oscillatory integral is computed by rotating
    the contour onto the negative imaginary axis, which leaves a decaying
    integrand plus (when the resonance energy is positive) the residue of
    the pole crossed in the fourth quadrant.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return 1.0 + 0j
    z = bw.zeta
    norm = bw.half_line_norm_sq

    def density(w):  # |phi|^2 continued to complex argument
        return (bw.alpha / (math.pi * norm)) / ((w - z) * (w - np.conj(z)))

    # rotated leg: -i * int_0^inf exp(-t s) density(-i s) ds, via u = t*s
    def leg(u):
        return np.exp(-u) * density(-1j * u / t) / t

    re, re_err = integrate.quad(lambda u: leg(u).real, 0, np.inf,
                                epsabs=quad_tol, epsrel=quad_tol, limit=400)
    im, im_err = integrate.quad(lambda u: leg(u).imag, 0, np.inf,
                                epsabs=quad_tol, epsrel=quad_tol, limit=400)
    err = float(np.hypot(re_err, im_err))
    if err > 1e-8:
        raise QuadratureError("rotated-contour quadrature did not converge",
                              complex(re, im), err)
    out = -1j * (re + 1j * im)
    if bw.c > 0:
        out = out + np.exp(-1j * t * z) / norm
    return complex(out)


@dataclass(frozen=True)
class NoGoReport:
    """Quantitative record of the failure of exponential decay on the half line."""

    bw: BreitWigner
    t_grid: np.ndarray
    amplitude: np.ndarray
    survival: np.ndarray            # P(t) = |amplitude|^2
    tail_slope: float
    tail_slope_stderr: float
    fit_range: tuple[float, float]
    max_log10_ratio: float          # max over grid of log10(P(t) * exp(2 alpha t))
    verdict: str
    field_names: tuple[str, ...] = field(
        default=("t", "ReA", "ImA", "P", "exp(-2*alpha*t)", "ratio"), repr=False)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "c": self.bw.c,
            "alpha": self.bw.alpha,
            "tail_slope": self.tail_slope,
            "tail_slope_stderr": self.tail_slope_stderr,
            "fit_range": list(self.fit_range),
            "max_log10_ratio": self.max_log10_ratio,
            "verdict": self.verdict,
            "n_points": int(len(self.t_grid)),
        }


def nogo_report(bw: BreitWigner, t_grid, *, tol: Tolerances = TOL) -> NoGoReport:
    """Survival probabilities on a grid plus the non-exponential-decay verdict.

    The tail slope is fit on log P vs log t over the last decade of the
    grid; the verdict is "non-exponential" iff the slope sits in
    [-2.5, -1.5] and the ratio to the exponential envelope exceeds 1e3
    somewhere.  The ratio is tracked in log10 to survive the underflow of
    exp(-2*alpha*t) at large t.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 4 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be increasing with at least 4 points")
    if t_grid[0] < 0:
        raise ValueError("t_grid must be nonnegative")
    amp = np.array([truncated_survival(bw, t) for t in t_grid])
    surv = np.abs(amp) ** 2

    positive = t_grid > 0
    t_max = t_grid[-1]
    fit_lo = t_max / 10.0
    mask = positive & (t_grid >= fit_lo)
    if mask.sum() < 3:
        raise ValueError("grid too short for a tail fit: need one decade with >= 3 points")
    logt = np.log(t_grid[mask])
    logp = np.log(surv[mask])
    A = np.vstack([logt, np.ones_like(logt)]).T
    coef, res, *_ = np.linalg.lstsq(A, logp, rcond=None)
    slope = float(coef[0])
    dof = max(mask.sum() - 2, 1)
    var = float(res[0]) / dof if res.size else 0.0
    stderr = math.sqrt(var / float(np.sum((logt - logt.mean()) ** 2)))

    with np.errstate(divide="ignore"):
        log10_ratio = np.where(surv > 0,
                               np.log10(np.maximum(surv, 1e-300))
                               + 2 * bw.alpha * t_grid / math.log(10), -np.inf)
    max_log10_ratio = float(log10_ratio.max())

    non_exp = (-2.5 <= slope <= -1.5) and max_log10_ratio > 3.0
    verdict = "non-exponential" if non_exp else "inconclusive"
    return NoGoReport(bw=bw, t_grid=t_grid, amplitude=amp, survival=surv,
                      tail_slope=slope, tail_slope_stderr=stderr,
                      fit_range=(float(fit_lo), float(t_max)),
                      max_log10_ratio=max_log10_ratio, verdict=verdict)


def write_survival_csv(report_or_bw, t_grid=None, fp=None) -> None:
    """CSV emission: t, ReA, ImA, P, exp(-2*alpha*t), ratio."""
    if isinstance(report_or_bw, NoGoReport):
        rep = report_or_bw
        bw, ts, amp, surv = rep.bw, rep.t_grid, rep.amplitude, rep.survival
    else:
        bw = report_or_bw
        ts = np.asarray(t_grid, dtype=float)
        amp = np.array([truncated_survival(bw, t) for t in ts])
        surv = np.abs(amp) ** 2
    fp.write("t,ReA,ImA,P,exp_neg2alphat,ratio\n")
    for t, a, p in zip(ts, amp, surv):
        env = math.exp(-2 * bw.alpha * t) if 2 * bw.alpha * t < 700 else 0.0
        ratio = p / env if env > 0 else math.inf
        fp.write(f"{t!r},{a.real!r},{a.imag!r},{p!r},{env!r},{ratio!r}\n")
