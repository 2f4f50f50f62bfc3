"""Independent numerical oracles.

Adaptive quadrature over the real line, oscillatory (Fourier-weighted)
quadrature, and argument-principle zero counting.  These deliberately avoid
the residue-exact code paths in :mod:`resolab.ratfun`: agreement between
the two stacks is the whole point.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = [
    "Contour",
    "QuadratureError",
    "quad_real_line",
    "quad_oscillatory",
    "argument_principle_count",
]


class QuadratureError(RuntimeError):
    """Quadrature failed to converge; carries the best estimate."""

    def __init__(self, message: str, estimate: complex, error: float):
        super().__init__(f"{message} (best estimate {estimate}, error {error:.3g})")
        self.estimate = estimate
        self.error = error


def _quad_complex(f, a, b, tol, **kw):
    re, re_err = integrate.quad(lambda x: f(x).real, a, b, epsabs=tol, epsrel=tol, **kw)
    im, im_err = integrate.quad(lambda x: f(x).imag, a, b, epsabs=tol, epsrel=tol, **kw)
    return re + 1j * im, float(np.hypot(re_err, im_err))


def quad_real_line(f, tol: float = 1e-9) -> tuple[complex, float]:
    """Integral of ``f`` over the whole real line, with error estimate.

    Uses the lambda = tan(theta) substitution to compactify the tails on
    top of scipy's adaptive subdivision.
    """
    def g(theta):
        lam = np.tan(theta)
        return f(lam) * (1.0 + lam * lam)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = _quad_complex(g, -np.pi / 2, np.pi / 2, tol, limit=400)
        except integrate.IntegrationWarning:
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = _quad_complex(g, -np.pi / 2, np.pi / 2, tol, limit=400)
            raise QuadratureError("quadrature did not converge", val, err)
    if err > 10 * max(tol, 1e-12):
        raise QuadratureError("quadrature error above tolerance", val, err)
    return val, err


def quad_oscillatory(f, t: float, *, half_line: bool = False, tol: float = 1e-10) -> complex:
    """Integral of exp(-i*t*lambda) * f(lambda) over R or over (0, inf).

    Pure Fourier-weighted quadrature (scipy QAWF/QAWO machinery); shares no
    code with the residue or contour-rotation routes it cross-checks.
    ``f`` is any complex-valued callable accepting real arguments.
    """
    t = float(t)
    if t == 0.0:
        if half_line:
            return _quad_complex(f, 0.0, np.inf, max(tol, 1e-11), limit=400)[0]
        return quad_real_line(f, max(tol, 1e-11))[0]

    def fourier_half(g, w):
        # integral over (0, inf) of g(x) * exp(-i*w*x)
        kw = dict(weight="cos", wvar=abs(w), limlst=400, limit=400, epsabs=tol)
        re_c, _ = integrate.quad(lambda x: g(x).real, 0, np.inf, **kw)
        im_c, _ = integrate.quad(lambda x: g(x).imag, 0, np.inf, **kw)
        kw["weight"] = "sin"
        re_s, _ = integrate.quad(lambda x: g(x).real, 0, np.inf, **kw)
        im_s, _ = integrate.quad(lambda x: g(x).imag, 0, np.inf, **kw)
        cos_part = re_c + 1j * im_c
        sin_part = re_s + 1j * im_s
        sgn = 1.0 if w > 0 else -1.0
        return cos_part - 1j * sgn * sin_part

    out = fourier_half(f, t)
    if not half_line:
        out = out + fourier_half(lambda x: f(-x), -t)
    return out


@dataclass(frozen=True)
class Contour:
    """Positively oriented rectangle in the complex plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    points_per_side: int = 512

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("degenerate rectangle")

    def corners(self) -> list[complex]:
        return [complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max)]

    def samples(self, points_per_side: int | None = None) -> np.ndarray:
        n = points_per_side or self.points_per_side
        cs = self.corners()
        segs = []
        for a, b in zip(cs, cs[1:] + cs[:1]):
            ts = np.arange(n) / n
            segs.append(a + (b - a) * ts)
        return np.concatenate(segs)

    def inflate(self, factor: float) -> "Contour":
        cre = 0.5 * (self.re_min + self.re_max)
        cim = 0.5 * (self.im_min + self.im_max)
        hre = 0.5 * (self.re_max - self.re_min) * factor
        him = 0.5 * (self.im_max - self.im_min) * factor
        return Contour(cre - hre, cre + hre, cim - him, cim + him, self.points_per_side)

    def contains(self, z: complex) -> bool:
        return self.re_min < z.real < self.re_max and self.im_min < z.imag < self.im_max


def argument_principle_count(f, contour: Contour, *, min_modulus: float = 1e-6,
                             max_doublings: int = 6) -> int:
    """Winding number of ``f`` along the rectangle: #zeros - #poles inside.

    The phase is accumulated along an adaptively refined sampling until
    every increment is below pi/2 and the total is within 0.01 of an
    integer multiple of 2*pi.
    """
    n = contour.points_per_side
    for _ in range(max_doublings):
        zs = contour.samples(n)
        vals = np.asarray([f(z) for z in zs], dtype=complex)
        mods = np.abs(vals)
        if mods.min() <= min_modulus * max(1.0, np.median(mods)):
            raise ValueError("contour passes too close to a zero or pole")
        phases = np.angle(vals)
        dphi = np.diff(np.concatenate([phases, phases[:1]]))
        dphi = (dphi + np.pi) % (2 * np.pi) - np.pi
        if np.abs(dphi).max() < np.pi / 2:
            winding = dphi.sum() / (2 * np.pi)
            k = round(winding)
            if abs(winding - k) <= 0.01:
                return int(k)
        n *= 2
    raise ValueError("winding number did not stabilize; refine the contour")
