"""Discretized Hardy space of the upper half plane and its decay semigroup.

Grid side: K-valued functions sampled on a uniform grid over [-L, L] with
the discrete Fourier transform (kernel exp(-i*t*lambda)) providing the
Hardy projection (zero the t < 0 components) and the characteristic
semigroup Z(t) = project(exp(-i*t*lambda) * f).  Rational functions with
poles off the real axis are discretized through their one-sided transform
data (partial fractions -> exponentials in t), which makes rational Hardy
members exact fixed points of the discrete projection.

Rational side: residue-exact inner products, the orthonormal Cayley basis,
and the subspace constructions that certify the spectral characterization
of the semigroup restriction: the polynomial p collecting upper scattering
poles, the manifold of p-damped Hardy functions, its image under S, and
the eigenvector/resolvent certificates on the orthogonal complement.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import TOL, Tolerances
from .model import FriedrichsModel
from .ratfun import Poly, RatFun, RatMat
from .scattering import SMatrix, smatrix, theorem2_conditions

__all__ = [
    "HardyGrid", "GridFunction", "hardy_project", "characteristic_semigroup",
    "cayley_basis", "rational_inner_product", "SubspaceBases", "subspace_bases",
    "EigenReport", "eigenvector_check", "ResolventReport", "resolvent_construct",
    "HypothesisError",
]

_TWO_PI_I = 2j * math.pi
_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


class HypothesisError(ValueError):
    """A construction was requested under hypotheses that do not hold."""


# ---------------------------------------------------------------------------
# grid side


@dataclass(frozen=True)
class HardyGrid:
    """Uniform grid over [-half_width, half_width) with n points (power of two)."""

    half_width: float = 200.0
    n: int = 2 ** 16

    def __post_init__(self):
        if self.n & (self.n - 1):
            raise ValueError("n must be a power of two")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def lam(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n)

    @property
    def time_step(self) -> float:
        """Spectral resolution of the transform side; Z(t) is exact on its lattice."""
        return math.pi / self.half_width

    def times(self) -> np.ndarray:
        """Transform sample points in fft ordering (index k -> t_k)."""
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        return k * self.time_step

    def snap_time(self, t: float) -> float:
        return round(t / self.time_step) * self.time_step


class GridFunction:
    """Samples of a K-valued function; values shape (n, dim_k)."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: HardyGrid, values: np.ndarray):
        values = np.asarray(values, dtype=complex)
        if values.ndim == 1:
            values = values[:, None]
        if values.shape[0] != grid.n:
            raise ValueError("value count does not match the grid")
        self.grid = grid
        self.values = values

    @property
    def dim_k(self) -> int:
        return self.values.shape[1]

    def norm(self) -> float:
        return float(math.sqrt(self.grid.spacing) * np.linalg.norm(self.values))

    def inner(self, other: "GridFunction") -> complex:
        return complex(self.grid.spacing * np.vdot(self.values, other.values))

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.grid, self.values - other.values)

    def scale(self, s: complex) -> "GridFunction":
        return GridFunction(self.grid, self.values * s)

    @staticmethod
    def sample(grid: HardyGrid, fn) -> "GridFunction":
        """Plain pointwise sampling of a callable (or list of callables per component)."""
        fns = fn if isinstance(fn, (list, tuple)) else [fn]
        cols = [np.asarray([f(x) for x in grid.lam], dtype=complex) for f in fns]
        return GridFunction(grid, np.stack(cols, axis=1))

    @staticmethod
    def from_rational(grid: HardyGrid, components, *, tol: Tolerances = TOL) -> "GridFunction":
        """Discretize rational components through their transform data.

        Each component is decomposed into partial fractions; a pole in the
        lower half plane contributes exponentials on the t >= 0 transform
        bins, a pole in the upper half plane on the t < 0 bins.  This is
        sampling of the 2L-periodization, with the t = 0 bin carrying the
        full one-sided limit, and it makes rational Hardy members exact
        fixed points of :func:`hardy_project`.
        """
        comps = components if isinstance(components, (list, tuple)) else [components]
        n = grid.n
        ts = grid.times()
        pos = ts >= 0
        neg = ~pos
        k_idx = np.fft.fftfreq(n, d=1.0 / n).astype(int)
        sign = np.where(k_idx % 2 == 0, 1.0, -1.0)
        cols = []
        for comp in comps:
            if not isinstance(comp, RatFun):
                comp = RatFun(comp, tol=tol)
            if comp.degree_at_infinity > -1:
                raise ValueError("component does not decay at infinity")
            spec = np.zeros(n, dtype=complex)
            poly_part, terms = comp.partial_fractions()
            if not poly_part.is_zero:
                raise ValueError("component does not decay at infinity")
            for pole, order, cs in terms:
                if abs(pole.imag) <= tol.real:
                    raise ValueError(f"component has a (near-)real pole at {pole}")
                mask = pos if pole.imag < 0 else neg
                halfsign = -1.0 if pole.imag < 0 else 1.0
                t_sel = ts[mask]
                contrib = np.zeros(t_sel.shape, dtype=complex)
                for j in range(1, order + 1):
                    c = cs[j - 1]
                    if c == 0:
                        continue
                    contrib += c * (-1j * t_sel) ** (j - 1) / math.factorial(j - 1) \
                        * np.exp(-1j * t_sel * pole)
                spec[mask] += halfsign * _TWO_PI_I * contrib
            # spectral bin k holds transform value at t_k; invert the series
            coeff = sign * spec / (2.0 * grid.half_width)
            cols.append(np.fft.ifft(coeff) * n)
        return GridFunction(grid, np.stack(cols, axis=1))


def hardy_project(f: GridFunction, *, warn_support: bool = True) -> GridFunction:
    """Discrete Hardy projection: forward transform, zero t < 0, invert."""
    grid = f.grid
    if warn_support:
        lam = grid.lam
        outer = np.abs(lam) > grid.half_width / 2
        total = np.linalg.norm(f.values)
        if total > 0 and np.linalg.norm(f.values[outer]) > 0.5 * total:
            warnings.warn("function mass concentrated outside [-L/2, L/2]; "
                          "projection accuracy degrades", stacklevel=2)
    spec = np.fft.fft(f.values, axis=0)
    spec[grid.n // 2 + 1:] = 0.0
    return GridFunction(grid, np.fft.ifft(spec, axis=0))


def characteristic_semigroup(t: float, f: GridFunction) -> GridFunction:
    """Decay semigroup Z(t): multiply by exp(-i*t*lambda), project back.

    ``t`` is snapped to the grid's time lattice (multiples of pi/L), where
    the discrete operator is an exact semigroup; use
    ``grid.snap_time(t)`` for the effective evolution time.
    """
    if t < 0:
        raise ValueError("the decay semigroup is defined for t >= 0 only")
    t_eff = f.grid.snap_time(t)
    shifted = GridFunction(f.grid, np.exp(-1j * t_eff * f.grid.lam)[:, None] * f.values)
    return hardy_project(shifted, warn_support=False)


# ---------------------------------------------------------------------------
# rational side


def cayley_basis(n: int, *, tol: Tolerances = TOL) -> RatFun:
    """Orthonormal rational Hardy basis member pi**-1/2 (z-i)**n / (z+i)**(n+1)."""
    if n < 0:
        raise ValueError("basis index must be nonnegative")
    num = Poly.from_roots([1j] * n, _INV_SQRT_PI)
    den = Poly.from_roots([-1j] * (n + 1))
    return RatFun(num, den, tol=tol, reduce=False)


def _as_components(f, dim: int | None = None) -> list[RatFun]:
    comps = list(f) if isinstance(f, (list, tuple)) else [f]
    if dim is not None and len(comps) != dim:
        raise ValueError(f"expected {dim} components, got {len(comps)}")
    return comps


def rational_inner_product(f, g, *, tol: Tolerances = TOL) -> complex:
    """Residue-exact L2 inner product of rational K-valued functions.

    <f, g> = integral over the real line of sum_i conj(f_i) g_i; computed
    by closing the contour upward and summing residues there.  Products
    are left unreduced so that spurious pole/zero pairs surface as
    near-zero Laurent data instead of corrupting root cancellation.
    """
    fs = _as_components(f)
    gs = _as_components(g)
    if len(fs) != len(gs):
        raise ValueError("component count mismatch")
    total = 0j
    for fi, gi in zip(fs, gs):
        if fi.is_zero or gi.is_zero:
            continue
        fc = fi.conj_flip()
        num = fc.num * gi.num
        den = fc.den * gi.den
        if num.degree - den.degree > -2:
            raise ValueError("insufficient decay: integrand must fall like 1/lambda^2")
        prod = RatFun(num, den, tol=tol, reduce=False)
        for pole, order in prod.poles():
            if abs(pole.imag) <= tol.real:
                raise ValueError(f"real pole at {pole}")
            if pole.imag > 0:
                cs = prod.laurent_at(pole, order)
                total += _TWO_PI_I * cs[0]
    return complex(total)


# ---------------------------------------------------------------------------
# subspace constructions


@dataclass(frozen=True)
class SubspaceBases:
    """The p-damped manifold and its image under the scattering matrix.

    ``nplus`` members are u(z) = p(z)/(z+i)**g * phi_n(z) * kappa for the
    Cayley basis phi_n and standard basis vectors kappa of K; ``mplus``
    holds the exact rational products S*u.  Bases are ordered by
    (n, kappa index).
    """

    p: Poly
    g: int
    nplus: list[list[RatFun]]
    mplus: list[list[RatFun]]
    n_max: int
    dim_k: int

    def labels(self) -> list[tuple[int, int]]:
        return [(n, k) for n in range(self.n_max) for k in range(self.dim_k)]


def upper_pole_polynomial(sm: SMatrix) -> tuple[Poly, int]:
    roots: list[complex] = []
    for rec in sm.poles_upper:
        roots.extend([rec.location] * rec.order)
    return Poly.from_roots(roots), len(roots)


def subspace_bases(m: FriedrichsModel, n_max: int = 30, *, tol: Tolerances = TOL,
                   sm: SMatrix | None = None) -> SubspaceBases:
    """Build the damped Hardy manifold and its scattering image.

    Requires the four scattering hypotheses (or no upper poles at all, in
    which case p = 1 and the manifold is the full Cayley span).
    """
    sm = sm or smatrix(m, tol=tol)
    p, g = upper_pole_polynomial(sm)
    if g > 0:
        report = theorem2_conditions(sm, tol=tol)
        if not report.all_pass:
            raise HypothesisError(f"scattering hypotheses fail: {report.to_json()}")
    dim_k = m.dim_k
    zero = RatFun([], tol=tol)
    nplus = []
    mplus = []
    for n in range(n_max):
        phi = cayley_basis(n, tol=tol)
        scalar = RatFun(p * phi.num, Poly.from_roots([-1j] * g) * phi.den,
                        tol=tol, reduce=False)
        for kappa in range(dim_k):
            u = [scalar if j == kappa else zero for j in range(dim_k)]
            # unreduced products: pole/zero pairs at the upper scattering
            # poles are left in place, where Laurent extraction sees them as
            # near-zero data; reduction would rebuild the large (z+i)-power
            # factors from scattered root clusters and cost ~7 digits
            su = [RatFun(sm.s[i, kappa].num * scalar.num,
                         sm.s[i, kappa].den * scalar.den, tol=tol, reduce=False)
                  for i in range(dim_k)]
            nplus.append(u)
            mplus.append(su)
    bases = SubspaceBases(p=p, g=g, nplus=nplus, mplus=mplus, n_max=n_max, dim_k=dim_k)
    _audit_hardy_membership(bases, tol)
    return bases


def _audit_hardy_membership(bases: SubspaceBases, tol: Tolerances) -> None:
    for vec in bases.mplus:
        for comp in vec:
            if comp.is_zero:
                continue
            for pole, order in comp.poles():
                if pole.imag > tol.real:
                    cs = comp.laurent_at(pole, order)
                    if np.abs(cs).max() > 1e-8:
                        raise ArithmeticError(
                            f"scattering image leaks an upper-half-plane pole at {pole}")


def _bw_vector(k0: np.ndarray, zeta: complex, tol: Tolerances) -> list[RatFun]:
    den = Poly([-zeta, 1.0])
    return [RatFun(Poly([c]), den, tol=tol, reduce=False) for c in k0]


def _sp_value(sm: SMatrix, p: Poly, z: complex, tol: Tolerances) -> np.ndarray:
    """(S(.) p(.)) evaluated at z, entrywise through reduced rationals."""
    k = sm.s.rows
    out = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            out[i, j] = (sm.s[i, j] * RatFun(p, tol=tol))(z)
    return out


def _normalized_leading(sm: SMatrix, p: Poly, zbar: complex, tol: Tolerances
                        ) -> tuple[complex, np.ndarray]:
    """Factor (S p)(zbar) = c * A with A scaled to unit max-magnitude entry."""
    v = _sp_value(sm, p, zbar, tol)
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    c = complex(v[idx])
    if c == 0:
        raise ArithmeticError(f"(S p)({zbar}) vanished; pole data inconsistent")
    return c, v / c


# ---------------------------------------------------------------------------
# eigenvector check


@dataclass(frozen=True)
class EigenReport:
    zeta: complex
    k0: np.ndarray
    case: str                       # "(i)(a)", "(i)(b)", or "none"
    condition_residual: float       # |S(conj zeta)* k0| or |A* k0| per case
    max_orthogonality: float        # max |<k0/(z-zeta), S u>| over the basis
    orthogonality_by_n: tuple[float, ...] = field(default_factory=tuple, repr=False)
    semigroup_defects: dict = field(default_factory=dict)

    @property
    def eigenvector_certified(self) -> bool:
        return self.case != "none" and self.condition_residual <= 1e-8 \
            and self.max_orthogonality <= 1e-8

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "zeta": [self.zeta.real, self.zeta.imag],
            "k0": [[x.real, x.imag] for x in self.k0],
            "case": self.case,
            "condition_residual": self.condition_residual,
            "max_orthogonality": self.max_orthogonality,
            "semigroup_defects": {str(k): v for k, v in self.semigroup_defects.items()},
            "certified": self.eigenvector_certified,
        }


def eigenvector_check(m: FriedrichsModel, zeta: complex, k0, *, tol: Tolerances = TOL,
                      sm: SMatrix | None = None, bases: SubspaceBases | None = None,
                      grid: HardyGrid | None = None,
                      semigroup_times: tuple[float, ...] = (0.5, 1.0)) -> EigenReport:
    """Certify k0/(z - zeta) as an eigenvector candidate of the restricted semigroup.

    Reports the case classification from the pole data and its algebraic
    residual, the residue-exact orthogonality to the scattering image of
    the damped manifold, and the grid defect of Z(t) against the expected
    eigenvalue action.
    """
    if zeta.imag >= -TOL.real:
        raise ValueError("zeta must lie strictly below the real axis")
    k0 = np.asarray(k0, dtype=complex).ravel()
    if k0.shape != (m.dim_k,):
        raise ValueError(f"k0 must have {m.dim_k} components")
    sm = sm or smatrix(m, tol=tol)
    bases = bases or subspace_bases(m, tol=tol, sm=sm)
    zbar = complex(np.conj(zeta))

    if sm.is_pole(zeta):
        case = "(i)(a)"
        residual = float(np.linalg.norm(sm.s(zbar).conj().T @ k0))
    elif sm.is_pole(zbar):
        case = "(i)(b)"
        _c, A = _normalized_leading(sm, bases.p, zbar, tol)
        residual = float(np.linalg.norm(A.conj().T @ k0))
    else:
        case = "none"
        residual = float("inf")

    f = _bw_vector(k0, zeta, tol)
    orth = tuple(abs(rational_inner_product(f, v, tol=tol)) for v in bases.mplus)
    max_orth = max(orth) if orth else 0.0

    defects = {}
    if semigroup_times:
        grid = grid or HardyGrid()
        fg = GridFunction.from_rational(grid, f, tol=tol)
        nrm = fg.norm()
        for t in semigroup_times:
            t_eff = grid.snap_time(t)
            out = characteristic_semigroup(t, fg)
            expect = fg.scale(np.exp(-1j * t_eff * zeta))
            defects[t] = float((out - expect).norm() / nrm)

    return EigenReport(zeta=complex(zeta), k0=k0, case=case,
                       condition_residual=residual, max_orthogonality=float(max_orth),
                       orthogonality_by_n=orth, semigroup_defects=defects)


# ---------------------------------------------------------------------------
# resolvent construction


@dataclass(frozen=True)
class ResolventReport:
    zeta: complex
    case: str                       # "(ii)(a)" or "(ii)(b)"
    k0: np.ndarray
    f: list[RatFun]
    h: list[RatFun]
    t_plus_certificate: float       # max |<g, S u>| of the input
    h_lower_hardy_defect: float     # leaked lower-half Laurent mass of h
    f_upper_hardy_defect: float     # leaked upper-half Laurent mass of f
    cancellation_residual: float    # |h(zeta) - W(zeta) k0|
    f_orthogonality: float          # max |<f, S u>|

    @property
    def all_certificates_pass(self) -> bool:
        return (self.h_lower_hardy_defect <= 1e-8 and self.f_upper_hardy_defect <= 1e-8
                and self.cancellation_residual <= 1e-8 and self.f_orthogonality <= 1e-8)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "zeta": [self.zeta.real, self.zeta.imag],
            "case": self.case,
            "k0": [[x.real, x.imag] for x in self.k0],
            "t_plus_certificate": self.t_plus_certificate,
            "h_lower_hardy_defect": self.h_lower_hardy_defect,
            "f_upper_hardy_defect": self.f_upper_hardy_defect,
            "cancellation_residual": self.cancellation_residual,
            "f_orthogonality": self.f_orthogonality,
            "all_pass": self.all_certificates_pass,
        }


def _unreduced_sum(terms: list[RatFun], tol: Tolerances) -> RatFun:
    """Sum over the product denominator without root-cancellation reduction.

    Removable poles of the sum stay in the data as near-coincident
    root pairs; Laurent extraction reads them as near-zero coefficients,
    whereas reduction would re-root the summed polynomials and lose
    several digits at clustered roots.
    """
    terms = [t for t in terms if not t.is_zero]
    if not terms:
        return RatFun([], tol=tol)
    num = Poly([], tol=tol)
    for j, t in enumerate(terms):
        part = t.num
        for l, o in enumerate(terms):
            if l != j:
                part = part * o.den
        num = num + part
    den = terms[0].den
    for t in terms[1:]:
        den = den * t.den
    return RatFun(num, den, tol=tol, reduce=False)


def _leaked_mass(comps: list[RatFun], half_plane: str, tol: Tolerances,
                 exclude: complex | None = None) -> float:
    """Largest Laurent coefficient magnitude among poles in the wrong half plane."""
    sign = 1 if half_plane == "upper" else -1
    worst = 0.0
    for comp in comps:
        if comp.is_zero:
            continue
        for pole, order in comp.poles():
            if exclude is not None and abs(pole - exclude) <= 1e-6 * max(1.0, abs(pole)):
                continue
            if sign * pole.imag > tol.real:
                cs = comp.laurent_at(pole, order)
                worst = max(worst, float(np.abs(cs).max()))
    return worst


def resolvent_construct(m: FriedrichsModel, zeta: complex, g, *, tol: Tolerances = TOL,
                        sm: SMatrix | None = None, bases: SubspaceBases | None = None,
                        t_plus_tol: float = 1e-8) -> ResolventReport:
    """Solve the resolvent equation at a point of the resolvent set.

    Given zeta in the lower half plane and a rational K-valued g orthogonal
    to the scattering image basis (membership in the complement is
    certified, not assumed), constructs h = S# pbar/(z-i)^g g, determines
    the unique boundary vector k0 from the case formula, and certifies:
    f = (g - k0)/(z - zeta) is upper-Hardy, the transported expression
    (z - zeta)^(-1) (h - W k0) is lower-Hardy with the pole at zeta
    cancelled, and f is again orthogonal to the image basis.
    """
    if zeta.imag >= 0:
        raise ValueError("zeta must lie in the lower half plane")
    sm = sm or smatrix(m, tol=tol)
    bases = bases or subspace_bases(m, tol=tol, sm=sm)
    gs = _as_components(g, m.dim_k)
    zbar = complex(np.conj(zeta))

    if sm.is_pole(zeta):
        raise HypothesisError(
            f"zeta={zeta} is a pole of the scattering matrix: an eigenvalue, not a "
            "resolvent point")
    if sm.is_pole(zbar):
        case = "(ii)(b)"
        c, A = _normalized_leading(sm, bases.p, zbar, tol)
        svals = np.linalg.svd(A, compute_uv=False)
        if svals.min() <= 1e-8 * max(svals.max(), 1.0):
            raise HypothesisError(
                "A not invertible: the leading coefficient at the conjugate pole is "
                "singular, so zeta is an eigenvalue (case (i)(b)), not a resolvent point")
    else:
        case = "(ii)(a)"
        c, A = None, None

    # T+ membership certificate of the input
    t_cert = max(abs(rational_inner_product(gs, v, tol=tol)) for v in bases.mplus)
    if t_cert > t_plus_tol:
        raise HypothesisError(
            f"input fails the complement certificate: max |<g, S u>| = {t_cert:.3g}")

    s_flip = sm.s.conj_flip()
    pbar = bases.p.conj_flip()
    w_scalar = RatFun(pbar, Poly.from_roots([1j] * bases.g), tol=tol)
    # V = S# * pbar/(z-i)^g entrywise; the reduction here cancels exact
    # root pairs only (the conjugate scattering poles against pbar)
    V = [[s_flip[i, j] * w_scalar for j in range(m.dim_k)] for i in range(m.dim_k)]
    h = []
    for i in range(m.dim_k):
        terms = [RatFun(V[i][j].num * gs[j].num, V[i][j].den * gs[j].den,
                        tol=tol, reduce=False)
                 for j in range(m.dim_k)
                 if not (V[i][j].is_zero or gs[j].is_zero)]
        h.append(_unreduced_sum(terms, tol))
    h_defect = _leaked_mass(h, "lower", tol)

    h_at = np.array([hi(zeta) if not hi.is_zero else 0j for hi in h])
    shift = (zeta - 1j) ** bases.g
    if case == "(ii)(a)":
        W_at = np.asarray(s_flip(zeta)) * (pbar(zeta) / shift)
        k0 = (shift / pbar(zeta)) * (sm.s(zeta) @ h_at)
    else:
        W_at = (np.conj(c) / shift) * A.conj().T
        k0 = (shift / np.conj(c)) * np.linalg.solve(A.conj().T, h_at)

    cancel = float(np.linalg.norm(h_at - W_at @ k0))

    lin = RatFun(Poly([1.0]), Poly([-zeta, 1.0]), tol=tol, reduce=False)
    f = [(gi - RatFun([k], tol=tol)) * lin for gi, k in zip(gs, k0)]
    f_defect = _leaked_mass(f, "upper", tol)
    for comp in f:
        if not comp.is_zero and comp.degree_at_infinity > -1:
            raise ArithmeticError("resolvent image does not decay at infinity")

    f_orth = max(abs(rational_inner_product(f, v, tol=tol)) for v in bases.mplus)

    return ResolventReport(zeta=complex(zeta), case=case, k0=k0, f=f, h=h,
                           t_plus_certificate=float(t_cert),
                           h_lower_hardy_defect=float(h_defect),
                           f_upper_hardy_defect=float(f_defect),
                           cancellation_residual=cancel,
                           f_orthogonality=float(f_orth))
