"""Rational matrix-valued functions of one complex variable.

Everything downstream (Livšic matrices, scattering matrices, residue-exact
inner products) reduces to the algebra implemented here: polynomials with
complex floating-point coefficients, quotients of them, and rectangular
matrices of those quotients.

Two representations are used.  Coefficient form (``Poly`` numerator over a
monic ``Poly`` denominator) carries the arithmetic; the partial-fraction
form (polynomial part plus Laurent coefficients at each denominator root
cluster) carries Cauchy transforms, residue sums and leading-coefficient
extraction.

Roots come from the companion matrix with one Newton polish step, then are
clustered into multiple roots; the cluster radius adapts to the expected
eps**(1/m) scatter of an m-fold root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import TOL, Tolerances

__all__ = [
    "Poly",
    "RatFun",
    "RatMat",
    "PoleRecord",
    "PoleEvaluationError",
    "poly_roots",
    "cauchy_transform",
    "laurent_leading",
]


class PoleEvaluationError(ZeroDivisionError):
    """Evaluation requested at (or too close to) a pole."""

    def __init__(self, z: complex, pole: complex):
        super().__init__(f"evaluation at pole: z={z} is within guard distance of pole {pole}")
        self.z = z
        self.pole = pole


# ---------------------------------------------------------------------------
# polynomials


def _trim(coeffs: np.ndarray, tol: float) -> np.ndarray:
    mags = np.abs(coeffs)
    scale = mags.max(initial=0.0)
    if scale == 0.0:
        return coeffs[:0]
    keep = np.nonzero(mags > tol * max(1.0, scale))[0]
    if keep.size == 0:
        return coeffs[:0]
    return coeffs[: keep[-1] + 1]


class Poly:
    """Polynomial with complex coefficients, ascending degree.

    The zero polynomial is the empty coefficient list.  Trailing
    coefficients below ``tol.trim`` (relative) are dropped on construction.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[complex] | np.ndarray, *, tol: Tolerances = TOL):
        arr = np.asarray(coeffs, dtype=complex).ravel()
        self.coeffs = _trim(arr, tol.trim)

    # -- basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def lead(self) -> complex:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return complex(self.coeffs[-1])

    def __call__(self, z):
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs.shape == other.coeffs.shape \
            and bool(np.all(self.coeffs == other.coeffs))

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return Poly(a)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly([])
            return Poly(np.convolve(self.coeffs, other.coeffs))
        return Poly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def derivative(self) -> "Poly":
        if self.degree <= 0:
            return Poly([])
        k = np.arange(1, len(self.coeffs))
        return Poly(self.coeffs[1:] * k)

    def monic(self) -> "Poly":
        return Poly(self.coeffs / self.lead)

    def conj_flip(self) -> "Poly":
        """The polynomial z -> conj(p(conj(z))), i.e. conjugated coefficients."""
        return Poly(np.conj(self.coeffs))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return Poly([]), self
        q, r = np.polynomial.polynomial.polydiv(self.coeffs, other.coeffs)
        return Poly(q), Poly(r)

    def deflate(self, root: complex) -> tuple["Poly", complex]:
        """Synthetic division by (z - root); returns (quotient, remainder)."""
        c = self.coeffs[::-1]  # descending
        out = np.empty(len(c), dtype=complex)
        acc = 0j
        for i, ci in enumerate(c):
            acc = acc * root + ci
            out[i] = acc
        return Poly(out[:-1][::-1]), complex(out[-1])

    def taylor(self, center: complex, nterms: int) -> np.ndarray:
        """First ``nterms`` Taylor coefficients around ``center``."""
        out = np.zeros(nterms, dtype=complex)
        p = self
        for k in range(nterms):
            if p.is_zero:
                break
            p, rem = p.deflate(center)
            out[k] = rem
        return out

    @staticmethod
    def from_roots(roots: Iterable[complex], lead: complex = 1.0) -> "Poly":
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = np.convolve(c, np.array([-r, 1.0], dtype=complex))
        return Poly(c)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @staticmethod
    def from_json(data: Sequence[Sequence[float]]) -> "Poly":
        return Poly([complex(re, im) for re, im in data])


# ---------------------------------------------------------------------------
# root finding


def _cluster_roots(raw: np.ndarray, tol: Tolerances) -> list[tuple[complex, int]]:
    """Greedy single-linkage clustering with multiplicity-adaptive radius.

    An exact m-fold root scatters over a radius ~ eps**(1/m) under the
    companion-matrix computation, so the merge radius grows with the
    tentative cluster size.
    """
    clusters: list[list[complex]] = [[complex(r)] for r in raw]
    base = 1e-10
    changed = True
    while changed and len(clusters) > 1:
        changed = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                ci, cj = clusters[i], clusters[j]
                mi = np.mean(ci)
                mj = np.mean(cj)
                m = len(ci) + len(cj)
                scale = max(1.0, abs(mi), abs(mj))
                radius = max(tol.cluster, base ** (1.0 / m)) * scale
                if abs(mi - mj) <= radius:
                    clusters[i] = ci + cj
                    del clusters[j]
                    changed = True
                    break
            if changed:
                break
    out = [(complex(np.mean(c)), len(c)) for c in clusters]
    out.sort(key=lambda rc: (rc[0].real, rc[0].imag))
    return out


def _taylor_cluster_ok(p: Poly, center: complex, m: int, radius: float) -> bool:
    """Is ``p`` consistent with an m-fold root at ``center`` scattered over ``radius``?

    A monic factor with all m roots inside the ball satisfies
    |a_k| <= binom(m, k) |a_m| radius^(m-k) for its Taylor coefficients at
    the center; 4**m absorbs the binomials plus slack.
    """
    a = p.taylor(center, m + 1)
    lead = abs(a[m])
    if lead == 0.0:
        return False
    slack = 4.0 ** m
    return all(abs(a[k]) <= slack * lead * radius ** (m - k) for k in range(m))


def _merge_validated(p: Poly, clusters: list[tuple[complex, int]],
                     tol: Tolerances) -> list[tuple[complex, int]]:
    """Second clustering pass for higher multiplicities.

    An exact m-fold root scatters over ~ eps**(1/m), which for m >= 4
    exceeds any radius a pairwise pass can justify; candidate groups are
    gathered at the multiplicity-consistent radius and accepted only when
    the Taylor test certifies them.
    """
    changed = True
    while changed and len(clusters) > 1:
        changed = False
        total = sum(m for _, m in clusters)
        for target in range(total, 1, -1):
            for i, (zi, mi) in enumerate(clusters):
                if mi >= target:
                    continue
                scale = max(1.0, abs(zi))
                radius = max(tol.cluster, tol.root ** (1.0 / target)) * scale
                group = [j for j, (zj, _) in enumerate(clusters)
                         if abs(zj - zi) <= radius]
                if len(group) < 2 or sum(clusters[j][1] for j in group) != target:
                    continue
                center = sum(clusters[j][0] * clusters[j][1] for j in group) / target
                if not _taylor_cluster_ok(p, center, target, radius):
                    continue
                clusters = [c for j, c in enumerate(clusters) if j not in group]
                clusters.append((complex(center), target))
                changed = True
                break
            if changed:
                break
    clusters.sort(key=lambda rc: (rc[0].real, rc[0].imag))
    return clusters


def poly_roots(p: Poly, *, tol: Tolerances = TOL) -> list[tuple[complex, int]]:
    """All roots of ``p`` with multiplicities, as (root, multiplicity) pairs.

    Companion-matrix eigenvalues, one Newton polish step, then clustering.
    Multiple roots are re-polished with Newton on the (m-1)-st derivative.
    """
    if p.is_zero:
        raise ValueError("degenerate input: zero polynomial has no roots")
    if p.degree == 0:
        return []
    c = p.monic().coeffs
    raw = np.polynomial.polynomial.polyroots(c)
    dp = p.derivative()
    # one Newton step
    val = p(raw)
    der = dp(raw)
    ok = np.abs(der) > 0
    polished = raw.copy()
    polished[ok] = raw[ok] - val[ok] / der[ok]
    # reject polish steps that made things worse
    worse = np.abs(p(polished)) > np.abs(val)
    polished[worse] = raw[worse]
    clusters = _cluster_roots(polished, tol)
    clusters = _merge_validated(p, clusters, tol)
    out = []
    for root, m in clusters:
        if m > 1:
            # polish the cluster center on the (m-1)-st derivative
            q = p
            for _ in range(m - 1):
                q = q.derivative()
            dq = q.derivative()
            r = root
            for _ in range(4):
                d = dq(r)
                if d == 0:
                    break
                r = r - q(r) / d
            root = complex(r)
        out.append((root, m))
    return out


def _roots_flat(p: Poly, tol: Tolerances) -> list[complex]:
    out: list[complex] = []
    for r, m in poly_roots(p, tol=tol):
        out.extend([r] * m)
    return out


# ---------------------------------------------------------------------------
# rational functions


@dataclass(frozen=True)
class PoleRecord:
    """A located pole with its order and leading Laurent coefficient."""

    location: complex
    order: int
    leading: np.ndarray  # matrix coefficient of (z - location)**(-order)
    leading_svals: tuple[float, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "zeta": [self.location.real, self.location.imag],
            "order": self.order,
            "leading": [[[x.real, x.imag] for x in row] for row in np.atleast_2d(self.leading)],
            "leading_svals": list(self.leading_svals),
        }


class RatFun:
    """Quotient of two polynomials; denominator monic, common roots reduced."""

    __slots__ = ("num", "den", "_tol", "_poles")

    def __init__(self, num, den=(1.0,), *, tol: Tolerances = TOL, reduce: bool = True):
        n = num if isinstance(num, Poly) else Poly(num, tol=tol)
        d = den if isinstance(den, Poly) else Poly(den, tol=tol)
        if d.is_zero:
            raise ZeroDivisionError("denominator is the zero polynomial")
        if reduce and not n.is_zero and n.degree >= 1 and d.degree >= 1:
            n, d = _reduce(n, d, tol)
        lead = d.lead
        if lead != 1.0:
            n = Poly(n.coeffs / lead, tol=tol)
            d = Poly(d.coeffs / lead, tol=tol)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)
        object.__setattr__(self, "_tol", tol)
        object.__setattr__(self, "_poles", None)

    def __setattr__(self, *a):  # immutable after construction
        raise AttributeError("RatFun is immutable")

    # -- queries ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def degree_at_infinity(self) -> int:
        """deg(num) - deg(den); negative means decay at infinity."""
        if self.is_zero:
            return -(10 ** 9)
        return self.num.degree - self.den.degree

    def poles(self) -> list[tuple[complex, int]]:
        """Denominator root clusters (pole, order); cached."""
        if self._poles is None:
            ps = [] if self.den.degree == 0 else poly_roots(self.den, tol=self._tol)
            object.__setattr__(self, "_poles", ps)
        return self._poles

    def zeros(self) -> list[tuple[complex, int]]:
        if self.is_zero or self.num.degree == 0:
            return []
        return poly_roots(self.num, tol=self._tol)

    def is_real_regular(self) -> bool:
        """True if no pole lies within ``tol.real`` of the real axis."""
        return all(abs(p.imag) > self._tol.real for p, _ in self.poles())

    # -- evaluation ---------------------------------------------------------

    def __call__(self, z):
        zarr = np.asarray(z, dtype=complex)
        dv = self.den(zarr)
        guard = self._tol.pole
        for p, _ in self.poles():
            dist = np.abs(zarr - p)
            if np.any(dist <= guard):
                bad = zarr if np.ndim(zarr) == 0 else zarr[dist <= guard].flat[0]
                raise PoleEvaluationError(complex(bad), p)
        return self.num(zarr) / dv

    # -- algebra ------------------------------------------------------------

    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Poly):
            return RatFun(other, tol=self._tol)
        return RatFun([complex(other)], tol=self._tol)

    def __add__(self, other):
        o = self._coerce(other)
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den, tol=self._tol)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __neg__(self):
        return RatFun(-self.num, self.den, tol=self._tol, reduce=False)

    def __mul__(self, other):
        if isinstance(other, RatMat):
            return NotImplemented
        o = self._coerce(other)
        return RatFun(self.num * o.num, self.den * o.den, tol=self._tol)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def reciprocal(self) -> "RatFun":
        if self.is_zero:
            raise ZeroDivisionError("reciprocal of the zero function")
        return RatFun(self.den, self.num, tol=self._tol, reduce=False)

    def conj_flip(self) -> "RatFun":
        """z -> conj(self(conj(z))): conjugated coefficients.

        On the real axis it equals the complex conjugate of ``self``; it is
        the meromorphic continuation of the pointwise adjoint.
        """
        return RatFun(self.num.conj_flip(), self.den.conj_flip(), tol=self._tol, reduce=False)

    def derivative(self) -> "RatFun":
        return RatFun(self.num.derivative() * self.den - self.num * self.den.derivative(),
                      self.den * self.den, tol=self._tol)

    def isclose(self, other: "RatFun", tol: float = 1e-9) -> bool:
        """Equality as rational functions, by cross-multiplied residual."""
        diff = self.num * other.den - other.num * self.den
        if diff.is_zero:
            return True
        scale = max(np.abs(self.num.coeffs).max(initial=0.0),
                    np.abs(other.num.coeffs).max(initial=0.0),
                    np.abs((self.den * other.den).coeffs).max(initial=0.0), 1.0)
        return bool(np.abs(diff.coeffs).max() <= tol * scale)

    # -- partial fractions --------------------------------------------------

    def partial_fractions(self) -> tuple[Poly, list[tuple[complex, int, np.ndarray]]]:
        """Polynomial part plus Laurent data per pole.

        Returns ``(poly_part, terms)`` where each term is
        ``(pole, order m, coeffs)`` with ``coeffs[j-1]`` the coefficient of
        ``(z - pole)**(-j)``, j = 1..m.
        """
        poly_part, rem = self.num.divmod(self.den)
        terms = []
        for pole, m in self.poles():
            terms.append((pole, m, self.laurent_at(pole, m, num=rem)))
        return poly_part, terms

    def laurent_at(self, pole: complex, order: int, num: Poly | None = None) -> np.ndarray:
        """Laurent coefficients [c_1 .. c_order] of self at ``pole``.

        ``c_j`` multiplies ``(z - pole)**(-j)``.  Computed by Taylor-series
        division of the numerator by the deflated denominator, so near-zero
        numerators at the pole (spurious pole/zero pairs) come out as
        near-zero coefficients instead of blowing up.
        """
        n = self.num if num is None else num
        d = self.den
        for _ in range(order):
            d, _rem = d.deflate(pole)
        a = n.taylor(pole, order)
        b = d.taylor(pole, order)
        if b[0] == 0:
            raise ZeroDivisionError("deflated denominator vanishes at pole; clustering failed")
        t = np.zeros(order, dtype=complex)
        for k in range(order):
            acc = a[k]
            for j in range(1, k + 1):
                acc -= b[j] * t[k - j]
            t[k] = acc / b[0]
        # coefficient of (z-pole)**(-(order - k)) is t[k]
        return t[::-1].copy()  # index j-1 -> c_j

    def residues(self, half_plane: str, *, axis_guard: float | None = None) -> list[tuple[complex, complex]]:
        """(pole, residue) for every pole in the chosen half plane.

        ``half_plane`` is "upper" or "lower".  Poles within ``axis_guard``
        (default ``tol.real``) of the real axis raise.
        """
        guard = self._tol.real if axis_guard is None else axis_guard
        sign = 1 if half_plane == "upper" else -1
        out = []
        for pole, m in self.poles():
            if abs(pole.imag) <= guard:
                raise ValueError(f"pole {pole} on the real axis")
            if sign * pole.imag > 0:
                c = self.laurent_at(pole, m)
                out.append((pole, complex(c[0])))
        return out

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(data: dict, *, tol: Tolerances = TOL) -> "RatFun":
        return RatFun(Poly.from_json(data["num"]), Poly.from_json(data["den"]), tol=tol)

    def __repr__(self) -> str:
        return f"RatFun(num={list(self.num.coeffs)}, den={list(self.den.coeffs)})"


def _reduce(num: Poly, den: Poly, tol: Tolerances) -> tuple[Poly, Poly]:
    """Cancel common roots of num and den within ``tol.gcd``."""
    rn = _roots_flat(num, tol)
    rd = _roots_flat(den, tol)
    keep_n = list(rn)
    keep_d = []
    cancelled = False
    for r in rd:
        scale = max(1.0, abs(r))
        best = None
        for i, s in enumerate(keep_n):
            d = abs(s - r)
            if d <= tol.gcd ** 0.5 * scale and (best is None or d < best[1]):
                best = (i, d)
        # sqrt(gcd) radius: a cancelling pair found by two independent
        # root computations can be separated by well over gcd itself
        if best is not None:
            del keep_n[best[0]]
            cancelled = True
        else:
            keep_d.append(r)
    if not cancelled:
        return num, den
    new_num = Poly.from_roots(keep_n, num.lead)
    new_den = Poly.from_roots(keep_d, den.lead)
    return new_num, new_den


# ---------------------------------------------------------------------------
# matrices of rational functions


class RatMat:
    """Rectangular matrix with RatFun entries."""

    __slots__ = ("entries", "rows", "cols", "_tol")

    def __init__(self, entries: Sequence[Sequence[RatFun]], *, tol: Tolerances = TOL):
        rows = len(entries)
        cols = len(entries[0])
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", [list(row) for row in entries])
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_tol", tol)

    def __setattr__(self, *a):
        raise AttributeError("RatMat is immutable")

    @staticmethod
    def identity(n: int, *, tol: Tolerances = TOL) -> "RatMat":
        one = RatFun([1.0], tol=tol)
        zero = RatFun([], tol=tol)
        return RatMat([[one if i == j else zero for j in range(n)] for i in range(n)], tol=tol)

    @staticmethod
    def from_scalar(r: RatFun) -> "RatMat":
        return RatMat([[r]], tol=r._tol)

    @staticmethod
    def from_const(a: np.ndarray, *, tol: Tolerances = TOL) -> "RatMat":
        a = np.atleast_2d(np.asarray(a, dtype=complex))
        return RatMat([[RatFun([a[i, j]], tol=tol) for j in range(a.shape[1])]
                       for i in range(a.shape[0])], tol=tol)

    def __getitem__(self, idx) -> RatFun:
        i, j = idx
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __call__(self, z) -> np.ndarray:
        return np.array([[e(z) for e in row] for row in self.entries], dtype=complex)

    def map(self, fn) -> "RatMat":
        return RatMat([[fn(e) for e in row] for row in self.entries], tol=self._tol)

    def __add__(self, other: "RatMat") -> "RatMat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return RatMat([[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.entries, other.entries)], tol=self._tol)

    def __sub__(self, other: "RatMat") -> "RatMat":
        return self + other.map(lambda e: -e)

    def __neg__(self) -> "RatMat":
        return self.map(lambda e: -e)

    def scale(self, s) -> "RatMat":
        if isinstance(s, RatFun):
            return self.map(lambda e: e * s)
        return self.map(lambda e: e * complex(s))

    def __matmul__(self, other: "RatMat") -> "RatMat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        zero = RatFun([], tol=self._tol)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero or b.is_zero:
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RatMat(out, tol=self._tol)

    def transpose(self) -> "RatMat":
        return RatMat([[self.entries[i][j] for i in range(self.rows)]
                       for j in range(self.cols)], tol=self._tol)

    def conj_flip(self) -> "RatMat":
        """z -> adjoint(self(conj(z))): entry conj_flip plus transpose."""
        return RatMat([[self.entries[i][j].conj_flip() for i in range(self.rows)]
                       for j in range(self.cols)], tol=self._tol)

    def det(self) -> RatFun:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 1:
            return self.entries[0][0]
        if n == 2:
            return self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
        acc = RatFun([], tol=self._tol)
        for j in range(n):
            a = self.entries[0][j]
            if a.is_zero:
                continue
            minor = RatMat([row[:j] + row[j + 1:] for row in self.entries[1:]], tol=self._tol)
            term = a * minor.det()
            acc = acc + term if j % 2 == 0 else acc - term
        return acc

    def inverse(self) -> "RatMat":
        """Adjugate over determinant; raises if identically singular."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        d = self.det()
        if d.is_zero:
            raise ZeroDivisionError("identically singular matrix function")
        n = self.rows
        if n == 1:
            return RatMat([[self.entries[0][0].reciprocal()]], tol=self._tol)
        inv_d = d.reciprocal()
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = RatMat([row[:j] + row[j + 1:] for k, row in enumerate(self.entries)
                                if k != i], tol=self._tol)
                c = minor.det()
                if (i + j) % 2:
                    c = -c
                cof[i][j] = c
        # adjugate = transpose of cofactors
        return RatMat([[cof[j][i] * inv_d for j in range(n)] for i in range(n)], tol=self._tol)

    def pole_clusters(self, *, tol: Tolerances | None = None) -> list[tuple[complex, int]]:
        """Pole locations over all entries, merged; order = max entry order."""
        t = tol or self._tol
        merged: list[tuple[complex, int]] = []
        for row in self.entries:
            for e in row:
                for p, m in e.poles():
                    for idx, (q, mq) in enumerate(merged):
                        if abs(p - q) <= max(t.cluster, 1e-7) * max(1.0, abs(p)):
                            merged[idx] = (q, max(mq, m))
                            break
                    else:
                        merged.append((p, m))
        merged.sort(key=lambda rc: (rc[0].real, rc[0].imag))
        return merged

    def __repr__(self) -> str:
        return f"RatMat({self.rows}x{self.cols})"


# ---------------------------------------------------------------------------
# Cauchy transform and Laurent leading data


def cauchy_transform(R: RatMat | RatFun, branch: str, *, tol: Tolerances = TOL) -> RatMat | RatFun:
    """Closed form of z -> integral of R(lambda)/(z - lambda) over the real line.

    ``branch`` selects the half plane in which the formula equals the
    integral: "upper" sums residue data over poles of R in the lower half
    plane (contour closed downward), "lower" over the upper ones.  The two
    branches differ by the jump -2*pi*i*R(z), the Plemelj formula.

    Requires every entry to decay like lambda**-2 (deg num <= deg den - 2)
    and to have no poles within ``tol.real`` of the real axis.
    """
    if branch not in ("upper", "lower"):
        raise ValueError("branch must be 'upper' or 'lower'")
    if isinstance(R, RatFun):
        return _cauchy_scalar(R, branch, tol)
    return R.map(lambda e: _cauchy_scalar(e, branch, tol))


def _cauchy_scalar(r: RatFun, branch: str, tol: Tolerances) -> RatFun:
    if r.is_zero:
        return r
    if r.degree_at_infinity > -2:
        raise ValueError("non-integrable coupling: insufficient decay for the Cauchy transform")
    sign = -1 if branch == "upper" else 1
    acc = RatFun([], tol=tol)
    for pole, m in r.poles():
        if abs(pole.imag) <= tol.real:
            raise ValueError(f"non-integrable coupling: real pole at {pole}")
        if (branch == "upper" and pole.imag < 0) or (branch == "lower" and pole.imag > 0):
            cs = r.laurent_at(pole, m)
            for j in range(1, m + 1):
                term = RatFun([sign * 2j * math.pi * cs[j - 1]],
                              Poly.from_roots([pole] * j), tol=tol)
                acc = acc + term
    return acc


def laurent_leading(R: RatMat | RatFun, eta: complex, *, tol: Tolerances = TOL) -> PoleRecord:
    """Order and leading matrix coefficient of the pole of R at ``eta``.

    The order is the maximum entry pole order; entries with lower order
    contribute zero to the leading matrix.
    """
    if isinstance(R, RatFun):
        R = RatMat.from_scalar(R)
    orders = np.zeros(R.shape, dtype=int)
    for i in range(R.rows):
        for j in range(R.cols):
            for p, m in R[i, j].poles():
                if abs(p - eta) <= max(tol.cluster, 1e-7) * max(1.0, abs(eta)):
                    orders[i, j] = max(orders[i, j], m)
    g = int(orders.max())
    if g == 0:
        raise ValueError(f"holomorphic point: {eta} is not a pole")
    lead = np.zeros(R.shape, dtype=complex)
    for i in range(R.rows):
        for j in range(R.cols):
            if orders[i, j] == 0:
                continue
            # match the entry's own clustered pole location
            entry = R[i, j]
            p0 = min((p for p, _ in entry.poles()), key=lambda p: abs(p - eta))
            cs = entry.laurent_at(p0, orders[i, j])
            if orders[i, j] == g:
                lead[i, j] = cs[g - 1]
            # entries of strictly lower order contribute 0 at order g
    svals = tuple(float(s) for s in np.linalg.svd(lead, compute_uv=False))
    if np.abs(lead).max() <= tol.pole:
        raise ValueError(f"holomorphic point: leading coefficient at {eta} vanishes")
    return PoleRecord(location=complex(eta), order=g, leading=lead, leading_svals=svals)
