"""Finite-rank Friedrichs models and their validation and serialization.

A model couples a multiplication operator on K-valued functions over the
real line to a finite-dimensional block E of embedded eigenvalues through a
rational coupling function M(lambda) (dim_k x dim_e).  Couplings must be
holomorphic on the real axis and decay at least like 1/lambda entrywise,
so that the Livšic integral converges.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .config import TOL, Tolerances
from .ratfun import Poly, RatFun, RatMat

__all__ = [
    "FriedrichsModel",
    "ValidationReport",
    "SchemaError",
    "ModelInvariantError",
    "load_model",
    "save_model",
    "validate_model",
    "builtin_model",
    "BUILTIN_NAMES",
]

_HERMITIAN_TOL = 1e-12


class SchemaError(ValueError):
    """Malformed model document; carries the offending path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class ModelInvariantError(ValueError):
    """Structurally valid document violating a model invariant."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


@dataclass(frozen=True)
class FriedrichsModel:
    name: str
    dim_k: int
    dim_e: int
    h_e: np.ndarray          # dim_e x dim_e Hermitian block of H0 on E
    coupling: RatMat         # dim_k x dim_e rational coupling M(.)

    def __post_init__(self):
        object.__setattr__(self, "h_e", np.asarray(self.h_e, dtype=complex))
        self.h_e.setflags(write=False)

    def coupling_flip(self) -> RatMat:
        """The continued adjoint coupling z -> M(conj(z))^*, dim_e x dim_k."""
        return self.coupling.conj_flip()


@dataclass(frozen=True)
class ValidationReport:
    model_name: str
    checks: list[tuple[str, bool, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def failed(self) -> list[str]:
        return [name for name, passed, _ in self.checks if not passed]

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "model": self.model_name,
            "ok": self.ok,
            "checks": [{"invariant": n, "pass": p, "slack": s} for n, p, s in self.checks],
        }


def validate_model(m: FriedrichsModel, *, tol: Tolerances = TOL) -> ValidationReport:
    """Report every model invariant with its measured slack (report-only)."""
    checks: list[tuple[str, bool, float]] = []

    ok = m.dim_k >= 1 and m.dim_e >= 1
    checks.append(("positive dimensions", ok, 0.0))

    shape_ok = m.h_e.shape == (m.dim_e, m.dim_e) and m.coupling.shape == (m.dim_k, m.dim_e)
    checks.append(("shapes consistent", shape_ok, 0.0))

    if shape_ok:
        herm = float(np.linalg.norm(m.h_e - m.h_e.conj().T, 2))
        checks.append(("h_e Hermitian", herm <= _HERMITIAN_TOL, herm))

        min_imag = math.inf
        decay_margin = math.inf
        for i in range(m.dim_k):
            for j in range(m.dim_e):
                e = m.coupling[i, j]
                if e.is_zero:
                    continue
                for p, _ in e.poles():
                    min_imag = min(min_imag, abs(p.imag))
                decay_margin = min(decay_margin, -1 - e.degree_at_infinity)
        checks.append(("coupling holomorphic on R (no real poles)",
                       min_imag > tol.real, 0.0 if min_imag is math.inf else min_imag))
        checks.append(("coupling decay deg(num) <= deg(den) - 1",
                       decay_margin >= 0, float(decay_margin)))
    return ValidationReport(model_name=m.name, checks=checks)


def _require(m: FriedrichsModel, tol: Tolerances) -> FriedrichsModel:
    report = validate_model(m, tol=tol)
    if not report.ok:
        bad = report.failed()
        if any("real poles" in b or "decay" in b for b in bad):
            raise ModelInvariantError("; ".join(bad), "non-integrable coupling")
        raise ModelInvariantError("; ".join(bad), "model invariant violated")
    return m


# ---------------------------------------------------------------------------
# serialization

_TOP_FIELDS = {"schema_version", "name", "dim_k", "dim_e", "h_e", "coupling"}


def _parse_complex_pair(v: Any, path: str) -> complex:
    if (not isinstance(v, (list, tuple))) or len(v) != 2 \
            or not all(isinstance(x, (int, float)) for x in v):
        raise SchemaError(path, "expected [re, im] pair of numbers")
    return complex(v[0], v[1])


def _parse_coeffs(v: Any, path: str) -> list[complex]:
    if not isinstance(v, list):
        raise SchemaError(path, "expected list of [re, im] pairs")
    return [_parse_complex_pair(x, f"{path}[{i}]") for i, x in enumerate(v)]


def load_model(source, *, tol: Tolerances = TOL, require: bool = True) -> FriedrichsModel:
    """Parse a model document (bytes, text, stream, or dict) and validate it.

    ``require=False`` skips invariant enforcement (schema checks still
    apply), so a structurally valid but analytically unusable model can be
    inspected and reported on.
    """
    if isinstance(source, dict):
        doc = source
    else:
        if isinstance(source, (bytes, bytearray)):
            text = source.decode("utf-8")
        elif isinstance(source, str):
            text = source
        elif isinstance(source, io.IOBase) or hasattr(source, "read"):
            text = source.read()
            if isinstance(text, bytes):
                text = text.decode("utf-8")
        else:
            raise TypeError(f"unsupported source type {type(source)!r}")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError("$", f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise SchemaError("$", f"unknown fields: {sorted(unknown)}")
    for key in ("name", "dim_k", "dim_e", "h_e", "coupling"):
        if key not in doc:
            raise SchemaError(f"$.{key}", "missing required field")
    if not isinstance(doc["name"], str):
        raise SchemaError("$.name", "expected string")
    for key in ("dim_k", "dim_e"):
        if not isinstance(doc[key], int) or doc[key] < 1:
            raise SchemaError(f"$.{key}", "expected positive integer")
    dim_k, dim_e = doc["dim_k"], doc["dim_e"]

    h_rows = doc["h_e"]
    if not isinstance(h_rows, list) or len(h_rows) != dim_e:
        raise SchemaError("$.h_e", f"expected {dim_e} rows")
    h_e = np.zeros((dim_e, dim_e), dtype=complex)
    for i, row in enumerate(h_rows):
        if not isinstance(row, list) or len(row) != dim_e:
            raise SchemaError(f"$.h_e[{i}]", f"expected {dim_e} entries")
        for j, v in enumerate(row):
            h_e[i, j] = _parse_complex_pair(v, f"$.h_e[{i}][{j}]")

    c_rows = doc["coupling"]
    if not isinstance(c_rows, list) or len(c_rows) != dim_k:
        raise SchemaError("$.coupling", f"expected {dim_k} rows")
    entries = []
    for i, row in enumerate(c_rows):
        if not isinstance(row, list) or len(row) != dim_e:
            raise SchemaError(f"$.coupling[{i}]", f"expected {dim_e} entries")
        out_row = []
        for j, cell in enumerate(row):
            path = f"$.coupling[{i}][{j}]"
            if not isinstance(cell, dict) or set(cell) != {"num", "den"}:
                raise SchemaError(path, 'expected {"num": [...], "den": [...]}')
            num = _parse_coeffs(cell["num"], f"{path}.num")
            den = _parse_coeffs(cell["den"], f"{path}.den")
            out_row.append(RatFun(Poly(num), Poly(den), tol=tol))
        entries.append(out_row)
    coupling = RatMat(entries, tol=tol)
    model = FriedrichsModel(name=doc["name"], dim_k=dim_k, dim_e=dim_e,
                            h_e=h_e, coupling=coupling)
    return _require(model, tol) if require else model


def serialize_model(m: FriedrichsModel) -> dict:
    return {
        "schema_version": 1,
        "name": m.name,
        "dim_k": m.dim_k,
        "dim_e": m.dim_e,
        "h_e": [[[m.h_e[i, j].real, m.h_e[i, j].imag] for j in range(m.dim_e)]
                for i in range(m.dim_e)],
        "coupling": [[m.coupling[i, j].to_json() for j in range(m.dim_e)]
                     for i in range(m.dim_k)],
    }


def save_model(m: FriedrichsModel, fp) -> None:
    json.dump(serialize_model(m), fp, indent=2)


# ---------------------------------------------------------------------------
# builtins

BUILTIN_NAMES = ("paper-1d", "oneD-gamma", "twoK-oneE")

_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


def builtin_model(name: str, *, gamma_sq: float = 0.1,
                  couplings: tuple[float, float] = (0.5, 0.5),
                  lambda0: float = 1.0, tol: Tolerances = TOL) -> FriedrichsModel:
    """Builtin example models.

    - "paper-1d":  dim K = dim E = 1, coupling pi**-1/2 / (lambda + i),
      embedded eigenvalue at ``lambda0``.
    - "oneD-gamma": the same with coupling strength scaled so the squared
      coupling is ``gamma_sq``.
    - "twoK-oneE": dim K = 2, dim E = 1, coupling column
      pi**-1/2 * (c1/(lambda + i), c2/(lambda + 2i)); built so the leading
      coefficient at the upper scattering pole is a rank-1 outer product.
    """
    if name == "paper-1d":
        cp = RatFun(Poly([_INV_SQRT_PI]), Poly([1j, 1.0]), tol=tol)
        return FriedrichsModel(name=name, dim_k=1, dim_e=1,
                               h_e=np.array([[lambda0]]), coupling=RatMat([[cp]], tol=tol))
    if name == "oneD-gamma":
        g = math.sqrt(gamma_sq)
        cp = RatFun(Poly([g * _INV_SQRT_PI]), Poly([1j, 1.0]), tol=tol)
        return FriedrichsModel(name=name, dim_k=1, dim_e=1,
                               h_e=np.array([[lambda0]]), coupling=RatMat([[cp]], tol=tol))
    if name == "twoK-oneE":
        c1, c2 = couplings
        r1 = RatFun(Poly([c1 * _INV_SQRT_PI]), Poly([1j, 1.0]), tol=tol)
        r2 = RatFun(Poly([c2 * _INV_SQRT_PI]), Poly([2j, 1.0]), tol=tol)
        return FriedrichsModel(name=name, dim_k=2, dim_e=1,
                               h_e=np.array([[lambda0]]), coupling=RatMat([[r1], [r2]], tol=tol))
    raise ValueError(f"unknown builtin model {name!r}; choose from {BUILTIN_NAMES}")
