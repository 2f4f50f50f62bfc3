"""Numerical laboratory for resonances in finite-rank Friedrichs models.

Rational-matrix calculus, the two boundary branches of the Livšic matrix,
the scattering matrix and its pole/resonance structure, survival-amplitude
decay diagnostics, and the Hardy-space characteristic semigroup with its
spectral certificates.
"""

from .config import TOL, Tolerances
from .decay import (BreitWigner, NoGoReport, bw_amplitude, nogo_report,
                    survival_full, truncated_survival, write_survival_csv)
from .hardy import (EigenReport, GridFunction, HardyGrid, HypothesisError,
                    ResolventReport, SubspaceBases, cayley_basis,
                    characteristic_semigroup, eigenvector_check, hardy_project,
                    rational_inner_product, resolvent_construct, subspace_bases)
from .livsic import (LivsicPair, coupling_gram, livsic_branch, livsic_pair,
                     livsic_symmetry_defect)
from .model import (BUILTIN_NAMES, FriedrichsModel, ModelInvariantError,
                    SchemaError, ValidationReport, builtin_model, load_model,
                    save_model, serialize_model, validate_model)
from .oracle import (Contour, QuadratureError, argument_principle_count,
                     quad_oscillatory, quad_real_line)
from .ratfun import (PoleEvaluationError, PoleRecord, Poly, RatFun, RatMat,
                     cauchy_transform, laurent_leading, poly_roots)
from .resonances import (ConjugatePoleError, LemmaReport, ResonanceRecord,
                         det_livsic, find_resonances, livsic_kernel, verify_lemma)
from .scattering import (ConditionsReport, SMatrix, leading_coefficient,
                         smatrix, theorem2_conditions, unitarity_defect)

__version__ = "0.1.0"

__all__ = [
    "TOL", "Tolerances",
    "Poly", "RatFun", "RatMat", "PoleRecord", "PoleEvaluationError",
    "poly_roots", "cauchy_transform", "laurent_leading",
    "FriedrichsModel", "ValidationReport", "SchemaError", "ModelInvariantError",
    "load_model", "save_model", "serialize_model", "validate_model",
    "builtin_model", "BUILTIN_NAMES",
    "LivsicPair", "coupling_gram", "livsic_branch", "livsic_pair",
    "livsic_symmetry_defect",
    "SMatrix", "smatrix", "unitarity_defect", "ConditionsReport",
    "theorem2_conditions", "leading_coefficient",
    "ResonanceRecord", "LemmaReport", "ConjugatePoleError", "det_livsic",
    "find_resonances", "livsic_kernel", "verify_lemma",
    "BreitWigner", "NoGoReport", "bw_amplitude", "survival_full",
    "truncated_survival", "nogo_report", "write_survival_csv",
    "HardyGrid", "GridFunction", "hardy_project", "characteristic_semigroup",
    "cayley_basis", "rational_inner_product", "SubspaceBases", "subspace_bases",
    "EigenReport", "eigenvector_check", "ResolventReport", "resolvent_construct",
    "HypothesisError",
    "Contour", "QuadratureError", "quad_real_line", "quad_oscillatory",
    "argument_principle_count",
]
