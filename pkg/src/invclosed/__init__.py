"""Inverse-closed additive subgroups of finite fields.

Build fields with :func:`GF`, subgroups with :func:`span`, and classify them
with :func:`classify`; :func:`verify_theorem_finite` runs the exhaustive check
for a whole field.
"""

from .errors import BudgetExceeded, DegenerateInput, FieldMismatchError, PreconditionError, TheoremViolation
from .field import GF, QQ, FieldElement, FieldSpec, Rational, find_irreducible, quadratic_trace, subfield_elements
from .polynomials import DensePolynomial, LinearizedPolynomial
from .subgroups import (
    AdditiveSubgroup,
    enumerate_subspaces,
    generated_subfield,
    is_inverse_closed_direct,
    is_inverse_closed_poly,
    span,
    subspace_polynomial,
    trace_zero_kernel,
)
from .verifier import ClassificationResult, Kind, classify, predicted_count, verify_theorem_finite

__all__ = [
    "AdditiveSubgroup",
    "BudgetExceeded",
    "ClassificationResult",
    "DegenerateInput",
    "DensePolynomial",
    "FieldElement",
    "FieldMismatchError",
    "FieldSpec",
    "GF",
    "Kind",
    "LinearizedPolynomial",
    "PreconditionError",
    "QQ",
    "Rational",
    "TheoremViolation",
    "classify",
    "enumerate_subspaces",
    "find_irreducible",
    "generated_subfield",
    "is_inverse_closed_direct",
    "is_inverse_closed_poly",
    "predicted_count",
    "quadratic_trace",
    "span",
    "subfield_elements",
    "subspace_polynomial",
    "trace_zero_kernel",
    "verify_theorem_finite",
]
