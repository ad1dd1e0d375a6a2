"""Classification of inverse-closed additive subgroups and the identity suites behind it."""

from __future__ import annotations

import enum
import functools
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, DegenerateInput, PreconditionError, TheoremViolation
from .field import FieldElement, FieldSpec, subfield_values
from .subgroups import (
    DEFAULT_MAX_FIELD_SIZE,
    DEFAULT_MAX_SUBSPACES,
    AdditiveSubgroup,
    SubgroupIterator,
    _inverse_closed_poly_rows,
    _inverse_closed_rows,
    generated_subfield,
    is_inverse_closed_direct,
    is_subfield,
    product_set_span,
    subspace_polynomial,
    total_subspaces,
    trace_zero_kernel,
)

DEFAULT_DUAL_ORACLE_LIMIT = 256


class Kind(str, enum.Enum):
    TRIVIAL = "Trivial"
    SUBFIELD = "Subfield"
    TRACE_ZERO_KERNEL = "TraceZeroKernel"
    NOT_INVERSE_CLOSED = "NotInverseClosed"


@dataclass(frozen=True)
class ClassificationResult:
    kind: Kind
    r: int | None = None

    def __str__(self):
        return self.kind.value if self.r is None else f"{self.kind.value}({self.r})"

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "r": self.r or 0}


def _violation(A: AdditiveSubgroup, message: str, **extra) -> TheoremViolation:
    detail = {"field": A.spec.to_json(), "subgroup": A.to_json(), "reason": message}
    detail.update(extra)
    return TheoremViolation(message, detail)


def classify(A: AdditiveSubgroup, budget: int | None = DEFAULT_MAX_FIELD_SIZE) -> ClassificationResult:
    """Place A in the subfield / trace-zero-kernel dichotomy.

    An inverse-closed A whose subspace polynomial is not x^(p^r) +- x raises
    :class:`TheoremViolation` rather than returning a verdict.
    """
    spec = A.spec
    if A.dim == 0:
        return ClassificationResult(Kind.TRIVIAL)
    if not is_inverse_closed_direct(A, budget):
        return ClassificationResult(Kind.NOT_INVERSE_CLOSED)

    L = subspace_polynomial(A)
    q = L.qcoeffs
    r = A.dim
    minus_one = spec.neg(1)
    if not (len(q) == r + 1 and q[r] == 1 and not any(q[1:r]) and q[0] in (1, minus_one)):
        raise _violation(A, "subspace polynomial of an inverse-closed subgroup is not a binomial",
                         polynomial=L.to_json())

    if q[0] == minus_one:
        # x^(p^r) - x, which covers both signs in characteristic 2
        if spec.f % r:
            raise _violation(A, f"x^(p^{r}) - x but {r} does not divide {spec.f}")
        if not is_subfield(A) or sorted(A.values(budget)) != subfield_values(spec, r):
            raise _violation(A, f"x^(p^{r}) - x but A is not the subfield of order p^{r}")
        return ClassificationResult(Kind.SUBFIELD, r)

    if spec.f % (2 * r):
        raise _violation(A, f"x^(p^{r}) + x but 2*{r} does not divide {spec.f}")
    if A != trace_zero_kernel(spec, r):
        raise _violation(A, f"x^(p^{r}) + x but A differs from the trace-zero kernel")
    return ClassificationResult(Kind.TRACE_ZERO_KERNEL, r)


def predicted_count(p: int, f: int) -> int:
    """Non-trivial inverse-closed subgroups of GF(p^f) implied by the classification.

    Subfields contribute one per divisor r of f; for odd p each r with 2r | f
    adds a trace-zero kernel, which never contains 1 and so is never a subfield.
    """
    subfields = sum(1 for r in range(1, f + 1) if f % r == 0)
    kernels = sum(1 for r in range(1, f // 2 + 1) if f % (2 * r) == 0) if p % 2 else 0
    return subfields + kernels


# -- Hua's identity -------------------------------------------------------------

def _as_value(x):
    if isinstance(x, (FieldElement, Fraction)):
        return x
    return Fraction(x)


def hua_check(a, b) -> bool:
    """Evaluate a - (a^-1 + (b^-1 - a)^-1)^-1 literally and compare with a*b*a.

    Works for FieldElements and rationals.  Pairs where an inverse is missing
    (a = 0, b = 0, ab = 1, or b^-1 = a) raise :class:`DegenerateInput`.
    """
    a, b = _as_value(a), _as_value(b)
    if a == 0 or b == 0:
        raise DegenerateInput("a and b must be nonzero")
    if a * b == 1:
        raise DegenerateInput("ab - 1 must be invertible")
    b_inv = 1 / b
    if b_inv == a:
        raise DegenerateInput("b^-1 - a must be invertible")
    lhs = a - 1 / (1 / a + 1 / (b_inv - a))
    return lhs == a * b * a


@dataclass
class HuaTally:
    scanned: int = 0
    passed: int = 0
    degenerate: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    def record(self, a, b):
        self.scanned += 1
        try:
            ok = hua_check(a, b)
        except DegenerateInput:
            self.degenerate += 1
            return
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 10:
                self.failures.append((a, b))

    def to_json(self) -> dict:
        return {
            "scanned": self.scanned,
            "passed": self.passed,
            "degenerate": self.degenerate,
            "failed": self.failed,
            "failures": [[_jsonable(a), _jsonable(b)] for a, b in self.failures],
        }


def _jsonable(x):
    if isinstance(x, FieldElement):
        return x.coeffs
    return str(x)


def hua_exhaustive(spec: FieldSpec) -> HuaTally:
    """hua_check on every ordered pair of field elements."""
    tally = HuaTally()
    elems = list(spec.elements())
    for a in elems:
        for b in elems:
            tally.record(a, b)
    return tally


def random_rational(rng: random.Random, bound: int = 50) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def hua_random_rationals(trials: int, seed: int = 0, bound: int = 50) -> HuaTally:
    rng = random.Random(seed)
    tally = HuaTally()
    for _ in range(trials):
        tally.record(random_rational(rng, bound), random_rational(rng, bound))
    return tally


def char0_scalar_identity_check(a, m: int, n: int) -> bool:
    """(m/n) a == m (n a^-1)^-1 in exact rationals."""
    a = Fraction(a)
    if a == 0 or n == 0:
        raise PreconditionError("a and n must be nonzero")
    return Fraction(m, n) * a == m * (1 / (n * (1 / a)))


# -- Lemma suite ----------------------------------------------------------------

@dataclass
class LemmaResult:
    holds: bool
    counterexample: tuple | None = None
    pairs_checked: int = 0
    triples_checked: int = 0

    def __bool__(self):
        return self.holds


def lemma_check(A: AdditiveSubgroup, budget: int | None = DEFAULT_MAX_FIELD_SIZE) -> LemmaResult:
    """a^2 b in A for all pairs; for odd p also abc in A for all triples.

    For odd p the identity 2abc = (a+c)^2 b - a^2 b - c^2 b is evaluated on
    every triple, and the membership of abc it implies (each right-hand term
    is a square-times-element, hence in A) is compared with direct membership.
    """
    spec = A.spec
    if not is_inverse_closed_direct(A, budget):
        raise PreconditionError("lemma_check needs an inverse-closed subgroup")
    q = spec.order
    T = spec.np_tables
    mul, sub = T["mul"], T["sub"]
    vals = np.array(A.values(budget), dtype=np.int32)
    n = len(vals)
    mask = np.zeros(q, dtype=bool)
    mask[vals] = True

    sq = mul[vals * q + vals]
    a2b = mul[sq[:, None] * q + vals[None, :]]
    bad = np.argwhere(~mask[a2b])
    if len(bad):
        i, j = bad[0]
        return LemmaResult(False, ("a^2 b", int(vals[i]), int(vals[j])), n * n)
    if spec.p == 2:
        return LemmaResult(True, None, n * n)

    two = spec.scalar(2)
    add = T["add"]
    bq = vals[:, None] * q
    c_sq_b = mul[bq + sq[None, :]]  # [b, c] -> c^2 b
    c_sq_b_in = mask[c_sq_b]
    for i in range(n):
        a = int(vals[i])
        ab = mul[a * q + vals]
        abc = mul[ab[:, None] * q + vals[None, :]]  # [b, c]
        direct_in = mask[abc]
        if not direct_in.all():
            j, k = np.argwhere(~direct_in)[0]
            return LemmaResult(False, ("abc", a, int(vals[j]), int(vals[k])), n * n, i * n * n)
        lhs = mul[two * q + abc]
        a_plus_c = add[a * q + vals]
        t1 = mul[bq + mul[a_plus_c * q + a_plus_c][None, :]]  # (a+c)^2 b
        t2 = mul[int(sq[i]) * q + vals][:, None]  # a^2 b
        rhs = sub[sub[t1 * q + t2] * q + c_sq_b]
        mismatch = lhs != rhs
        if mismatch.any():
            j, k = np.argwhere(mismatch)[0]
            return LemmaResult(False, ("polarization", a, int(vals[j]), int(vals[k])), n * n, i * n * n)
        derived_in = mask[t1] & mask[t2] & c_sq_b_in
        if (derived_in != direct_in).any():
            j, k = np.argwhere(derived_in != direct_in)[0]
            return LemmaResult(False, ("derived membership", a, int(vals[j]), int(vals[k])),
                               n * n, i * n * n)
    return LemmaResult(True, None, n * n, n ** 3)


# -- product-set and characteristic-2 structure --------------------------------

def product_set_subfield_check(A: AdditiveSubgroup, budget: int | None = DEFAULT_MAX_FIELD_SIZE) -> bool:
    """For odd p: {ab} is the subfield spanned by it, and A = K a with a^2 in K."""
    spec = A.spec
    if spec.p == 2:
        raise PreconditionError("product-set structure needs odd characteristic")
    if A.dim == 0:
        raise PreconditionError("A must be non-trivial")
    if not is_inverse_closed_direct(A, budget):
        raise PreconditionError("A must be inverse-closed")
    q = spec.order
    mul = spec.np_tables["mul"]
    vals = np.array(A.values(budget), dtype=np.int32)
    products = set(np.unique(mul[vals[:, None] * q + vals[None, :]]).tolist())
    K = product_set_span(A)
    if products != set(K.values(budget)) or not is_subfield(K):
        return False
    a = A.basis[0]
    Ka = {spec.mul(k, a) for k in K.values(budget)}
    return Ka == set(A.values(budget)) and spec.mul(a, a) in products


def char2_theorem_check(A: AdditiveSubgroup, budget: int | None = DEFAULT_MAX_FIELD_SIZE) -> bool:
    """For p = 2: A sits inside F = <A> and is closed under multiplication by F.

    Squaring is onto in a finite field, so an F^2-subspace is an F-subspace.
    """
    spec = A.spec
    if spec.p != 2:
        raise PreconditionError("char2_theorem_check needs characteristic 2")
    if not is_inverse_closed_direct(A, budget):
        raise PreconditionError("A must be inverse-closed")
    F = generated_subfield(spec, A)
    q = spec.order
    a_vals = np.array(A.values(budget), dtype=np.int32)
    f_vals = np.array(F.values(budget), dtype=np.int32)
    in_a = np.zeros(q, dtype=bool)
    in_a[a_vals] = True
    in_f = np.zeros(q, dtype=bool)
    in_f[f_vals] = True
    if not in_f[a_vals].all():
        return False
    prods = spec.np_tables["mul"][f_vals[:, None] * q + a_vals[None, :]]
    return bool(in_a[prods].all())


# -- the characteristic-2 counterexample ------------------------------------------

class SquareFreeMonomialAlgebra:
    """E = F_2(u_1..u_n) modulo the square field E^2, tracked by exponent parity.

    A monomial is an n-bit mask; multiplying monomials adds exponents, and the
    even part is absorbed into the E^2 coefficient, so the product is XOR.
    Distinct masks are independent over E^2, so an E^2-span is a set of masks.
    """

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = n

    def variable(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"variable index {i} outside 0..{self.n - 1}")
        return 1 << i

    @property
    def variables(self) -> list[int]:
        return [self.variable(i) for i in range(self.n)]

    @staticmethod
    def multiply(m1: int, m2: int) -> int:
        return m1 ^ m2

    def product_span(self, A, B) -> frozenset:
        return frozenset(self.multiply(a, b) for a in A for b in B)

    def format(self, m: int) -> str:
        return "".join(f"u{i + 1}" for i in range(self.n) if m >> i & 1) or "1"


def char2_counterexample_dimension(n: int = 4, generators=None) -> int:
    """E^2-dimension of {ab : a, b in A} for A = sum of E^2 u_i."""
    alg = SquareFreeMonomialAlgebra(n)
    gens = alg.variables if generators is None else list(generators)
    dim = len(alg.product_span(gens, gens))
    if n == 4 and generators is None:
        # [E : E^2] = 2^4, so an intermediate field has E^2-dimension a power of two
        assert dim & (dim - 1) != 0, "product set would be allowed to be a field"
    return dim


# -- exhaustive verification -------------------------------------------------------

@dataclass
class VerificationReport:
    spec: FieldSpec
    subspaces_scanned: int
    count_found: int
    count_predicted: int
    tallies: dict
    inverse_closed: list  # (AdditiveSubgroup, ClassificationResult), canonical order
    violations: list
    dual_oracle_checked: int
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        """Report body; wall time is left out so identical runs serialize identically."""
        return {
            "p": self.spec.p,
            "f": self.spec.f,
            "modulus": list(self.spec.modulus),
            "subspaces_scanned": self.subspaces_scanned,
            "inverse_closed": [dict(A.to_json(), **c.to_json()) for A, c in self.inverse_closed],
            "predicted": self.count_predicted,
            "predicted_source": "derived corollary of the classification",
            "found": self.count_found,
            "tallies": self.tallies,
            "dual_oracle_checked": self.dual_oracle_checked,
            "violations": self.violations,
        }


@functools.lru_cache(maxsize=None)
def _worker_spec(p: int, modulus: tuple) -> FieldSpec:
    return FieldSpec(p, modulus, _checked=True)


def _scan_task(args):
    p, modulus, dim, pivots, dual, budget = args
    spec = _worker_spec(p, modulus)
    it = SubgroupIterator(spec, dim, None)
    scanned = dual_checked = 0
    hits, mismatches = [], []
    for rows in it.iter_rows(pivots):
        scanned += 1
        direct = _inverse_closed_rows(spec, rows, pivots, budget)
        if dual:
            dual_checked += 1
            if _inverse_closed_poly_rows(spec, rows) != direct:
                mismatches.append((rows, direct))
        if direct:
            hits.append(rows)
    return dim, pivots, scanned, dual_checked, hits, mismatches


def verify_theorem_finite(spec: FieldSpec, workers: int = 1,
                          max_field_size: int | None = DEFAULT_MAX_FIELD_SIZE,
                          max_subspaces: int | None = DEFAULT_MAX_SUBSPACES,
                          dual_oracle_limit: int = DEFAULT_DUAL_ORACLE_LIMIT) -> VerificationReport:
    """Enumerate every subspace, keep the inverse-closed ones, classify them.

    Every subspace is tested directly; when the field has at most
    ``dual_oracle_limit`` elements the subspace-polynomial test runs too and
    any disagreement is a violation.  Work is split by pivot set and merged in
    canonical order, so the report does not depend on ``workers``.
    """
    start = time.perf_counter()
    if max_field_size is not None and spec.order > max_field_size:
        raise BudgetExceeded(f"GF({spec.order}) exceeds the field-size budget {max_field_size}")
    total = total_subspaces(spec)
    if max_subspaces is not None and total > max_subspaces:
        raise BudgetExceeded(f"GF({spec.order}) has {total} subspaces, over the budget {max_subspaces}")
    dual = spec.order <= dual_oracle_limit
    tasks = [(spec.p, spec.modulus, d, pivots, dual, max_field_size)
             for d in range(spec.f + 1)
             for pivots in SubgroupIterator(spec, d, None).partitions()]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_task, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        results = [_scan_task(t) for t in tasks]

    scanned = dual_checked = 0
    found_rows, violations = [], []
    for dim, pivots, n, nd, hits, mismatches in results:
        scanned += n
        dual_checked += nd
        found_rows.extend((rows, pivots) for rows in hits)
        for rows, direct in mismatches:
            A = AdditiveSubgroup(spec, rows, canonical=True, pivots=pivots)
            violations.append({"type": "dual-oracle-mismatch", **A.to_json(),
                               "direct": direct, "polynomial": not direct})
    if scanned != total:
        violations.append({"type": "enumeration-count", "scanned": scanned, "expected": total})

    found_rows.sort(key=lambda t: (len(t[0]), t[0]))
    inverse_closed = []
    tallies = {k.value: 0 for k in (Kind.TRIVIAL, Kind.SUBFIELD, Kind.TRACE_ZERO_KERNEL)}
    for rows, pivots in found_rows:
        A = AdditiveSubgroup(spec, rows, canonical=True, pivots=pivots)
        c = classify(A, max_field_size)
        if c.kind is Kind.NOT_INVERSE_CLOSED:
            violations.append({"type": "classification-disagrees-with-scan", **A.to_json()})
            continue
        tallies[c.kind.value] += 1
        inverse_closed.append((A, c))

    found = sum(1 for _, c in inverse_closed if c.kind is not Kind.TRIVIAL)
    predicted = predicted_count(spec.p, spec.f)
    if found != predicted:
        violations.append({"type": "census-mismatch", "found": found, "predicted": predicted})
    violations.sort(key=lambda v: repr(sorted(v.items())))
    return VerificationReport(
        spec=spec,
        subspaces_scanned=scanned,
        count_found=found,
        count_predicted=predicted,
        tallies=tallies,
        inverse_closed=inverse_closed,
        violations=violations,
        dual_oracle_checked=dual_checked,
        wall_time=time.perf_counter() - start,
    )


def default_fields(limit: int = 512) -> list[tuple[int, int]]:
    """Every prime power p^f <= limit as (p, f), ordered by field size."""
    out = []
    for q in range(2, limit + 1):
        p = next(d for d in range(2, q + 1) if q % d == 0)
        f = round(math.log(q, p))
        if p ** f == q:
            out.append((p, f))
    return out
