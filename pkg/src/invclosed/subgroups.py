"""Additive subgroups of GF(p^f) as F_p-subspaces in reduced row echelon form.

A basis row is a packed field element whose coordinate vector is the row.
Columns are coordinates in power-basis order (column 0 is the constant term).
The pivot of a row is its first nonzero column; canonical bases have pivots
equal to 1, strictly increasing, and zeros above and below every pivot.
"""

from __future__ import annotations

import itertools
import json

from .errors import BudgetExceeded, FieldMismatchError, PreconditionError
from .field import FieldElement, FieldSpec
from .polynomials import (
    DensePolynomial,
    LinearizedPolynomial,
    is_self_reciprocal,
    linearized_to_dense,
)

DEFAULT_MAX_FIELD_SIZE = 1024
DEFAULT_MAX_SUBSPACES = 1 << 23


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def total_subspaces(spec: FieldSpec) -> int:
    return sum(gaussian_binomial(spec.f, k, spec.p) for k in range(spec.f + 1))


def _rref(spec: FieldSpec, vectors) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Row-reduce packed vectors; return (rows, pivots) in canonical form."""
    p, f = spec.p, spec.f
    rows = [spec.digits(v) for v in vectors]
    rows = [r for r in rows if any(r)]
    pivots = []
    top = 0
    for col in range(f):
        pivot_row = next((i for i in range(top, len(rows)) if rows[i][col]), None)
        if pivot_row is None:
            continue
        rows[top], rows[pivot_row] = rows[pivot_row], rows[top]
        s = pow(rows[top][col], p - 2, p)
        rows[top] = [c * s % p for c in rows[top]]
        for i in range(len(rows)):
            if i != top and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[top])]
        pivots.append(col)
        top += 1
        if top == len(rows):
            break
    return tuple(spec.pack(r) for r in rows[:top]), tuple(pivots)


class AdditiveSubgroup:
    """An F_p-subspace of a finite field, stored by its canonical echelon basis.

    Equal subgroups have identical ``basis`` tuples, so equality and hashing
    are plain tuple comparisons.
    """

    __slots__ = ("spec", "basis", "pivots", "_values")

    def __init__(self, spec: FieldSpec, basis=(), *, canonical: bool = False, pivots=None):
        if canonical:
            self.basis = tuple(basis)
            self.pivots = tuple(pivots) if pivots is not None else tuple(
                _first_nonzero(spec, v) for v in self.basis)
        else:
            raw = []
            for b in basis:
                if isinstance(b, FieldElement):
                    if b.spec != spec:
                        raise FieldMismatchError(f"generator from {b.spec} used in {spec}")
                    raw.append(b.value)
                elif isinstance(b, (list, tuple)):
                    raw.append(spec.pack(b))
                else:
                    raw.append(int(b))
            self.basis, self.pivots = _rref(spec, raw)
        self.spec = spec
        self._values = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return self.spec.p ** self.dim

    @property
    def matrix(self) -> list[list[int]]:
        return [self.spec.digits(b) for b in self.basis]

    def __eq__(self, other):
        if not isinstance(other, AdditiveSubgroup):
            return NotImplemented
        return self.spec == other.spec and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __len__(self):
        return self.order

    def __contains__(self, x) -> bool:
        return contains(self, x)

    def __repr__(self):
        return f"AdditiveSubgroup(dim={self.dim}, basis={self.matrix}, field=GF({self.spec.order}))"

    def sort_key(self):
        return (self.dim, self.basis)

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": self.matrix}

    @classmethod
    def from_json(cls, spec: FieldSpec, data) -> "AdditiveSubgroup":
        if isinstance(data, str):
            data = json.loads(data)
        A = cls(spec, [spec.pack(r) for r in data["basis"]])
        if A.dim != data.get("dim", A.dim):
            raise ValueError("basis rows are linearly dependent")
        return A

    def values(self, budget: int | None = DEFAULT_MAX_FIELD_SIZE) -> list[int]:
        """All packed elements, each once, in a deterministic order."""
        if budget is not None and self.order > budget:
            raise BudgetExceeded(f"subgroup of order {self.order} exceeds element budget {budget}")
        if self._values is None:
            self._values = _span_values(self.spec, self.basis)
        return self._values


def _first_nonzero(spec: FieldSpec, v: int) -> int:
    for i, c in enumerate(spec.digits(v)):
        if c:
            return i
    raise ValueError("zero row in echelon basis")


def _span_values(spec: FieldSpec, rows) -> list[int]:
    vals = [0]
    for row in rows:
        if spec.p == 2:
            vals = vals + [v ^ row for v in vals]
        else:
            multiples = [spec.mul(k, row) for k in range(spec.p)]
            vals = [spec.add(v, m) for m in multiples for v in vals]
    return vals


def span(spec: FieldSpec, generators=()) -> AdditiveSubgroup:
    """Canonical F_p-span of the generators."""
    return AdditiveSubgroup(spec, generators)


def full_field(spec: FieldSpec) -> AdditiveSubgroup:
    return AdditiveSubgroup(spec, [spec.p ** i for i in range(spec.f)])


def _member(spec: FieldSpec, v: int, rows, pivots) -> bool:
    """Reduce v against a canonical basis; True iff it reduces to zero."""
    if spec.p == 2:
        for row, c in zip(rows, pivots):
            if v >> c & 1:
                v ^= row
        return v == 0
    p = spec.p
    for row, c in zip(rows, pivots):
        k = v // p ** c % p
        if k:
            v = spec.sub(v, spec.mul(k, row))
    return v == 0


def contains(A: AdditiveSubgroup, x) -> bool:
    if isinstance(x, FieldElement):
        if x.spec != A.spec:
            raise FieldMismatchError(f"element of {x.spec} tested against a subgroup of {A.spec}")
        x = x.value
    return _member(A.spec, x, A.basis, A.pivots)


def elements(A: AdditiveSubgroup, budget: int | None = DEFAULT_MAX_FIELD_SIZE):
    """Stream every element of A exactly once."""
    for v in A.values(budget):
        yield FieldElement(A.spec, v)


def _inverse_closed_rows(spec: FieldSpec, rows, pivots, budget=DEFAULT_MAX_FIELD_SIZE) -> bool:
    """Direct test: inv(a) lies in the span for every nonzero a in it.

    Basis rows are tried first since they reject almost every subspace;
    the full element scan only runs for the survivors.
    """
    inv = spec._inv
    for row in rows:
        if not _member(spec, inv[row], rows, pivots):
            return False
    if budget is not None and spec.p ** len(rows) > budget:
        raise BudgetExceeded(f"subgroup of order {spec.p ** len(rows)} exceeds element budget {budget}")
    vals = _span_values(spec, rows)
    members = set(vals)
    return all(inv[v] in members for v in vals if v)


def is_inverse_closed_direct(A: AdditiveSubgroup, budget: int | None = DEFAULT_MAX_FIELD_SIZE) -> bool:
    """True iff every nonzero element of A has its inverse in A ({0} is vacuously closed)."""
    return _inverse_closed_rows(A.spec, A.basis, A.pivots, budget)


def subspace_polynomial(A: AdditiveSubgroup) -> LinearizedPolynomial:
    """The monic p-polynomial whose roots in the field are exactly A.

    Built over the basis by f_{V+<b>} = f_V^p - f_V(b)^(p-1) f_V, from f_{0} = x.
    """
    return LinearizedPolynomial(A.spec, _subspace_qcoeffs(A.spec, A.basis))


def _subspace_qcoeffs(spec: FieldSpec, rows) -> list[int]:
    p = spec.p
    q = [1]
    for b in rows:
        # f_V(b)
        val = 0
        bb = b
        for c in q:
            if c:
                val = spec.add(val, spec.mul(c, bb))
            bb = spec.pow(bb, p)
        scale = spec.pow(val, p - 1)
        nxt = [0] + [spec.pow(c, p) for c in q]
        for i, c in enumerate(q):
            if c:
                nxt[i] = spec.sub(nxt[i], spec.mul(scale, c))
        q = nxt
    return q


def is_inverse_closed_poly(A: AdditiveSubgroup) -> bool:
    """Inverse-closedness read off from f_A: true iff f_A(x)/x is self-reciprocal."""
    return _inverse_closed_poly_rows(A.spec, A.basis)


def _inverse_closed_poly_rows(spec: FieldSpec, rows) -> bool:
    dense = linearized_to_dense(LinearizedPolynomial(spec, _subspace_qcoeffs(spec, rows)))
    if dense.coeffs[0] != 0:
        raise AssertionError("subspace polynomial must vanish at 0")
    return is_self_reciprocal(DensePolynomial(spec, dense.coeffs[1:]))


def is_subfield(A: AdditiveSubgroup) -> bool:
    """1 in A and products of basis elements stay in A."""
    spec = A.spec
    if not _member(spec, 1, A.basis, A.pivots):
        return False
    for i, a in enumerate(A.basis):
        for b in A.basis[i:]:
            if not _member(spec, spec.mul(a, b), A.basis, A.pivots):
                return False
    return True


def kernel_of(spec: FieldSpec, maps) -> AdditiveSubgroup:
    """Common kernel of F_p-linear maps E -> E, each given as a callable on packed ints."""
    p, f = spec.p, spec.f
    maps = list(maps)
    # one augmented row per basis vector: [images..., identity]
    rows = []
    for j in range(f):
        e = p ** j
        img = []
        for fn in maps:
            img.extend(spec.digits(fn(e)))
        ident = [0] * f
        ident[j] = 1
        rows.append(img + ident)
    width = len(maps) * f
    top = 0
    for col in range(width):
        pr = next((i for i in range(top, f) if rows[i][col]), None)
        if pr is None:
            continue
        rows[top], rows[pr] = rows[pr], rows[top]
        s = pow(rows[top][col], p - 2, p)
        rows[top] = [c * s % p for c in rows[top]]
        for i in range(f):
            if i != top and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[top])]
        top += 1
    gens = [spec.pack(r[width:]) for r in rows[top:]]
    return AdditiveSubgroup(spec, gens)


def subfield(spec: FieldSpec, r: int) -> AdditiveSubgroup:
    """The subfield of order p^r as a subgroup: the kernel of x -> x^(p^r) - x."""
    if r < 1 or spec.f % r:
        raise PreconditionError(f"r={r} does not divide f={spec.f}")
    return kernel_of(spec, [lambda x: spec.sub(spec.frobenius(x, r), x)])


def trace_zero_kernel(spec: FieldSpec, r: int) -> AdditiveSubgroup:
    """{x in GF(p^2r) : x + x^(p^r) = 0}, an r-dimensional subgroup."""
    if r < 1 or spec.f % (2 * r):
        raise PreconditionError(f"2r={2 * r} does not divide f={spec.f}")
    return kernel_of(spec, [
        lambda x: spec.add(x, spec.frobenius(x, r)),
        lambda x: spec.sub(spec.frobenius(x, 2 * r), x),
    ])


def _closure_under_products(spec: FieldSpec, A: AdditiveSubgroup) -> AdditiveSubgroup:
    while True:
        gens = list(A.basis)
        for i, a in enumerate(A.basis):
            for b in A.basis[i:]:
                gens.append(spec.mul(a, b))
        B = AdditiveSubgroup(spec, gens)
        if B == A:
            return A
        A = B


def generated_subfield(spec: FieldSpec, S=()) -> AdditiveSubgroup:
    """Smallest subfield containing S.

    In a finite field a subring containing 1 is a subfield, so this is the
    additive-multiplicative closure of S together with 1.
    """
    if isinstance(S, AdditiveSubgroup):
        gens = list(S.basis)
    else:
        gens = [s.value if isinstance(s, FieldElement) else s for s in S]
    return _closure_under_products(spec, AdditiveSubgroup(spec, gens + [1]))


def product_set_span(A: AdditiveSubgroup) -> AdditiveSubgroup:
    """F_p-span of {ab : a, b in A}; by bilinearity basis products suffice."""
    spec = A.spec
    gens = [spec.mul(a, b) for i, a in enumerate(A.basis) for b in A.basis[i:]]
    return AdditiveSubgroup(spec, gens)


class SubgroupIterator:
    """Every ``dim``-dimensional subspace exactly once, as canonical echelon bases.

    Order: pivot sets in lexicographic order; within a pivot set the free
    entries run as an odometer, last row fastest.  ``partitions()`` exposes the
    pivot sets so disjoint ranges can be scanned independently.
    """

    def __init__(self, spec: FieldSpec, dim: int, max_subspaces: int | None = DEFAULT_MAX_SUBSPACES):
        if not 0 <= dim <= spec.f:
            raise PreconditionError(f"dimension {dim} outside 0..{spec.f}")
        self.spec = spec
        self.dim = dim
        self.count = gaussian_binomial(spec.f, dim, spec.p)
        if max_subspaces is not None and self.count > max_subspaces:
            raise BudgetExceeded(
                f"{self.count} subspaces of dimension {dim} in GF({spec.order}) exceed budget {max_subspaces}")

    def __len__(self):
        return self.count

    def partitions(self) -> list[tuple[int, ...]]:
        return list(itertools.combinations(range(self.spec.f), self.dim))

    def partition_size(self, pivots) -> int:
        free = sum(1 for i, c in enumerate(pivots)
                   for j in range(c + 1, self.spec.f) if j not in pivots)
        return self.spec.p ** free

    def row_options(self, pivots) -> list[list[int]]:
        spec = self.spec
        p, f = spec.p, spec.f
        pivot_set = set(pivots)
        options = []
        for c in pivots:
            free = [j for j in range(c + 1, f) if j not in pivot_set]
            base = p ** c
            opts = []
            for digits in itertools.product(range(p), repeat=len(free)):
                v = base
                for j, d in zip(free, digits):
                    v += d * p ** j
                opts.append(v)
            options.append(opts)
        return options

    def iter_rows(self, pivots):
        """Raw basis tuples (packed ints) for one pivot set."""
        return itertools.product(*self.row_options(pivots))

    def iter_partition(self, pivots):
        spec = self.spec
        for rows in self.iter_rows(pivots):
            yield AdditiveSubgroup(spec, rows, canonical=True, pivots=pivots)

    def __iter__(self):
        for pivots in self.partitions():
            yield from self.iter_partition(pivots)


def enumerate_subspaces(spec: FieldSpec, dim: int,
                        max_subspaces: int | None = DEFAULT_MAX_SUBSPACES) -> SubgroupIterator:
    return SubgroupIterator(spec, dim, max_subspaces)


def all_subspaces(spec: FieldSpec, max_subspaces: int | None = DEFAULT_MAX_SUBSPACES):
    """Every subspace of every dimension, low dimensions first."""
    total = total_subspaces(spec)
    if max_subspaces is not None and total > max_subspaces:
        raise BudgetExceeded(f"{total} subspaces in GF({spec.order}) exceed budget {max_subspaces}")
    for d in range(spec.f + 1):
        yield from SubgroupIterator(spec, d, None)


def random_subspace(spec: FieldSpec, dim: int, rng) -> AdditiveSubgroup:
    """Uniform over generator tuples, then spanned; dimension may come out lower."""
    return span(spec, [rng.randrange(spec.order) for _ in range(dim)])
