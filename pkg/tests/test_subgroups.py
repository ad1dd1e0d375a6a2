import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invclosed.errors import BudgetExceeded, FieldMismatchError, PreconditionError
from invclosed.field import GF, subfield_values
from invclosed.polynomials import DensePolynomial, linearized_to_dense
from invclosed.subgroups import (
    AdditiveSubgroup,
    SubgroupIterator,
    all_subspaces,
    contains,
    elements,
    enumerate_subspaces,
    full_field,
    gaussian_binomial,
    generated_subfield,
    is_inverse_closed_direct,
    is_inverse_closed_poly,
    is_subfield,
    product_set_span,
    random_subspace,
    span,
    subfield,
    subspace_polynomial,
    total_subspaces,
    trace_zero_kernel,
)


def closure(spec, gens):
    """Oracle: additive closure by repeated sums (no linear algebra)."""
    S = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = spec.add(s, g)
                if t not in S:
                    S.add(t)
                    nxt.append(t)
        frontier = nxt
    return frozenset(S)


def inverse_closed_oracle(spec, S):
    return all(spec.inv(a) in S for a in S if a)


def all_subgroup_sets(spec):
    """Oracle: every subgroup as an element set, from spans of all generator tuples."""
    seen = set()
    for k in range(spec.f + 1):
        for gens in itertools.product(range(spec.order), repeat=k):
            seen.add(closure(spec, gens))
    return seen


class TestSpan:
    def test_empty(self):
        A = span(GF(3, 2), [])
        assert A.dim == 0 and list(elements(A)) == [0]

    def test_one_in_gf9(self):
        F = GF(3, 2)
        A = span(F, [F(1)])
        assert set(A.values()) == {0, 1, 2}

    def test_dependent_generators(self):
        F = GF(2, 4)
        a, b = 3, 5
        A = span(F, [a, b, F.add(a, b)])
        assert A.dim == 2

    def test_full(self):
        F = GF(2, 4)
        assert span(F, [1, 2, 4, 8]) == full_field(F)

    def test_canonical_independent_of_generators(self, rng):
        F = GF(3, 3)
        for _ in range(30):
            gens = [rng.randrange(27) for _ in range(3)]
            A = span(F, gens)
            members = sorted(A.values())
            B = span(F, rng.sample(members, min(len(members), 4)))
            assert A == B or B.dim < A.dim
            assert set(A.values()) == closure(F, gens)

    def test_mismatched_generator(self):
        with pytest.raises(FieldMismatchError):
            span(GF(3, 2), [GF(2, 2)(1)])


class TestMembership:
    def test_zero_always(self, small_field):
        assert contains(span(small_field, []), 0)

    def test_kernel_gf9_excludes_one(self):
        F = GF(3, 2)
        K = trace_zero_kernel(F, 1)
        assert not contains(K, F(1))
        assert F(1) not in K

    @pytest.mark.parametrize("p,f", [(2, 4), (3, 3), (5, 2)])
    def test_matches_closure(self, p, f, rng):
        F = GF(p, f)
        for _ in range(20):
            gens = [rng.randrange(F.order) for _ in range(rng.randint(0, f))]
            A = span(F, gens)
            S = closure(F, gens)
            assert all(contains(A, v) == (v in S) for v in range(F.order))

    def test_elements_count(self, small_field, rng):
        F = small_field
        for d in range(F.f + 1):
            A = random_subspace(F, d, rng)
            vals = list(elements(A))
            assert len(vals) == len(set(vals)) == F.p ** A.dim

    def test_mismatch(self):
        with pytest.raises(FieldMismatchError):
            contains(span(GF(3, 2), [1]), GF(2, 2)(1))

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            list(elements(full_field(GF(2, 9)), budget=256))


class TestInverseClosed:
    def test_trivial(self, small_field):
        assert is_inverse_closed_direct(span(small_field, []))

    def test_prime_field(self, small_field):
        assert is_inverse_closed_direct(span(small_field, [1]))

    def test_gf9_one_dimensional(self):
        F = GF(3, 2)
        lines = list(enumerate_subspaces(F, 1))
        assert len(lines) == 4
        closed = [A for A in lines if is_inverse_closed_direct(A)]
        assert len(closed) == 2
        assert subfield(F, 1) in closed and trace_zero_kernel(F, 1) in closed

    def test_gf9_not_closed(self):
        F = GF(3, 2)
        A = span(F, [F([1, 1])])
        assert not is_inverse_closed_direct(A)
        assert not inverse_closed_oracle(F, set(A.values()))

    @pytest.mark.parametrize("p,f", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)])
    def test_exhaustive_against_oracle(self, p, f):
        F = GF(p, f)
        oracle = {S for S in all_subgroup_sets(F) if inverse_closed_oracle(F, S)}
        found = set()
        for A in all_subspaces(F):
            direct = is_inverse_closed_direct(A)
            assert direct == is_inverse_closed_poly(A)
            if direct:
                found.add(frozenset(A.values()))
        assert found == oracle


class TestSubspacePolynomial:
    def test_trivial_is_x(self, small_field):
        L = subspace_polynomial(span(small_field, []))
        assert linearized_to_dense(L) == DensePolynomial.monomial(small_field, 1)

    def test_prime_field(self, small_field):
        F = small_field
        L = subspace_polynomial(span(F, [1]))
        assert L.qcoeffs == [F.neg(1), 1]

    def test_gf9_kernel(self):
        F = GF(3, 2)
        L = subspace_polynomial(trace_zero_kernel(F, 1))
        assert L.qcoeffs == [1, 1]  # x^3 + x

    @pytest.mark.parametrize("p,f", [(2, 4), (3, 2), (3, 3), (5, 2), (2, 6)])
    def test_matches_product_of_roots(self, p, f, rng):
        F = GF(p, f)
        for _ in range(20):
            A = random_subspace(F, rng.randint(0, min(f, 3)), rng)
            dense = linearized_to_dense(subspace_polynomial(A))
            assert dense == DensePolynomial.from_roots(F, sorted(closure(F, A.basis)))
            assert dense.is_monic() and dense.degree == A.order

    def test_poly_test_on_examples(self):
        F = GF(3, 2)
        assert is_inverse_closed_poly(span(F, [1]))
        assert is_inverse_closed_poly(trace_zero_kernel(F, 1))
        assert not is_inverse_closed_poly(span(F, [F([1, 1])]))


class TestSubfields:
    def test_prime_field(self, small_field):
        assert is_subfield(span(small_field, [1]))

    def test_kernel_is_not_subfield(self):
        assert not is_subfield(trace_zero_kernel(GF(3, 2), 1))

    def test_full_field(self, small_field):
        assert is_subfield(full_field(small_field))

    @pytest.mark.parametrize("p,f", [(2, 4), (2, 6), (3, 4), (5, 2)])
    def test_subfield_values_agree(self, p, f):
        F = GF(p, f)
        for r in range(1, f + 1):
            if f % r == 0:
                assert sorted(subfield(F, r).values()) == subfield_values(F, r)

    def test_bad_r(self):
        with pytest.raises(PreconditionError):
            subfield(GF(2, 4), 3)

    @pytest.mark.parametrize("p,f", [(2, 3), (3, 2), (2, 4), (5, 2)])
    def test_is_subfield_exhaustive(self, p, f):
        F = GF(p, f)
        for A in all_subspaces(F):
            S = set(A.values())
            oracle = 1 in S and all(F.mul(a, b) in S for a in S for b in S)
            assert is_subfield(A) == oracle


class TestTraceZeroKernel:
    def test_char_two_equals_subfield(self):
        F = GF(2, 4)
        assert trace_zero_kernel(F, 1) == subfield(F, 1)
        assert trace_zero_kernel(F, 2) == subfield(F, 2)

    def test_gf9(self):
        F = GF(3, 2)
        K = trace_zero_kernel(F, 1)
        scan = {x for x in range(9) if F.add(x, F.frobenius(x, 1)) == 0}
        assert set(K.values()) == scan and len(scan) == 3

    def test_gf81_r2(self):
        F = GF(3, 4)
        K = trace_zero_kernel(F, 2)
        assert K.order == 9
        assert all(F.frobenius(x, 2) == F.neg(x) for x in K.values())
        assert is_inverse_closed_direct(K)

    def test_requires_even_divisor(self):
        with pytest.raises(PreconditionError):
            trace_zero_kernel(GF(3, 3), 1)

    @pytest.mark.parametrize("p,f", [(3, 2), (5, 2), (7, 2), (3, 4)])
    def test_kernel_inverse_closed(self, p, f):
        F = GF(p, f)
        for r in range(1, f // 2 + 1):
            if f % (2 * r) == 0:
                K = trace_zero_kernel(F, r)
                assert K.dim == r
                assert inverse_closed_oracle(F, set(K.values()))


class TestClosures:
    def test_generated_subfield_gf16(self):
        F = GF(2, 4)
        w = next(v for v in range(2, 16) if F.pow(v, 3) == 1)
        G = generated_subfield(F, [w])
        assert G.order == 4 and G == subfield(F, 2)

    def test_generated_from_nothing(self, small_field):
        assert generated_subfield(small_field) == span(small_field, [1])

    def test_generated_from_generator(self, small_field):
        F = small_field
        assert generated_subfield(F, [F.generator]) == full_field(F)

    def test_product_set_span(self):
        F = GF(3, 2)
        K = trace_zero_kernel(F, 1)
        # products of two trace-zero elements lie in GF(3)
        assert product_set_span(K) == span(F, [1])
        assert product_set_span(span(F, [1])) == span(F, [1])

    @pytest.mark.parametrize("p,f", [(2, 4), (3, 2), (3, 3)])
    def test_product_set_span_oracle(self, p, f, rng):
        F = GF(p, f)
        for _ in range(15):
            A = random_subspace(F, rng.randint(0, f), rng)
            vals = A.values()
            prods = {F.mul(a, b) for a in vals for b in vals}
            assert set(product_set_span(A).values()) == closure(F, prods)


class TestEnumeration:
    def test_gaussian_binomial(self):
        assert gaussian_binomial(4, 2, 2) == 35
        assert gaussian_binomial(2, 1, 3) == 4
        assert gaussian_binomial(5, 0, 7) == 1
        assert gaussian_binomial(3, 4, 2) == 0

    def test_gf16_dim2(self):
        subs = list(enumerate_subspaces(GF(2, 4), 2))
        assert len(subs) == 35 and len(set(subs)) == 35

    @pytest.mark.parametrize("p,f", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2)])
    def test_matches_generator_oracle(self, p, f):
        F = GF(p, f)
        listed = [frozenset(A.values()) for A in all_subspaces(F)]
        assert len(listed) == len(set(listed)) == total_subspaces(F)
        assert set(listed) == all_subgroup_sets(F)

    @pytest.mark.parametrize("p,f", [(2, 6), (3, 4), (7, 2), (2, 8)])
    def test_counts(self, p, f):
        F = GF(p, f)
        for d in range(f + 1):
            it = enumerate_subspaces(F, d)
            n = sum(it.partition_size(pv) for pv in it.partitions())
            assert n == len(it) == gaussian_binomial(f, d, p)

    def test_canonical_and_deterministic(self):
        F = GF(3, 3)
        a = [A.basis for A in enumerate_subspaces(F, 2)]
        assert a == [A.basis for A in enumerate_subspaces(F, 2)]
        for basis in a:
            assert span(F, basis).basis == basis

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_subspaces(GF(2, 8), 4, max_subspaces=1000)
        with pytest.raises(BudgetExceeded):
            next(all_subspaces(GF(2, 8), max_subspaces=1000))

    def test_bad_dim(self):
        with pytest.raises(PreconditionError):
            enumerate_subspaces(GF(2, 3), 4)


class TestDualOracleRandom:
    @pytest.mark.parametrize("p,f", [(2, 9), (3, 6), (2, 10)])
    def test_random_subgroups(self, p, f, rng):
        F = GF(p, f)
        closed = 0
        for _ in range(10_000):
            A = random_subspace(F, rng.randint(0, f), rng)
            direct = is_inverse_closed_direct(A)
            assert direct == is_inverse_closed_poly(A)
            closed += direct
        # whichever subgroups we hit, the known closed ones must agree too
        for r in range(1, f + 1):
            if f % r == 0:
                assert is_inverse_closed_direct(subfield(F, r)) and is_inverse_closed_poly(subfield(F, r))
            if p % 2 and f % (2 * r) == 0:
                K = trace_zero_kernel(F, r)
                assert is_inverse_closed_direct(K) and is_inverse_closed_poly(K)


class TestSerialization:
    def test_round_trip(self, rng):
        F = GF(3, 3)
        for _ in range(20):
            A = random_subspace(F, 2, rng)
            data = json.loads(json.dumps(A.to_json()))
            assert AdditiveSubgroup.from_json(F, data) == A

    def test_format(self):
        F = GF(3, 2)
        assert trace_zero_kernel(F, 1).to_json() == {"dim": 1, "basis": [[0, 1]]}

    def test_dependent_rows_rejected(self):
        with pytest.raises(ValueError):
            AdditiveSubgroup.from_json(GF(2, 2), {"dim": 2, "basis": [[1, 0], [1, 0]]})


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(2, 4), (3, 3), (5, 2), (2, 6)]), st.lists(st.integers(0, 10 ** 6), max_size=4))
def test_span_is_closed_subgroup(pf, raw):
    F = GF(*pf)
    gens = [g % F.order for g in raw]
    A = span(F, gens)
    vals = set(A.values())
    assert all(g in vals for g in gens)
    assert all(F.sub(a, b) in vals for a in vals for b in list(vals)[:20])
    assert len(vals) == F.p ** A.dim
