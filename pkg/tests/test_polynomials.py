import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invclosed.errors import PreconditionError
from invclosed.field import GF, QQ, quadratic_trace
from invclosed.polynomials import (
    DensePolynomial,
    LinearizedPolynomial,
    dense_to_linearized,
    evaluate,
    is_p_polynomial,
    is_self_reciprocal,
    linearized_compose,
    linearized_remainder_xq,
    linearized_to_dense,
    poly_divides,
    poly_divmod,
    reciprocal,
    self_reciprocal_scalar,
    x_power_minus_x,
)

ROOT_FIELDS = [(2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 6), (7, 2), (2, 8), (2, 9)]


def roots_in(poly, spec):
    return {v for v in range(spec.order) if evaluate(poly, v) == 0}


def Q(*coeffs):
    return DensePolynomial(QQ, [Fraction(c) for c in coeffs])


class TestReciprocal:
    def test_quadratic_over_q(self):
        f = Q(2, 3, 1)  # x^2 + 3x + 2
        g = reciprocal(f)
        assert g == Q(1, 3, 2)
        assert evaluate(f, -1) == 0 and evaluate(f, -2) == 0
        assert evaluate(g, -1) == 0 and evaluate(g, Fraction(-1, 2)) == 0

    def test_palindrome_fixed(self):
        assert reciprocal(Q(1, 1, 1)) == Q(1, 1, 1)

    def test_involution(self, rng):
        F = GF(5, 2)
        for _ in range(50):
            coeffs = [rng.randrange(1, 25)] + [rng.randrange(25) for _ in range(5)] + [rng.randrange(1, 25)]
            f = DensePolynomial(F, coeffs)
            assert reciprocal(reciprocal(f)) == f

    def test_zero_constant_rejected(self):
        with pytest.raises(PreconditionError):
            reciprocal(Q(0, 1, 1))

    @pytest.mark.parametrize("p,f", ROOT_FIELDS)
    def test_roots_invert(self, p, f, rng):
        F = GF(p, f)
        for _ in range(15):
            roots = rng.sample(range(1, F.order), rng.randint(1, min(12, F.order - 1)))
            poly = DensePolynomial.from_roots(F, roots)
            assert roots_in(poly, F) == set(roots)
            assert roots_in(reciprocal(poly), F) == {F.inv(r) for r in roots}


class TestSelfReciprocal:
    def test_x2_plus_1(self):
        assert is_self_reciprocal(Q(1, 0, 1))

    def test_zero_constant_is_error(self):
        with pytest.raises(PreconditionError):
            is_self_reciprocal(Q(0, 1, 1))

    def test_gf3_example(self):
        F = GF(3)
        f = DensePolynomial(F, [2, 0, 1])  # x^2 + 2
        # reciprocal 2x^2 + 1 equals 2 * (x^2 + 2) = 2x^2 + 4 = 2x^2 + 1
        assert reciprocal(f) == DensePolynomial(F, [1, 0, 2])
        assert self_reciprocal_scalar(f) == 2

    def test_scalar_is_plus_minus_one_for_monic(self):
        F = GF(7)
        f = DensePolynomial(F, [6, 0, 0, 1])  # x^3 - 1
        assert self_reciprocal_scalar(f) == 6
        assert not is_self_reciprocal(DensePolynomial(F, [2, 0, 1]))

    @pytest.mark.parametrize("p,f", ROOT_FIELDS)
    def test_matches_root_set_inversion(self, p, f, rng):
        F = GF(p, f)
        nonzero = list(range(1, F.order))
        for trial in range(40):
            S = set(rng.sample(nonzero, rng.randint(1, min(10, len(nonzero)))))
            if trial % 2:
                S |= {F.inv(s) for s in S}
            poly = DensePolynomial.from_roots(F, sorted(S))
            scaled = DensePolynomial(F, [F.mul(3 % p or 1, c) for c in poly.coeffs])
            closed = {F.inv(s) for s in S} == S
            assert is_self_reciprocal(poly) == closed
            assert is_self_reciprocal(scaled) == closed


class TestLinearized:
    def test_single_monomial(self):
        F = GF(3)
        assert linearized_to_dense(LinearizedPolynomial(F, [0, 1])) == DensePolynomial.monomial(F, 3)

    def test_two_monomials(self):
        F = GF(5)
        dense = linearized_to_dense(LinearizedPolynomial(F, [-1, 0, 1]))
        assert dense == x_power_minus_x(F, 2)
        assert dense.degree == 25 and dense.coeffs[1] == 4

    def test_round_trip(self, rng):
        F = GF(3, 2)
        for _ in range(20):
            L = LinearizedPolynomial(F, [rng.randrange(9) for _ in range(3)])
            assert is_p_polynomial(linearized_to_dense(L))
            assert dense_to_linearized(linearized_to_dense(L)) == L

    def test_is_p_polynomial(self):
        F = GF(3)
        assert is_p_polynomial(DensePolynomial(F, [0, 1, 0, 1, 0, 0, 0, 0, 0, 1]))
        assert not is_p_polynomial(DensePolynomial(F, [0, 0, 1, 0, 0, 0, 0, 0, 0, 1]))
        assert is_p_polynomial(DensePolynomial(F, []))

    def test_evaluate_fermat(self, small_field):
        F = small_field
        L = LinearizedPolynomial(F, [F.neg(1), 1])
        for k in range(F.p):
            assert evaluate(L, F.from_int(k)) == 0
        zero = DensePolynomial(F)
        assert all(evaluate(zero, a) == 0 for a in F.elements())

    def test_evaluate_trace_gf9(self):
        F = GF(3, 2)
        L = LinearizedPolynomial(F, [1, 1])
        for a in F.elements():
            assert evaluate(L, a) == quadratic_trace(a, 1)
            assert evaluate(linearized_to_dense(L), a) == evaluate(L, a)

    @pytest.mark.parametrize("p,f", [(2, 3), (3, 2), (2, 4), (5, 2), (3, 3)])
    def test_additive_exhaustive(self, p, f, rng):
        F = GF(p, f)
        for _ in range(5):
            L = LinearizedPolynomial(F, [rng.randrange(F.order) for _ in range(f + 1)])
            vals = [evaluate(L, a) for a in range(F.order)]
            for a in range(F.order):
                for b in range(F.order):
                    assert vals[F.add(a, b)] == F.add(vals[a], vals[b])

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(0, 255), min_size=1, max_size=9), st.integers(0, 255), st.integers(0, 255))
    def test_additive_random_gf256(self, qc, a, b):
        F = GF(2, 8)
        L = LinearizedPolynomial(F, qc)
        assert evaluate(L, F.add(a, b)) == F.add(evaluate(L, a), evaluate(L, b))
        assert evaluate(linearized_to_dense(L), a) == evaluate(L, a)


class TestCompose:
    def test_identity(self, rng):
        F = GF(2, 4)
        L = LinearizedPolynomial(F, [rng.randrange(16) for _ in range(4)])
        assert linearized_compose(LinearizedPolynomial.identity(F), L) == L
        assert linearized_compose(L, LinearizedPolynomial.identity(F)) == L

    def test_frobenius_powers(self):
        F = GF(5)
        xp = LinearizedPolynomial(F, [0, 1])
        assert linearized_compose(xp, xp) == LinearizedPolynomial(F, [0, 0, 1])

    def test_gf4_exhaustive(self):
        F = GF(2, 2)
        x2 = LinearizedPolynomial(F, [0, 1])
        for c in range(4):
            L = LinearizedPolynomial(F, [c, 1])  # x^2 + c x
            outer = linearized_compose(L, x2)  # (x^2)^2 + c x^2
            inner = linearized_compose(x2, L)  # (x^2 + c x)^2 = x^4 + c^2 x^2
            assert outer.qcoeffs[1:] == ([c, 1] if c else [0, 1])
            assert LinearizedPolynomial(F, inner.qcoeffs).qcoeffs[1] == F.mul(c, c)
            for a in range(4):
                assert evaluate(outer, a) == evaluate(L, evaluate(x2, a))
                assert evaluate(inner, a) == evaluate(x2, evaluate(L, a))

    @pytest.mark.parametrize("p,f", [(3, 2), (2, 5), (5, 2), (3, 3)])
    def test_agrees_with_evaluation(self, p, f, rng):
        F = GF(p, f)
        for _ in range(10):
            L1 = LinearizedPolynomial(F, [rng.randrange(F.order) for _ in range(3)])
            L2 = LinearizedPolynomial(F, [rng.randrange(F.order) for _ in range(3)])
            C = linearized_compose(L1, L2)
            for a in range(F.order):
                assert evaluate(C, a) == evaluate(L1, evaluate(L2, a))


class TestDivision:
    def test_x_divides(self, small_field):
        F = small_field
        assert poly_divides(DensePolynomial.monomial(F, 1), x_power_minus_x(F))

    def test_x_minus_one(self):
        for F in (GF(2), GF(3, 2), QQ):
            one = F.one
            d = DensePolynomial(F, [F.neg(one), one])
            n = DensePolynomial(F, [F.neg(one), F.zero, one])
            assert poly_divides(d, n)

    def test_gf3_counterexample(self):
        F = GF(3)
        d = DensePolynomial(F, [1, 0, 1])
        n = DensePolynomial(F, [0, 2, 0, 0, 1])  # x^4 - x
        q, r = poly_divmod(n, d)
        assert r == DensePolynomial(F, [1, 2])  # -x + 1
        assert q * d + r == n
        assert not poly_divides(d, n)

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            poly_divides(DensePolynomial(GF(3)), x_power_minus_x(GF(3)))

    def test_transitive(self, rng):
        F = GF(3, 2)

        def rand_monic(deg):
            return DensePolynomial(F, [rng.randrange(9) for _ in range(deg)] + [1])

        for _ in range(30):
            f = rand_monic(rng.randint(1, 3))
            g = f * rand_monic(rng.randint(0, 3))
            h = g * rand_monic(rng.randint(0, 3))
            assert poly_divides(f, g) and poly_divides(g, h) and poly_divides(f, h)

    @pytest.mark.parametrize("p,f", [(2, 4), (3, 2), (3, 3), (5, 2), (2, 6)])
    def test_linearized_remainder_matches_dense(self, p, f, rng):
        F = GF(p, f)
        target = x_power_minus_x(F)
        for _ in range(25):
            d = rng.randint(0, f)
            L = LinearizedPolynomial(F, [rng.randrange(F.order) for _ in range(d)] + [1])
            dense_rem = poly_divmod(target, linearized_to_dense(L))[1]
            lin_rem = linearized_to_dense(linearized_remainder_xq(L))
            assert dense_rem == lin_rem


class TestSerialization:
    def test_dense_json(self):
        F = GF(3, 2)
        f = DensePolynomial(F, [F.pack([1, 2]), 0, 1])
        data = json.loads(json.dumps(f.to_json()))
        assert data == {"coeffs": [[1, 2], [0, 0], [1, 0]]}
        assert DensePolynomial.from_json(F, data) == f

    def test_linearized_json(self):
        F = GF(2, 2)
        L = LinearizedPolynomial(F, [3, 0, 1])
        assert L.to_json() == {"qcoeffs": [[1, 1], [0, 0], [1, 0]]}
        assert LinearizedPolynomial.from_json(F, L.to_json()) == L

    def test_str(self):
        F = GF(3, 2)
        assert str(LinearizedPolynomial(F, [1, 1])) == "x^3 + x"
        assert str(Q(2, 3, 1)) == "x^2 + 3x + 2"
