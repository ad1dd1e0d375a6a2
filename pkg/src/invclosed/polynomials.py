"""Dense and linearized (p-)polynomials over a field.

A :class:`DensePolynomial` stores raw coefficient values of its ring (packed
ints for a :class:`~invclosed.field.FieldSpec`, ``Fraction`` for ``QQ``),
index = exponent.  A :class:`LinearizedPolynomial` stores q-coefficients:
index i holds the coefficient of x^(p^i).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatchError, PreconditionError
from .field import QQ, FieldElement, FieldSpec, RationalField

# x^(p^f) - x is the largest polynomial the package ever needs densely
MAX_DENSE_DEGREE = 1 << 20


def _raw(ring, x):
    if isinstance(x, FieldElement):
        if x.spec != ring:
            raise FieldMismatchError(f"element of {x.spec} used with {ring}")
        return x.value
    if isinstance(ring, RationalField):
        return Fraction(x)
    return x


class DensePolynomial:
    """Univariate polynomial over a field, trimmed so the leading coefficient is nonzero."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs=()):
        coeffs = [_raw(ring, c) for c in coeffs]
        zero = ring.zero
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        if len(coeffs) > MAX_DENSE_DEGREE + 1:
            raise ValueError("polynomial degree exceeds the dense cap")
        self.ring = ring
        self.coeffs = coeffs

    @classmethod
    def monomial(cls, ring, n: int, c=None) -> "DensePolynomial":
        c = ring.one if c is None else _raw(ring, c)
        return cls(ring, [ring.zero] * n + [c])

    @classmethod
    def from_roots(cls, ring, roots) -> "DensePolynomial":
        """The product of (x - r) over ``roots``, multiplied out factor by factor."""
        coeffs = [ring.one]
        for r in roots:
            r = _raw(ring, r)
            nr = ring.neg(r)
            nxt = [ring.zero] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] = ring.add(nxt[i + 1], c)
                nxt[i] = ring.add(nxt[i], ring.mul(nr, c))
            coeffs = nxt
        return cls(ring, coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.ring.zero

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.ring.one

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def _check(self, other: "DensePolynomial"):
        if self.ring != other.ring:
            raise FieldMismatchError("polynomials over different rings")

    def __eq__(self, other):
        if not isinstance(other, DensePolynomial):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __add__(self, other):
        self._check(other)
        ring = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return DensePolynomial(ring, [ring.add(self[i], other[i]) for i in range(n)])

    def __sub__(self, other):
        self._check(other)
        ring = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return DensePolynomial(ring, [ring.sub(self[i], other[i]) for i in range(n)])

    def __mul__(self, other):
        self._check(other)
        ring = self.ring
        if not self.coeffs or not other.coeffs:
            return DensePolynomial(ring)
        out = [ring.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == ring.zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b != ring.zero:
                    out[i + j] = ring.add(out[i + j], ring.mul(a, b))
        return DensePolynomial(ring, out)

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        return f"DensePolynomial({self})"

    def __str__(self):
        ring = self.ring
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == ring.zero:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            cs = ring.format(c)
            if not mono:
                terms.append(cs)
            elif c == ring.one:
                terms.append(mono)
            else:
                terms.append(f"{cs}{mono}")
        return " + ".join(terms) or "0"

    def to_json(self) -> dict:
        ring = self.ring
        if isinstance(ring, RationalField):
            return {"coeffs": [str(c) for c in self.coeffs]}
        return {"coeffs": [ring.digits(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, ring, data) -> "DensePolynomial":
        if isinstance(ring, RationalField):
            return cls(ring, [Fraction(c) for c in data["coeffs"]])
        return cls(ring, [ring.pack(c) for c in data["coeffs"]])


def x_power_minus_x(spec: FieldSpec, k: int | None = None) -> DensePolynomial:
    """x^(p^k) - x; k defaults to the extension degree f."""
    k = spec.f if k is None else k
    n = spec.p ** k
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    coeffs[1] = spec.sub(coeffs[1], 1) if n != 1 else 0
    return DensePolynomial(spec, coeffs)


def poly_divmod(n: DensePolynomial, d: DensePolynomial):
    """Schoolbook long division: returns (quotient, remainder)."""
    n._check(d)
    ring = n.ring
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(n.coeffs)
    dd = d.degree
    inv_lead = ring.inv(d.leading)
    if len(rem) - 1 < dd:
        return DensePolynomial(ring), DensePolynomial(ring, rem)
    quot = [ring.zero] * (len(rem) - dd)
    support = [(j, c) for j, c in enumerate(d.coeffs[:-1]) if c != ring.zero]
    for k in range(len(rem) - 1, dd - 1, -1):
        c = rem[k]
        if c == ring.zero:
            continue
        c = ring.mul(c, inv_lead)
        shift = k - dd
        quot[shift] = c
        rem[k] = ring.zero
        for j, dc in support:
            rem[shift + j] = ring.sub(rem[shift + j], ring.mul(c, dc))
    return DensePolynomial(ring, quot), DensePolynomial(ring, rem[:dd])


def poly_divides(d: DensePolynomial, n: DensePolynomial) -> bool:
    """True iff the long-division remainder of n by d vanishes."""
    return poly_divmod(n, d)[1].is_zero()


def _require_unit_ends(poly: DensePolynomial):
    ring = poly.ring
    if poly.is_zero() or poly.coeffs[0] == ring.zero:
        raise PreconditionError("reciprocal needs a nonzero constant term")


def reciprocal(poly: DensePolynomial) -> DensePolynomial:
    """x^n f(1/x): the coefficient vector reversed."""
    _require_unit_ends(poly)
    return DensePolynomial(poly.ring, poly.coeffs[::-1])


def self_reciprocal_scalar(poly: DensePolynomial):
    """The scalar lambda with a_i = lambda * a_(n-i) for all i, or None.

    lambda is forced to be a_n / a_0, so it is computed once and then every
    coefficient pair is verified against it.
    """
    _require_unit_ends(poly)
    ring = poly.ring
    a = poly.coeffs
    n = len(a) - 1
    lam = ring.div(a[n], a[0])
    for i in range(n + 1):
        if a[i] != ring.mul(lam, a[n - i]):
            return None
    return lam


def is_self_reciprocal(poly: DensePolynomial) -> bool:
    return self_reciprocal_scalar(poly) is not None


def is_p_polynomial(poly: DensePolynomial) -> bool:
    """True iff every nonzero coefficient sits at an exponent p^i."""
    p = poly.ring.p
    if p == 0:
        raise PreconditionError("p-polynomials need positive characteristic")
    zero = poly.ring.zero
    powers = set()
    e = 1
    while e <= poly.degree:
        powers.add(e)
        e *= p
    return all(c == zero or i in powers for i, c in enumerate(poly.coeffs))


class LinearizedPolynomial:
    """Sum of c_i x^(p^i) over GF(p^f); ``qcoeffs[i]`` is c_i as a packed int."""

    __slots__ = ("spec", "qcoeffs")

    def __init__(self, spec: FieldSpec, qcoeffs=()):
        qcoeffs = [_raw(spec, c) if isinstance(c, FieldElement) else spec.scalar(c) if c < 0 else c
                   for c in qcoeffs]
        while qcoeffs and qcoeffs[-1] == 0:
            qcoeffs.pop()
        self.spec = spec
        self.qcoeffs = qcoeffs

    @classmethod
    def identity(cls, spec: FieldSpec) -> "LinearizedPolynomial":
        return cls(spec, [1])

    @property
    def qdegree(self) -> int:
        """Largest i with c_i != 0 (-1 for the zero polynomial)."""
        return len(self.qcoeffs) - 1

    @property
    def degree(self) -> int:
        return self.spec.p ** self.qdegree if self.qcoeffs else -1

    def is_monic(self) -> bool:
        return bool(self.qcoeffs) and self.qcoeffs[-1] == 1

    def is_zero(self) -> bool:
        return not self.qcoeffs

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.qcoeffs) if c]

    def __eq__(self, other):
        if not isinstance(other, LinearizedPolynomial):
            return NotImplemented
        return self.spec == other.spec and self.qcoeffs == other.qcoeffs

    def __hash__(self):
        return hash(tuple(self.qcoeffs))

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        spec = self.spec
        terms = []
        for i in range(len(self.qcoeffs) - 1, -1, -1):
            c = self.qcoeffs[i]
            if not c:
                continue
            e = spec.p ** i
            mono = "x" if e == 1 else f"x^{e}"
            terms.append(mono if c == 1 else f"{spec.format(c)}{mono}")
        return " + ".join(terms) or "0"

    def __repr__(self):
        return f"LinearizedPolynomial({self})"

    def to_json(self) -> dict:
        return {"qcoeffs": [self.spec.digits(c) for c in self.qcoeffs]}

    @classmethod
    def from_json(cls, spec: FieldSpec, data) -> "LinearizedPolynomial":
        return cls(spec, [spec.pack(c) for c in data["qcoeffs"]])


def linearized_to_dense(L: LinearizedPolynomial) -> DensePolynomial:
    spec = L.spec
    if L.is_zero():
        return DensePolynomial(spec)
    coeffs = [0] * (L.degree + 1)
    for i, c in enumerate(L.qcoeffs):
        coeffs[spec.p ** i] = c
    return DensePolynomial(spec, coeffs)


def dense_to_linearized(poly: DensePolynomial) -> LinearizedPolynomial:
    if not is_p_polynomial(poly):
        raise PreconditionError("not a p-polynomial")
    spec = poly.ring
    q = []
    e = 1
    while e <= poly.degree:
        q.append(poly.coeffs[e])
        e *= spec.p
    return LinearizedPolynomial(spec, q)


def evaluate(poly, x):
    """Evaluate a dense (Horner) or linearized (Frobenius sum) polynomial.

    Returns a FieldElement when given one, otherwise a raw ring value.
    """
    if isinstance(poly, LinearizedPolynomial):
        ring = poly.spec
    else:
        ring = poly.ring
    wrap = isinstance(x, FieldElement)
    v = _raw(ring, x)
    if isinstance(poly, LinearizedPolynomial):
        acc = 0
        for c in poly.qcoeffs:
            if c:
                acc = ring.add(acc, ring.mul(c, v))
            v = ring.pow(v, ring.p)
    else:
        acc = ring.zero
        for c in reversed(poly.coeffs):
            acc = ring.add(ring.mul(acc, v), c)
    return FieldElement(ring, acc) if wrap else acc


def linearized_compose(L1: LinearizedPolynomial, L2: LinearizedPolynomial) -> LinearizedPolynomial:
    """L1(L2(x)) via (c x^(p^i)) o (d x^(p^j)) = c d^(p^i) x^(p^(i+j))."""
    if L1.spec != L2.spec:
        raise FieldMismatchError("linearized polynomials over different fields")
    spec = L1.spec
    if L1.is_zero() or L2.is_zero():
        return LinearizedPolynomial(spec)
    out = [0] * (len(L1.qcoeffs) + len(L2.qcoeffs) - 1)
    for i, c in enumerate(L1.qcoeffs):
        if not c:
            continue
        for j, d in enumerate(L2.qcoeffs):
            if d:
                out[i + j] = spec.add(out[i + j], spec.mul(c, spec.frobenius(d, i)))
    return LinearizedPolynomial(spec, out)


def linearized_remainder_xq(L: LinearizedPolynomial, k: int | None = None) -> LinearizedPolynomial:
    """Remainder of x^(p^k) - x modulo a monic p-polynomial L, as a p-polynomial.

    If L = x^(p^d) + sum c_i x^(p^i), then x^(p^(j+1)) mod L is the p-th power
    of x^(p^j) mod L reduced once more, because (x^(p^d) + ...)^p is a multiple
    of L.  This is exact ordinary-polynomial division, done in O(k d) field
    operations instead of O(p^k) for the dense route.
    """
    spec = L.spec
    if not L.is_monic():
        raise PreconditionError("divisor must be monic")
    k = spec.f if k is None else k
    d = L.qdegree
    low = L.qcoeffs[:d]
    rem = [0] * d
    if d == 0:
        # L = x divides everything with zero constant term
        return LinearizedPolynomial(spec)
    rem[0] = 1  # x^(p^0) = x
    for _ in range(k):
        nxt = [0] + [spec.pow(c, spec.p) for c in rem]
        top = nxt.pop()
        if top:
            for i, c in enumerate(low):
                nxt[i] = spec.sub(nxt[i], spec.mul(top, c))
        rem = nxt
    rem[0] = spec.sub(rem[0], 1)
    return LinearizedPolynomial(spec, rem)


__all__ = [
    "QQ",
    "DensePolynomial",
    "LinearizedPolynomial",
    "dense_to_linearized",
    "evaluate",
    "is_p_polynomial",
    "is_self_reciprocal",
    "linearized_compose",
    "linearized_remainder_xq",
    "linearized_to_dense",
    "poly_divides",
    "poly_divmod",
    "reciprocal",
    "self_reciprocal_scalar",
    "x_power_minus_x",
]
