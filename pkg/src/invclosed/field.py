"""Exact arithmetic in GF(p^f) and over the rationals.

Elements of GF(p^f) are coordinate vectors (c_0, ..., c_{f-1}) with respect
to the power basis 1, x, ..., x^{f-1} of a root x of the modulus.  Internally
a vector is packed into the integer c_0 + c_1 p + ... + c_{f-1} p^{f-1}; for
p = 2 this is the usual bit-packed representation and addition is XOR.

All hot-path arithmetic lives on :class:`FieldSpec` and works on these packed
integers.  :class:`FieldElement` is the user-facing value type with operator
overloading on top of it.
"""

from __future__ import annotations

import functools
import itertools
import json
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, FieldMismatchError, PreconditionError

# log/exp tables are built eagerly; keep them bounded
MAX_TABLE_ORDER = 1 << 20

Rational = Fraction


def is_prime(n: int) -> bool:
    """Trial division primality test."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power q into (p, f); raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    factors = prime_factors(q)
    if len(factors) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = factors[0]
    f = 0
    while q > 1:
        q //= p
        f += 1
    return p, f


# -- polynomials over Z_p as coefficient lists, constant term first ---------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zp_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    for i, c in enumerate(b):
        a[i] = (a[i] - c) % p
    return _trim(a)


def _zp_mod(a, m, p):
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _zp_mulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _zp_mod(out, m, p)


def _zp_powmod(a, e, m, p):
    result = [1]
    base = _zp_mod(list(a), m, p)
    while e:
        if e & 1:
            result = _zp_mulmod(result, base, m, p)
        base = _zp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _zp_gcd(a, b, p):
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _zp_mod(a, b, p)
    return a


def is_irreducible(modulus, p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over Z_p.

    ``modulus`` lists coefficients from the constant term upward.
    """
    m = _trim([c % p for c in modulus])
    f = len(m) - 1
    if f < 1 or m[-1] != 1:
        return False
    if f == 1:
        return True
    # frob[k] = x^(p^k) mod m
    frob = [[0, 1]]
    for _ in range(f):
        frob.append(_zp_powmod(frob[-1], p, m, p))
    if _zp_sub(frob[f], [0, 1], p):
        return False
    for ell in prime_factors(f):
        g = _zp_gcd(m, _zp_sub(frob[f // ell], [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


def find_irreducible(p: int, f: int) -> "FieldSpec":
    """Deterministic monic irreducible of degree f over Z_p.

    Candidates x^f + c_{f-1} x^{f-1} + ... + c_0 are scanned in lexicographic
    order of (c_{f-1}, ..., c_0); the first irreducible one wins.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if f < 1:
        raise ValueError("extension degree must be at least 1")
    for high_first in itertools.product(range(p), repeat=f):
        modulus = list(reversed(high_first)) + [1]
        if f > 1 and modulus[0] == 0:
            continue
        if is_irreducible(modulus, p):
            return FieldSpec(p, modulus, _checked=True)
    raise AssertionError(f"no irreducible polynomial of degree {f} over GF({p})")


@functools.lru_cache(maxsize=None)
def GF(p: int, f: int = 1) -> "FieldSpec":
    """Cached field with the deterministic modulus."""
    return find_irreducible(p, f)


class FieldSpec:
    """The field GF(p^f) presented as Z_p[x]/(modulus).

    Arithmetic methods take and return packed integers in ``range(order)``.
    Use :meth:`__call__` to wrap a value as a :class:`FieldElement`.
    """

    def __init__(self, p: int, modulus, _checked: bool = False):
        modulus = [int(c) % p for c in modulus]
        if not _checked:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if len(modulus) < 2 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree >= 1")
            if not is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.f = len(modulus) - 1
        self.modulus = tuple(modulus)
        self.order = p ** self.f
        if self.order > MAX_TABLE_ORDER:
            raise BudgetExceeded(f"GF({p}^{self.f}) exceeds the supported order {MAX_TABLE_ORDER}")
        self._powers = [p ** i for i in range(self.f + 1)]
        self._build_tables()

    # -- construction --------------------------------------------------------

    def digits(self, a: int) -> list[int]:
        """Coordinate vector of a packed element, constant term first."""
        p = self.p
        out = []
        for _ in range(self.f):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def pack(self, coeffs) -> int:
        if len(coeffs) != self.f:
            raise ValueError(f"expected {self.f} coordinates, got {len(coeffs)}")
        value = 0
        for c in reversed(coeffs):
            value = value * self.p + int(c) % self.p
        return value

    def mul_direct(self, a: int, b: int) -> int:
        """Multiply by polynomial product and reduction modulo the modulus.

        This is the defining operation; the table-driven :meth:`mul` is
        derived from it and tested against it.
        """
        p, f, m = self.p, self.f, self.modulus
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for k in range(2 * f - 2, f - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(f):
                    prod[k - f + i] -= c * m[i]
            prod[k] = 0
        return self.pack([c % p for c in prod[:f]])

    def _build_tables(self):
        q = self.order
        m = q - 1
        if q == 2:
            generator = 1
        else:
            generator = None
            for g in range(2, q):
                if self._has_full_order(g):
                    generator = g
                    break
        self.generator = generator
        exp = [0] * (2 * m + 1)
        log = [0] * q
        x = 1
        for k in range(m):
            exp[k] = x
            log[x] = k
            x = self.mul_direct(x, generator)
        for k in range(m, 2 * m + 1):
            exp[k] = exp[k - m]
        self._exp = exp
        self._log = log
        self._inv = [0] + [exp[(m - log[a]) % m] for a in range(1, q)]
        p = self.p
        if p == 2 or self.f == 1:
            self._zech = None
        else:
            # zech[k] = log(1 + g^k), or -1 when 1 + g^k == 0
            zech = [0] * m
            for k in range(m):
                v = exp[k]
                w = v - v % p + (v % p + 1) % p
                zech[k] = log[w] if w else -1
            self._zech = zech
        self._neg = [self._neg_direct(a) for a in range(q)]

    def _has_full_order(self, g: int) -> bool:
        m = self.order - 1
        for ell in prime_factors(m):
            if self._pow_direct(g, m // ell) == 1:
                return False
        return True

    def _pow_direct(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self.mul_direct(result, a)
            a = self.mul_direct(a, a)
            e >>= 1
        return result

    def _neg_direct(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.pack([(-c) % self.p for c in self.digits(a)])

    # -- arithmetic on packed integers --------------------------------------

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def scalar(self, k: int) -> int:
        """Image of the integer k in the prime field."""
        return k % self.p

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.f == 1:
            return (a + b) % self.p
        if not a:
            return b
        if not b:
            return a
        log = self._log
        la, lb = log[a], log[b]
        z = self._zech[(lb - la) % (self.order - 1)]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.f == 1:
            return (a - b) % self.p
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if not a:
            return 0
        return self._exp[self._log[a] * e % (self.order - 1)]

    def frobenius(self, a: int, i: int = 1) -> int:
        """a^(p^i), computed by i successive p-th powers."""
        if i < 0:
            raise ValueError("Frobenius exponent must be non-negative")
        for _ in range(i % self.f):
            a = self.pow(a, self.p)
        return a

    def log(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("log of zero")
        return self._log[a]

    # -- vectorised tables (numpy) -------------------------------------------

    @functools.cached_property
    def np_tables(self) -> dict:
        """Dense numpy lookup tables for batch kernels.

        ``mul``/``add``/``sub`` are flattened q*q arrays indexed by a*q + b.
        """
        q = self.order
        if q > 1 << 12:
            raise BudgetExceeded(f"dense tables for GF({q}) are too large")
        exp = np.array(self._exp, dtype=np.int64)
        log = np.array(self._log, dtype=np.int64)
        idx = np.arange(q, dtype=np.int64)
        mul = exp[log[:, None] + log[None, :]]
        mul[0, :] = 0
        mul[:, 0] = 0
        if self.p == 2:
            add = idx[:, None] ^ idx[None, :]
        else:
            da = np.stack([(idx // self.p ** i) % self.p for i in range(self.f)], axis=1)
            s = (da[:, None, :] + da[None, :, :]) % self.p
            add = (s * np.array(self._powers[:-1], dtype=np.int64)).sum(axis=2)
        neg = np.array(self._neg, dtype=np.int64)
        sub = add[:, neg]
        dtype = np.int32
        return {
            "mul": mul.astype(dtype).ravel(),
            "add": add.astype(dtype).ravel(),
            "sub": sub.astype(dtype).ravel(),
            "neg": neg.astype(dtype),
            "inv": np.array(self._inv, dtype=dtype),
        }

    # -- element views -------------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            self._check(value)
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.pack(value))
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if not 0 <= value < self.order:
                raise ValueError(f"packed value {value} out of range for GF({self.order})")
            return FieldElement(self, value)
        raise TypeError(f"cannot convert {value!r} to an element of {self}")

    def from_int(self, k: int) -> "FieldElement":
        return FieldElement(self, self.scalar(k))

    def gen(self) -> "FieldElement":
        """The class of x, the root of the modulus."""
        if self.f == 1:
            return FieldElement(self, (-self.modulus[0]) % self.p)
        return FieldElement(self, self.p)

    def elements(self):
        for v in range(self.order):
            yield FieldElement(self, v)

    def _check(self, other: "FieldElement"):
        if other.spec != self:
            raise FieldMismatchError(f"element of {other.spec} used in {self}")

    def format(self, a: int) -> str:
        if a < self.p:
            return str(a)
        return "(" + ",".join(map(str, self.digits(a))) + ")"

    # -- identity and serialization -----------------------------------------

    def _key(self):
        return (self.p, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __reduce__(self):
        return (FieldSpec, (self.p, list(self.modulus), True))

    def __repr__(self):
        return f"GF({self.p}^{self.f}) mod {poly_str(self.modulus)}"

    def to_json(self) -> dict:
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data) -> "FieldSpec":
        if isinstance(data, str):
            data = json.loads(data)
        spec = cls(data["p"], data["modulus"])
        if spec.f != data.get("f", spec.f):
            raise ValueError("f does not match the modulus degree")
        return spec


def poly_str(coeffs, var: str = "x") -> str:
    """Human-readable form of an integer coefficient list (constant first)."""
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{mono}")
    return " + ".join(terms) or "0"


class FieldElement:
    """An immutable element of a :class:`FieldSpec`."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value: int):
        self.spec = spec
        self.value = value

    @property
    def coeffs(self) -> list[int]:
        return self.spec.digits(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldMismatchError(f"cannot combine elements of {self.spec} and {other.spec}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.spec.scalar(int(other))
        return NotImplemented

    def _wrap(self, value):
        return FieldElement(self.spec, value)

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec.sub(b, self.value))

    def __neg__(self):
        return self._wrap(self.spec.neg(self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self._wrap(self.spec.div(b, self.value))

    def __pow__(self, e: int):
        return self._wrap(self.spec.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.spec.inv(self.value))

    def frobenius(self, i: int = 1) -> "FieldElement":
        return self._wrap(self.spec.frobenius(self.value, i))

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.spec.scalar(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.order, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.spec.format(self.value)} in GF({self.spec.order}))"

    def to_json(self) -> list[int]:
        return self.coeffs


# -- module-level operations on FieldElements ------------------------------------

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def frobenius(a: FieldElement, i: int) -> FieldElement:
    return a.frobenius(i)


def _check_divides(r: int, f: int, what: str = "r"):
    if r < 1 or f % r:
        raise PreconditionError(f"{what}={r} does not divide the extension degree {f}")


def subfield_values(spec: FieldSpec, r: int) -> list[int]:
    """Packed values fixed by the r-th power of Frobenius, in increasing order."""
    _check_divides(r, spec.f)
    return [v for v in range(spec.order) if spec.frobenius(v, r) == v]


def subfield_elements(spec: FieldSpec, r: int) -> frozenset:
    """The subfield of order p^r, as the fixed points of x -> x^(p^r)."""
    return frozenset(FieldElement(spec, v) for v in subfield_values(spec, r))


def quadratic_trace(x: FieldElement, r: int) -> FieldElement:
    """Relative trace x + x^(p^r) of GF(p^2r)/GF(p^r)."""
    spec = x.spec
    _check_divides(2 * r, spec.f, "2r")
    if spec.frobenius(x.value, 2 * r) != x.value:
        raise PreconditionError(f"{x!r} does not lie in the subfield of order {spec.p}^{2 * r}")
    return x + x.frobenius(r)


class RationalField:
    """The rationals with the same method surface as :class:`FieldSpec`."""

    zero = Fraction(0)
    one = Fraction(1)
    p = 0

    def scalar(self, k):
        return Fraction(k)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return 1 / Fraction(a)

    def div(self, a, b):
        return a * self.inv(b)

    def format(self, a) -> str:
        return str(a)

    def __repr__(self):
        return "QQ"


QQ = RationalField()
