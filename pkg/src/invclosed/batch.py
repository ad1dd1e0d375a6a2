"""Vectorised subspace-polynomial checks over every small subgroup of a field.

For each subgroup with at most ``max_elements`` elements this compares the
recursively built f_A with the product of (x - a) over its elements, checks
that the product is a monic p-polynomial, and checks that it divides
x^(p^f) - x.  Subgroups are processed in blocks of equal dimension, one numpy
row per subgroup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .field import FieldSpec
from .subgroups import AdditiveSubgroup, SubgroupIterator

BLOCK = 1 << 14


@dataclass
class OracleSweep:
    spec: FieldSpec
    checked: int = 0
    dense_divisions: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _blocks(it: SubgroupIterator, size: int | None = None):
    size = size or BLOCK
    for pivots in it.partitions():
        rows = it.iter_rows(pivots)
        while True:
            chunk = list(itertools.islice(rows, size))
            if not chunk:
                break
            yield pivots, np.array(chunk, dtype=np.int32).reshape(len(chunk), it.dim)


class _Kernels:
    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.q = spec.order
        T = spec.np_tables
        self.mul, self.add, self.sub, self.neg = T["mul"], T["add"], T["sub"], T["neg"]
        self.frob = np.array([spec.pow(v, spec.p) for v in range(self.q)], dtype=np.int32)
        self.pm1 = np.array([spec.pow(v, spec.p - 1) for v in range(self.q)], dtype=np.int32)

    def m(self, a, b):
        return self.mul[a * self.q + b]

    def a(self, a, b):
        return self.add[a * self.q + b]

    def s(self, a, b):
        return self.sub[a * self.q + b]

    def recursion(self, R):
        """q-coefficients of f_A for each basis row-block R (N x d)."""
        N, d = R.shape
        Q = np.zeros((N, d + 1), dtype=np.int32)
        Q[:, 0] = 1
        for k in range(d):
            b = R[:, k]
            val = np.zeros(N, dtype=np.int32)
            bb = b
            for i in range(k + 1):
                val = self.a(val, self.m(Q[:, i], bb))
                bb = self.frob[bb]
            scale = self.pm1[val]
            nxt = np.zeros_like(Q)
            nxt[:, 1:k + 2] = self.frob[Q[:, :k + 1]]
            nxt[:, :k + 1] = self.s(nxt[:, :k + 1], self.m(scale[:, None], Q[:, :k + 1]))
            Q = nxt
        return Q

    def elements(self, R):
        N, d = R.shape
        E = np.zeros((N, 1), dtype=np.int32)
        for k in range(d):
            row = R[:, k]
            parts = [self.a(E, self.m(c, row)[:, None]) for c in range(self.spec.p)]
            E = np.concatenate(parts, axis=1)
        return E

    def product(self, E):
        """Coefficients (constant first) of prod (x - e) over each row of E."""
        N, n = E.shape
        P = np.zeros((N, n + 1), dtype=np.int32)
        P[:, 0] = 1
        for k in range(n):
            na = self.neg[E[:, k]][:, None]
            t = self.m(na, P[:, :k + 1])
            P[:, k + 1] = P[:, k]
            P[:, 1:k + 1] = self.a(P[:, :k], t[:, 1:k + 1])
            P[:, 0] = t[:, 0]
        return P

    def linearized_remainder(self, Q):
        """q-coefficients of (x^(p^f) - x) mod f_A for monic f_A given by Q."""
        N, w = Q.shape
        d = w - 1
        rem = np.zeros((N, d), dtype=np.int32)
        if d == 0:
            return rem
        rem[:, 0] = 1
        low = Q[:, :d]
        for _ in range(self.spec.f):
            nxt = np.zeros((N, d + 1), dtype=np.int32)
            nxt[:, 1:] = self.frob[rem]
            top = nxt[:, d]
            rem = self.s(nxt[:, :d], self.m(top[:, None], low))
        rem[:, 0] = self.s(rem[:, 0], 1)
        return rem

    def dense_remainder(self, P, support):
        """Long division of x^(p^f) - x by the monic rows of P (degree n)."""
        N, w = P.shape
        n = w - 1
        q = self.q
        R = np.zeros((N, q + 1), dtype=np.int32)
        R[:, q] = 1
        R[:, 1] = self.s(R[:, 1], 1)
        cols = np.array(support, dtype=np.int64)
        for k in range(q, n - 1, -1):
            c = R[:, k].copy()
            if not c.any():
                continue
            shift = k - n
            R[:, k] = 0
            idx = shift + cols
            R[:, idx] = self.s(R[:, idx], self.m(c[:, None], P[:, cols]))
        return R[:, :n]


def polynomial_oracle_sweep(spec: FieldSpec, max_elements: int = 64,
                            dense_division_limit: int = 256) -> OracleSweep:
    """Check every subgroup of order <= ``max_elements``.

    Divisibility of x^(p^f) - x is checked through the linearized remainder
    for every field, and additionally by dense long division when the field
    has at most ``dense_division_limit`` elements.
    """
    K = _Kernels(spec)
    p = spec.p
    out = OracleSweep(spec)
    for d in range(spec.f + 1):
        n = p ** d
        if n > max_elements:
            break
        powers = [p ** i for i in range(d + 1)]
        off_support = np.ones(n + 1, dtype=bool)
        off_support[powers] = False
        it = SubgroupIterator(spec, d, None)
        for pivots, R in _blocks(it):
            Q = K.recursion(R)
            P = K.product(K.elements(R))
            bad = np.zeros(len(R), dtype=bool)
            # product must be a monic p-polynomial ...
            bad |= P[:, n] != 1
            bad |= (P[:, off_support] != 0).any(axis=1)
            # ... equal to the recursion ...
            bad |= (P[:, powers] != Q).any(axis=1)
            # ... and divide x^(p^f) - x
            bad |= (K.linearized_remainder(Q) != 0).any(axis=1)
            if spec.order <= dense_division_limit:
                support = [i for i in powers[:-1]]
                bad |= (K.dense_remainder(P, support) != 0).any(axis=1)
                out.dense_divisions += len(R)
            out.checked += len(R)
            for i in np.flatnonzero(bad)[:10]:
                A = AdditiveSubgroup(spec, tuple(int(v) for v in R[i]), canonical=True, pivots=pivots)
                out.mismatches.append(A.to_json())
    return out
