"""Shared oracles for the test suite.

These helpers are deliberately independent of the package: plain integer
elimination mod p, sympy for exact rational work.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from triax.exactfield import GF, QQ


def rank_mod_p(rows, p):
    A = [[int(x) % p for x in r] for r in rows]
    rank, ncols = 0, len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [x * inv % p for x in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def rank_exact(rows, p=0):
    if not rows or not rows[0]:
        return 0
    if p:
        return rank_mod_p(rows, p)
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r]
                         for r in rows]).rank()


def matpow_int(M, k, p):
    n = len(M)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = [[sum(out[i][t] * M[t][j] for t in range(n)) % p if p else
                sum(out[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return out


def min_poly_degree_oracle(M, p=0):
    """Least d with I, M, ..., M^d dependent (rank of vectorized powers)."""
    n = len(M)
    Mi = [[Fraction(x) if not p else int(x) % p for x in r] for r in M]
    vecs = []
    for d in range(n + 1):
        P = matpow_int(Mi, d, p)
        vecs.append([x for r in P for x in r])
        if rank_exact(vecs, p) < len(vecs):
            return d
    raise AssertionError("Cayley-Hamilton violated")


def field_for(p):
    return QQ if p == 0 else GF(p)


def matrices(p, n_min=1, n_max=4, lo=-3, hi=3):
    """Hypothesis strategy for square integer matrices, reduced mod p when p > 0."""
    def build(n):
        entry = st.integers(0, p - 1) if p else st.integers(lo, hi)
        return st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n)
    return st.integers(n_min, n_max).flatmap(build)


@pytest.fixture
def F2():
    return GF(2)


@pytest.fixture
def F5():
    return GF(5)
