"""Brute-force oracles over small prime fields.

These routines avoid the main pipeline on purpose: flag search and kernel
enumeration work on plain integers mod ``p`` (numpy for the enumeration) so
they can cross-check it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exactfield import FieldSpec, NotCoprimeError, Poly, poly_gcd
from .linspace import FlagChain, SubspaceBasis
from .operators import MatrixOperator, Operator, apply

__all__ = [
    "DomainTooLarge",
    "brute_force_triangularizable",
    "FlagReport",
    "invariant_flag",
    "exhaustive_kernel_decomp_check",
    "SplitMix64",
    "seeded_matrix_stream",
    "all_matrices",
    "sweep",
]

MAX_ENUMERATION = 1 << 16


class DomainTooLarge(ValueError):
    pass


def _ints(M, p):
    return [[int(c) % p for c in row] for row in M]


def _normalized_lines(n, p):
    """One spanning vector per line of ``GF(p)^n``: first nonzero entry 1."""
    for piv in range(n):
        for tail in itertools.product(range(p), repeat=n - piv - 1):
            yield (0,) * piv + (1,) + tail


def _is_eigen(M, v, p):
    w = [sum(a * b for a, b in zip(row, v)) % p for row in M]
    piv = next(i for i, x in enumerate(v) if x)
    lam = w[piv]
    return all((w[i] - lam * v[i]) % p == 0 for i in range(len(v)))


def _quotient_by_line(M, v, p):
    n = len(M)
    piv = next(i for i, x in enumerate(v) if x)
    keep = [j for j in range(n) if j != piv]
    Q = []
    for i in keep:
        Q.append([])
    for j in keep:
        col = [M[i][j] for i in range(n)]
        c = col[piv]
        col = [(x - c * y) % p for x, y in zip(col, v)]
        for r, i in enumerate(keep):
            Q[r].append(col[i])
    return Q


def brute_force_triangularizable(M, p: int) -> bool:
    """Does ``M`` over ``GF(p)`` admit a complete flag of invariant subspaces?

    Searches every invariant line and recurses into the quotient.
    """
    M = _ints(M, p)
    n = len(M)
    if p ** n > MAX_ENUMERATION:
        raise DomainTooLarge(f"GF({p})^{n} is too large for flag search")
    return _flag_search(tuple(map(tuple, M)), p, {})


def _flag_search(M, p, memo):
    n = len(M)
    if n <= 1:
        return True
    if M in memo:
        return memo[M]
    out = False
    for v in _normalized_lines(n, p):
        if _is_eigen(M, v, p) and _flag_search(tuple(map(tuple, _quotient_by_line(M, v, p))), p, memo):
            out = True
            break
    memo[M] = out
    return out


@dataclass
class FlagReport:
    chain: FlagChain
    invariant: bool
    maximal: bool


def invariant_flag(T, B, prefix_lengths=None, ambient_dim: int | None = None) -> FlagReport:
    """Flag of prefix spans of an ordered basis, with invariance and maximality bits.

    Maximal means the chain starts at 0, ends at the whole space and every
    step raises the dimension by exactly one.
    """
    if not isinstance(T, Operator):
        T = MatrixOperator(B.vectors[0].field, T)
    vecs = B.vectors
    if prefix_lengths is None:
        prefix_lengths = range(1, len(vecs) + 1)
    if ambient_dim is None:
        ambient_dim = T.domain.size if T.domain.is_finite else len(vecs)
    spaces = [SubspaceBasis(T.field, T.domain)]
    for k in prefix_lengths:
        spaces.append(SubspaceBasis.from_vectors(T.field, T.domain, vecs[:k]))
    chain = FlagChain(tuple(spaces))
    invariant = all(s.contains(apply(T, r)) for s in spaces for r in s.rows)
    dims = chain.dims
    maximal = (dims[0] == 0 and dims[-1] == ambient_dim
               and all(b - a == 1 for a, b in zip(dims, dims[1:])))
    return FlagReport(chain, invariant, maximal)


def _poly_at(f: Poly, M, p):
    n = len(M)
    A = np.array(M, dtype=np.int64) % p
    out = np.zeros((n, n), dtype=np.int64)
    for c in reversed(f.coeffs):
        out = (out @ A + int(c) * np.eye(n, dtype=np.int64)) % p
    return out


def exhaustive_kernel_decomp_check(M, factors, p: int) -> bool:
    """Check ``ker prod f_i(M) = (+) ker f_i(M)`` by listing every vector.

    ``factors`` must be pairwise coprime polynomials over ``GF(p)``.
    """
    factors = list(factors)
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            g = poly_gcd(factors[i], factors[j])
            if g.degree > 0:
                raise NotCoprimeError(i, j, g)
    n = len(M)
    if p ** n > MAX_ENUMERATION:
        raise DomainTooLarge(f"GF({p})^{n} is too large to enumerate")
    V = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(-1, n)

    def kernel(A):
        mask = ((V @ A.T) % p == 0).all(axis=1)
        return {tuple(int(x) for x in row) for row in V[mask]}

    S = np.eye(n, dtype=np.int64)
    for f in factors:
        S = (S @ _poly_at(f, M, p)) % p
    kerS = kernel(S)
    sums = {(0,) * n}
    for f in factors:
        K = kernel(_poly_at(f, M, p))
        nxt = {tuple((a + b) % p for a, b in zip(s, k)) for s in sums for k in K}
        if len(nxt) != len(sums) * len(K):
            return False
        sums = nxt
    return sums == kerS


class SplitMix64:
    """SplitMix64 counter-based generator (published constants)."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``.

        Lemire's multiply-shift with rejection: the result comes from the high
        bits, which matters because the low bit of early SplitMix64 outputs
        alternates for small seeds.
        """
        if bound <= 0:
            raise ValueError("bound must be positive")
        m = self.next_u64() * bound
        low = m & self.MASK
        if low < bound:
            threshold = ((1 << 64) - bound) % bound
            while low < threshold:
                m = self.next_u64() * bound
                low = m & self.MASK
        return m >> 64

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)


def seeded_matrix_stream(n: int, p: int, seed: int):
    """Endless reproducible stream of ``n x n`` integer matrices with entries in ``[0, p)``."""
    rng = SplitMix64(seed)
    while True:
        yield [[rng.below(p) for _ in range(n)] for _ in range(n)]


def all_matrices(n: int, p: int):
    for entries in itertools.product(range(p), repeat=n * n):
        yield [list(entries[i * n:(i + 1) * n]) for i in range(n)]


def sweep(n: int, p: int):
    """Compare the three triangularizability verdicts on every ``n x n`` matrix over ``GF(p)``."""
    from .exactfield import GF, split_linear
    from .triangulate import min_poly_matrix, triangularize_matrix, verify_triangular

    field = GF(p)
    counts = {"total": 0, "agree": 0, "triangularizable": 0, "certificates_ok": 0}
    disagreements = []
    for M in all_matrices(n, p):
        Mf = [[field(c) for c in r] for r in M]
        verdict = triangularize_matrix(Mf, field)
        splits = split_linear(min_poly_matrix(Mf, field)).splits
        brute = brute_force_triangularizable(M, p)
        counts["total"] += 1
        if verdict.triangularizable == splits == brute:
            counts["agree"] += 1
        else:
            disagreements.append(M)
        if verdict.triangularizable:
            counts["triangularizable"] += 1
            T = MatrixOperator(field, Mf)
            if verify_triangular(T, verdict.basis).triangular:
                counts["certificates_ok"] += 1
    counts["disagreements"] = disagreements
    return counts
