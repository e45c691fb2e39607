"""Centralizers, double centralizers and closure membership in ``k[T]``.

Matrix spaces are handled through row-major vectorization: ``X`` becomes the
vector ``(X[0][0], X[0][1], ..., X[n-1][n-1])`` and every matrix-space basis is
kept in reduced echelon form of those vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import matrix as mx
from .exactfield import FieldSpec, Poly
from .linspace import INT, SparseVec, SubspaceBasis, finite, kernel_basis
from .operators import MatrixOperator, Operator, apply, bilateral_shift, poly_apply
from .triangulate import Diverged, default_fuel, min_poly_matrix, saturate

__all__ = [
    "MatrixSpaceBasis",
    "commutator_matrix",
    "centralizer_basis",
    "double_centralizer_basis",
    "poly_algebra_basis",
    "double_cent_equals_poly",
    "MembershipResult",
    "closure_poly_membership",
    "cyclic_shift_matrix",
    "bilateral_inverse_evidence",
    "LaurentReport",
    "laurent_centralizer_probe",
    "open_question_probe",
]


class MatrixSpaceBasis:
    """Subspace of ``n x n`` matrices, echelon-canonical under vectorization."""

    def __init__(self, n: int, field: FieldSpec, space: SubspaceBasis):
        self.n = n
        self.field = field
        self.space = space

    @classmethod
    def from_matrices(cls, mats, n: int, field: FieldSpec):
        dom = finite(n * n)
        vecs = [SparseVec.from_dense(field, dom, mx.vectorize(m)) for m in mats]
        return cls(n, field, SubspaceBasis.from_vectors(field, dom, vecs))

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def elements(self):
        return [mx.unvectorize(r.to_dense(self.n * self.n), self.n) for r in self.space.rows]

    def _vec(self, X):
        return SparseVec.from_dense(self.field, finite(self.n * self.n), mx.vectorize(X))

    def contains(self, X) -> bool:
        return self.space.contains(self._vec(X))

    def __contains__(self, X):
        return self.contains(X)

    def is_subspace_of(self, other: "MatrixSpaceBasis") -> bool:
        return self.space.is_subspace_of(other.space)

    def __eq__(self, other):
        if not isinstance(other, MatrixSpaceBasis):
            return NotImplemented
        return self.n == other.n and self.space == other.space

    def __hash__(self):
        return hash(self.space)

    def to_json(self):
        return {"n": self.n, "dim": self.dim,
                "elements": [[[str(c) for c in r] for r in m] for m in self.elements]}


def _field_of(M):
    from .triangulate import _field_of as f

    return f(M)


def commutator_matrix(M, field: FieldSpec):
    """Matrix of ``X -> MX - XM`` on row-major vectorized ``n x n`` matrices."""
    n = len(M)
    A = mx.zeros(field, n * n)
    for i in range(n):
        for j in range(n):
            row = A[i * n + j]
            for k in range(n):
                # (MX)_ij = sum_k M_ik X_kj
                if M[i][k]:
                    row[k * n + j] = row[k * n + j] + M[i][k]
                # (XM)_ij = sum_k X_ik M_kj
                if M[k][j]:
                    row[i * n + k] = row[i * n + k] - M[k][j]
    return A


def _prepare(M, field):
    field = field or _field_of(M)
    M = mx.convert(field, M)
    if any(len(r) != len(M) for r in M):
        raise ValueError("matrix must be square")
    return M, field


def centralizer_basis(M, field: FieldSpec | None = None) -> MatrixSpaceBasis:
    """Basis of ``{X : MX = XM}``."""
    M, field = _prepare(M, field)
    n = len(M)
    ker = kernel_basis(commutator_matrix(M, field), field, n * n)
    return MatrixSpaceBasis(n, field, ker)


def double_centralizer_basis(M, field: FieldSpec | None = None) -> MatrixSpaceBasis:
    """Matrices commuting with every element of the centralizer basis."""
    M, field = _prepare(M, field)
    n = len(M)
    stacked = []
    for C in centralizer_basis(M, field).elements:
        stacked.extend(commutator_matrix(C, field))
    ker = kernel_basis(stacked, field, n * n)
    return MatrixSpaceBasis(n, field, ker)


def poly_algebra_basis(M, field: FieldSpec | None = None) -> MatrixSpaceBasis:
    """Echelon basis of ``span{I, M, ..., M^(d-1)}`` with ``d`` the minimal polynomial degree."""
    M, field = _prepare(M, field)
    n = len(M)
    d = min_poly_matrix(M, field).degree
    powers = [mx.identity(field, n)]
    for _ in range(d - 1):
        powers.append(mx.mat_mul(powers[-1], M, field))
    return MatrixSpaceBasis.from_matrices(powers, n, field)


def double_cent_equals_poly(M, field: FieldSpec | None = None):
    """``(C(C(M)) == k[M], (dim C(C(M)), dim k[M]))``."""
    A = double_centralizer_basis(M, field)
    B = poly_algebra_basis(M, field)
    return A == B, (A.dim, B.dim)


# ---------------------------------------------------------------------------
# closure of k[T] in the function topology


@dataclass
class MembershipResult:
    outcome: str  # member | not_in_closure | inconclusive
    q: Poly | None = None
    interpolants: list = dc_field(default_factory=list)
    evidence: dict | None = None

    @property
    def member(self):
        return self.outcome == "member"

    def to_json(self):
        d = {"outcome": self.outcome,
             "interpolants": [None if q is None else str(q) for q in self.interpolants]}
        if self.q is not None:
            d["q"] = str(self.q)
        if self.evidence:
            d["evidence"] = self.evidence
        return d


def _least_interpolant(T, S, vectors, bound):
    """Least-degree ``q`` (degree <= bound) with ``q(T)w = S(w)`` for every ``w``; else ``None``."""
    field = T.field
    if not vectors:
        return Poly.const(field, 0)
    targets = [apply(S, w) for w in vectors]
    powers = [list(vectors)]  # powers[k][i] = T^k w_i
    for deg in range(bound + 1):
        if deg:
            powers.append([apply(T, w) for w in powers[-1]])
        idx = sorted({i for level in powers for w in level for i in w.entries}
                     | {i for t in targets for i in t.entries}, key=T.domain.key)
        rows, rhs = [], []
        for t, _ in enumerate(vectors):
            for i in idx:
                rows.append([powers[k][t][i] for k in range(deg + 1)])
                rhs.append(targets[t][i])
        c = mx.solve(rows, rhs, field)
        if c is not None:
            return Poly(field, c)
    return None


def _hull_vectors(T, v, fuel):
    W = SubspaceBasis.from_vectors(T.field, T.domain, [v])
    try:
        return list(saturate(T, W, fuel).basis.rows), True
    except Diverged:
        return list(W.rows), False


def closure_poly_membership(T: Operator, S: Operator, probes, p: Poly | None = None,
                            fuel: int | None = None) -> MembershipResult:
    """Is ``S`` in the function-topology closure of ``k[T]``, judged on ``probes``?

    Each probe contributes its ``T``-hull (or just its span when saturation
    diverges).  A least-degree interpolant is sought on every hull and on every
    pairwise sum of hulls; when ``T`` has a declared annihilating polynomial
    ``p``, degrees are bounded by ``deg p - 1``, otherwise by ``fuel``.
    """
    fuel = default_fuel() if fuel is None else fuel
    probes = list(probes)
    if not probes:
        raise ValueError("need at least one probe")
    if S.field != T.field or S.domain != T.domain:
        raise ValueError("T and S live on different spaces")
    hulls = [_hull_vectors(T, v, fuel)[0] for v in probes]
    if p is not None:
        for k, h in enumerate(hulls):
            for w in h:
                if not poly_apply(p, T, w).is_zero():
                    raise ValueError(f"{p} does not annihilate the hull of probe {k}")
    bound = p.degree - 1 if p is not None else fuel
    interp = []
    for k, h in enumerate(hulls):
        q = _least_interpolant(T, S, h, bound)
        interp.append(q)
        if q is None:
            return MembershipResult("not_in_closure", None, interp,
                                    {"kind": "no_interpolant", "probe": k, "degree_bound": bound,
                                     "hull_dim": len(h)})
    for i in range(len(hulls)):
        for j in range(i + 1, len(hulls)):
            q = _least_interpolant(T, S, hulls[i] + hulls[j], bound)
            if q is None:
                return MembershipResult("not_in_closure", None, interp,
                                        {"kind": "incompatible_pair", "probes": [i, j],
                                         "interpolants": [str(interp[i]), str(interp[j])]})
    every = [w for h in hulls for w in h]
    q = _least_interpolant(T, S, every, bound)
    if q is None:
        return MembershipResult("not_in_closure", None, interp,
                                {"kind": "no_common_interpolant", "degree_bound": bound})
    return MembershipResult("member", q, interp)


def cyclic_shift_matrix(field: FieldSpec, r: int, inverse: bool = False):
    """Bilateral shift truncated to ``Z/(2r+1)``: ``v_i -> v_(i-1)`` cyclically.

    Index ``i`` in ``[-r, r]`` is stored at position ``i + r``.
    """
    n = 2 * r + 1
    M = mx.zeros(field, n)
    step = -1 if inverse else 1
    for j in range(n):
        M[(j - step) % n][j] = field.one
    return M


def bilateral_inverse_evidence(field: FieldSpec, radii, fuel: int | None = None):
    """Evidence that ``T^-1`` is outside the closure of ``k[T]`` for the bilateral shift.

    On the shift itself no polynomial sends ``v_0`` to ``v_1``.  On the cyclic
    truncations of size ``2r+1`` (annihilated by ``x^(2r+1) - 1``) the least
    interpolant of the inverse has degree ``2r``, growing without bound.
    """
    fuel = default_fuel() if fuel is None else fuel
    T = bilateral_shift(field)
    Tinv = bilateral_shift(field, step=-1)
    direct = closure_poly_membership(T, Tinv, [SparseVec.basis(field, INT, 0)], fuel=fuel)
    degrees = []
    for r in radii:
        C = MatrixOperator(field, cyclic_shift_matrix(field, r))
        Cinv = MatrixOperator(field, cyclic_shift_matrix(field, r, inverse=True))
        p = Poly(field, [-field.one] + [field.zero] * (2 * r) + [field.one])
        res = closure_poly_membership(C, Cinv, C.default_seeds()[:1], p=p)
        degrees.append(res.q.degree if res.q is not None else None)
    growing = all(d is not None for d in degrees) and all(a < b for a, b in zip(degrees, degrees[1:]))
    return {
        "direct": direct.to_json(),
        "radii": list(radii),
        "truncation_degrees": degrees,
        "degree_growth": growing,
        "not_in_closure": direct.outcome == "not_in_closure" and growing,
    }


@dataclass
class LaurentReport:
    radius: int
    commutes: bool
    failures: list
    coefficients: dict  # exponent of T -> scalar
    matches: bool

    def to_json(self):
        return {"radius": self.radius, "commutes": self.commutes, "failures": self.failures,
                "coefficients": {str(k): str(a) for k, a in sorted(self.coefficients.items())},
                "matches": self.matches}


def laurent_centralizer_probe(S: Operator, radius: int) -> LaurentReport:
    """Check that ``S`` commuting with the bilateral shift is a Laurent polynomial in it.

    Commutation is tested on ``v_i`` for ``|i| <= radius``.  The coefficients
    are read from ``S(v_0) = sum_j c_j v_j``: since ``T^-j v_0 = v_j`` the
    candidate is ``sum_j c_j T^-j``, then compared with ``S`` on the window.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    if S.domain != INT:
        raise ValueError("the Laurent probe lives on the Z-indexed space")
    field = S.field
    T = bilateral_shift(field)
    window = range(-radius, radius + 1)
    failures = []
    for i in window:
        v = SparseVec.basis(field, INT, i)
        if apply(S, apply(T, v)) != apply(T, apply(S, v)):
            failures.append(i)
    s0 = apply(S, SparseVec.basis(field, INT, 0))
    coeffs = {-j: c for j, c in s0.entries.items()}
    matches = not failures
    if matches:
        for i in window:
            expected = SparseVec(field, INT, {i + j: c for j, c in s0.entries.items()})
            if apply(S, SparseVec.basis(field, INT, i)) != expected:
                matches = False
                break
    return LaurentReport(radius, not failures, failures, coeffs, matches)


def open_question_probe(T: Operator, candidates, probes, fuel: int | None = None):
    """Evidence about whether ``C(C(T))`` equals the closure of ``k[T]``.

    For each candidate operator, reports whether it commutes with ``T`` on the
    probes and whether it passes the closure membership test.  No verdict on
    the question itself is produced.
    """
    from .simtri import commutes_on

    fuel = default_fuel() if fuel is None else fuel
    rows = []
    for k, S in enumerate(candidates):
        cc = commutes_on([T, S], probes)
        m = closure_poly_membership(T, S, probes, fuel=fuel)
        rows.append({"candidate": k, "commutes_on_probes": cc.commute,
                     "closure_membership": m.outcome,
                     "q": None if m.q is None else str(m.q)})
    return {"kind": "evidence_only", "verdict": None, "observations": rows}
