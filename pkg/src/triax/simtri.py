"""Simultaneous triangularization of finite commuting families.

The seeds are saturated under every member at once.  On the joint hull a
common eigenvector of the family acting on the current quotient is found by
successive restriction to eigenspaces, lifted, and appended; repeating until
the quotient is zero gives one ordered basis that triangularizes every member.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import matrix as mx
from .exactfield import split_linear
from .linspace import QuotientSpace, SparseVec, SubspaceBasis, finite, kernel_basis
from .operators import Operator, apply, restrict
from .triangulate import (
    INCONCLUSIVE,
    NOT_TRIANGULARIZABLE,
    TRIANGULARIZABLE,
    Diverged,
    OrderedBasis,
    SaturationTrace,
    SplitFailure,
    default_fuel,
    min_poly_matrix,
    verify_triangular,
)

__all__ = [
    "OperatorFamily",
    "NonCommuting",
    "CommuteCheck",
    "SimTriResult",
    "commutes_on",
    "common_eigenvector",
    "joint_saturate",
    "simultaneous_triangularize",
]


class NonCommuting(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"members {witness['pair']} do not commute on probe {witness['probe']}")


class OperatorFamily:
    """Finite nonempty list of operators on one field and domain."""

    def __init__(self, members):
        members = list(members)
        if not members:
            raise ValueError("an operator family needs at least one member")
        f, d = members[0].field, members[0].domain
        for T in members[1:]:
            if T.field != f or T.domain != d:
                raise ValueError("family members live on different spaces")
        self.members = members
        self.field, self.domain = f, d

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, k):
        return self.members[k]


@dataclass
class CommuteCheck:
    commute: bool
    witness: dict | None = None

    def __bool__(self):
        return self.commute


def commutes_on(family, probes) -> CommuteCheck:
    """Do all pairs satisfy ``S(T(v)) = T(S(v))`` on every probe?"""
    family = family if isinstance(family, OperatorFamily) else OperatorFamily(family)
    for v in probes:
        images = [apply(T, v) for T in family]
        for i in range(len(family)):
            for j in range(i + 1, len(family)):
                st = apply(family[i], images[j])
                ts = apply(family[j], images[i])
                if st != ts:
                    return CommuteCheck(False, {"pair": (i, j), "probe": str(v),
                                                "left": str(st), "right": str(ts)})
    return CommuteCheck(True)


def common_eigenvector(matrices, field):
    """Common eigenvector of commuting square matrices.

    Members are processed in list order; each time the least eigenvalue of the
    current member restricted to the running common eigenspace is taken.
    Returns ``(vector, eigenvalues)`` with the vector as a dense list, the
    first echelon row of the final eigenspace.
    """
    n = len(matrices[0])
    if n == 0:
        raise ValueError("no eigenvector in the zero space")
    # W as a list of dense columns spanning the current common eigenspace
    W = mx.identity(field, n)
    eigs = []
    for M in matrices:
        cols = [mx.column(W, j) for j in range(len(W[0]))]
        # matrix of M on span(W): solve W c = M w for each column
        R = mx.from_columns([_coords_in(W, mx.mat_vec(M, w, field), field) for w in cols],
                            len(cols), field)
        sr = split_linear(min_poly_matrix(R, field))
        if not sr.roots:
            raise SplitFailure(sr.poly, sr.witness)
        a = sr.roots[0][0]
        ker = kernel_basis(mx.shift(R, a), field, len(cols))
        new_cols = [mx.mat_vec(W, k.to_dense(len(cols)), field) for k in ker.rows]
        W = _echelon_columns(new_cols, n, field)
        eigs.append(a)
    return mx.column(W, 0), eigs


def _coords_in(W, v, field):
    x = mx.solve(W, v, field)
    if x is None:
        raise NonCommuting({"pair": None, "probe": "eigenspace", "left": str(v), "right": ""})
    return x


def _echelon_columns(cols, n, field):
    dom = finite(n)
    b = SubspaceBasis.from_vectors(field, dom, [SparseVec.from_dense(field, dom, c) for c in cols])
    return mx.from_columns([r.to_dense(n) for r in b.rows], n, field)


def joint_saturate(family: OperatorFamily, W: SubspaceBasis, fuel: int | None = None):
    """Smallest subspace containing ``W`` invariant under every member.

    Each stage applies the members round-robin to the previous stage's new
    vectors.  Returns ``(basis, trace)`` or raises :class:`Diverged`.
    """
    fuel = default_fuel() if fuel is None else fuel
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    current = W
    frontier = list(W.rows)
    stages = [W]
    for step in range(1, fuel + 1):
        fresh = []
        for v in frontier:
            for T in family:
                img = apply(T, v)
                current, known = current.insert(img)
                if not known:
                    fresh.append(img)
        stages.append(current)
        if not fresh:
            return current, SaturationTrace(stages, True, step)
        frontier = fresh
    raise Diverged(SaturationTrace(stages, False, fuel))


@dataclass
class SimTriResult:
    outcome: str
    basis: OrderedBasis | None = None
    hull: SubspaceBasis | None = None
    eigenvalues: list = dc_field(default_factory=list)  # per entry, per member
    verified: list = dc_field(default_factory=list)
    witness: object = None
    trace: SaturationTrace | None = None

    @property
    def triangularizable(self):
        return self.outcome == TRIANGULARIZABLE

    def to_json(self):
        d = {"outcome": self.outcome}
        if self.basis is not None:
            d["basis"] = self.basis.to_json()
            d["eigenvalues"] = [[str(a) for a in e] for e in self.eigenvalues]
            d["verified"] = self.verified
        if self.hull is not None:
            d["hull_dim"] = self.hull.dim
        if self.witness is not None:
            d["witness"] = self.witness
        if self.trace is not None:
            d["trace"] = self.trace.to_json()
        return d


def simultaneous_triangularize(family, seeds, fuel: int | None = None) -> SimTriResult:
    """One ordered basis triangularizing every member on the joint hull of ``seeds``."""
    family = family if isinstance(family, OperatorFamily) else OperatorFamily(family)
    seeds = list(seeds)
    if not seeds:
        raise ValueError("simultaneous_triangularize needs at least one seed")
    field = family.field
    W = SubspaceBasis.from_vectors(field, family.domain, seeds)
    try:
        U, trace = joint_saturate(family, W, fuel)
    except Diverged as exc:
        escaping = any(T.locally_escaping for T in family)
        outcome = NOT_TRIANGULARIZABLE if escaping else INCONCLUSIVE
        return SimTriResult(outcome, witness=exc.trace.to_json() if escaping else None,
                            trace=exc.trace)
    cc = commutes_on(family, U.rows)
    if not cc:
        raise NonCommuting(cc.witness)
    hulls = [restrict(T, U) for T in family]
    mats = [h.matrix for h in hulls]
    d = U.dim
    dom = finite(d)
    full = SubspaceBasis.from_vectors(field, dom, [SparseVec.basis(field, dom, i) for i in range(d)])
    chosen = SubspaceBasis(field, dom)
    picked = []  # hull-coordinate vectors in order
    eigs = []
    while chosen.dim < d:
        Q = QuotientSpace(full, chosen)
        qmats = []
        for M in mats:
            cols = [Q.coordinates(SparseVec.from_dense(field, dom, mx.mat_vec(M, r.to_dense(d), field)))
                    for r in Q.reps.rows]
            qmats.append(mx.from_columns(cols, Q.dim, field))
        try:
            qv, a = common_eigenvector(qmats, field)
        except SplitFailure as exc:
            return SimTriResult(NOT_TRIANGULARIZABLE, hull=U, trace=trace,
                                witness={"kind": "split_failure", "factor": str(exc.witness)})
        lift = Q.lift(qv).to_dense(d)
        v = _eigen_lift(mats, a, lift, picked, field)
        vec = SparseVec.from_dense(field, dom, v)
        vec = vec * (1 / vec.entries[vec.pivot])
        picked.append(vec.to_dense(d))
        eigs.append(a)
        chosen, _ = chosen.insert(vec)
    entries = [((0, 0, k), U.combine(c)) for k, c in enumerate(picked)]
    basis = OrderedBasis(entries)
    verified = [verify_triangular(T, basis).triangular for T in family]
    if not all(verified):
        raise AssertionError("common basis failed verification")
    return SimTriResult(TRIANGULARIZABLE, basis, U, eigs, verified, trace=trace)


def _eigen_lift(mats, eigs, lift, picked, field):
    """Replace ``lift`` by a common eigenvector in ``lift + span(picked)`` when one exists."""
    if not picked:
        return lift
    rows, rhs = [], []
    for M, a in zip(mats, eigs):
        N = mx.shift(M, a)
        imgs = [mx.mat_vec(N, w, field) for w in picked]
        target = mx.mat_vec(N, lift, field)
        for i in range(len(M)):
            rows.append([img[i] for img in imgs])
            rhs.append(-target[i])
    t = mx.solve(rows, rhs, field)
    if t is None:
        return lift
    out = list(lift)
    for c, w in zip(t, picked):
        if c:
            out = [x + c * y for x, y in zip(out, w)]
    return out
