"""Shift-block (Jordan chain) form and cyclic decomposition of invariant hulls."""

from __future__ import annotations

from dataclasses import dataclass

from . import matrix as mx
from .exactfield import Poly, irreducible_factors
from .linspace import QuotientSpace, SparseVec, SubspaceBasis, direct_sum_check, finite, kernel_basis
from .operators import InvariantHull, Operator, apply
from .triangulate import _as_hull, local_min_poly, primary_components

__all__ = [
    "ShiftBlock",
    "CyclicBlock",
    "NotAnnihilated",
    "shift_block_form",
    "cyclic_decomposition",
    "reassemble",
]


class NotAnnihilated(ValueError):
    def __init__(self, poly, witness):
        self.poly = poly
        self.witness = witness
        super().__init__(f"{poly} does not annihilate the hull; survivor {witness}")


@dataclass
class ShiftBlock:
    """Chain ``v_0, ..., v_n`` with ``(T - a)v_i = v_{i-1}`` and ``(T - a)v_0 = 0``."""

    eigenvalue: object
    vectors: list

    @property
    def length(self):
        return len(self.vectors)

    def check(self, T: Operator) -> bool:
        prev = None
        for v in self.vectors:
            img = apply(T, v).axpy(-self.eigenvalue, v)
            if prev is None:
                if not img.is_zero():
                    return False
            elif img != prev:
                return False
            prev = v
        return True

    def to_json(self):
        return {"eigenvalue": str(self.eigenvalue), "length": self.length,
                "vectors": [v.to_json() for v in self.vectors]}


@dataclass
class CyclicBlock:
    """Orbit ``v, Tv, ..., T^(d-1)v`` of a generator, independent with ``T^d v`` in its span."""

    generator: SparseVec
    span_dim: int
    vectors: list
    annihilator: Poly | None = None

    def space(self) -> SubspaceBasis:
        v = self.generator
        return SubspaceBasis.from_vectors(v.field, v.domain, self.vectors)

    def to_json(self):
        d = {"generator": self.generator.to_json(), "span_dim": self.span_dim}
        if self.annihilator is not None:
            d["annihilator"] = str(self.annihilator)
        return d


def _dense_space(field, n, cols):
    dom = finite(n)
    return SubspaceBasis.from_vectors(field, dom, [SparseVec.from_dense(field, dom, c) for c in cols])


def shift_block_form(h) -> list:
    """Jordan chains for every eigenvalue of a hull whose minimal polynomial splits.

    Raises :class:`~triax.triangulate.SplitFailure` otherwise.  Chains are
    pulled down from the highest kernel level; new chain tops at each level are
    the echelon residues of ``ker N^i`` modulo ``ker N^(i-1)`` plus the chain
    vectors already passing through that level.
    """
    h = _as_hull(h)
    field, M, d = h.field, h.matrix, h.dim
    blocks = []
    for comp in primary_components(h):
        a = comp.eigenvalue
        N = mx.shift(M, a)
        levels = [SubspaceBasis(field, finite(d))]
        P = mx.identity(field, d)
        for _ in range(comp.multiplicity):
            P = mx.mat_mul(P, N, field)
            levels.append(kernel_basis(P, field, d))
        chains = []  # each chain listed top first
        for i in range(comp.multiplicity, 0, -1):
            # chain vectors already at level i
            here = [c[-1] for c in chains]
            below = levels[i - 1]
            for v in here:
                below, _ = below.insert(SparseVec.from_dense(field, finite(d), v))
            for row in levels[i].rows:
                r = below.reduce(row)
                if r.is_zero():
                    continue
                r = r * (1 / r.entries[r.pivot])
                below, _ = below.insert(r)
                chains.append([r.to_dense(d)])
            # step every chain one level down
            if i > 1:
                for c in chains:
                    c.append(mx.mat_vec(N, c[-1], field))
        for c in chains:
            blocks.append(ShiftBlock(a, [h.to_ambient(v) for v in reversed(c)]))
    return blocks


def reassemble(h, blocks):
    """``(P, J, ok)``: block vectors as columns of ``P``, the shift-block matrix
    ``J`` and whether ``P^-1 M P == J`` holds exactly."""
    h = _as_hull(h)
    field, d = h.field, h.dim
    cols = [h.coordinates(v) for b in blocks for v in b.vectors]
    P = mx.from_columns(cols, d, field)
    J = mx.zeros(field, d)
    off = 0
    for b in blocks:
        for i in range(b.length):
            J[off + i][off + i] = b.eigenvalue
            if i:
                J[off + i - 1][off + i] = field.one
        off += b.length
    Pinv = mx.inverse(P, field) if len(cols) == d else None
    ok = Pinv is not None and mx.mat_mul(Pinv, mx.mat_mul(h.matrix, P, field), field) == J
    return P, J, ok


def _element_of_order(Q, m: Poly, field):
    """Dense vector whose annihilator under ``Q`` is exactly ``m``."""
    n = len(Q)
    basis = [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    out = [field.zero] * n
    for pi, e in irreducible_factors(m):
        co = m.exact_div(pi ** e)
        test = mx.poly_eval(m.exact_div(pi), Q, field)
        x = next(b for b in basis if any(mx.mat_vec(test, b, field)))
        y = mx.mat_vec(mx.poly_eval(co, Q, field), x, field)
        out = [s + t for s, t in zip(out, y)]
    return out


def cyclic_decomposition(h, p: Poly) -> list:
    """Split a hull annihilated by ``p`` into a direct sum of cyclic subspaces.

    Each round takes a vector whose annihilator modulo the blocks found so far
    is the full minimal polynomial of the quotient, corrects it by an element
    of those blocks so that its orbit meets them trivially, and adds the orbit.
    """
    h = _as_hull(h)
    field, M, d = h.field, h.matrix, h.dim
    pM = mx.poly_eval(p, M, field)
    for j in range(d):
        if any(row[j] for row in pM):
            raise NotAnnihilated(p, h.to_ambient([field.one if i == j else field.zero for i in range(d)]))
    dom = finite(d)
    full = _dense_space(field, d, mx.identity(field, d))
    S = SubspaceBasis(field, dom)
    s_vectors = []  # dense spanning vectors of S in hull coordinates
    blocks = []
    while S.dim < d:
        Qs = QuotientSpace(full, S)
        cols = [Qs.coordinates(SparseVec.from_dense(field, dom, mx.mat_vec(M, r.to_dense(d), field)))
                for r in Qs.reps.rows]
        Q = mx.from_columns(cols, Qs.dim, field)
        m = local_min_poly(_as_hull(Q)) if Q else Poly.x(field)
        v = Qs.lift(_element_of_order(Q, m, field)).to_dense(d)
        fM = mx.poly_eval(m, M, field)
        if s_vectors:
            A = mx.from_columns([mx.mat_vec(fM, s, field) for s in s_vectors], d, field)
            c = mx.solve(A, mx.mat_vec(fM, v, field), field)
            if c is None:
                raise AssertionError("cyclic correction has no solution")
            for ci, s in zip(c, s_vectors):
                if ci:
                    v = [x - ci * y for x, y in zip(v, s)]
        orbit = [v]
        for _ in range(m.degree - 1):
            orbit.append(mx.mat_vec(M, orbit[-1], field))
        for w in orbit:
            S, known = S.insert(SparseVec.from_dense(field, dom, w))
            if known:
                raise AssertionError("cyclic orbit is not independent of earlier blocks")
        s_vectors.extend(orbit)
        amb = [h.to_ambient(w) for w in orbit]
        blocks.append(CyclicBlock(amb[0], len(orbit), amb, m))
    if not direct_sum_check([b.space() for b in blocks]):
        raise AssertionError("cyclic blocks do not form a direct sum")
    return blocks
