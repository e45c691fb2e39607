"""Triangularization of column-finite operators through finite invariant hulls.

The pipeline for a seed set is: saturate the seeds into the smallest invariant
subspace containing them, compute the minimal polynomial there, split it into
linear factors, decompose the hull into generalized eigenspaces, filter each
by kernels of powers of ``T - a`` and label the resulting vectors by
``(block, level, position)``.  The ordered basis that comes out is checked
against the operator before it is returned.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

from . import matrix as mx
from .exactfield import FieldSpec, Poly, poly_lcm, split_linear, squarefree_part
from .linspace import (
    CoordinateSystem,
    SparseVec,
    SubspaceBasis,
    finite,
    kernel_basis,
)
from .operators import InvariantHull, Operator, apply, restrict

__all__ = [
    "DEFAULT_FUEL",
    "default_fuel",
    "OrderIndex",
    "OrderedBasis",
    "SaturationTrace",
    "Diverged",
    "SplitFailure",
    "NotNilpotent",
    "PrimaryComponent",
    "TriangularizabilityVerdict",
    "TriangularCheck",
    "NilpotenceVerdict",
    "InvertibilityReport",
    "ClosureVerdict",
    "saturate",
    "local_min_poly",
    "min_poly_matrix",
    "primary_components",
    "kernel_filtration",
    "triangularize",
    "triangularize_matrix",
    "verify_triangular",
    "dependency_downset",
    "is_diagonalizable_locally",
    "is_topologically_nilpotent",
    "invertibility_report",
    "closure_test",
]

DEFAULT_FUEL = 64

TRIANGULARIZABLE = "triangularizable"
NOT_TRIANGULARIZABLE = "not_triangularizable"
INCONCLUSIVE = "inconclusive"


def default_fuel() -> int:
    """Stage budget; ``TRIAX_FUEL`` overrides the built-in 64."""
    raw = os.environ.get("TRIAX_FUEL")
    if raw:
        try:
            fuel = int(raw)
        except ValueError:
            raise ValueError(f"TRIAX_FUEL must be an integer, got {raw!r}") from None
        if fuel < 1:
            raise ValueError("TRIAX_FUEL must be at least 1")
        return fuel
    return DEFAULT_FUEL


class OrderIndex(NamedTuple):
    """Well-order label; tuples compare lexicographically."""

    block: int
    level: int
    position: int


@dataclass
class OrderedBasis:
    """Finite prefix of a well-ordered basis.

    ``entries`` are ``(OrderIndex, SparseVec)`` pairs sorted by index.
    ``eigenvalue_of_block`` maps block numbers to the eigenvalue they carry.
    """

    entries: list
    strict: bool = False
    eigenvalue_of_block: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        idx = [i for i, _ in self.entries]
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError("order indices must be strictly increasing")
        self.entries = [(OrderIndex(*i), v) for i, v in self.entries]

    @property
    def vectors(self):
        return [v for _, v in self.entries]

    @property
    def indices(self):
        return [i for i, _ in self.entries]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_json(self):
        return [{"index": list(i), "vector": v.to_json()} for i, v in self.entries]

    @classmethod
    def from_json(cls, data, field, domain, strict=False):
        return cls([(tuple(e["index"]), SparseVec.from_json(e["vector"], field, domain))
                    for e in data], strict=strict)


@dataclass
class SaturationTrace:
    stages: list
    stabilized: bool
    fuel_used: int

    @property
    def dims(self):
        return [s.dim for s in self.stages]

    def to_json(self):
        return {"dims": self.dims, "stabilized": self.stabilized, "fuel_used": self.fuel_used}


class Diverged(Exception):
    """Saturation ran out of fuel before the span stopped growing."""

    def __init__(self, trace: SaturationTrace):
        self.trace = trace
        super().__init__(f"saturation did not stabilize within {trace.fuel_used} stages "
                         f"(dims {trace.dims[:8]}{'...' if len(trace.dims) > 8 else ''})")


class SplitFailure(Exception):
    """A minimal polynomial has a nonlinear irreducible factor."""

    def __init__(self, poly: Poly, witness: Poly):
        self.poly = poly
        self.witness = witness
        super().__init__(f"{poly} does not split; irreducible factor {witness}")


class NotNilpotent(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"N^n does not kill coordinate vector {witness}")


# ---------------------------------------------------------------------------
# saturation and minimal polynomials


def saturate(T: Operator, W: SubspaceBasis, fuel: int | None = None) -> InvariantHull:
    """Smallest ``T``-invariant subspace containing ``W``.

    Each stage adds the images of the vectors that were new in the previous
    stage.  Raises :class:`Diverged` if ``fuel`` stages pass without the span
    stabilizing.
    """
    fuel = default_fuel() if fuel is None else fuel
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    if W.field != T.field or W.domain != T.domain:
        raise ValueError("seed subspace and operator live on different spaces")
    current = W
    frontier = list(W.rows)
    stages = [W]
    for step in range(1, fuel + 1):
        fresh = []
        for v in frontier:
            img = apply(T, v)
            current, known = current.insert(img)
            if not known:
                fresh.append(img)
        stages.append(current)
        if not fresh:
            hull = restrict(T, current)
            hull.trace = SaturationTrace(stages, True, step)
            return hull
        frontier = fresh
    raise Diverged(SaturationTrace(stages, False, fuel))


def min_poly_matrix(M, field: FieldSpec) -> Poly:
    """Minimal polynomial of a square matrix: lcm of the Krylov relations of
    the coordinate vectors."""
    n = len(M)
    if n == 0:
        raise ValueError("minimal polynomial of a 0x0 matrix is undefined")
    result = Poly.const(field, 1)
    current = mx.identity(field, n)  # result(M)
    for j in range(n):
        if any(row[j] for row in current):
            v = [field.one if i == j else field.zero for i in range(n)]
            ech = mx.IncrementalEchelon(field)
            w = v
            while True:
                comb = ech.add(w)
                if comb is not None:
                    break
                w = mx.mat_vec(M, w, field)
            local = Poly(field, [-c for c in comb] + [field.one])
            new = poly_lcm(result, local)
            if new != result:
                result = new
                current = mx.poly_eval(result, M, field)
    return result


def local_min_poly(h) -> Poly:
    """Minimal polynomial of an invariant hull (or of a bare matrix)."""
    if isinstance(h, InvariantHull):
        if h.dim == 0:
            raise ValueError("minimal polynomial of the zero hull is undefined")
        return min_poly_matrix(h.matrix, h.field)
    M = h
    if not M:
        raise ValueError("minimal polynomial of a 0x0 matrix is undefined")
    return min_poly_matrix(M, _field_of(M))


def _field_of(M):
    from fractions import Fraction

    a = M[0][0]
    return FieldSpec(0) if isinstance(a, Fraction) else FieldSpec(a.p)


@dataclass
class PrimaryComponent:
    """Generalized eigenspace ``ker (M - a)^m`` of a hull.

    ``coords`` is an echelon basis in hull coordinates, ``space`` the same
    subspace in ambient vectors.
    """

    eigenvalue: object
    multiplicity: int
    coords: list
    space: SubspaceBasis

    @property
    def dim(self):
        return len(self.coords)


def _as_hull(h):
    if isinstance(h, InvariantHull):
        return h
    field = _field_of(h)
    n = len(h)
    dom = finite(n)
    basis = SubspaceBasis.from_vectors(field, dom, [SparseVec.basis(field, dom, i) for i in range(n)])
    return InvariantHull(basis, mx.convert(field, h))


def primary_components(h, minpoly: Poly | None = None):
    """Generalized eigenspaces of a hull, in canonical eigenvalue order.

    Raises :class:`SplitFailure` when the minimal polynomial does not split.
    """
    h = _as_hull(h)
    if h.dim == 0:
        raise ValueError("primary decomposition of the zero hull is undefined")
    field, M = h.field, h.matrix
    mp = minpoly if minpoly is not None else local_min_poly(h)
    sr = split_linear(mp)
    if not sr.splits:
        raise SplitFailure(mp, sr.witness)
    out = []
    for a, m in sr.roots:
        N = mx.mat_pow(mx.shift(M, a), m, field)
        ker = kernel_basis(N, field)
        coords = [r.to_dense(h.dim) for r in ker.rows]
        space = SubspaceBasis.from_vectors(field, h.basis.domain, [h.to_ambient(c) for c in coords])
        out.append(PrimaryComponent(a, m, coords, space))
    return out


def kernel_filtration(N, field: FieldSpec | None = None):
    """Level vectors completing ``ker N^(i-1)`` to ``ker N^i``.

    Level ``i`` consists of the echelon residues of the rows of
    ``ker N^i`` modulo everything already chosen, so the choice is canonical.
    """
    n = len(N)
    if n == 0:
        return []
    field = field or _field_of(N)
    top = mx.mat_pow(N, n, field)
    for j in range(n):
        if any(row[j] for row in top):
            raise NotNilpotent([field.one if i == j else field.zero for i in range(n)])
    dom = finite(n)
    chosen = SubspaceBasis(field, dom)
    levels = []
    power = mx.identity(field, n)
    while chosen.dim < n:
        power = mx.mat_mul(power, N, field)
        level = []
        for row in kernel_basis(power, field).rows:
            r = chosen.reduce(row)
            if r.is_zero():
                continue
            r = r * (1 / r.entries[r.pivot])
            level.append(r.to_dense(n))
            chosen, _ = chosen.insert(r)
        levels.append(level)
    return levels


# ---------------------------------------------------------------------------
# triangularization


@dataclass
class TriangularizabilityVerdict:
    outcome: str
    basis: OrderedBasis | None = None
    hull: InvariantHull | None = None
    components: list | None = None
    min_poly: Poly | None = None
    witness: object = None
    trace: SaturationTrace | None = None

    @property
    def triangularizable(self) -> bool:
        return self.outcome == TRIANGULARIZABLE

    @property
    def definitive(self) -> bool:
        return self.outcome != INCONCLUSIVE

    def to_json(self):
        d = {"outcome": self.outcome}
        if self.basis is not None:
            d["basis"] = self.basis.to_json()
            d["strict"] = self.basis.strict
            d["eigenvalues"] = {str(k): str(v) for k, v in self.basis.eigenvalue_of_block.items()}
        if self.hull is not None:
            d["hull_dim"] = self.hull.dim
        if self.min_poly is not None:
            d["min_poly"] = str(self.min_poly)
        if isinstance(self.witness, Poly):
            d["witness"] = {"kind": "split_failure", "factor": str(self.witness)}
        elif isinstance(self.witness, SaturationTrace):
            d["witness"] = {"kind": "divergent_saturation", **self.witness.to_json()}
        if self.trace is not None:
            d["trace"] = self.trace.to_json()
        return d


def _diverged_verdict(T, exc):
    if T.locally_escaping:
        return TriangularizabilityVerdict(NOT_TRIANGULARIZABLE, witness=exc.trace, trace=exc.trace)
    return TriangularizabilityVerdict(INCONCLUSIVE, trace=exc.trace)


def triangularize(T: Operator, seeds, fuel: int | None = None) -> TriangularizabilityVerdict:
    """Build a certified triangularizing basis for the hull of ``seeds``."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("triangularize needs at least one seed")
    W = SubspaceBasis.from_vectors(T.field, T.domain, seeds)
    try:
        hull = saturate(T, W, fuel)
    except Diverged as exc:
        return _diverged_verdict(T, exc)
    if hull.dim == 0:
        return TriangularizabilityVerdict(TRIANGULARIZABLE, OrderedBasis([], strict=True),
                                          hull=hull, components=[], trace=hull.trace)
    mp = local_min_poly(hull)
    try:
        comps = primary_components(hull, mp)
    except SplitFailure as exc:
        return TriangularizabilityVerdict(NOT_TRIANGULARIZABLE, hull=hull, min_poly=mp,
                                          witness=exc.witness, trace=hull.trace)
    basis = _assemble_basis(hull, comps)
    check = verify_triangular(T, basis)
    if not check.triangular or (basis.strict and not check.strict):
        raise AssertionError(f"constructed basis failed verification: {check.witness}")
    return TriangularizabilityVerdict(TRIANGULARIZABLE, basis, hull, comps, mp, trace=hull.trace)


def _assemble_basis(hull: InvariantHull, comps) -> OrderedBasis:
    field, M = hull.field, hull.matrix
    entries = []
    eig = {}
    for b, comp in enumerate(comps):
        eig[b] = comp.eigenvalue
        # restrict M - a to the component, in component coordinates
        cdom = finite(hull.dim)
        cbasis = SubspaceBasis.from_vectors(
            field, cdom, [SparseVec.from_dense(field, cdom, c) for c in comp.coords])
        N = mx.shift(M, comp.eigenvalue)
        cols = []
        for c in comp.coords:
            img = SparseVec.from_dense(field, cdom, mx.mat_vec(N, c, field))
            cols.append(cbasis.coordinates(img))
        Nc = mx.from_columns(cols, comp.dim, field)
        for level, vecs in enumerate(kernel_filtration(Nc, field), start=1):
            for pos, y in enumerate(vecs):
                hc = cbasis.combine(y).to_dense(hull.dim)
                entries.append(((b, level, pos), hull.to_ambient(hc)))
    strict = len(comps) == 1 and not comps[0].eigenvalue
    return OrderedBasis(entries, strict=strict, eigenvalue_of_block=eig)


def triangularize_matrix(M, field: FieldSpec, fuel: int | None = None):
    """Convenience: triangularize a finite matrix seeded by the full space."""
    from .operators import MatrixOperator

    T = MatrixOperator(field, M)
    return triangularize(T, T.default_seeds(), fuel)


# ---------------------------------------------------------------------------
# verification


@dataclass
class TriangularCheck:
    triangular: bool
    strict: bool
    witness: dict | None = None
    coords: list | None = None

    def __bool__(self):
        return self.triangular


def _verify_with(image_of, B: OrderedBasis) -> TriangularCheck:
    vecs = B.vectors
    cs = CoordinateSystem(vecs)
    triangular, strict = True, True
    witness = None
    all_coords = []
    for k, v in enumerate(vecs):
        w = image_of(v)
        coords = cs.express(w)
        if coords is None:
            return TriangularCheck(False, False, {"kind": "escape", "entry": k,
                                                  "index": list(B.indices[k]), "image": str(w)})
        all_coords.append(coords)
        above = next((j for j in range(k + 1, len(vecs)) if coords[j]), None)
        if above is not None and triangular:
            triangular = False
            witness = {"kind": "above_diagonal", "entry": k, "position": above,
                       "coefficient": str(coords[above])}
        if coords[k]:
            strict = False
    return TriangularCheck(triangular, triangular and strict, witness, all_coords)


def verify_triangular(T: Operator, B: OrderedBasis) -> TriangularCheck:
    """Check ``T(v)`` lies in the span of entries ``<= v`` (``< v`` for strict)."""
    return _verify_with(lambda v: apply(T, v), B)


def dependency_downset(T: Operator, B: OrderedBasis, k: int):
    """Entries reachable from entry ``k`` through nonzero ``π_u T π_w`` steps.

    Returns the sorted entry positions; their span is ``T``-invariant.
    """
    check = verify_triangular(T, B)
    if not check.triangular:
        raise ValueError(f"basis is not triangular: {check.witness}")
    seen = {k}
    stack = [k]
    while stack:
        w = stack.pop()
        for u, c in enumerate(check.coords[w]):
            if c and u not in seen:
                seen.add(u)
                stack.append(u)
    return sorted(seen)


def is_diagonalizable_locally(h) -> bool:
    mp = local_min_poly(h)
    if not split_linear(mp).splits:
        return False
    return squarefree_part(mp) == mp.monic()


# ---------------------------------------------------------------------------
# topological nilpotence, inverses, closure


@dataclass
class NilpotenceVerdict:
    outcome: str  # yes_on_probes | no | inconclusive
    killing_powers: list = dc_field(default_factory=list)
    witness: dict | None = None

    def to_json(self):
        d = {"outcome": self.outcome, "killing_powers": self.killing_powers}
        if self.witness:
            d["witness"] = self.witness
        return d


def is_topologically_nilpotent(T: Operator, probes, fuel: int | None = None) -> NilpotenceVerdict:
    """Does some power of ``T`` kill every probe?"""
    fuel = default_fuel() if fuel is None else fuel
    probes = list(probes)
    if not probes:
        raise ValueError("need at least one probe")
    powers = []
    unresolved = []
    for k, v in enumerate(probes):
        w, i = v, 0
        while not w.is_zero() and i < fuel:
            w = apply(T, w)
            i += 1
        if w.is_zero():
            powers.append(i)
            continue
        powers.append(None)
        unresolved.append(k)
    for k in unresolved:
        W = SubspaceBasis.from_vectors(T.field, T.domain, [probes[k]])
        try:
            hull = saturate(T, W, fuel)
        except Diverged:
            continue
        mp = local_min_poly(hull)
        sr = split_linear(mp)
        nonzero = [a for a, _ in sr.roots if a]
        if nonzero:
            return NilpotenceVerdict("no", powers, {"probe": k, "eigenvalue": str(nonzero[0]),
                                                    "min_poly": str(mp)})
        return NilpotenceVerdict("no", powers, {"probe": k, "min_poly": str(mp),
                                                "reason": "minimal polynomial is not a power of x"})
    if unresolved:
        return NilpotenceVerdict(INCONCLUSIVE, powers, {"unresolved_probes": unresolved})
    return NilpotenceVerdict("yes_on_probes", powers)


@dataclass
class InvertibilityReport:
    injective: bool
    diagonal_nonzero: bool
    prefix_onto: bool
    diagonal: list
    surjective_on_prefix: bool = False
    inverse_matrix: list | None = None
    inverse_triangular: bool | None = None

    @property
    def invertible(self) -> bool:
        return self.injective

    @property
    def consistent(self) -> bool:
        return self.injective == self.diagonal_nonzero == self.prefix_onto

    def to_json(self):
        return {
            "injective": self.injective,
            "diagonal_nonzero": self.diagonal_nonzero,
            "prefix_onto": self.prefix_onto,
            "diagonal": [str(c) for c in self.diagonal],
            "surjective_on_prefix": self.surjective_on_prefix,
            "inverse_matrix": None if self.inverse_matrix is None
            else [[str(c) for c in r] for r in self.inverse_matrix],
            "inverse_triangular": self.inverse_triangular,
        }


def invertibility_report(T: Operator, B: OrderedBasis, hull: InvariantHull) -> InvertibilityReport:
    """Invertibility conditions on a hull carrying a triangular basis.

    Injectivity of the hull matrix, nonzero diagonal projections and
    ``T(U_v) = U_v`` on every prefix are evaluated independently; for an
    invertible restriction the inverse is checked triangular in ``B``.
    """
    check = verify_triangular(T, B)
    if not check.triangular:
        raise ValueError(f"basis is not triangular: {check.witness}")
    field = hull.field
    n = hull.dim
    injective = kernel_basis(hull.matrix, field, n).dim == 0 if n else True
    diagonal = [check.coords[k][k] for k in range(len(B))]
    diag_ok = all(diagonal)
    # T(U_v) = U_v for every prefix: rank of the image of each prefix
    prefix_ok = True
    images = SubspaceBasis(field, hull.basis.domain)
    for k, v in enumerate(B.vectors):
        images, _ = images.insert(apply(T, v))
        if images.dim != k + 1:
            prefix_ok = False
            break
    # every entry but the last has a preimage in the prefix
    all_images = SubspaceBasis.from_vectors(field, hull.basis.domain, [apply(T, v) for v in B.vectors])
    onto = all(all_images.contains(v) for v in B.vectors[:-1])
    inv = None
    inv_tri = None
    if injective and n:
        inv = mx.inverse(hull.matrix, field)

        def inverse_image(v):
            return hull.to_ambient(mx.mat_vec(inv, hull.coordinates(v), field))

        inv_tri = _verify_with(inverse_image, B).triangular
    return InvertibilityReport(injective, diag_ok, prefix_ok, diagonal, onto, inv, inv_tri)


@dataclass
class ClosureVerdict:
    outcome: str  # in_closure_on_probes | not_in_closure | inconclusive
    witness: Poly | None = None
    probe: int | None = None
    hull_dims: list = dc_field(default_factory=list)

    def to_json(self):
        d = {"outcome": self.outcome, "hull_dims": self.hull_dims}
        if self.witness is not None:
            d["witness"] = {"kind": "split_failure", "factor": str(self.witness), "probe": self.probe}
        return d


def closure_test(T: Operator, seeds, fuel: int | None = None) -> ClosureVerdict:
    """Membership in the closure of the triangularizable operators, on probes.

    Each seed is saturated on its own; divergent seeds contribute nothing.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("closure_test needs at least one seed")
    dims = []
    found = False
    for k, s in enumerate(seeds):
        W = SubspaceBasis.from_vectors(T.field, T.domain, [s])
        try:
            hull = saturate(T, W, fuel)
        except Diverged:
            dims.append(None)
            continue
        dims.append(hull.dim)
        if hull.dim == 0:
            continue
        found = True
        sr = split_linear(local_min_poly(hull))
        if not sr.splits:
            return ClosureVerdict("not_in_closure", sr.witness, k, dims)
    if not found:
        return ClosureVerdict(INCONCLUSIVE, hull_dims=dims)
    return ClosureVerdict("in_closure_on_probes", hull_dims=dims)
