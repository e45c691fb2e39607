"""Column-finite linear operators and their finite restrictions.

An operator is known only through its columns ``T(e_i)``, each a finitely
supported vector.  Finite matrices, explicit column maps and built-in
generator rules (shifts, periodic block diagonals, ...) share this interface;
generator columns are produced on demand and cached.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import matrix as mx
from .exactfield import FieldError, FieldSpec, Poly, parse_field
from .linspace import (
    INT,
    NAT,
    Domain,
    DomainMismatch,
    QuotientSpace,
    SparseVec,
    SubspaceBasis,
    finite,
)

__all__ = [
    "Operator",
    "MatrixOperator",
    "ColumnMapOperator",
    "GeneratorOperator",
    "ComposedOperator",
    "InvariantHull",
    "NotInvariant",
    "UndefinedColumn",
    "GENERATORS",
    "apply",
    "poly_apply",
    "restrict",
    "quotient_operator",
    "compose",
    "left_shift",
    "right_shift",
    "bilateral_shift",
    "weighted_shift",
    "laurent_shift",
    "block_diag",
    "companion_operator",
    "scalar_plus",
    "identity_operator",
    "zero_operator",
    "operator_from_dict",
]


class UndefinedColumn(KeyError):
    """A column map was asked for a column it does not define."""


class NotInvariant(ValueError):
    """A subspace is not mapped into itself; carries the escaping row."""

    def __init__(self, row, image):
        self.row = row
        self.image = image
        super().__init__(f"image of {row} is {image}, outside the subspace")


class Operator:
    """Base class; subclasses implement ``_column``."""

    locally_escaping = False

    def __init__(self, field: FieldSpec, domain: Domain):
        self.field = field
        self.domain = domain
        self._cache = {}

    def column(self, i: int) -> SparseVec:
        col = self._cache.get(i)
        if col is None:
            self.domain.check(i)
            col = self._column(i)
            self._cache[i] = col
        return col

    def _column(self, i):  # pragma: no cover - abstract
        raise NotImplementedError

    def __call__(self, v: SparseVec) -> SparseVec:
        return apply(self, v)

    def basis_vector(self, i: int) -> SparseVec:
        return SparseVec.basis(self.field, self.domain, i)

    def default_seeds(self):
        if self.domain.is_finite:
            return [self.basis_vector(i) for i in range(self.domain.size)]
        return [self.basis_vector(0)]

    def to_dict(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError

    def _header(self):
        return {"field": self.field.tag, "domain": self.domain.tag}


class MatrixOperator(Operator):
    def __init__(self, field: FieldSpec, rows):
        rows = mx.convert(field, rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise FieldError("operator matrix must be square")
        super().__init__(field, finite(n))
        self.rows = rows

    def _column(self, j):
        return SparseVec._raw(self.field, self.domain,
                              {i: r[j] for i, r in enumerate(self.rows) if r[j]})

    @property
    def n(self):
        return len(self.rows)

    def to_dict(self):
        d = self._header()
        d.update(kind="matrix", rows=[[str(c) for c in r] for r in self.rows])
        return d

    def __repr__(self):
        return f"MatrixOperator({self.field.tag}, {[[str(c) for c in r] for r in self.rows]})"


class ColumnMapOperator(Operator):
    """Explicit columns, optionally backed by a default operator for the rest.

    Without a default, asking for an unlisted column raises
    :class:`UndefinedColumn` rather than inventing a zero column.
    """

    def __init__(self, field, domain, columns, default: Operator | None = None):
        super().__init__(field, domain)
        self.columns = {}
        for i, v in columns.items():
            domain.check(i)
            if not isinstance(v, SparseVec):
                v = SparseVec(field, domain, v)
            if v.field != field or v.domain != domain:
                raise DomainMismatch(f"column {i} lives on another field or domain")
            self.columns[i] = v
        if default is not None and (default.field != field or default.domain != domain):
            raise DomainMismatch("default rule lives on another field or domain")
        self.default = default

    def _column(self, i):
        if i in self.columns:
            return self.columns[i]
        if self.default is None:
            raise UndefinedColumn(f"column {i} is not defined by this column map")
        return self.default.column(i)

    def to_dict(self):
        d = self._header()
        d.update(kind="columns", map={str(i): v.to_json() for i, v in sorted(self.columns.items())})
        if self.default is not None:
            d["default"] = self.default.to_dict()
        return d


class GeneratorOperator(Operator):
    """Built-in rule evaluated column by column."""

    name = "generator"

    def to_dict(self):
        d = self._header()
        d.update(kind="generator", name=self.name)
        d.update(self._params())
        return d

    def _params(self):
        return {}

    def __repr__(self):
        return f"{type(self).__name__}({self.field.tag}, {self.domain})"


class LeftShift(GeneratorOperator):
    name = "left_shift"

    def __init__(self, field):
        super().__init__(field, NAT)

    def _column(self, i):
        if i == 0:
            return SparseVec.zero(self.field, self.domain)
        return self.basis_vector(i - 1)


class RightShift(GeneratorOperator):
    name = "right_shift"
    locally_escaping = True

    def __init__(self, field):
        super().__init__(field, NAT)

    def _column(self, i):
        return self.basis_vector(i + 1)


class BilateralShift(GeneratorOperator):
    """``v_i -> v_(i-step)``; ``step = -1`` is the inverse shift."""

    name = "bilateral_shift"

    def __init__(self, field, step: int = 1):
        super().__init__(field, INT)
        self.step = int(step)
        self.locally_escaping = self.step != 0

    def _column(self, i):
        return self.basis_vector(i - self.step)

    def _params(self):
        return {"step": self.step} if self.step != 1 else {}


class LaurentShift(GeneratorOperator):
    """``sum_k a_k T^k`` for the bilateral shift ``T``: ``v_i -> sum_k a_k v_(i-k)``.

    Negative exponents are powers of ``T^-1``; an empty coefficient map is the
    zero operator on ``Z``.
    """

    name = "laurent"

    def __init__(self, field, coeffs):
        super().__init__(field, INT)
        self.coeffs = {int(k): field(a) for k, a in dict(coeffs).items()}
        self.coeffs = {k: a for k, a in self.coeffs.items() if a}
        # a nonzero Laurent polynomial that is not a scalar moves every hull outward
        self.locally_escaping = any(k for k in self.coeffs)

    def _column(self, i):
        return SparseVec._raw(self.field, self.domain, {i - k: a for k, a in self.coeffs.items()})

    def _params(self):
        return {"coeffs": {str(k): str(a) for k, a in sorted(self.coeffs.items())}}


class WeightedShift(GeneratorOperator):
    """``T(v_i) = w_i * B(v_i)`` for a shift ``B``; weights repeat periodically."""

    name = "weighted_shift"

    def __init__(self, base: GeneratorOperator, weights):
        if not isinstance(base, (LeftShift, RightShift, BilateralShift)):
            raise FieldError("weighted_shift base must be a shift")
        super().__init__(base.field, base.domain)
        self.base = base
        self.weights = [base.field(w) for w in weights]
        if not self.weights:
            raise FieldError("weighted_shift needs at least one weight")
        self.locally_escaping = base.locally_escaping and all(self.weights)

    def _column(self, i):
        return self.base.column(i) * self.weights[i % len(self.weights)]

    def _params(self):
        return {"base": self.base.name, "weights": [str(w) for w in self.weights]}


class BlockDiag(GeneratorOperator):
    """Block-diagonal operator; on ``N`` the block list repeats forever."""

    name = "block_diag"

    def __init__(self, field, blocks, domain: Domain = NAT):
        blocks = [mx.convert(field, b) for b in blocks]
        if not blocks or any(not b or any(len(r) != len(b) for r in b) for b in blocks):
            raise FieldError("block_diag needs nonempty square blocks")
        total = sum(len(b) for b in blocks)
        if domain.kind == "Z":
            raise DomainMismatch("block_diag is defined on N or a finite domain")
        if domain.is_finite and domain.size != total:
            raise DomainMismatch(f"blocks cover {total} indices, domain has {domain.size}")
        super().__init__(field, domain)
        self.blocks = blocks
        self.period = total
        self._starts = []
        off = 0
        for b in blocks:
            self._starts.append(off)
            off += len(b)

    def _column(self, i):
        q, r = divmod(i, self.period)
        for k in range(len(self.blocks) - 1, -1, -1):
            if self._starts[k] <= r:
                break
        b, s = self.blocks[k], self._starts[k]
        j = r - s
        base = q * self.period + s
        return SparseVec._raw(self.field, self.domain,
                              {base + t: row[j] for t, row in enumerate(b) if row[j]})

    def _params(self):
        return {"blocks": [[[str(c) for c in r] for r in b] for b in self.blocks]}


class Companion(BlockDiag):
    name = "companion"

    def __init__(self, poly: Poly, domain: Domain | None = None):
        if poly.degree < 1:
            raise FieldError("companion needs a nonconstant polynomial")
        domain = domain or finite(poly.degree)
        super().__init__(poly.field, [mx.companion(poly)], domain)
        self.poly = poly.monic()

    def _params(self):
        return {"poly": str(self.poly)}


class ScalarPlus(GeneratorOperator):
    """``a*I + inner``."""

    name = "scalar_plus"

    def __init__(self, a, inner: Operator):
        super().__init__(inner.field, inner.domain)
        self.a = inner.field(a)
        self.inner = inner
        self.locally_escaping = inner.locally_escaping

    def _column(self, i):
        return self.inner.column(i).axpy(self.a, self.basis_vector(i))

    def _params(self):
        return {"scalar": str(self.a), "inner": self.inner.to_dict()}


class ComposedOperator(Operator):
    """``S ∘ T`` evaluated lazily per column."""

    def __init__(self, S: Operator, T: Operator):
        if S.field != T.field or S.domain != T.domain:
            raise DomainMismatch("cannot compose operators on different spaces")
        super().__init__(S.field, S.domain)
        self.S, self.T = S, T

    def _column(self, i):
        return apply(self.S, self.T.column(i))

    def to_dict(self):
        d = self._header()
        d.update(kind="compose", outer=self.S.to_dict(), inner=self.T.to_dict())
        return d


GENERATORS = {
    "left_shift": LeftShift,
    "right_shift": RightShift,
    "bilateral_shift": BilateralShift,
    "laurent": LaurentShift,
    "weighted_shift": WeightedShift,
    "block_diag": BlockDiag,
    "companion": Companion,
    "scalar_plus": ScalarPlus,
}


def left_shift(field):
    return LeftShift(field)


def right_shift(field):
    return RightShift(field)


def bilateral_shift(field, step=1):
    return BilateralShift(field, step)


def laurent_shift(field, coeffs):
    return LaurentShift(field, coeffs)


def weighted_shift(base, weights):
    return WeightedShift(base, weights)


def block_diag(field, blocks, domain=NAT):
    return BlockDiag(field, blocks, domain)


def companion_operator(poly, domain=None):
    return Companion(poly, domain)


def scalar_plus(a, inner):
    return ScalarPlus(a, inner)


def identity_operator(field, domain=NAT):
    if domain.is_finite:
        return MatrixOperator(field, mx.identity(field, domain.size))
    return BlockDiag(field, [[[1]]], domain)


def zero_operator(field, domain=NAT):
    if domain.is_finite:
        return MatrixOperator(field, mx.zeros(field, domain.size))
    return BlockDiag(field, [[[0]]], domain)


# ---------------------------------------------------------------------------
# application


def _check_vec(T, v):
    if v.field != T.field or v.domain != T.domain:
        raise DomainMismatch(
            f"vector on {v.field}/{v.domain} vs operator on {T.field}/{T.domain}")


def apply(T: Operator, v: SparseVec) -> SparseVec:
    """``T(v)`` as the linear extension of the columns."""
    _check_vec(T, v)
    out = SparseVec.zero(T.field, T.domain)
    for i, c in v.entries.items():
        out = out.axpy(c, T.column(i))
    return out


def poly_apply(p: Poly, T: Operator, v: SparseVec) -> SparseVec:
    """``p(T)(v)`` by Horner iteration."""
    _check_vec(T, v)
    if p.field != T.field:
        raise DomainMismatch("polynomial and operator over different fields")
    out = SparseVec.zero(T.field, T.domain)
    for c in reversed(p.coeffs):
        out = apply(T, out).axpy(c, v)
    return out


def compose(S: Operator, T: Operator) -> Operator:
    return ComposedOperator(S, T)


@dataclass
class InvariantHull:
    """A finite invariant subspace together with the restricted matrix.

    ``matrix[i][j]`` is the coefficient of ``basis.rows[i]`` in the image of
    ``basis.rows[j]``.
    """

    basis: SubspaceBasis
    matrix: list
    trace: object = None

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def field(self):
        return self.basis.field

    def to_ambient(self, coords) -> SparseVec:
        return self.basis.combine(coords)

    def coordinates(self, v: SparseVec):
        return self.basis.coordinates(v)

    def recheck(self, T: Operator) -> bool:
        """Re-derive every column from the operator and compare."""
        for j, b in enumerate(self.basis.rows):
            c = self.basis.coordinates(apply(T, b))
            if c is None or c != [row[j] for row in self.matrix]:
                return False
        return True


def restrict(T: Operator, hull: SubspaceBasis) -> InvariantHull:
    """Matrix of ``T`` on an invariant subspace, in echelon coordinates."""
    cols = []
    for b in hull.rows:
        img = apply(T, b)
        c = hull.coordinates(img)
        if c is None:
            raise NotInvariant(b, img)
        cols.append(c)
    return InvariantHull(hull, mx.from_columns(cols, hull.dim, T.field))


def quotient_operator(T: Operator, U: SubspaceBasis, W: SubspaceBasis):
    """Matrix of ``v + W -> T(v) + W`` on ``U/W`` in the echelon-residue basis."""
    Q = QuotientSpace(U, W)
    for b in W.rows:
        img = apply(T, b)
        if not W.contains(img):
            raise NotInvariant(b, img)
    cols = []
    for r in Q.reps.rows:
        img = apply(T, r)
        if not U.contains(img):
            raise NotInvariant(r, img)
        cols.append(Q.coordinates(img))
    return mx.from_columns(cols, Q.dim, T.field)


# ---------------------------------------------------------------------------
# description format


def _parse_domain(tag, rows=None):
    if tag in (None, "finite"):
        if rows is None:
            raise FieldError("a finite domain needs matrix rows")
        return finite(len(rows))
    if tag == "N":
        return NAT
    if tag == "Z":
        return INT
    raise FieldError(f"unknown domain {tag!r}; expected N, Z or finite")


def operator_from_dict(d: dict, field: FieldSpec | None = None) -> Operator:
    """Build an operator from its JSON-compatible description."""
    if not isinstance(d, dict):
        raise FieldError("operator description must be an object")
    if "field" in d:
        field = parse_field(str(d["field"]))
    elif field is None:
        field = parse_field("Q")
    kind = d.get("kind")
    if kind is None:
        kind = "matrix" if "rows" in d else "generator" if "name" in d else None
    if kind == "matrix":
        rows = d.get("rows")
        if not isinstance(rows, list) or not rows:
            raise FieldError("matrix operator needs nonempty rows")
        if d.get("domain") not in (None, "finite"):
            raise FieldError("matrix operators live on a finite domain")
        return MatrixOperator(field, [[field(c) for c in r] for r in rows])
    if kind == "columns":
        domain = _parse_domain(d.get("domain", "N"), d.get("rows"))
        cmap = d.get("map", {})
        if not isinstance(cmap, dict):
            raise FieldError("column map must be an object")
        cols = {int(k): SparseVec.from_json(v, field, domain) for k, v in cmap.items()}
        default = d.get("default")
        if default is not None:
            default = operator_from_dict(default, field)
        return ColumnMapOperator(field, domain, cols, default)
    if kind == "generator":
        name = d.get("name")
        if name not in GENERATORS:
            raise FieldError(f"unknown generator {name!r}; known: {', '.join(sorted(GENERATORS))}")
        if name in ("left_shift", "right_shift", "bilateral_shift"):
            op = GENERATORS[name](field, d.get("step", 1)) if name == "bilateral_shift" \
                else GENERATORS[name](field)
            expected = "Z" if name == "bilateral_shift" else "N"
            if d.get("domain", expected) != expected:
                raise FieldError(f"{name} lives on {expected}")
            return op
        if name == "laurent":
            coeffs = d.get("coeffs", {})
            if not isinstance(coeffs, dict):
                raise FieldError("laurent coeffs must map exponents to scalars")
            return LaurentShift(field, coeffs)
        if name == "weighted_shift":
            base = operator_from_dict({"field": field.tag, "kind": "generator",
                                       "name": d.get("base", "left_shift")})
            return WeightedShift(base, d.get("weights", []))
        if name == "block_diag":
            domain = NAT if d.get("domain", "N") == "N" else _parse_domain(
                d.get("domain"), [0] * sum(len(b) for b in d.get("blocks", [])))
            return BlockDiag(field, d.get("blocks", []), domain)
        if name == "companion":
            poly = Poly.parse(str(d.get("poly", "")), field)
            dom = d.get("domain", "finite")
            return Companion(poly, NAT if dom == "N" else finite(max(poly.degree, 0)))
        if name == "scalar_plus":
            inner = operator_from_dict(d.get("inner", {}), field)
            return ScalarPlus(d.get("scalar", "0"), inner)
    if kind == "compose":
        return ComposedOperator(operator_from_dict(d["outer"], field),
                                operator_from_dict(d["inner"], field))
    raise FieldError(f"unknown operator kind {kind!r}")
