"""Finitely supported vectors and finite-dimensional subspaces.

Vectors live on a countable index set (``N``, ``Z`` or ``{0..n-1}``).  Every
subspace is finite dimensional and stored in reduced echelon form with respect
to the canonical index order, which makes span equality a row comparison.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import matrix as mx
from .exactfield import FieldError, FieldSpec

__all__ = [
    "Domain",
    "NAT",
    "INT",
    "finite",
    "SparseVec",
    "SubspaceBasis",
    "FlagChain",
    "CoordinateSystem",
    "QuotientSpace",
    "DomainMismatch",
    "rref_insert",
    "kernel_basis",
    "direct_sum_check",
    "coordinate_projection",
    "quotient_coordinates",
    "intersection",
    "span",
    "sum_space",
]


class DomainMismatch(FieldError):
    pass


@dataclass(frozen=True)
class Domain:
    """Index set of a basis: ``N``, ``Z``, or ``finite`` with ``size`` points."""

    kind: str
    size: int | None = None

    def __post_init__(self):
        if self.kind not in ("N", "Z", "finite"):
            raise DomainMismatch(f"unknown domain {self.kind!r}")
        if self.kind == "finite" and (self.size is None or self.size < 0):
            raise DomainMismatch("finite domain needs a nonnegative size")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def key(self, i: int) -> int:
        """Rank of ``i`` in the canonical order.

        ``Z`` is enumerated 0, -1, 1, -2, 2, ... so every down-set is finite.
        """
        if self.kind == "Z":
            return 2 * i if i >= 0 else -2 * i - 1
        return i

    def from_key(self, k: int) -> int:
        if self.kind == "Z":
            return k // 2 if k % 2 == 0 else -(k + 1) // 2
        return k

    def check(self, i) -> int:
        if not isinstance(i, int) or isinstance(i, bool):
            raise DomainMismatch(f"basis index {i!r} is not an integer")
        if self.kind == "N" and i < 0:
            raise DomainMismatch(f"index {i} outside N")
        if self.kind == "finite" and not 0 <= i < self.size:
            raise DomainMismatch(f"index {i} outside [0, {self.size})")
        return i

    def indices(self, count: int | None = None):
        """The first ``count`` indices in canonical order (all, if finite)."""
        if self.kind == "finite":
            n = self.size if count is None else min(count, self.size)
            return list(range(n))
        if count is None:
            raise DomainMismatch("infinite domain needs an explicit count")
        return [self.from_key(k) for k in range(count)]

    @property
    def tag(self) -> str:
        return self.kind if self.kind != "finite" else "finite"

    def __str__(self):
        return self.kind if self.kind != "finite" else f"finite({self.size})"


NAT = Domain("N")
INT = Domain("Z")


def finite(n: int) -> Domain:
    return Domain("finite", n)


class SparseVec:
    """Finitely supported vector ``{index: scalar}`` with no stored zeros."""

    __slots__ = ("field", "domain", "entries")

    def __init__(self, field: FieldSpec, domain: Domain, entries=None):
        ents = {}
        for i, c in (entries or {}).items():
            domain.check(i)
            c = field(c)
            if c:
                ents[i] = c
        self.field = field
        self.domain = domain
        self.entries = ents

    @classmethod
    def _raw(cls, field, domain, entries):
        obj = cls.__new__(cls)
        obj.field = field
        obj.domain = domain
        obj.entries = entries
        return obj

    @classmethod
    def basis(cls, field, domain, i):
        domain.check(i)
        return cls._raw(field, domain, {i: field.one})

    @classmethod
    def zero(cls, field, domain):
        return cls._raw(field, domain, {})

    @classmethod
    def from_dense(cls, field, domain, values, indices=None):
        idx = range(len(values)) if indices is None else indices
        ents = {}
        for i, c in zip(idx, values):
            if c:
                c = field(c)
                if c:
                    ents[i] = c
        return cls._raw(field, domain, ents)

    def to_dense(self, n=None, indices=None):
        idx = range(n) if indices is None else indices
        z = self.field.zero
        return [self.entries.get(i, z) for i in idx]

    def _check(self, other):
        if self.field != other.field:
            raise DomainMismatch(f"vectors over {self.field} and {other.field}")
        if self.domain != other.domain:
            raise DomainMismatch(f"vectors on {self.domain} and {other.domain}")

    def __getitem__(self, i):
        return self.entries.get(i, self.field.zero)

    def __iter__(self):
        return iter(self.sorted_items())

    def sorted_items(self):
        key = self.domain.key
        return sorted(self.entries.items(), key=lambda t: key(t[0]))

    def support(self):
        return [i for i, _ in self.sorted_items()]

    def __len__(self):
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    @property
    def pivot(self):
        """Least index of the support in canonical order (``None`` for 0)."""
        if not self.entries:
            return None
        return min(self.entries, key=self.domain.key)

    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for i, c in other.entries.items():
            s = out.get(i)
            s = c if s is None else s + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return SparseVec._raw(self.field, self.domain, out)

    def axpy(self, a, other):
        """``self + a*other``."""
        if not a:
            return self
        out = dict(self.entries)
        for i, c in other.entries.items():
            s = out.get(i)
            s = a * c if s is None else s + a * c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return SparseVec._raw(self.field, self.domain, out)

    def __neg__(self):
        return SparseVec._raw(self.field, self.domain, {i: -c for i, c in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, a):
        a = self.field(a)
        if not a:
            return SparseVec._raw(self.field, self.domain, {})
        return SparseVec._raw(self.field, self.domain, {i: c * a for i, c in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SparseVec):
            return NotImplemented
        return (self.field == other.field and self.domain == other.domain
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.field, self.domain, frozenset(self.entries.items())))

    def __repr__(self):
        return f"SparseVec({self})"

    def __str__(self):
        return "{" + ", ".join(f"{i}: {c}" for i, c in self.sorted_items()) + "}"

    def to_json(self):
        return {str(i): str(c) for i, c in self.sorted_items()}

    @classmethod
    def from_json(cls, data, field, domain):
        try:
            return cls(field, domain, {int(k): field(v if isinstance(v, str) else v)
                                       for k, v in data.items()})
        except (TypeError, ValueError) as exc:
            raise FieldError(f"bad sparse vector {data!r}: {exc}") from None

    @classmethod
    def parse(cls, text: str, field: FieldSpec, domain: Domain):
        """Parse ``{0: 1, 3: -2/5}``."""
        s = text.strip()
        if not (s.startswith("{") and s.endswith("}")):
            raise FieldError(f"sparse vector must be braced: {text!r}")
        body = s[1:-1].strip()
        ents = {}
        if body:
            for part in body.split(","):
                m = re.fullmatch(r"\s*(-?\d+)\s*:\s*([+-]?\s*\d+(?:\s*/\s*\d+)?)\s*", part)
                if not m:
                    raise FieldError(f"malformed entry {part!r} in {text!r}")
                i = int(m.group(1))
                if i in ents:
                    raise FieldError(f"duplicate index {i} in {text!r}")
                ents[i] = field(m.group(2).replace(" ", ""))
        return cls(field, domain, ents)


def coordinate_projection(v: SparseVec, idx: int):
    """Coefficient of basis vector ``idx`` in ``v``."""
    return v[idx]


class SubspaceBasis:
    """Reduced echelon basis of a finite-dimensional subspace.

    Rows are sorted by pivot; each pivot entry is 1 and every pivot column is
    zero in the other rows.  Two instances span the same space exactly when
    their rows agree.
    """

    __slots__ = ("field", "domain", "rows", "_by_pivot")

    def __init__(self, field: FieldSpec, domain: Domain, rows=()):
        self.field = field
        self.domain = domain
        self.rows = tuple(rows)
        self._by_pivot = {r.pivot: r for r in self.rows}

    @classmethod
    def from_vectors(cls, field, domain, vectors=()):
        b = cls(field, domain)
        for v in vectors:
            b, _ = b.insert(v)
        return b

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def pivots(self):
        return [r.pivot for r in self.rows]

    def _check(self, v: SparseVec):
        if v.field != self.field or v.domain != self.domain:
            raise DomainMismatch(
                f"vector on {v.field}/{v.domain} vs subspace on {self.field}/{self.domain}")

    def reduce(self, v: SparseVec) -> SparseVec:
        """Residue of ``v`` modulo the span: zero exactly on the pivots."""
        self._check(v)
        out = v
        for p, row in self._by_pivot.items():
            c = out.entries.get(p)
            if c:
                out = out.axpy(-c, row)
        return out

    def contains(self, v: SparseVec) -> bool:
        return self.reduce(v).is_zero()

    def __contains__(self, v):
        return self.contains(v)

    def coordinates(self, v: SparseVec):
        """Coefficients of ``v`` in the echelon rows; ``None`` if outside."""
        if not self.reduce(v).is_zero():
            return None
        return [v[r.pivot] for r in self.rows]

    def combine(self, coords) -> SparseVec:
        out = SparseVec.zero(self.field, self.domain)
        for c, r in zip(coords, self.rows):
            out = out.axpy(c, r)
        return out

    def insert(self, v: SparseVec):
        """Return ``(basis of span + v, v was already in the span)``."""
        r = self.reduce(v)
        if r.is_zero():
            return self, True
        p = r.pivot
        r = r * (1 / r.entries[p])
        rows = []
        for row in self.rows:
            c = row.entries.get(p)
            rows.append(row.axpy(-c, r) if c else row)
        rows.append(r)
        key = self.domain.key
        rows.sort(key=lambda x: key(x.pivot))
        return SubspaceBasis(self.field, self.domain, rows), False

    def is_subspace_of(self, other: SubspaceBasis) -> bool:
        return all(other.contains(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return (self.field == other.field and self.domain == other.domain
                and self.rows == other.rows)

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, rows=[{', '.join(map(str, self.rows))}])"

    def to_json(self):
        return [r.to_json() for r in self.rows]


def rref_insert(b: SubspaceBasis, v: SparseVec):
    return b.insert(v)


def span(vectors, field=None, domain=None) -> SubspaceBasis:
    vectors = list(vectors)
    if field is None:
        field, domain = vectors[0].field, vectors[0].domain
    return SubspaceBasis.from_vectors(field, domain, vectors)


def kernel_basis(M, field: FieldSpec, ncols: int | None = None) -> SubspaceBasis:
    """Echelon basis of the null space of a dense matrix (vectors on ``finite(cols)``)."""
    n = mx.shape(M)[1] if M else (ncols or 0)
    dom = finite(n)
    vecs = [SparseVec.from_dense(field, dom, x) for x in mx.nullspace(M, field, n)]
    return SubspaceBasis.from_vectors(field, dom, vecs)


def sum_space(parts) -> SubspaceBasis:
    parts = list(parts)
    out = SubspaceBasis(parts[0].field, parts[0].domain)
    for p in parts:
        if p.field != out.field or p.domain != out.domain:
            raise DomainMismatch("subspaces on different fields or domains")
        for r in p.rows:
            out, _ = out.insert(r)
    return out


def direct_sum_check(parts) -> bool:
    """True iff the dimension of the sum equals the sum of dimensions."""
    parts = list(parts)
    if not parts:
        return True
    return sum_space(parts).dim == sum(p.dim for p in parts)


def intersection(U: SubspaceBasis, W: SubspaceBasis) -> SubspaceBasis:
    """Echelon basis of ``U ∩ W`` via the kernel of ``[U; -W]`` combinations."""
    if U.field != W.field or U.domain != W.domain:
        raise DomainMismatch("subspaces on different fields or domains")
    field = U.field
    if not U.rows or not W.rows:
        return SubspaceBasis(field, U.domain)
    idx = sorted({i for r in U.rows + W.rows for i in r.entries}, key=U.domain.key)
    cols = [r.to_dense(indices=idx) for r in U.rows] + [(-r).to_dense(indices=idx) for r in W.rows]
    A = mx.transpose(cols)
    out = SubspaceBasis(field, U.domain)
    for x in mx.nullspace(A, field, len(cols)):
        out, _ = out.insert(U.combine(x[:U.dim]))
    return out


@dataclass(frozen=True)
class FlagChain:
    """Chain of subspaces strictly increasing by inclusion."""

    spaces: tuple

    def __post_init__(self):
        for a, b in zip(self.spaces, self.spaces[1:]):
            if not a.is_subspace_of(b) or a.dim >= b.dim:
                raise ValueError("flag spaces must increase strictly by inclusion")

    @property
    def dims(self):
        return [s.dim for s in self.spaces]


class CoordinateSystem:
    """Coordinates relative to an ordered list of independent vectors.

    Keeps an echelon form of the vectors together with, for each echelon row,
    its expression in the original vectors.
    """

    def __init__(self, vectors):
        self.vectors = list(vectors)
        if not self.vectors:
            self._rows = {}
            return
        v0 = self.vectors[0]
        self.field, self.domain = v0.field, v0.domain
        one = self.field.one
        rows = {}  # pivot -> (echelon row, combination dict)
        for k, v in enumerate(self.vectors):
            r, comb = v, {k: one}
            for p, (row, rc) in rows.items():
                c = r.entries.get(p)
                if c:
                    r = r.axpy(-c, row)
                    comb = _comb_axpy(comb, -c, rc)
            if r.is_zero():
                raise ValueError(f"vector {k} is a combination of earlier vectors")
            p = r.pivot
            inv = 1 / r.entries[p]
            r = r * inv
            comb = {i: c * inv for i, c in comb.items()}
            for q in list(rows):
                row, rc = rows[q]
                c = row.entries.get(p)
                if c:
                    rows[q] = (row.axpy(-c, r), _comb_axpy(rc, -c, comb))
            rows[p] = (r, comb)
        self._rows = rows

    def express(self, w: SparseVec):
        """Coefficients of ``w`` in the vectors, or ``None`` if ``w`` escapes."""
        n = len(self.vectors)
        if not n:
            return [] if w.is_zero() else None
        out = {}
        r = w
        for p, (row, comb) in self._rows.items():
            c = r.entries.get(p)
            if c:
                r = r.axpy(-c, row)
                out = _comb_axpy(out, c, comb)
        if not r.is_zero():
            return None
        z = self.field.zero
        return [out.get(k, z) for k in range(n)]


def _comb_axpy(a, c, b):
    out = dict(a)
    for k, x in b.items():
        s = out.get(k)
        s = c * x if s is None else s + c * x
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


class QuotientSpace:
    """``U/W`` with the basis given by the echelon residues of ``U`` modulo ``W``."""

    def __init__(self, U: SubspaceBasis, W: SubspaceBasis):
        if not W.is_subspace_of(U):
            raise ValueError("W is not contained in U")
        self.U, self.W = U, W
        self.reps = SubspaceBasis.from_vectors(U.field, U.domain, [W.reduce(r) for r in U.rows])

    @property
    def dim(self) -> int:
        return self.reps.dim

    def coordinates(self, v: SparseVec):
        r = self.W.reduce(v)
        coords = self.reps.coordinates(r)
        if coords is None:
            raise ValueError("vector is not in U")
        return coords

    def lift(self, coords) -> SparseVec:
        return self.reps.combine(coords)


def quotient_coordinates(U: SubspaceBasis, W: SubspaceBasis, v: SparseVec):
    return QuotientSpace(U, W).coordinates(v)
