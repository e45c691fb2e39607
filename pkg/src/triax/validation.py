"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

from .exactfield import FieldSpec, parse_field
from .linspace import SparseVec
from .operators import MatrixOperator, Operator, operator_from_dict

__all__ = ["check_field", "check_matrix", "check_operator", "check_vectors", "check_fuel"]


def check_field(field) -> FieldSpec:
    if isinstance(field, FieldSpec):
        return field
    if isinstance(field, int):
        return FieldSpec(field)
    if isinstance(field, str):
        return parse_field(field)
    raise TypeError(f"cannot interpret {field!r} as a field")


def check_matrix(M, field) -> list:
    """Square list-of-rows matrix with entries converted into ``field``."""
    field = check_field(field)
    if hasattr(M, "tolist"):
        M = M.tolist()
    rows = [list(r) for r in M]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("expected a nonempty square matrix")
    return [[field(c) for c in r] for r in rows]


def check_operator(X, field=None) -> Operator:
    """Accept an operator, a description dict, or a square matrix."""
    if isinstance(X, Operator):
        if field is not None and X.field != check_field(field):
            raise ValueError("operator field does not match the requested field")
        return X
    if isinstance(X, dict):
        return operator_from_dict(X, check_field(field) if field is not None else None)
    f = check_field(field if field is not None else "Q")
    return MatrixOperator(f, check_matrix(X, f))


def check_vectors(vectors, T: Operator) -> list:
    """Seed vectors as :class:`SparseVec` on ``T``'s space.

    Accepts sparse vectors, ``{index: scalar}`` dicts, the text syntax
    ``"{0: 1, 3: -2/5}"`` and, on finite domains, dense lists.
    """
    out = []
    for v in vectors:
        if isinstance(v, SparseVec):
            if v.field != T.field or v.domain != T.domain:
                raise ValueError("vector lives on another field or domain")
            out.append(v)
        elif isinstance(v, str):
            out.append(SparseVec.parse(v, T.field, T.domain))
        elif isinstance(v, dict):
            out.append(SparseVec(T.field, T.domain, {int(k): T.field(c) for k, c in v.items()}))
        else:
            if not T.domain.is_finite:
                raise ValueError("dense vectors need a finite domain")
            v = list(v)
            if len(v) != T.domain.size:
                raise ValueError(f"expected {T.domain.size} entries, got {len(v)}")
            out.append(SparseVec.from_dense(T.field, T.domain, [T.field(c) for c in v]))
    return out


def check_fuel(fuel):
    if fuel is None:
        return None
    if isinstance(fuel, bool) or not isinstance(fuel, int) or fuel < 1:
        raise ValueError(f"fuel must be a positive integer, got {fuel!r}")
    return fuel
