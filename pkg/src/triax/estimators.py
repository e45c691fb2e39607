"""scikit-learn style wrappers around the triangularization pipeline.

``fit`` takes an operator (or a matrix, or a description dict) and stores the
certificate in trailing-underscore attributes; ``transform`` maps vectors of
the fitted hull to their coordinates in the certified basis.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .canonical import cyclic_decomposition, reassemble, shift_block_form
from .linspace import CoordinateSystem, SubspaceBasis
from .simtri import OperatorFamily, simultaneous_triangularize
from .triangulate import local_min_poly, saturate, triangularize
from .validation import check_field, check_fuel, check_operator, check_vectors

__all__ = ["Triangularizer", "ShiftBlockDecomposer", "SimultaneousTriangularizer"]


class _BasisTransformer(TransformerMixin, BaseEstimator):
    def _coords(self, X):
        check_is_fitted(self, "coordinate_system_")
        out = []
        for v in check_vectors(X, self.operator_):
            c = self.coordinate_system_.express(v)
            if c is None:
                raise ValueError(f"vector {v} is outside the fitted hull")
            out.append(c)
        return out

    def transform(self, X):
        """Coordinates of each vector in the fitted ordered basis."""
        return self._coords(X)


class Triangularizer(_BasisTransformer):
    """Fit a certified triangularizing basis on the hull of ``seeds``.

    After fitting, ``outcome_`` is one of ``triangularizable``,
    ``not_triangularizable`` or ``inconclusive``; ``basis_`` and
    ``coordinate_system_`` exist only for the first.
    """

    def __init__(self, field="Q", seeds=None, fuel=None):
        self.field = field
        self.seeds = seeds
        self.fuel = fuel

    def fit(self, X, y=None):
        T = check_operator(X, check_field(self.field) if not isinstance(X, dict) else None)
        seeds = T.default_seeds() if self.seeds is None else check_vectors(self.seeds, T)
        verdict = triangularize(T, seeds, check_fuel(self.fuel))
        self.operator_ = T
        self.verdict_ = verdict
        self.outcome_ = verdict.outcome
        if verdict.triangularizable:
            self.basis_ = verdict.basis
            self.hull_ = verdict.hull
            self.min_poly_ = verdict.min_poly
            self.strict_ = verdict.basis.strict
            self.coordinate_system_ = CoordinateSystem(verdict.basis.vectors)
        return self

    def triangular_matrix(self):
        """Matrix of the operator in the fitted basis (upper triangular)."""
        from .operators import apply

        check_is_fitted(self, "coordinate_system_")
        cols = [self.coordinate_system_.express(apply(self.operator_, v)) for v in self.basis_.vectors]
        n = len(cols)
        return [[cols[j][i] for j in range(n)] for i in range(n)]


class ShiftBlockDecomposer(_BasisTransformer):
    """Jordan chains (and optionally a cyclic decomposition) of a hull."""

    def __init__(self, field="Q", seeds=None, fuel=None, cyclic=True):
        self.field = field
        self.seeds = seeds
        self.fuel = fuel
        self.cyclic = cyclic

    def fit(self, X, y=None):
        T = check_operator(X, check_field(self.field) if not isinstance(X, dict) else None)
        seeds = T.default_seeds() if self.seeds is None else check_vectors(self.seeds, T)
        W = SubspaceBasis.from_vectors(T.field, T.domain, seeds)
        hull = saturate(T, W, check_fuel(self.fuel))
        self.operator_ = T
        self.hull_ = hull
        self.min_poly_ = local_min_poly(hull)
        self.blocks_ = shift_block_form(hull)
        _, self.jordan_matrix_, self.reassembles_ = reassemble(hull, self.blocks_)
        if self.cyclic:
            self.cyclic_blocks_ = cyclic_decomposition(hull, self.min_poly_)
        self.coordinate_system_ = CoordinateSystem([v for b in self.blocks_ for v in b.vectors])
        return self


class SimultaneousTriangularizer(_BasisTransformer):
    """One ordered basis triangularizing every member of a commuting family."""

    def __init__(self, field="Q", seeds=None, fuel=None):
        self.field = field
        self.seeds = seeds
        self.fuel = fuel

    def fit(self, X, y=None):
        f = check_field(self.field)
        members = [check_operator(m, f if not isinstance(m, dict) else None) for m in X]
        family = OperatorFamily(members)
        T = members[0]
        seeds = T.default_seeds() if self.seeds is None else check_vectors(self.seeds, T)
        result = simultaneous_triangularize(family, seeds, check_fuel(self.fuel))
        self.operator_ = T
        self.family_ = family
        self.result_ = result
        self.outcome_ = result.outcome
        if result.triangularizable:
            self.basis_ = result.basis
            self.eigenvalues_ = result.eigenvalues
            self.coordinate_system_ = CoordinateSystem(result.basis.vectors)
        return self
