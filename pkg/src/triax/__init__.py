"""Exact triangularization of column-finite linear operators over Q and GF(p)."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"

from .exactfield import GF, QQ, FieldSpec, Poly, parse_field
from .linspace import INT, NAT, SparseVec, SubspaceBasis, finite
from .operators import MatrixOperator, apply, operator_from_dict
from .triangulate import OrderedBasis, OrderIndex, triangularize, verify_triangular

__all__ = [
    "__version__",
    "GF",
    "QQ",
    "FieldSpec",
    "Poly",
    "parse_field",
    "INT",
    "NAT",
    "SparseVec",
    "SubspaceBasis",
    "finite",
    "MatrixOperator",
    "apply",
    "operator_from_dict",
    "OrderedBasis",
    "OrderIndex",
    "triangularize",
    "verify_triangular",
]
