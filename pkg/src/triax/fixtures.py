"""Named operator fixtures: the classical counterexamples plus small matrices."""

from __future__ import annotations

import copy

from .operators import Operator, operator_from_dict

__all__ = ["FIXTURES", "UnknownFixture", "fixtures", "load_fixture"]


class UnknownFixture(KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}")

    def __str__(self):
        return self.args[0]


FIXTURES = {
    "bilateral_shift": {
        "description": "T(v_i) = v_(i-1) on Z; no nonzero finite invariant subspace",
        "operator": {"field": "Q", "domain": "Z", "kind": "generator", "name": "bilateral_shift"},
    },
    "right_shift": {
        "description": "T(v_i) = v_(i+1) on N; only the zero finite invariant subspace",
        "operator": {"field": "Q", "domain": "N", "kind": "generator", "name": "right_shift"},
    },
    "left_shift": {
        "description": "T(v_0) = 0, T(v_i) = v_(i-1) on N; strictly triangular, onto, not injective",
        "operator": {"field": "Q", "domain": "N", "kind": "generator", "name": "left_shift"},
    },
    "laurent_centralizer": {
        "description": "S = T + T^-1 for the bilateral shift T; commutes with T",
        "operator": {"field": "Q", "domain": "Z", "kind": "generator", "name": "laurent",
                     "coeffs": {"1": "1", "-1": "1"}},
    },
    "rotation_blocks": {
        "description": "companion of x^2 + 1 repeated along N over Q; outside the closure",
        "operator": {"field": "Q", "domain": "N", "kind": "generator", "name": "block_diag",
                     "blocks": [[["0", "-1"], ["1", "0"]]]},
    },
    "divergent_columns": {
        "description": "column map delegating to the right shift, without an escape annotation",
        "operator": {"field": "Q", "domain": "N", "kind": "columns", "map": {},
                     "default": {"field": "Q", "domain": "N", "kind": "generator",
                                 "name": "right_shift"}},
    },
    "jordan2": {
        "description": "2x2 nilpotent Jordan block",
        "operator": {"field": "Q", "kind": "matrix", "rows": [["0", "1"], ["0", "0"]]},
    },
    "jordan3": {
        "description": "3x3 nilpotent Jordan block",
        "operator": {"field": "Q", "kind": "matrix",
                     "rows": [["0", "1", "0"], ["0", "0", "1"], ["0", "0", "0"]]},
    },
    "swap_f2": {
        "description": "[[0,1],[1,0]] over F2; minimal polynomial (x+1)^2",
        "operator": {"field": "F2", "kind": "matrix", "rows": [["0", "1"], ["1", "0"]]},
    },
    "swap_q": {
        "description": "[[0,1],[1,0]] over Q; eigenvalues -1 and 1",
        "operator": {"field": "Q", "kind": "matrix", "rows": [["0", "1"], ["1", "0"]]},
    },
    "rotation_q": {
        "description": "companion of x^2 + 1 over Q; does not split",
        "operator": {"field": "Q", "kind": "matrix", "rows": [["0", "-1"], ["1", "0"]]},
    },
    "rotation_f5": {
        "description": "companion of x^2 + 1 over F5; eigenvalues 2 and 3",
        "operator": {"field": "F5", "kind": "matrix", "rows": [["0", "4"], ["1", "0"]]},
    },
    "upper_q": {
        "description": "[[1,1],[0,2]] over Q; invertible triangular",
        "operator": {"field": "Q", "kind": "matrix", "rows": [["1", "1"], ["0", "2"]]},
    },
}


def fixtures() -> dict:
    """Catalog ``name -> {description, operator, locally_escaping}``."""
    out = {}
    for name, entry in FIXTURES.items():
        e = copy.deepcopy(entry)
        e["locally_escaping"] = operator_from_dict(entry["operator"]).locally_escaping
        out[name] = e
    return out


def load_fixture(name: str) -> Operator:
    if name not in FIXTURES:
        raise UnknownFixture(name)
    return operator_from_dict(copy.deepcopy(FIXTURES[name]["operator"]))
