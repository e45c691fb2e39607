import itertools

import pytest
from hypothesis import given, settings, strategies as st

from triax import matrix as mx
from triax.centralizer import (
    MatrixSpaceBasis,
    bilateral_inverse_evidence,
    centralizer_basis,
    closure_poly_membership,
    commutator_matrix,
    double_cent_equals_poly,
    double_centralizer_basis,
    laurent_centralizer_probe,
    open_question_probe,
    poly_algebra_basis,
)
from triax.exactfield import GF, QQ, Poly
from triax.linspace import INT, SparseVec
from triax.operators import ColumnMapOperator, MatrixOperator, bilateral_shift, laurent_shift

from conftest import matrices, min_poly_degree_oracle

JORDAN2 = [[0, 1], [0, 0]]
JORDAN3 = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]


def M(rows, field=QQ):
    return mx.convert(field, rows)


def test_commutator_matrix_matches_definition():
    A = M([[1, 2], [3, 4]])
    X = M([[0, 1], [5, 7]])
    direct = mx.mat_sub(mx.mat_mul(A, X, QQ), mx.mat_mul(X, A, QQ))
    assert mx.mat_vec(commutator_matrix(A, QQ), mx.vectorize(X), QQ) == mx.vectorize(direct)


def test_centralizer_examples():
    assert centralizer_basis(mx.identity(QQ, 3)).dim == 9
    C = centralizer_basis(M(JORDAN2))
    assert C.dim == 2 and C == MatrixSpaceBasis.from_matrices([mx.identity(QQ, 2), M(JORDAN2)], 2, QQ)
    D = centralizer_basis(M([[1, 0], [0, 2]]))
    assert D.dim == 2 and all(X[0][1] == 0 and X[1][0] == 0 for X in D.elements)


def test_double_centralizer_examples():
    assert double_centralizer_basis(mx.identity(QQ, 3)).dim == 1
    assert double_centralizer_basis(M(JORDAN3)).dim == 3
    assert double_centralizer_basis(M(JORDAN3)) == poly_algebra_basis(M(JORDAN3))
    assert double_centralizer_basis(M([[1, 0, 0], [0, 2, 0], [0, 0, 3]])).dim == 3


def test_poly_algebra_examples():
    assert poly_algebra_basis(mx.zeros(QQ, 2)).dim == 1
    assert poly_algebra_basis(M(JORDAN3)).dim == 3
    assert poly_algebra_basis(mx.identity(QQ, 2)).elements == [mx.identity(QQ, 2)]


def test_double_cent_equals_poly_examples():
    F2 = GF(2)
    for entries in itertools.product(range(2), repeat=4):
        A = M([list(entries[:2]), list(entries[2:])], F2)
        eq, dims = double_cent_equals_poly(A)
        assert eq and dims[0] == dims[1]
    assert double_cent_equals_poly(mx.identity(QQ, 3)) == (True, (1, 1))
    assert double_cent_equals_poly(mx.companion(Poly.parse("x^3 - x", QQ))) == (True, (3, 3))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([0, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), matrices(p, 1, 3))))
def test_centralizer_properties(pm):
    p, A = pm
    F = QQ if p == 0 else GF(p)
    Af = mx.convert(F, A)
    C = centralizer_basis(Af)
    K = poly_algebra_basis(Af)
    assert K.is_subspace_of(C)
    assert K.dim == min_poly_degree_oracle(A, p)
    els = C.elements
    for X, Y in itertools.islice(itertools.product(els, els), 12):
        assert mx.mat_mul(X, Af, F) == mx.mat_mul(Af, X, F)
        assert C.contains(mx.mat_mul(X, Y, F))
    eq, (d1, d2) = double_cent_equals_poly(Af)
    assert eq and d1 == d2 == K.dim


def test_double_centralizer_preserves_blocks():
    A = mx.block_diagonal([M(JORDAN2), M([[5]])], QQ)
    for X in double_centralizer_basis(A).elements:
        assert X[0][2] == X[1][2] == X[2][0] == X[2][1] == 0


def test_closure_membership_examples():
    T = MatrixOperator(QQ, JORDAN3)
    S = MatrixOperator(QQ, mx.mat_mul(M(JORDAN3), M(JORDAN3), QQ))
    r = closure_poly_membership(T, S, T.default_seeds(), Poly.parse("x^3", QQ))
    assert r.member and r.q == Poly.parse("x^2", QQ)
    C = mx.companion(Poly.parse("x^2 - 3*x + 1", QQ))
    T, S = MatrixOperator(QQ, C), MatrixOperator(QQ, mx.inverse(C, QQ))
    r = closure_poly_membership(T, S, T.default_seeds(), Poly.parse("x^2 - 3*x + 1", QQ))
    assert r.member and r.q == Poly.parse("3 - x", QQ)


def test_closure_membership_rejects_noncommuting():
    T = MatrixOperator(QQ, [[1, 0], [0, 2]])
    S = MatrixOperator(QQ, [[0, 1], [0, 0]])
    r = closure_poly_membership(T, S, T.default_seeds(), Poly.parse("x^2 - 3*x + 2", QQ))
    assert r.outcome == "not_in_closure"


def test_closure_membership_checks_annihilator():
    T = MatrixOperator(QQ, JORDAN3)
    with pytest.raises(ValueError):
        closure_poly_membership(T, T, T.default_seeds(), Poly.parse("x^2", QQ))


def test_bilateral_inverse_degree_growth():
    ev = bilateral_inverse_evidence(QQ, [1, 2, 3, 4, 5], fuel=16)
    assert ev["truncation_degrees"] == [2, 4, 6, 8, 10]
    assert ev["degree_growth"] and ev["not_in_closure"]
    assert ev["direct"]["outcome"] == "not_in_closure"


def test_laurent_probe_examples():
    r = laurent_centralizer_probe(bilateral_shift(QQ, 3), 5)
    assert r.commutes and r.matches and r.coefficients == {3: 1}
    r = laurent_centralizer_probe(laurent_shift(QQ, {1: 1, -1: 1}), 4)
    assert r.matches and r.coefficients == {1: 1, -1: 1}
    proj = ColumnMapOperator(QQ, INT, {0: SparseVec.basis(QQ, INT, 0)}, default=laurent_shift(QQ, {}))
    r = laurent_centralizer_probe(proj, 2)
    assert not r.commutes and 1 in r.failures and not r.matches
    with pytest.raises(ValueError):
        laurent_centralizer_probe(bilateral_shift(QQ), 0)


def test_open_question_probe_is_evidence_only():
    T = MatrixOperator(QQ, JORDAN2)
    cands = [MatrixOperator(QQ, X) for X in double_centralizer_basis(M(JORDAN2)).elements]
    rep = open_question_probe(T, cands, T.default_seeds())
    assert rep["verdict"] is None and rep["kind"] == "evidence_only"
    assert all(o["commutes_on_probes"] for o in rep["observations"])
