import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from triax.estimators import ShiftBlockDecomposer, SimultaneousTriangularizer, Triangularizer
from triax.exactfield import QQ


def test_get_params_and_clone():
    est = Triangularizer(field="F5", fuel=10)
    assert est.get_params() == {"field": "F5", "seeds": None, "fuel": 10}
    assert clone(est).get_params() == est.get_params()
    assert ShiftBlockDecomposer(cyclic=False).get_params()["cyclic"] is False


def test_not_fitted():
    with pytest.raises(NotFittedError):
        Triangularizer().transform([[1, 0]])


def test_fit_transform_triangular():
    M = [[2, 1, 0], [0, 2, 0], [0, 0, 3]]
    est = Triangularizer().fit(M)
    assert est.outcome_ == "triangularizable"
    R = est.triangular_matrix()
    assert all(R[i][j] == 0 for i in range(3) for j in range(i))
    coords = est.transform([[1, 0, 0], [0, 0, 1]])
    B = est.basis_.vectors
    for c, v in zip(coords, [[1, 0, 0], [0, 0, 1]]):
        recon = [sum(c[k] * B[k][i] for k in range(3)) for i in range(3)]
        assert recon == [QQ(x) for x in v]


def test_not_triangularizable_has_no_basis():
    est = Triangularizer().fit([[0, -1], [1, 0]])
    assert est.outcome_ == "not_triangularizable"
    with pytest.raises(NotFittedError):
        est.transform([[1, 0]])


def test_shift_blocks_and_simultaneous():
    est = ShiftBlockDecomposer().fit([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert est.reassembles_ and [len(b.vectors) for b in est.blocks_] == [3]
    sim = SimultaneousTriangularizer().fit([[[1, 1], [0, 1]], [[2, 3], [0, 2]]])
    assert sim.outcome_ == "triangularizable" and len(sim.basis_.vectors) == 2
