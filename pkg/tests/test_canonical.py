import pytest
from hypothesis import given, settings, strategies as st

from triax import matrix as mx
from triax.canonical import NotAnnihilated, cyclic_decomposition, reassemble, shift_block_form
from triax.exactfield import GF, QQ, Poly, split_linear
from triax.linspace import NAT, SparseVec, direct_sum_check, span
from triax.operators import MatrixOperator, block_diag
from triax.triangulate import SplitFailure, min_poly_matrix, saturate, triangularize

JORDAN3 = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]


def M(rows, field=QQ):
    return mx.convert(field, rows)


def test_shift_block_examples():
    blocks = shift_block_form(M(JORDAN3))
    assert len(blocks) == 1 and blocks[0].eigenvalue == 0 and blocks[0].length == 3
    assert [str(v) for v in blocks[0].vectors] == ["{0: 1}", "{1: 1}", "{2: 1}"]
    blocks = shift_block_form(M([[1, 1], [0, 1]]))
    assert len(blocks) == 1 and blocks[0].eigenvalue == 1 and blocks[0].length == 2
    T = MatrixOperator(QQ, [[1, 1], [0, 1]])
    assert blocks[0].check(T)
    with pytest.raises(SplitFailure) as exc:
        shift_block_form(M([[0, -1], [1, 0]]))
    assert exc.value.witness == Poly.parse("x^2 + 1", QQ)


def test_cyclic_examples():
    blocks = cyclic_decomposition(M([[0, 0], [0, 0]]), Poly.parse("x", QQ))
    assert [b.span_dim for b in blocks] == [1, 1]
    blocks = cyclic_decomposition(M(JORDAN3), Poly.parse("x^3", QQ))
    assert len(blocks) == 1 and str(blocks[0].generator) == "{2: 1}"
    assert [str(v) for v in blocks[0].vectors] == ["{2: 1}", "{1: 1}", "{0: 1}"]
    blocks = cyclic_decomposition(M([[1, 0], [0, 2]]), Poly.parse("x^2 - 3*x + 2", QQ))
    assert all(b.span_dim <= 2 for b in blocks) and sum(b.span_dim for b in blocks) == 2
    assert direct_sum_check([b.space() for b in blocks])


def test_cyclic_requires_annihilator():
    with pytest.raises(NotAnnihilated):
        cyclic_decomposition(M(JORDAN3), Poly.parse("x^2", QQ))


def test_canonical_on_periodic_generator_hull():
    T = block_diag(QQ, [[[2, 1], [0, 2]], [[3]]])
    h = saturate(T, span([SparseVec.basis(QQ, NAT, i) for i in (1, 2, 4)]))
    blocks = shift_block_form(h)
    assert all(b.check(T) for b in blocks)
    assert sorted((str(b.eigenvalue), b.length) for b in blocks) == [("2", 2), ("2", 2), ("3", 1)]
    assert reassemble(h, blocks)[2]
    cyc = cyclic_decomposition(h, Poly.parse("x^3 - 7*x^2 + 16*x - 12", QQ))
    assert direct_sum_check([b.space() for b in cyc]) and all(b.span_dim <= 3 for b in cyc)


@settings(max_examples=120, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(
    lambda p: st.tuples(st.just(p), st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n)))))
def test_canonical_properties(pa):
    p, A = pa
    F = GF(p)
    Af = mx.convert(F, A)
    T = MatrixOperator(F, Af)
    mp = min_poly_matrix(Af, F)
    splits = split_linear(mp).splits
    assert splits == triangularize(T, T.default_seeds()).triangularizable
    if splits:
        blocks = shift_block_form(Af)
        assert all(b.check(T) for b in blocks)
        assert sum(b.length for b in blocks) == len(A)
        P, J, ok = reassemble(Af, blocks)
        assert ok
    else:
        with pytest.raises(SplitFailure):
            shift_block_form(Af)
    cyc = cyclic_decomposition(Af, mp)
    assert direct_sum_check([b.space() for b in cyc])
    assert sum(b.span_dim for b in cyc) == len(A)
    assert all(b.span_dim <= mp.degree for b in cyc)
    # invariant factors divide their predecessors
    for a, b in zip(cyc, cyc[1:]):
        assert a.annihilator % b.annihilator == Poly(F, [])
