import pytest
from hypothesis import given, settings, strategies as st

from triax import matrix as mx
from triax.exactfield import GF, QQ
from triax.linspace import (
    INT,
    NAT,
    CoordinateSystem,
    DomainMismatch,
    FlagChain,
    QuotientSpace,
    SparseVec,
    SubspaceBasis,
    coordinate_projection,
    direct_sum_check,
    finite,
    intersection,
    kernel_basis,
    quotient_coordinates,
    rref_insert,
    span,
)

from conftest import field_for, matrices, rank_exact


def e(i, field=QQ, domain=NAT):
    return SparseVec.basis(field, domain, i)


def test_zigzag_order_on_z():
    assert [INT.from_key(k) for k in range(7)] == [0, -1, 1, -2, 2, -3, 3]
    assert all(INT.from_key(INT.key(i)) == i for i in range(-20, 21))


def test_sparsevec_text_and_json():
    v = SparseVec.parse("{0: 1, 3: -2/5}", QQ, NAT)
    assert str(v) == "{0: 1, 3: -2/5}"
    assert SparseVec.from_json(v.to_json(), QQ, NAT) == v
    assert SparseVec(QQ, NAT, {2: 0}).is_zero()
    with pytest.raises(Exception):
        SparseVec.parse("{-1: 1}", QQ, NAT)


def test_rref_insert_examples():
    F2 = GF(2)
    b, known = rref_insert(SubspaceBasis(QQ, NAT), e(0))
    assert not known and b.rows == (e(0),)
    b2, known = rref_insert(b, e(0))
    assert known and b2 is b
    b = span([e(0, F2) + e(1, F2)])
    b, known = rref_insert(b, e(1, F2))
    assert not known and b.rows == (e(0, F2), e(1, F2))


def test_rref_insert_domain_mismatch():
    with pytest.raises(DomainMismatch):
        span([e(0)]).insert(e(0, QQ, INT))


def test_kernel_examples():
    assert kernel_basis(mx.zeros(QQ, 3), QQ).dim == 3
    assert kernel_basis(mx.identity(QQ, 3), QQ).dim == 0
    F2 = GF(2)
    k = kernel_basis(mx.convert(F2, [[1, 1], [1, 1]]), F2)
    assert k.rows == (SparseVec(F2, finite(2), {0: 1, 1: 1}),)


def test_direct_sum_examples():
    assert direct_sum_check([span([e(0)]), span([e(1)])])
    assert not direct_sum_check([span([e(0)]), span([e(0)])])
    M = mx.convert(QQ, [[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    parts = [kernel_basis(mx.mat_pow(mx.shift(M, a), 2, QQ), QQ) for a in (QQ(1), QQ(2))]
    assert [p.dim for p in parts] == [2, 1] and direct_sum_check(parts)


def test_coordinate_projection_examples():
    v = e(0) * 3 + e(2)
    assert coordinate_projection(v, 2) == 1
    assert coordinate_projection(v, 1) == 0
    F2 = GF(2)
    assert coordinate_projection(e(0, F2) + e(1, F2), 0) == 1


def test_quotient_coordinates_examples():
    U = span([e(0), e(1)])
    assert quotient_coordinates(U, U, e(0) + e(1)) == []
    assert quotient_coordinates(U, span([e(0)]), e(0) + e(1)) == [1]
    assert quotient_coordinates(U, SubspaceBasis(QQ, NAT), e(1)) == [0, 1]
    with pytest.raises(ValueError):
        quotient_coordinates(span([e(0)]), span([e(1)]), e(0))
    with pytest.raises(ValueError):
        quotient_coordinates(U, span([e(0)]), e(2))


def test_flag_chain_requires_strict_inclusion():
    FlagChain((SubspaceBasis(QQ, NAT), span([e(0)]), span([e(0), e(1)])))
    with pytest.raises(ValueError):
        FlagChain((span([e(0)]), span([e(1), e(2)])))


def test_coordinate_system_rejects_dependent_input():
    with pytest.raises(ValueError):
        CoordinateSystem([e(0), e(1), e(0) + e(1)])
    cs = CoordinateSystem([e(0) + e(1), e(1)])
    assert cs.express(e(0)) == [1, -1]
    assert cs.express(e(2)) is None


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([0, 2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), matrices(p, 1, 4))))
def test_rank_nullity_against_sympy(pm):
    p, M = pm
    F = field_for(p)
    Mf = mx.convert(F, M)
    k = kernel_basis(Mf, F)
    assert k.dim + rank_exact(M, p) == len(M[0])
    for r in k.rows:
        assert not any(mx.mat_vec(Mf, r.to_dense(len(M)), F))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=1, max_size=4),
       st.permutations(range(4)))
def test_echelon_form_is_canonical(rows, perm):
    dom = finite(4)
    vecs = [SparseVec.from_dense(QQ, dom, r) for r in rows]
    a = SubspaceBasis.from_vectors(QQ, dom, vecs)
    # a different spanning set of the same space: shuffled, rescaled, mixed
    mixed = [vecs[i % len(vecs)] * 3 + vecs[(i + 1) % len(vecs)] for i in perm[:len(vecs)]] + vecs[::-1]
    b = SubspaceBasis.from_vectors(QQ, dom, mixed)
    assert a == b
    pivots = [dom.key(r.pivot) for r in a.rows]
    assert pivots == sorted(set(pivots))
    for r in a.rows:
        assert r[r.pivot] == 1
        assert all(o[r.pivot] == 0 for o in a.rows if o is not r)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=3), st.lists(st.integers(0, 5), min_size=1, max_size=3))
def test_direct_sum_implies_trivial_intersection(a, b):
    dom = finite(6)
    F = GF(2)
    U = span([SparseVec.basis(F, dom, i) + SparseVec.basis(F, dom, (i + 1) % 6) for i in a])
    W = span([SparseVec.basis(F, dom, i) for i in b])
    if direct_sum_check([U, W]):
        assert intersection(U, W).dim == 0
    else:
        assert intersection(U, W).dim == U.dim + W.dim - span(list(U.rows) + list(W.rows)).dim


def test_insert_idempotent_on_span():
    b = span([e(0) + e(3), e(1)])
    v = (e(0) + e(3)) * 2 - e(1)
    b1, k1 = b.insert(v)
    b2, k2 = b1.insert(v)
    assert k1 and k2 and b1 == b2 == b


def test_quotient_space_lift_roundtrip():
    U = span([e(0), e(1), e(2)])
    W = span([e(0) + e(1)])
    Q = QuotientSpace(U, W)
    assert Q.dim == 2
    for c in ([1, 0], [0, 1], [2, -3]):
        assert Q.coordinates(Q.lift(c)) == c
