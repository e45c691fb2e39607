from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from triax.exactfield import (
    GF,
    QQ,
    FieldError,
    FieldSpec,
    ModInt,
    NotCoprimeError,
    Poly,
    bezout_family,
    irreducible_factors,
    irreducible_witness,
    parse_field,
    poly_ext_gcd,
    poly_gcd,
    split_linear,
    squarefree_part,
)

X = sympy.Symbol("x")


def P(text, field=QQ):
    return Poly.parse(text, field)


def to_sympy(f: Poly):
    if f.field.is_rational:
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)] or [0], X)
    return sympy.Poly([int(c) for c in reversed(f.coeffs)] or [0], X, modulus=f.field.characteristic)


def polys(field, max_deg=5):
    if field.is_rational:
        entry = st.integers(-4, 4)
    else:
        entry = st.integers(0, field.characteristic - 1)
    return st.lists(entry, min_size=0, max_size=max_deg + 1).map(lambda cs: Poly(field, cs))


# -- fields and scalars


def test_field_construction_checks_primality():
    with pytest.raises(FieldError):
        FieldSpec(4)
    with pytest.raises(FieldError):
        FieldSpec(1)
    assert GF(7).characteristic == 7
    assert QQ.characteristic == 0


def test_scalar_canonical_forms():
    assert QQ("-6/4") == Fraction(-3, 2)
    assert QQ("-6/4").denominator == 2
    with pytest.raises(FieldError):
        QQ("6/-4")
    a = GF(5)(-1)
    assert isinstance(a, ModInt) and int(a) == 4
    assert GF(5)("1/2") == 3  # 2 * 3 = 6 = 1
    assert parse_field("F5") == GF(5) and parse_field("Q") == QQ and parse_field("GF(7)") == GF(7)


def test_canonical_scalar_order():
    F5 = GF(5)
    assert sorted(F5.elements(), key=F5.sort_key) == [F5(i) for i in range(5)]
    vals = [QQ(2), QQ(-1), QQ("1/2")]
    assert sorted(vals, key=QQ.sort_key) == [QQ(-1), QQ("1/2"), QQ(2)]


def test_poly_normalization_and_text():
    f = Poly(QQ, [1, -2, 0, 1, 0, 0])
    assert f.degree == 3 and str(f) == "x^3 - 2*x + 1"
    assert P("x^3 - 2*x + 1") == f
    assert list(P("1/2*x - 3/4").coeffs) == [Fraction(-3, 4), Fraction(1, 2)]
    assert Poly(QQ, []).degree == -1 and Poly(QQ, [0, 0]).is_zero()


# -- extended gcd


def test_ext_gcd_spec_example_q():
    d, u, w = poly_ext_gcd(P("x - 1"), P("x + 1"))
    assert d == P("1") and u == P("-1/2") and w == P("1/2")


def test_ext_gcd_self():
    f = P("2*x^2 + 4")
    d, u, w = poly_ext_gcd(f, f)
    assert d == f.monic()
    assert u * f + w * f == d


def test_ext_gcd_f5_example():
    F5 = GF(5)
    f, g = P("x^2 + 1", F5), P("x", F5)
    d, u, w = poly_ext_gcd(f, g)
    assert d == P("1", F5)
    assert u * f + w * g - d == Poly(F5, [])


def test_ext_gcd_errors():
    with pytest.raises(FieldError):
        poly_ext_gcd(Poly(QQ, []), Poly(QQ, []))
    with pytest.raises(FieldError):
        poly_ext_gcd(P("x"), P("x", GF(5)))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([QQ, GF(2), GF(5), GF(31)]).flatmap(lambda F: st.tuples(polys(F), polys(F))))
def test_ext_gcd_identity_and_sympy_agreement(fg):
    f, g = fg
    if f.is_zero() and g.is_zero():
        return
    d, u, w = poly_ext_gcd(f, g)
    assert u * f + w * g - d == Poly(f.field, [])
    assert d.lc == 1
    ref = sympy.gcd(to_sympy(f), to_sympy(g))
    assert d.degree == ref.degree()


# -- Bezout family


def test_bezout_example():
    hs = bezout_family([P("x"), P("x - 1")])
    assert hs == [P("-1"), P("1")]


def test_bezout_singleton():
    hs = bezout_family([P("2*x - 3")])
    # g_1 is the empty product 1, so h_1 = 1
    assert hs == [P("1")]


def test_bezout_f5_pair():
    F5 = GF(5)
    fs = [P("x - 2", F5), P("x - 3", F5)]
    hs = bezout_family(fs)
    total = hs[0] * fs[1] + hs[1] * fs[0]
    assert total == P("1", F5)


def test_bezout_reports_offending_pair():
    with pytest.raises(NotCoprimeError) as exc:
        bezout_family([P("x"), P("x - 1"), P("x^2 - x")])
    i, j = exc.value.pair
    assert (i, j) == (0, 2)
    assert exc.value.gcd == P("x")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=4, unique=True),
       st.lists(st.integers(1, 3), min_size=4, max_size=4))
def test_bezout_identity_distinct_linear_powers(roots, mults):
    F5 = GF(5)
    fs = [Poly.linear(F5, F5(r)) ** m for r, m in zip(roots, mults)]
    hs = bezout_family(fs)
    total = Poly(F5, [])
    for i, h in enumerate(hs):
        g = Poly.const(F5, 1)
        for j, f in enumerate(fs):
            if j != i:
                g = g * f
        total = total + h * g
    assert total == Poly.const(F5, 1)


# -- splitting


def test_split_examples():
    r = split_linear(P("x^2 - 1"))
    assert r.splits and r.roots == ((QQ(-1), 1), (QQ(1), 1))
    r = split_linear(P("x^2 + 1"))
    assert not r.splits and r.witness == P("x^2 + 1")
    F5 = GF(5)
    r = split_linear(P("x^2 + 1", F5))
    assert r.roots == ((F5(2), 1), (F5(3), 1))


def test_split_constant_is_error():
    with pytest.raises(FieldError):
        split_linear(P("3"))


def test_split_rational_roots_with_multiplicity():
    f = P("x - 1/2") ** 2 * P("3*x + 2")
    r = split_linear(f)
    assert r.roots == ((QQ("-2/3"), 1), (QQ("1/2"), 2))


def test_split_partial_then_witness():
    f = P("x - 1") * P("x^2 - 2")
    r = split_linear(f)
    assert not r.splits and r.roots == ((QQ(1), 1),) and r.witness == P("x^2 - 2")


def test_irreducible_witness_quartic():
    f = P("x^2 + 1") * P("x^2 - 3")
    w = irreducible_witness(f)
    assert w in (P("x^2 + 1"), P("x^2 - 3"))
    assert sympy.Poly(to_sympy(w).as_expr(), X).is_irreducible


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 31]).flatmap(
    lambda p: st.lists(st.integers(0, p - 1), min_size=2, max_size=7).map(lambda cs: Poly(GF(p), cs))))
def test_split_agrees_with_exhaustive_roots(f):
    if f.degree < 1:
        return
    F = f.field
    r = split_linear(f)
    brute = {a for a in F.elements() if not f(a)}
    assert {a for a, _ in r.roots} == brute
    if r.splits:
        prod = Poly.const(F, 1)
        for a, m in r.roots:
            prod = prod * Poly.linear(F, a) ** m
        assert prod == f.monic()
    else:
        assert r.witness.degree >= 2
        assert not any(not r.witness(a) for a in F.elements())
        assert f.monic() % r.witness == Poly(F, [])


# -- squarefree part


def test_squarefree_examples():
    assert squarefree_part(P("x - 1") ** 2) == P("x - 1")
    assert squarefree_part(P("x^2 - 1")) == P("x^2 - 1")
    F2 = GF(2)
    assert squarefree_part(P("x^3", F2)) == P("x", F2)


def test_squarefree_char_p_pth_power_factor():
    F3 = GF(3)
    f = P("x^2 + 1", F3) ** 3 * P("x - 1", F3)
    assert squarefree_part(f) == (P("x^2 + 1", F3) * P("x - 1", F3)).monic()


@settings(max_examples=120, deadline=None)
@given(st.sampled_from([QQ, GF(2), GF(3), GF(5)]).flatmap(lambda F: polys(F, 6)))
def test_squarefree_matches_factor_oracle(f):
    if f.degree < 1:
        return
    expected = Poly.const(f.field, 1)
    for fac, _ in irreducible_factors(f):
        expected = expected * fac
    assert squarefree_part(f) == expected.monic()
    # the factor list itself is checked against sympy's
    ref = to_sympy(f).factor_list()[1]
    assert sorted(fac.degree for fac, _ in irreducible_factors(f)) == sorted(g.degree() for g, _ in ref)
