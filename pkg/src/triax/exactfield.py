"""Exact scalars and univariate polynomials over Q and GF(p).

Scalars over Q are :class:`fractions.Fraction` values; scalars over GF(p) are
:class:`ModInt` residues.  Both support the ordinary arithmetic operators, so
the linear-algebra layers above this module are written once for both fields.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

__all__ = [
    "FieldError",
    "FieldSpec",
    "ModInt",
    "Poly",
    "QQ",
    "GF",
    "SplitResult",
    "NotCoprimeError",
    "parse_field",
    "poly_ext_gcd",
    "poly_gcd",
    "poly_lcm",
    "bezout_family",
    "cofactors",
    "split_linear",
    "squarefree_part",
    "irreducible_witness",
    "irreducible_factors",
]

MAX_EXHAUSTIVE_PRIME = 2 ** 16


class FieldError(ValueError):
    """Raised for malformed fields, mismatched fields and bad scalar input."""


class NotCoprimeError(FieldError):
    def __init__(self, i, j, gcd):
        self.pair = (i, j)
        self.gcd = gcd
        super().__init__(f"factors {i} and {j} share the factor {gcd}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class ModInt:
    """Residue class modulo a prime ``p``, stored in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModInt):
            if other.p != self.p:
                raise FieldError(f"cannot mix GF({self.p}) and GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction) and other.denominator == 1:
            return other.numerator
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.v * o, self.p)

    __rmul__ = __mul__

    def inverse(self) -> ModInt:
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return ModInt(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        o %= self.p
        if o == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return ModInt(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(o, self.p) / self

    def __neg__(self):
        return ModInt(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ModInt(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModInt):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"ModInt({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: ``Q`` (characteristic 0) or ``GF(p)``."""

    characteristic: int = 0

    def __post_init__(self):
        c = self.characteristic
        if c != 0 and not _is_prime(c):
            raise FieldError(f"field characteristic {c} is not prime")
        if c != 0 and c > 2 ** 62:
            raise FieldError("characteristic too large for this engine")

    @property
    def kind(self) -> str:
        return "Rationals" if self.characteristic == 0 else "PrimeField"

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def tag(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    def __str__(self):
        return self.tag

    def __call__(self, value):
        """Convert ``value`` (int, Fraction, ModInt or ``"a/b"`` string)."""
        p = self.characteristic
        if isinstance(value, str):
            value = _parse_rational(value)
        if isinstance(value, bool):
            value = int(value)
        if p == 0:
            if isinstance(value, ModInt):
                raise FieldError("cannot convert a GF(p) residue to Q")
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise FieldError(f"cannot convert {value!r} to Q")
        if isinstance(value, ModInt):
            if value.p != p:
                raise FieldError(f"cannot mix GF({value.p}) and GF({p})")
            return value
        if isinstance(value, int):
            return ModInt(value, p)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise FieldError(f"{value} has no image in GF({p})")
            return ModInt(value.numerator, p) / value.denominator
        raise FieldError(f"cannot convert {value!r} to GF({p})")

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def contains(self, a) -> bool:
        if self.characteristic == 0:
            return isinstance(a, Fraction)
        return isinstance(a, ModInt) and a.p == self.characteristic

    def elements(self):
        """All elements of GF(p) in residue order."""
        if self.characteristic == 0:
            raise FieldError("Q is infinite")
        return [ModInt(i, self.characteristic) for i in range(self.characteristic)]

    def sort_key(self, a):
        """Canonical scalar order: by residue for GF(p), by value for Q."""
        return a.v if isinstance(a, ModInt) else a

    def format(self, a) -> str:
        return str(a)


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def parse_field(tag: str) -> FieldSpec:
    """Parse ``Q`` or ``F<p>`` (``F5``, ``F101``)."""
    t = tag.strip()
    if t in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"F(?:_)?\(?(\d+)\)?", t) or re.fullmatch(r"GF\(?(\d+)\)?", t)
    if not m:
        raise FieldError(f"unknown field tag {tag!r}; expected Q or F<p>")
    return FieldSpec(int(m.group(1)))


def _parse_rational(text: str) -> Fraction:
    s = text.strip().replace(" ", "")
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise FieldError(f"malformed scalar {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise FieldError(f"zero denominator in {text!r}") from None


# ---------------------------------------------------------------------------
# polynomials


@total_ordering
class Poly:
    """Dense univariate polynomial, coefficients stored low degree first.

    The zero polynomial has no coefficients and degree ``-1``.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field, coeffs):
        obj = cls.__new__(cls)
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        obj.field = field
        obj.coeffs = tuple(cs)
        return obj

    @classmethod
    def x(cls, field):
        return cls._raw(field, [field.zero, field.one])

    @classmethod
    def const(cls, field, c):
        return cls._raw(field, [field(c)])

    @classmethod
    def linear(cls, field, root):
        """``x - root``."""
        return cls._raw(field, [-field(root), field.one])

    @classmethod
    def from_roots(cls, field, roots):
        out = cls.const(field, 1)
        for a, m in roots:
            out = out * cls.linear(field, a) ** m
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        inv = 1 / self.lc
        return Poly._raw(self.field, [c * inv for c in self.coeffs])

    def _check(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.field, other)
        if other.field != self.field:
            raise FieldError(f"polynomials over {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.field(other)
            return Poly._raw(self.field, [a * c for a in self.coeffs])
        other = self._check(other)
        if not self.coeffs or not other.coeffs:
            return Poly._raw(self.field, [])
        zero = self.field.zero
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        out = Poly.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv = 1 / other.lc
        if len(rem) - 1 < dq:
            return Poly._raw(self.field, []), self
        q = [self.field.zero] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv
            if not c:
                continue
            q[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - c * b
        return Poly._raw(self.field, q), Poly._raw(self.field, rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Poly:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other) -> bool:
        return (other % self).is_zero()

    def __call__(self, a):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def derivative(self) -> Poly:
        return Poly._raw(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, ModInt)):
            return self == Poly.const(self.field, other)
        return NotImplemented

    def __lt__(self, other):
        return self._key() < other._key()

    def _key(self):
        return (self.degree, [self.field.sort_key(c) for c in reversed(self.coeffs)])

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({self.field.tag}, {self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            neg = self.field.is_rational and c < 0
            mag = -c if neg else c
            if i == 0:
                term = str(mag)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                term = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(f"-{term}" if neg else term)
            else:
                parts.append(f"- {term}" if neg else f"+ {term}")
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str, field: FieldSpec) -> Poly:
        """Parse ``x^3 - 2*x + 1`` style text (coefficients int or ``a/b``)."""
        s = text.replace(" ", "")
        if not s:
            raise FieldError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        terms = re.findall(r"[+-][^+-]+", s)
        if "".join(terms) != s:
            raise FieldError(f"malformed polynomial {text!r}")
        out = Poly._raw(field, [])
        for t in terms:
            m = re.fullmatch(r"([+-])(?:(\d+(?:/\d+)?)\*?)?(x(?:\^(\d+))?)?", t)
            if not m or (m.group(2) is None and m.group(3) is None):
                raise FieldError(f"malformed term {t!r} in {text!r}")
            sign, c, mono, e = m.groups()
            coef = _parse_rational(c) if c else Fraction(1)
            if sign == "-":
                coef = -coef
            deg = 0 if mono is None else (int(e) if e else 1)
            term = [field.zero] * deg + [field(coef)]
            out = out + Poly._raw(field, term)
        return out


def _same_field(*ps):
    f = ps[0].field
    for p in ps[1:]:
        if p.field != f:
            raise FieldError(f"polynomials over {f} and {p.field}")
    return f


def poly_ext_gcd(f: Poly, g: Poly):
    """Extended Euclid: return ``(d, u, w)`` with ``u*f + w*g == d``, ``d`` monic."""
    field = _same_field(f, g)
    if f.is_zero() and g.is_zero():
        raise FieldError("gcd of two zero polynomials is undefined")
    one, zero = Poly.const(field, 1), Poly._raw(field, [])
    r0, r1 = f, g
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def poly_gcd(f: Poly, g: Poly) -> Poly:
    if f.is_zero() and g.is_zero():
        return f
    return poly_ext_gcd(f, g)[0]


def poly_lcm(f: Poly, g: Poly) -> Poly:
    if f.is_zero() or g.is_zero():
        return Poly._raw(f.field, [])
    return (f * g).exact_div(poly_gcd(f, g)).monic()


def bezout_family(fs):
    """Return ``h_i`` with ``sum(h_i * g_i) == 1`` where ``g_i`` is the product
    of all ``f_j`` with ``j != i``.

    Raises :class:`NotCoprimeError` naming the first non-coprime pair.
    """
    fs = list(fs)
    if not fs:
        raise FieldError("empty factor list")
    field = _same_field(*fs)
    for f in fs:
        if f.is_constant():
            raise FieldError(f"factor {f} is constant")
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            d = poly_gcd(fs[i], fs[j])
            if d.degree > 0:
                raise NotCoprimeError(i, j, d)
    # With sum h_i * (P/f_i) = 1 for the prefix product P and u*P + w*f = 1,
    # the extended family is [w*h_i ...] + [u].
    hs = [Poly.const(field, 1)]
    prod = fs[0]
    for f in fs[1:]:
        _, u, w = poly_ext_gcd(prod, f)
        hs = [h * w for h in hs] + [u]
        prod = prod * f
    # Reducing h_i mod f_i keeps the identity: every term then has degree
    # below deg(prod), so the sum is still exactly 1.
    return [h % f if f.degree > 0 else h for h, f in zip(hs, fs)]


def cofactors(fs):
    """``g_i = prod(f_j for j != i)``."""
    field = fs[0].field
    out = []
    for i in range(len(fs)):
        g = Poly.const(field, 1)
        for j, f in enumerate(fs):
            if j != i:
                g = g * f
        out.append(g)
    return out


# ---------------------------------------------------------------------------
# splitting


@dataclass(frozen=True)
class SplitResult:
    """Outcome of :func:`split_linear`.

    ``roots`` lists ``(root, multiplicity)`` in canonical scalar order.  When
    the polynomial does not split, ``witness`` is a nonlinear irreducible
    factor and ``roots`` holds the linear factors found before it.
    """

    poly: Poly
    roots: tuple
    witness: Poly | None = None

    @property
    def splits(self) -> bool:
        return self.witness is None


def _integer_divisors(n: int):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_root_candidates(f: Poly):
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    a0, an = ints[0], ints[-1]
    cands = set()
    for r in _integer_divisors(a0):
        for s in _integer_divisors(an):
            cands.add(Fraction(r, s))
            cands.add(Fraction(-r, s))
    return sorted(cands)


def _find_root(f: Poly):
    field = f.field
    if not f.coeff(0):
        return field.zero
    if field.is_rational:
        for c in _rational_root_candidates(f):
            if not f(c):
                return c
        return None
    p = field.characteristic
    if p > MAX_EXHAUSTIVE_PRIME:
        raise FieldError(f"root search over GF({p}) exceeds the exhaustive limit")
    for a in field.elements():
        if not f(a):
            return a
    return None


def split_linear(f: Poly) -> SplitResult:
    """Extract every linear factor of ``f``.

    Over Q candidate roots come from the rational-root theorem on the primitive
    integer form; over GF(p) every residue is tried.  The search restarts on
    the deflated quotient after each root.
    """
    if f.is_constant():
        raise FieldError("split_linear needs a nonconstant polynomial")
    rest = f.monic()
    found = {}
    while rest.degree > 0:
        a = _find_root(rest)
        if a is None:
            break
        lin = Poly.linear(f.field, a)
        m = 0
        while rest.degree > 0:
            q, r = divmod(rest, lin)
            if not r.is_zero():
                break
            rest = q
            m += 1
        found[a] = found.get(a, 0) + m
    roots = tuple(sorted(found.items(), key=lambda t: f.field.sort_key(t[0])))
    if rest.degree <= 0:
        return SplitResult(f.monic(), roots, None)
    return SplitResult(f.monic(), roots, irreducible_witness(rest))


def irreducible_factors(f: Poly):
    """``[(monic irreducible factor, multiplicity), ...]`` sorted by factor.

    Delegates to sympy's factorizer; used only where the full factorization is
    needed (witness selection, cyclic decomposition).
    """
    if f.is_constant():
        raise FieldError("irreducible_factors needs a nonconstant polynomial")
    import sympy

    x = sympy.Symbol("x")
    field = f.field
    out = []
    if field.is_rational:
        expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(f.coeffs))
        _, facs = sympy.factor_list(expr, x)
        for fac, m in facs:
            coeffs = sympy.Poly(fac, x).all_coeffs()
            out.append((Poly(field, [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
                                     for c in reversed(coeffs)]).monic(), int(m)))
    else:
        sp = sympy.Poly([int(c) for c in reversed(f.coeffs)], x, modulus=field.characteristic)
        _, facs = sp.factor_list()
        for fac, m in facs:
            out.append((Poly(field, [int(c) for c in reversed(fac.all_coeffs())]).monic(), int(m)))
    return sorted(out)


def irreducible_witness(g: Poly) -> Poly:
    """A monic irreducible factor of a root-free polynomial ``g`` (degree >= 2).

    Degrees 2 and 3 without roots are irreducible outright; larger degrees go
    through :func:`irreducible_factors` and the least nonlinear factor wins.
    """
    g = g.monic()
    if g.degree <= 3:
        return g
    return min(fac for fac, _ in irreducible_factors(g) if fac.degree >= 2)


def _pth_root(f: Poly) -> Poly:
    # f(x) = h(x^p) over GF(p); coefficients are their own p-th roots.
    p = f.field.characteristic
    return Poly._raw(f.field, [f.coeffs[i] for i in range(0, len(f.coeffs), p)])


def squarefree_part(f: Poly) -> Poly:
    """Product of the distinct irreducible factors of ``f``, monic."""
    if f.is_constant():
        raise FieldError("squarefree_part needs a nonconstant polynomial")
    f = f.monic()
    df = f.derivative()
    if df.is_zero():
        # char p: f = h(x)^p
        return squarefree_part(_pth_root(f))
    g = poly_gcd(f, df)
    core = f.exact_div(g).monic()
    if g.degree == 0 or f.field.is_rational:
        return core
    # Factors of f whose multiplicity is a multiple of p survive in g but not
    # in core; peel off what core already covers and recurse on the rest.
    rest = g
    while True:
        d = poly_gcd(rest, core)
        if d.degree <= 0:
            break
        rest = rest.exact_div(d)
    if rest.degree <= 0:
        return core
    return poly_lcm(core, squarefree_part(rest))
