"""Exact arithmetic over the rationals.

Four value types live here:

* ``Fraction`` (from the standard library) is the coefficient field.
* :class:`Polynomial` is a canonical sparse multivariate polynomial.
* :class:`RationalFunction` is a quotient of two polynomials.
* :class:`TruncatedSeries` is a power series in one distinguished variable,
  cut off after a fixed order, with rational-function coefficients.

Equality of rational functions is decided by cross-multiplication, so no gcd
is ever needed for correctness.  :meth:`RationalFunction.simplify` runs a
multivariate gcd to keep expressions small and printable.

>>> a, b = var("a"), var("b")
>>> (1 / a + 1 / b) == (a + b) / (a * b)
True
>>> print((a + b) ** 2)
a^2 + 2*a*b + b^2
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import (
    DenominatorVanishes,
    DivisionByZeroFunction,
    MixedSeriesVariable,
    PoleAtPoint,
    UnboundVariable,
)

__all__ = [
    "Monomial",
    "Polynomial",
    "RationalFunction",
    "TruncatedSeries",
    "var",
    "const",
    "as_rf",
    "substitute",
    "evaluate",
    "rf_equal",
    "poly_gcd",
]

Monomial = Tuple[Tuple[str, int], ...]
Scalar = Union[int, Fraction]
ONE_MONO: Monomial = ()


def _norm(c):
    # keep integral coefficients as plain ints; Fraction arithmetic is much slower
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


@lru_cache(maxsize=1 << 16)
def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_div(m1: Monomial, m2: Monomial):
    """m1 / m2 if it is a monomial, else None."""
    d = dict(m1)
    for v, e in m2:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


def _mono_deg(m: Monomial) -> int:
    return sum(e for _, e in m)


@lru_cache(maxsize=1 << 16)
def _mono_key(m: Monomial):
    # graded lex on variable names: higher degree first, then larger exponent of the earliest name
    return (-_mono_deg(m), tuple((v, -e) for v, e in m))


def _mono_str(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


class Polynomial:
    """Sparse polynomial with rational coefficients.

    Terms are kept in a dict ``{monomial: coefficient}`` with no zero
    coefficients, so two equal polynomials always have equal dicts.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = _norm(c)
        self._terms: Dict[Monomial, Scalar] = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Scalar]) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Polynomial":
        return cls({ONE_MONO: c}) if c else cls()

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls._raw({((name, 1),): 1})

    # -- inspection
    @property
    def terms(self):
        """Terms as a list of (monomial, coefficient) in canonical order."""
        return sorted(self._terms.items(), key=lambda t: _mono_key(t[0]))

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONO in self._terms)

    def constant_value(self) -> Fraction:
        return Fraction(self._terms.get(ONE_MONO, 0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, name: str | None = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(_mono_deg(m) for m in self._terms)
        return max(dict(m).get(name, 0) for m in self._terms)

    def lead(self):
        m = min(self._terms, key=_mono_key)
        return m, self._terms[m]

    def leading_coefficient(self) -> Fraction:
        return Fraction(self.lead()[1]) if self._terms else Fraction(0)

    def coeffs_in(self, name: str) -> Dict[int, "Polynomial"]:
        """Split as sum of c_k * name^k with c_k free of ``name``."""
        out: Dict[int, Dict[Monomial, Scalar]] = {}
        for m, c in self._terms.items():
            k = 0
            rest = []
            for v, e in m:
                if v == name:
                    k = e
                else:
                    rest.append((v, e))
            out.setdefault(k, {})[tuple(rest)] = c
        return {k: Polynomial._raw(t) for k, t in out.items()}

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            self, other = other, self
        t = dict(self._terms)
        for m, c in other._terms.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = _norm(s)
            else:
                t.pop(m, None)
        return Polynomial._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return Polynomial()
        t: Dict[Monomial, Scalar] = {}
        get = t.get
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                t[m] = get(m, 0) + c1 * c2
        return Polynomial._raw({m: _norm(c) for m, c in t.items() if c})

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Polynomial":
        c = _norm(Fraction(c))
        if not c:
            return Polynomial()
        return Polynomial._raw({m: _norm(v * c) for m, v in self._terms.items()})

    def mul_monomial(self, mono: Monomial) -> "Polynomial":
        if not mono:
            return self
        return Polynomial._raw({_mono_mul(m, mono): c for m, c in self._terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- division helpers
    def divexact(self, d: "Polynomial"):
        """Return q with self == q*d, or None when d does not divide self."""
        if d.is_zero():
            raise DivisionByZeroFunction("division by the zero polynomial")
        if self.is_zero():
            return Polynomial()
        if d.is_constant():
            return self.scale(1 / d.constant_value())
        if d.is_monomial():
            (dm, dc), = d._terms.items()
            out = {}
            for m, c in self._terms.items():
                q = _mono_div(m, dm)
                if q is None:
                    return None
                out[q] = _norm(Fraction(c) / dc)
            return Polynomial._raw(out)
        # cheap rejection: degrees per variable
        for v in d.variables():
            if d.degree(v) > self.degree(v):
                return None
        dm, dc = d.lead()
        dc = Fraction(dc)
        rem = dict(self._terms)
        quot: Dict[Monomial, Scalar] = {}
        dterms = list(d._terms.items())
        while rem:
            m = min(rem, key=_mono_key)
            qm = _mono_div(m, dm)
            if qm is None:
                return None
            qc = _norm(Fraction(rem[m]) / dc)
            quot[qm] = qc
            for m2, c2 in dterms:
                mm = _mono_mul(qm, m2)
                s = rem.get(mm, 0) - qc * c2
                if s:
                    rem[mm] = _norm(s)
                else:
                    rem.pop(mm, None)
        return Polynomial._raw(quot)

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        it = iter(self._terms)
        try:
            first = dict(next(it))
        except StopIteration:
            return ONE_MONO
        for m in it:
            md = dict(m)
            for v in list(first):
                e = min(first[v], md.get(v, 0))
                if e:
                    first[v] = e
                else:
                    del first[v]
            if not first:
                break
        return tuple(sorted(first.items()))

    def integer_content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer coefficients."""
        if not self._terms:
            return Fraction(1)
        nums = 0
        dens = 1
        for c in self._terms.values():
            f = Fraction(c)
            nums = gcd(nums, f.numerator)
            dens = lcm(dens, f.denominator)
        return Fraction(nums, dens)

    # -- evaluation and printing
    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            t = Fraction(c)
            for v, e in m:
                if v not in point:
                    raise UnboundVariable(v)
                t *= Fraction(point[v]) ** e
            total += t
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.terms):
            c = Fraction(c)
            neg = c < 0
            a = -c if neg else c
            if not m:
                body = str(a)
            elif a == 1:
                body = _mono_str(m)
            else:
                body = f"{a}*{_mono_str(m)}"
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


# ----------------------------------------------------------------- gcd
def _content_in(p: Polynomial, name: str) -> Polynomial:
    g = Polynomial()
    for c in p.coeffs_in(name).values():
        g = poly_gcd(g, c)
        if g.is_constant():
            return Polynomial.const(1)
    return g


def _prem(a: Polynomial, b: Polynomial, name: str) -> Polynomial:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b in ``name``."""
    cb = b.coeffs_in(name)
    db = max(cb)
    lcb = cb[db]
    r = a
    steps = a.degree(name) - db + 1
    while not r.is_zero() and steps > 0:
        cr = r.coeffs_in(name)
        dr = max(cr)
        if dr < db:
            break
        t = cr[dr].mul_monomial(((name, dr - db),) if dr > db else ONE_MONO)
        r = r * lcb - t * b
        steps -= 1
    return r * lcb ** steps if steps > 0 else r


def _primitive(p: Polynomial) -> Polynomial:
    """Scale to coprime integer coefficients with positive leading coefficient."""
    if p.is_zero():
        return p
    c = p.integer_content()
    if p.leading_coefficient() < 0:
        c = -c
    return p.scale(1 / c)


_PRIME = (1 << 61) - 1


def _integer_terms(p: Polynomial) -> Dict[Monomial, int]:
    den = 1
    for c in p._terms.values():
        den = lcm(den, Fraction(c).denominator)
    return {m: int(c * den) for m, c in p._terms.items()}


def _image(terms: Dict[Monomial, int], name: str, point: Mapping[str, int]) -> list:
    """Univariate image in ``name`` over GF(_PRIME), dense, lowest degree first."""
    out: Dict[int, int] = {}
    for m, c in terms.items():
        k, val = 0, c % _PRIME
        for v, e in m:
            if v == name:
                k = e
            else:
                val = val * pow(point[v], e, _PRIME) % _PRIME
        out[k] = (out.get(k, 0) + val) % _PRIME
    top = max(out) if out else 0
    return [out.get(i, 0) for i in range(top + 1)]


def _gf_gcd_degree(a: list, b: list) -> int:
    def trim(u):
        while u and u[-1] == 0:
            u.pop()
        return u

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = pow(b[-1], _PRIME - 2, _PRIME)
        while len(a) >= len(b):
            f = a[-1] * inv % _PRIME
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - f * c) % _PRIME
            trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def _certainly_coprime(p: Polynomial, q: Polynomial, names) -> bool:
    """Prove gcd(p, q) = 1 from modular images; False means "not proven".

    If the leading coefficient of p in x does not vanish at the point, the
    image of any common factor keeps its x-degree, so a constant image gcd
    proves the common factor has degree 0 in x.  Degree 0 in every variable
    means the gcd is constant.
    """
    tp, tq = _integer_terms(p), _integer_terms(q)
    seed = 12345
    for name in sorted(names):
        others = sorted((p.variables() | q.variables()) - {name})
        for _attempt in range(2):
            seed = (seed * 6364136223846793005 + 1442695040888963407) % (1 << 64)
            point = {v: (seed >> (3 * i)) % (_PRIME - 2) + 2 for i, v in enumerate(others)}
            ip = _image(tp, name, point)
            if len(ip) - 1 != p.degree(name) or ip[-1] == 0:
                continue
            if _gf_gcd_degree(ip, _image(tq, name, point)) == 0:
                break
        else:
            return False
    return True


def _subresultant(a: Polynomial, b: Polynomial, name: str) -> Polynomial:
    """Last nonzero subresultant-PRS remainder of a, b (deg a >= deg b >= 1); 1 if it is free of name."""
    g = h = Polynomial.const(1)
    while True:
        delta = a.degree(name) - b.degree(name)
        r = _prem(a, b, name)
        if r.is_zero():
            return b
        if r.degree(name) <= 0:
            return Polynomial.const(1)
        nb = r.divexact(g * h ** delta)
        if nb is None:
            raise ArithmeticError("subresultant division was not exact")
        a, b = b, nb
        cb = a.coeffs_in(name)
        g = cb[max(cb)]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).divexact(h ** (delta - 1))
            if h is None:
                raise ArithmeticError("subresultant division was not exact")


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized by :func:`_primitive` (recursive subresultant PRS)."""
    if p.is_zero():
        return _primitive(q)
    if q.is_zero():
        return _primitive(p)
    if p.is_constant() or q.is_constant():
        return Polynomial.const(1)
    mc = _mono_gcd(p.monomial_content(), q.monomial_content())
    if mc:
        p = p.divexact(Polynomial._raw({p.monomial_content(): 1}))
        q = q.divexact(Polynomial._raw({q.monomial_content(): 1}))
        return poly_gcd(p, q).mul_monomial(mc)
    vp, vq = p.variables(), q.variables()
    only = (vp ^ vq)
    if only:
        name = min(only)
        if name in vp:
            return poly_gcd(_content_in(p, name), q)
        return poly_gcd(p, _content_in(q, name))
    if len(q) < len(p) or (len(q) == len(p) and q.degree() < p.degree()):
        p, q = q, p
    # quick divisibility test
    if q.divexact(p) is not None:
        return _primitive(p)
    if _certainly_coprime(p, q, vp):
        return Polynomial.const(1)
    name = min(vp, key=lambda v: (max(p.degree(v), q.degree(v)), v))
    cp = _content_in(p, name)
    cq = _content_in(q, name)
    c = poly_gcd(cp, cq)
    a = p.divexact(cp)
    b = q.divexact(cq)
    if a.degree(name) < b.degree(name):
        a, b = b, a
    g = _subresultant(a, b, name)
    if g.degree(name) <= 0:
        return _primitive(c)
    g = g.divexact(_content_in(g, name))
    return _primitive(g * c)


def _mono_gcd(m1: Monomial, m2: Monomial) -> Monomial:
    d2 = dict(m2)
    return tuple((v, min(e, d2[v])) for v, e in m1 if v in d2)


# ----------------------------------------------------------- rational functions
class RationalFunction:
    """Quotient num/den of polynomials.

    The pair is normalized cheaply on construction: integer coefficients with
    joint content 1, the common monomial factor cancelled, and a positive
    leading coefficient in the denominator.  Common polynomial factors may
    remain until :meth:`simplify` is called.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized: bool = False):
        num = num if isinstance(num, Polynomial) else Polynomial.const(Fraction(num))
        if den is None:
            den = Polynomial.const(1)
        elif not isinstance(den, Polynomial):
            den = Polynomial.const(Fraction(den))
        if den.is_zero():
            raise DivisionByZeroFunction("zero denominator")
        if not _normalized:
            num, den = _normalize_pair(num, den)
        self.num: Polynomial = num
        self.den: Polynomial = den

    # -- inspection
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value() / self.den.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def variables(self) -> frozenset:
        return self.num.variables() | self.den.variables()

    # -- arithmetic
    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction(Polynomial.const(other), _normalized=False)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        if other.den.is_constant() or self.den.is_constant():
            return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)
        q = self.den.divexact(other.den)
        if q is not None:
            return RationalFunction(self.num + other.num * q, self.den)
        q = other.den.divexact(self.den)
        if q is not None:
            return RationalFunction(self.num * q + other.num, other.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        # cancel whole numerator/denominator pairs when one divides the other
        if not d2.is_constant() and not n1.is_zero():
            q = n1.divexact(d2)
            if q is not None:
                n1, d2 = q, Polynomial.const(1)
        if not d1.is_constant() and not n2.is_zero():
            q = n2.divexact(d1)
            if q is not None:
                n2, d1 = q, Polynomial.const(1)
        return RationalFunction(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise DivisionByZeroFunction("cannot invert the zero function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZeroFunction(f"division of {self} by the zero function")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return rf_equal(self, other)

    def __hash__(self):
        s = self.simplify()
        return hash((s.num, s.den))

    # -- simplification and printing
    def simplify(self) -> "RationalFunction":
        """Cancel the polynomial gcd of numerator and denominator."""
        if self.den.is_constant() or self.num.is_zero():
            return self
        g = poly_gcd(self.num, self.den)
        if g.is_constant():
            return self
        return RationalFunction(self.num.divexact(g), self.den.divexact(g))

    def simplify_cheap(self) -> "RationalFunction":
        """Cancel when the denominator divides the numerator; no gcd."""
        if self.den.is_constant() or self.num.is_zero():
            return self
        q = self.num.divexact(self.den)
        if q is not None:
            return RationalFunction(q)
        return self

    def render(self) -> str:
        """Canonical text form, parseable by :func:`tetra.formulas.parse_expr`."""
        return _render(self.num, self.den)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"RationalFunction({self.render()!r})"

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        return evaluate(self, point)

    def substitute(self, bindings: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        return substitute(self, bindings)


def _normalize_pair(num: Polynomial, den: Polynomial):
    if num.is_zero():
        return num, Polynomial.const(1)
    mc = _mono_gcd(num.monomial_content(), den.monomial_content())
    if mc:
        m = Polynomial._raw({mc: 1})
        num = num.divexact(m)
        den = den.divexact(m)
    if den.is_constant():
        c = den.constant_value()
        return (num if c == 1 else num.scale(1 / c)), Polynomial.const(1)
    # clear coefficient denominators, then divide out the joint integer content
    scale = 1
    g = 0
    for p in (num, den):
        for c in p._terms.values():
            if type(c) is Fraction:
                scale = lcm(scale, c.denominator)
    for p in (num, den):
        for c in p._terms.values():
            g = gcd(g, int(c * scale))
    s = Fraction(scale, g)
    if den.leading_coefficient() < 0:
        s = -s
    if s != 1:
        num, den = num.scale(s), den.scale(s)
    return num, den


def _wrap(p: Polynomial) -> str:
    s = str(p)
    if len(p) > 1:
        return f"({s})"
    return s


def _render(num: Polynomial, den: Polynomial) -> str:
    if den.is_constant():
        return str(num)
    d = str(den)
    if not (den.is_monomial() and den.lead()[1] == 1 and "*" not in d):
        d = f"({d})"
    return f"{_wrap(num)}/{d}"


# ----------------------------------------------------------------- helpers
def var(name: str) -> RationalFunction:
    return RationalFunction(Polynomial.var(name), _normalized=True)


def const(c: Scalar) -> RationalFunction:
    return RationalFunction(Polynomial.const(Fraction(c)))


def as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    if isinstance(x, str):
        return var(x)
    return const(x)


def rf_equal(lhs, rhs) -> bool:
    """True iff lhs.num*rhs.den == rhs.num*lhs.den."""
    lhs, rhs = as_rf(lhs), as_rf(rhs)
    if lhs.den == rhs.den:
        return lhs.num == rhs.num
    return lhs.num * rhs.den == rhs.num * lhs.den


def _subst_poly(p: Polynomial, bindings: Mapping[str, RationalFunction]):
    """Substitute into a polynomial; returns (numerator, denominator) polynomials."""
    maxdeg: Dict[str, int] = {}
    for m in p._terms:
        for v, e in m:
            if v in bindings and e > maxdeg.get(v, 0):
                maxdeg[v] = e
    if not maxdeg:
        return p, Polynomial.const(1)
    cache: Dict[Tuple[str, int, int], Polynomial] = {}

    def pw(v, which, k):
        key = (v, which, k)
        if key not in cache:
            b = bindings[v]
            cache[key] = (b.num if which == 0 else b.den) ** k
        return cache[key]

    # group terms by the exponents of substituted variables
    groups: Dict[Tuple[Tuple[str, int], ...], Dict[Monomial, Scalar]] = {}
    for m, c in p._terms.items():
        sub = []
        keep = []
        for v, e in m:
            (sub if v in maxdeg else keep).append((v, e))
        groups.setdefault(tuple(sub), {})[tuple(keep)] = c
    total = Polynomial()
    for sub, rest in groups.items():
        t = Polynomial._raw(dict(rest))
        se = dict(sub)
        for v, md in maxdeg.items():
            e = se.get(v, 0)
            if e:
                t = t * pw(v, 0, e)
            if md - e:
                t = t * pw(v, 1, md - e)
        total = total + t
    den = Polynomial.const(1)
    for v, md in maxdeg.items():
        den = den * pw(v, 1, md)
    return total, den


def substitute(expr, bindings: Mapping[str, object]) -> RationalFunction:
    """Replace variables by rational functions (a field homomorphism)."""
    expr = as_rf(expr)
    b = {k: as_rf(v) for k, v in bindings.items()}
    nn, nd = _subst_poly(expr.num, b)
    dn, dd = _subst_poly(expr.den, b)
    if dn.is_zero():
        raise DenominatorVanishes(f"denominator of {expr} vanishes under substitution")
    # (nn/nd) / (dn/dd)
    return RationalFunction(nn * dd, nd * dn).simplify_cheap()


def evaluate(expr, point: Mapping[str, Scalar]) -> Fraction:
    """Evaluate at a rational point."""
    expr = as_rf(expr)
    pt = {k: Fraction(v) for k, v in point.items()}
    d = expr.den.evaluate(pt)
    if d == 0:
        raise PoleAtPoint(f"{expr} has a pole at {point}")
    return expr.num.evaluate(pt) / d


# ----------------------------------------------------------------- series
class TruncatedSeries:
    """sum_{k<=order} coeffs[k] * x^k, with terms past ``order`` unknown."""

    __slots__ = ("dist_var", "order", "coeffs")

    def __init__(self, dist_var: str, coeffs: Iterable, order: int | None = None):
        cs = [as_rf(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = cs[: order + 1] + [const(0)] * (order + 1 - len(cs))
        self.dist_var = dist_var
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def from_rf(cls, expr, dist_var: str, order: int) -> "TruncatedSeries":
        """Expand a rational function whose denominator is nonzero at dist_var = 0."""
        expr = as_rf(expr)
        num = _poly_to_coeffs(expr.num, dist_var, order)
        den = _poly_to_coeffs(expr.den, dist_var, order)
        s = cls(dist_var, num, order)
        if expr.den.is_constant():
            return s
        return s * cls(dist_var, den, order).inverse()

    @classmethod
    def monomial(cls, dist_var: str, k: int, coeff, order: int) -> "TruncatedSeries":
        cs = [const(0)] * (order + 1)
        if k <= order:
            cs[k] = as_rf(coeff)
        return cls(dist_var, cs, order)

    def _check(self, other: "TruncatedSeries"):
        if other.dist_var != self.dist_var:
            raise MixedSeriesVariable(f"{self.dist_var} vs {other.dist_var}")

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        try:
            c = as_rf(other)
        except (TypeError, ValueError):
            return NotImplemented
        if self.dist_var in c.variables():
            return TruncatedSeries.from_rf(c, self.dist_var, self.order)
        return TruncatedSeries(self.dist_var, [c], self.order)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        return TruncatedSeries(
            self.dist_var, [self.coeffs[k] + other.coeffs[k] for k in range(order + 1)], order
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.dist_var, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        out = []
        for k in range(order + 1):
            acc = const(0)
            for j in range(k + 1):
                a, b = self.coeffs[j], other.coeffs[k - j]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc.simplify())
        return TruncatedSeries(self.dist_var, out, order)

    __rmul__ = __mul__

    def scale(self, c) -> "TruncatedSeries":
        c = as_rf(c)
        return TruncatedSeries(self.dist_var, [(c * x).simplify() for x in self.coeffs], self.order)

    def derivative(self) -> "TruncatedSeries":
        """Coefficient k of the result is (k+1) times coefficient k+1; the order drops by one."""
        if self.order == 0:
            raise ValueError("derivative of an order-0 series has no known coefficients")
        return TruncatedSeries(
            self.dist_var, [self.coeffs[k + 1] * (k + 1) for k in range(self.order)], self.order - 1
        )

    def inverse(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise DivisionByZeroFunction("series with zero constant term is not invertible")
        inv0 = c0.inverse()
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = const(0)
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out[k - j]
            out.append((-acc * inv0).simplify())
        return TruncatedSeries(self.dist_var, out, self.order)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return TruncatedSeries(self.dist_var, self.coeffs[: order + 1], order)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        if other.dist_var != self.dist_var:
            return False
        order = min(self.order, other.order)
        return all(rf_equal(self.coeffs[k], other.coeffs[k]) for k in range(order + 1))

    __hash__ = None

    def to_rf(self) -> RationalFunction:
        """The truncated polynomial as a rational function (drops the O-term)."""
        x = var(self.dist_var)
        acc = const(0)
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                acc = acc + c * x ** k
        return acc

    def render(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            body = c.render()
            neg = body.startswith("-") and len(c.num) == 1
            if neg:
                body = body[1:]
            if len(c.num) > 1:
                body = f"({body})"
            if k:
                mono = self.dist_var if k == 1 else f"{self.dist_var}^{k}"
                body = mono if body == "1" else f"{body}*{mono}"
            if parts:
                parts.append((" - " if neg else " + ") + body)
            else:
                parts.append(("-" if neg else "") + body)
        s = "".join(parts) if parts else "0"
        return f"{s} + O({self.dist_var}^{self.order + 1})"

    __str__ = render

    def __repr__(self):
        return f"TruncatedSeries({self.render()!r})"


def _poly_to_coeffs(p: Polynomial, name: str, order: int):
    cs = p.coeffs_in(name)
    return [RationalFunction(cs.get(k, Polynomial())) for k in range(order + 1)]
