"""Sparse multivariate polynomials with exact rational coefficients.

Variables are non-negative integers.  A monomial is a tuple of (variable,
exponent) pairs sorted by variable; the empty tuple is 1.  In the standard
layout variable j < dim is z_j and i*dim + j is x_{i,j}; shifting by
i*dim renames z into block i.
"""

import re
from fractions import Fraction

ONE = ()


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def mono_div(a, b):
    """a / b, or None when b does not divide a."""
    if not b:
        return a
    da = dict(a)
    for v, e in b:
        r = da.get(v, 0) - e
        if r < 0:
            return None
        if r:
            da[v] = r
        else:
            del da[v]
    return tuple(sorted(da.items()))


def mono_divides(b, a):
    da = dict(a)
    return all(da.get(v, 0) >= e for v, e in b)


def mono_lcm(a, b):
    out = dict(a)
    for v, e in b:
        if out.get(v, 0) < e:
            out[v] = e
    return tuple(sorted(out.items()))


def mono_coprime(a, b):
    va = {v for v, _ in a}
    return not any(v in va for v, _ in b)


def mono_deg(a):
    return sum(e for _, e in a)


def _lex(mono):
    return tuple((-v, e) for v, e in mono)


class MonomialOrder:
    """Total monomial order given by a sort key; larger key = larger monomial."""

    name = "?"

    def key(self, mono):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items()))))

    def __repr__(self):
        return self.name


class GrLex(MonomialOrder):
    """Total degree first, ties broken lexicographically with variable 0 largest."""

    name = "grlex"

    def key(self, mono):
        return (mono_deg(mono), _lex(mono))


class BlockOrder(MonomialOrder):
    """Variables >= split form the eliminated block, compared first (grlex inside blocks)."""

    def __init__(self, split):
        self.split = split
        self.name = f"block({split})"

    def key(self, mono):
        hi = tuple(t for t in mono if t[0] >= self.split)
        lo = tuple(t for t in mono if t[0] < self.split)
        return (mono_deg(hi), _lex(hi), mono_deg(lo), _lex(lo))


GRLEX = GrLex()


def _frac(c):
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Immutable polynomial: a dict from monomials to nonzero Fractions."""

    __slots__ = ("terms", "_hash", "_lead")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = _frac(c)
        self.terms = clean
        self._hash = None
        self._lead = {}

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        p._lead = {}
        return p

    @classmethod
    def const(cls, c):
        return cls({ONE: c})

    @classmethod
    def var(cls, v, exp=1):
        return cls({((v, exp),): 1})

    @classmethod
    def monomial(cls, mono, c=1):
        return cls({mono: c})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and ONE in self.terms)

    def constant_term(self):
        return self.terms.get(ONE, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({ONE: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial()
            return Polynomial._raw({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(c))

    def __pow__(self, k):
        out = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_term(self, mono, c):
        """self * c * mono."""
        return Polynomial._raw({mono_mul(m, mono): cc * c for m, cc in self.terms.items()})

    def degree(self):
        return max((mono_deg(m) for m in self.terms), default=-1)

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def degree_in(self, block_vars):
        """Largest total degree in the given set of variables."""
        return max((sum(e for v, e in m if v in block_vars) for m in self.terms), default=-1)

    def leading(self, order=GRLEX):
        """(monomial, coefficient) of the largest term."""
        hit = self._lead.get(order)
        if hit is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            m = max(self.terms, key=order.key)
            hit = (m, self.terms[m])
            self._lead[order] = hit
        return hit

    def monic(self, order=GRLEX):
        if not self.terms:
            return self
        c = self.leading(order)[1]
        if c == 1:
            return self
        return Polynomial._raw({m: v / c for m, v in self.terms.items()})

    def sorted_terms(self, order=GRLEX):
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)

    def evaluate(self, values):
        """Value at a point; `values` is indexable by variable."""
        total = 0
        for m, c in self.terms.items():
            for v, e in m:
                c = c * values[v] ** e
            total += c
        return total

    def evaluate_mod(self, values, p):
        total = 0
        for m, c in self.terms.items():
            t = c.numerator * pow(c.denominator, -1, p)
            for v, e in m:
                t = t * pow(values[v], e, p) % p
            total += t
        return total % p

    def map_vars(self, fn):
        """Rename variables by an injective map."""
        out = {}
        for m, c in self.terms.items():
            out[tuple(sorted((fn(v), e) for v, e in m))] = c
        return Polynomial._raw(out)

    def shift(self, offset):
        if not offset:
            return self
        return Polynomial._raw({tuple((v + offset, e) for v, e in m): c for m, c in self.terms.items()})

    def substitute(self, images):
        """Replace each variable v by images[v] (a Polynomial or number)."""
        cache = {}

        def power(v, e):
            key = (v, e)
            if key not in cache:
                try:
                    img = images[v]
                except (KeyError, IndexError):
                    raise ValueError(f"no image for variable {v}") from None
                if not isinstance(img, Polynomial):
                    img = Polynomial.const(img)
                cache[key] = img ** e
            return cache[key]

        total = Polynomial()
        for m, c in self.terms.items():
            t = Polynomial.const(c)
            for v, e in m:
                t = t * power(v, e)
            total = total + t
        return total

    def __repr__(self):
        return f"Polynomial({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def format_coeff(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def default_name(v):
    return f"v{v}"


def format_poly(p, name=default_name, order=GRLEX):
    """Canonical text: terms in decreasing order, `3/2*z[1,0]^2*x[2,1,1] - 1`."""
    if not p.terms:
        return "0"
    parts = []
    for m, c in p.sorted_terms(order):
        factors = [name(v) + (f"^{e}" if e > 1 else "") for v, e in m]
        mag = abs(c)
        if not factors:
            body = format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = format_coeff(mag) + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_]\w*(?:\[[^\]]*\])?)|(?P<op>[-+*^]))")


def parse_poly(text, index):
    """Parse the canonical text form; `index` maps a variable name to its number."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad polynomial text near {text[pos:pos + 12]!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    total = Polynomial()
    i = 0
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        coeff = Fraction(1)
        mono = ONE
        while True:
            if i >= len(tokens):
                raise ValueError("polynomial text ends inside a term")
            kind, tok = tokens[i]
            if kind == "num":
                coeff *= Fraction(tok)
                i += 1
            elif kind == "var":
                exp = 1
                i += 1
                if i + 1 < len(tokens) and tokens[i] == ("op", "^"):
                    exp = int(tokens[i + 1][1])
                    i += 2
                mono = mono_mul(mono, ((index(tok), exp),))
            else:
                raise ValueError(f"unexpected {tok!r}")
            if i < len(tokens) and tokens[i] == ("op", "*"):
                i += 1
                continue
            break
        if i < len(tokens) and tokens[i][1] not in "+-":
            raise ValueError("missing operator between terms")
        total = total + Polynomial({mono: sign * coeff})
    return total
