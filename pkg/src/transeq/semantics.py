"""Per-symbol polynomial semantics shared by the affine and invariant engines.

A system fixes a coordinate space z of dimension dim and, for every input
symbol f of rank k, one polynomial r^{(f)}_j per coordinate over the
variables x_{i,j'} (variable i*dim + j').  The value of a tree is obtained
bottom-up by evaluating these polynomials at the children's values.
"""

import re
from fractions import Fraction

from .polynomials import Polynomial, format_poly, parse_poly

_NAME = re.compile(r"^([zx])\[([^\]]*)\]$")


class VariableSpace:
    """Names z[label] for coordinates and x[i,label] for argument block i."""

    def __init__(self, labels):
        self.labels = tuple(tuple(lab) for lab in labels)
        self.dim = len(self.labels)
        self._index = {lab: j for j, lab in enumerate(self.labels)}
        if len(self._index) != self.dim:
            raise ValueError("coordinate labels must be unique")

    def name(self, v):
        block, j = divmod(v, self.dim) if self.dim else (v, 0)
        lab = ",".join(map(str, self.labels[j]))
        return f"z[{lab}]" if block == 0 else f"x[{block},{lab}]"

    def index(self, name):
        m = _NAME.match(name.strip())
        if not m:
            raise ValueError(f"bad variable name {name!r}")
        parts = [p.strip() for p in m.group(2).split(",")]
        block = 0
        if m.group(1) == "x":
            block, parts = int(parts[0]), parts[1:]
            if block < 1:
                raise ValueError(f"bad block in {name!r}")
        lab = tuple(int(p) if re.fullmatch(r"-?\d+", p) else p for p in parts)
        if lab not in self._index:
            raise ValueError(f"unknown coordinate in {name!r}")
        return block * self.dim + self._index[lab]

    def z(self, label):
        return self._index[tuple(label)]

    def format(self, p):
        return format_poly(p, self.name)

    def parse(self, text):
        return parse_poly(text, self.index)

    def __eq__(self, other):
        return isinstance(other, VariableSpace) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)


class PolySystem:
    """Alphabet plus r^{(f)} rows for each symbol."""

    def __init__(self, alphabet, space, rows):
        self.alphabet = alphabet
        self.space = space
        self.dim = space.dim
        self.rows = {}
        for f in alphabet:
            r = tuple(rows[f])
            if len(r) != self.dim:
                raise ValueError(f"symbol {f}: expected {self.dim} rows, got {len(r)}")
            k = alphabet.rank(f)
            for p in r:
                if p.variables() and p.variables()[-1] >= (k + 1) * self.dim:
                    raise ValueError(f"symbol {f}: variable outside the argument blocks")
                if p.variables() and p.variables()[0] < self.dim:
                    raise ValueError(f"symbol {f}: rows must not mention z")
            self.rows[f] = r

    def apply(self, f, args):
        """r^{(f)} evaluated at exact argument vectors."""
        values = [0] * self.dim
        for a in args:
            values.extend(a)
        return tuple(p.evaluate(values) for p in self.rows[f])

    def apply_mod(self, f, args, prime):
        values = [0] * self.dim
        for a in args:
            values.extend(a)
        return tuple(p.evaluate_mod(values, prime) for p in self.rows[f])

    def value(self, t, memo=None):
        """⟦t⟧ computed bottom-up with polynomial evaluation."""
        if memo is None:
            memo = {}
        hit = memo.get(t)
        if hit is None:
            hit = self.apply(t.symbol, [self.value(c, memo) for c in t.children])
            memo[t] = hit
        return hit

    def wp(self, r, f):
        """r[r^{(f)}/z]: pull a polynomial over z back through symbol f."""
        images = {j: self.rows[f][j] for j in range(self.dim)}
        return r.substitute(images)

    def block_vars(self, i):
        return set(range(i * self.dim, (i + 1) * self.dim))

    def is_multi_affine(self):
        """Every row has degree ≤ 1 in each argument block."""
        for f, rows in self.rows.items():
            for i in range(1, self.alphabet.rank(f) + 1):
                blk = self.block_vars(i)
                if any(p.degree_in(blk) > 1 for p in rows):
                    return False
        return True


def unary_space(M):
    """Coordinates (state number, k) for a numeric transducer, states numbered from 1."""
    return VariableSpace([(qi + 1, k) for qi in range(len(M.states)) for k in range(M.params + 1)])


def unary_system(M):
    """Polynomial system of a total numeric-mode transducer."""
    from .transducers import symbol_semantics
    return PolySystem(M.alphabet, unary_space(M), {f: symbol_semantics(M, f) for f in M.alphabet})


def unary_target(M, q1, q2):
    """H = z_{q1,0} − z_{q2,0}: outputs agree when all parameters are 0."""
    l = M.params
    a = M.state_index(q1) * (l + 1)
    b = M.state_index(q2) * (l + 1)
    return Polynomial.var(a) - Polynomial.var(b)


def exact(x):
    return x if isinstance(x, (int, Fraction)) else Fraction(x)
