"""Exact linear algebra over Q and prime fields."""

from fractions import Fraction

from .primes import is_prime


class RationalField:
    name = "Q"
    prime = None

    def coerce(self, x):
        return x if isinstance(x, Fraction) else Fraction(x)

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return Fraction(a) / b

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    def __init__(self, p):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.prime = p
        self.name = f"Z_{p}"

    def coerce(self, x):
        p = self.prime
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return x % p

    def zero(self):
        return 0

    def add(self, a, b):
        return (a + b) % self.prime

    def sub(self, a, b):
        return (a - b) % self.prime

    def mul(self, a, b):
        return a * b % self.prime

    def div(self, a, b):
        return a * pow(b, -1, self.prime) % self.prime

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.prime == self.prime

    def __hash__(self):
        return hash(self.prime)

    def __repr__(self):
        return self.name


QQ = RationalField()


class Echelon:
    """Incrementally maintained reduced row echelon form of a row space."""

    def __init__(self, field, dim):
        self.field = field
        self.dim = dim
        self.rows = {}          # pivot column -> row with a 1 there and 0 at other pivots

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        f = self.field
        v = [f.coerce(a) for a in v]
        if len(v) != self.dim:
            raise ValueError(f"vector has length {len(v)}, expected {self.dim}")
        for piv, row in self.rows.items():
            c = v[piv]
            if c:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return v

    def contains(self, v):
        return not any(self.reduce(v))

    def add(self, v):
        """Insert v; returns False when v was already in the span."""
        f = self.field
        v = self.reduce(v)
        piv = next((k for k, c in enumerate(v) if c), None)
        if piv is None:
            return False
        c = v[piv]
        v = [f.div(a, c) for a in v]
        for p2, row in list(self.rows.items()):
            e = row[piv]
            if e:
                self.rows[p2] = [f.sub(a, f.mul(e, b)) for a, b in zip(row, v)]
        self.rows[piv] = v
        return True

    def basis(self):
        return [self.rows[p] for p in sorted(self.rows)]


def nullspace(columns, field=QQ):
    """Basis of {c : Σ c_j · columns[j] = 0}; columns are equal-length vectors."""
    ncols = len(columns)
    if ncols == 0:
        return []
    nrows = len(columns[0])
    f = field
    # reduce the transposed system with the identity alongside to track combinations
    ech = Echelon(f, nrows + ncols)
    kernel = []
    for j, col in enumerate(columns):
        aug = list(col) + [f.coerce(1) if k == j else f.zero() for k in range(ncols)]
        aug = ech.reduce(aug)
        if any(aug[:nrows]):
            ech.add(aug)
        else:
            kernel.append(aug[nrows:])
    return kernel


def rank(vectors, field=QQ):
    if not vectors:
        return 0
    ech = Echelon(field, len(vectors[0]))
    for v in vectors:
        ech.add(v)
    return len(ech)
