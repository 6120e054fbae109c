"""Deterministic macro tree-to-string transducers in string and numeric mode.

String-mode right-hand sides are concatenations of output letters, parameters
and calls q'(x_i, T_1..T_l).  Numeric-mode right-hand sides are built from
constants, parameters, calls, sums and scalar multiples.  Evaluation is
call-by-value: a call whose arguments are undefined is undefined.
"""

from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Polynomial
from .sexpr import Atom, ParseError, SList, atom, expect, fail, integer, parse_one
from .trees import BOTTOM, Dtta, RankedAlphabet, alphabet_from_sexpr, bin_alphabet, bin_checker

STRING, NUMERIC = "string", "numeric"


@dataclass(frozen=True)
class Out:
    letter: str


@dataclass(frozen=True)
class Param:
    j: int              # 1-based


@dataclass(frozen=True)
class Call:
    state: str
    var: int            # 1-based child index
    args: tuple = ()


@dataclass(frozen=True)
class Seq:
    """Concatenation in string mode, sum in numeric mode; empty is ε or 0."""
    items: tuple = ()


@dataclass(frozen=True)
class Const:
    c: object


@dataclass(frozen=True)
class Scale:
    c: object
    body: object


EMPTY = Seq(())


def seq(*items):
    return Seq(tuple(items))


def _number(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def walk(T):
    """All nodes of a right-hand side, parents first."""
    stack = [T]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Seq):
            stack.extend(reversed(node.items))
        elif isinstance(node, Call):
            stack.extend(reversed(node.args))
        elif isinstance(node, Scale):
            stack.append(node.body)


def flatten(T):
    """Top-level items of a right-hand side with nested Seq spliced in."""
    if isinstance(T, Seq):
        out = []
        for item in T.items:
            out.extend(flatten(item))
        return out
    return [T]


class Transducer:
    """M = (Q, Σ, Δ, q0, δ) with l parameters; `rules` maps (q, f) to a right-hand side."""

    def __init__(self, alphabet, states, initial, rules, params=0, mode=STRING, output=()):
        if mode not in (STRING, NUMERIC):
            raise ValueError(f"unknown mode {mode!r}")
        self.alphabet = alphabet
        self.states = tuple(dict.fromkeys(states))
        self.initial = initial
        self.params = params
        self.mode = mode
        self.output = tuple(dict.fromkeys(output)) if mode == STRING else ()
        self.rules = {}
        known = set(self.states)
        if initial not in known:
            raise ValueError(f"initial state {initial!r} is not declared")
        for (q, f), T in rules.items():
            if q not in known:
                raise ValueError(f"rule for undeclared state {q!r}")
            self._check_rhs(T, alphabet.rank(f), q, f)
            self.rules[q, f] = T

    def _check_rhs(self, T, rank, q, f):
        where = f"rule ({q}, {f})"
        for node in walk(T):
            if isinstance(node, Out):
                if self.mode != STRING:
                    raise ValueError(f"{where}: output letter in numeric mode")
                if node.letter not in self.output:
                    raise ValueError(f"{where}: undeclared output letter {node.letter!r}")
            elif isinstance(node, Param):
                if not 1 <= node.j <= self.params:
                    raise ValueError(f"{where}: parameter y{node.j} out of range")
            elif isinstance(node, Call):
                if node.state not in self.states:
                    raise ValueError(f"{where}: call to undeclared state {node.state!r}")
                if not 1 <= node.var <= rank:
                    raise ValueError(f"{where}: variable x{node.var} out of range for rank {rank}")
                if len(node.args) != self.params:
                    raise ValueError(f"{where}: call with {len(node.args)} arguments, expected {self.params}")
            elif isinstance(node, (Const, Scale)):
                if self.mode != NUMERIC:
                    raise ValueError(f"{where}: arithmetic in string mode")
            elif not isinstance(node, Seq):
                raise ValueError(f"{where}: bad right-hand side node {node!r}")

    def rule(self, q, f):
        return self.rules.get((q, f))

    @property
    def n(self):
        return len(self.states)

    @property
    def dim(self):
        return len(self.states) * (self.params + 1)

    def state_index(self, q):
        return self.states.index(q)

    @property
    def h(self):
        """Largest constant magnitude (at least 1)."""
        out = 1
        for T in self.rules.values():
            for node in walk(T):
                if isinstance(node, (Const, Scale)):
                    out = max(out, abs(Fraction(node.c)))
        return out

    def replace(self, **changes):
        kw = dict(alphabet=self.alphabet, states=self.states, initial=self.initial,
                  rules=self.rules, params=self.params, mode=self.mode, output=self.output)
        kw.update(changes)
        return Transducer(**kw)

    def __eq__(self, other):
        return (isinstance(other, Transducer) and self.alphabet == other.alphabet
                and self.states == other.states and self.initial == other.initial
                and self.params == other.params and self.mode == other.mode
                and self.output == other.output and self.rules == other.rules)

    def __repr__(self):
        return (f"Transducer(mode={self.mode}, states={len(self.states)}, params={self.params}, "
                f"rules={len(self.rules)})")

    def to_text(self):
        return format_transducer(self)


# evaluation

def _check_tree(M, t):
    M.alphabet.check(t)


def eval_string(M, q, t, params=()):
    """⟦q⟧(t)(params) as a tuple of letters, or None when undefined."""
    if M.mode != STRING:
        raise ValueError("eval_string needs a string-mode transducer")
    params = [tuple(p) for p in params]
    if len(params) != M.params:
        raise ValueError(f"expected {M.params} parameters")
    _check_tree(M, t)
    return _eval_string(M, q, t, params)


def _eval_string(M, q, t, params):
    T = M.rules.get((q, t.symbol))
    if T is None:
        return None
    return _string_rhs(M, T, t, params)


def _string_rhs(M, T, t, params):
    if isinstance(T, Out):
        return (T.letter,)
    if isinstance(T, Param):
        return params[T.j - 1]
    if isinstance(T, Seq):
        out = ()
        for item in T.items:
            w = _string_rhs(M, item, t, params)
            if w is None:
                return None
            out += w
        return out
    if isinstance(T, Call):
        args = []
        for a in T.args:
            w = _string_rhs(M, a, t, params)
            if w is None:
                return None
            args.append(w)
        return _eval_string(M, T.state, t.children[T.var - 1], args)
    raise ValueError(f"bad string-mode node {T!r}")


def eval_unary(M, q, t, params=()):
    """Numeric value ⟦q⟧(t)(params), or None when undefined."""
    if M.mode != NUMERIC:
        raise ValueError("eval_unary needs a numeric-mode transducer")
    params = list(params)
    if len(params) != M.params:
        raise ValueError(f"expected {M.params} parameters")
    _check_tree(M, t)
    return _eval_unary(M, q, t, params)


def _eval_unary(M, q, t, params):
    T = M.rules.get((q, t.symbol))
    if T is None:
        return None
    return _unary_rhs(M, T, t, params)


def _unary_rhs(M, T, t, params):
    if isinstance(T, Const):
        return T.c
    if isinstance(T, Param):
        return params[T.j - 1]
    if isinstance(T, Seq):
        total = 0
        for item in T.items:
            v = _unary_rhs(M, item, t, params)
            if v is None:
                return None
            total += v
        return total
    if isinstance(T, Scale):
        v = _unary_rhs(M, T.body, t, params)
        return None if v is None else T.c * v
    if isinstance(T, Call):
        args = []
        for a in T.args:
            v = _unary_rhs(M, a, t, params)
            if v is None:
                return None
            args.append(v)
        return _eval_unary(M, T.state, t.children[T.var - 1], args)
    raise ValueError(f"bad numeric-mode node {T!r}")


def semantics_vector(M, t):
    """⟦t⟧ ∈ Q^{n×(l+1)} flattened row by row (state q, then coefficients 1, y_1..y_l).

    Computed bottom-up on affine functions; requires M to be total on t.
    """
    if M.mode != NUMERIC:
        raise ValueError("semantics vectors need numeric mode")
    l = M.params
    kids = [semantics_vector(M, c) for c in t.children]
    out = []
    for q in M.states:
        T = M.rules.get((q, t.symbol))
        if T is None:
            raise ValueError(f"no rule for ({q}, {t.symbol})")
        out.extend(_affine_rhs(M, T, kids, l))
    return tuple(out)


def _affine_rhs(M, T, kids, l):
    if isinstance(T, Const):
        return [T.c] + [0] * l
    if isinstance(T, Param):
        return [1 if k == T.j else 0 for k in range(l + 1)]
    if isinstance(T, Seq):
        acc = [0] * (l + 1)
        for item in T.items:
            acc = [a + b for a, b in zip(acc, _affine_rhs(M, item, kids, l))]
        return acc
    if isinstance(T, Scale):
        return [T.c * a for a in _affine_rhs(M, T.body, kids, l)]
    if isinstance(T, Call):
        base = M.state_index(T.state) * (l + 1)
        row = kids[T.var - 1][base:base + l + 1]
        acc = [row[0]] + [0] * l
        for k, arg in enumerate(T.args, start=1):
            a = _affine_rhs(M, arg, kids, l)
            acc = [x + row[k] * y for x, y in zip(acc, a)]
        return acc
    raise ValueError(f"bad numeric-mode node {T!r}")


# size measures

def rhs_size(T, mode=NUMERIC):
    """|T|: expression size in numeric mode, occurrence count in string mode."""
    if mode == STRING:
        return sum(1 for node in walk(T) if isinstance(node, (Out, Param, Call)))
    if isinstance(T, (Const, Param)):
        return 1
    if isinstance(T, Call):
        return 2 + sum(rhs_size(a) for a in T.args)
    if isinstance(T, Scale):
        return 2 + rhs_size(T.body)
    if isinstance(T, Seq):
        if not T.items:
            return 1
        # a binary sum counts one node for the operator
        return len(T.items) - 1 + sum(rhs_size(a) for a in T.items)
    raise ValueError(f"bad node {T!r}")


def size(M):
    """|M| = |Q| + |Σ| + |Δ| + Σ (1 + |T|) over all rules."""
    delta = len(M.output) if M.mode == STRING else 1
    total = len(M.states) + len(M.alphabet) + delta
    for T in M.rules.values():
        total += 1 + rhs_size(T, M.mode)
    return total


# classification

@dataclass(frozen=True)
class Classification:
    linear: bool
    non_self_nested: bool
    total: bool
    unary_output: bool
    monadic_input: bool
    parameterless: bool

    def as_dict(self):
        return dict(self.__dict__)


def is_linear(M):
    for T in M.rules.values():
        seen = set()
        for node in walk(T):
            if isinstance(node, Call):
                if node.var in seen:
                    return False
                seen.add(node.var)
    return True


def is_non_self_nested(M):
    for T in M.rules.values():
        for node in walk(T):
            if isinstance(node, Call):
                for arg in node.args:
                    for inner in walk(arg):
                        if isinstance(inner, Call) and inner.var == node.var:
                            return False
    return True


def is_total(M):
    return all((q, f) in M.rules for q in M.states for f in M.alphabet)


def classify(M):
    return Classification(
        linear=is_linear(M),
        non_self_nested=is_non_self_nested(M),
        total=is_total(M),
        unary_output=M.mode == NUMERIC or len(M.output) <= 1,
        monadic_input=M.alphabet.max_rank <= 1,
        parameterless=M.params == 0,
    )


# constructions

def domain_automaton(M, q_start=None):
    """DTTA for dom(⟦q_start⟧) by the subset construction over called states."""
    start = frozenset([q_start if q_start is not None else M.initial])
    seen, todo, rules = [start], [start], {}
    while todo:
        S = todo.pop()
        for f, k in M.alphabet.items():
            if any((q, f) not in M.rules for q in S):
                continue
            kids = [set() for _ in range(k)]
            for q in S:
                for node in walk(M.rules[q, f]):
                    if isinstance(node, Call):
                        kids[node.var - 1].add(node.state)
            targets = tuple(frozenset(c) for c in kids)
            rules[S, f] = targets
            for c in targets:
                if c not in seen:
                    seen.append(c)
                    todo.append(c)
    return Dtta(M.alphabet, seen, start, rules)


def totalize(M):
    """Missing rules become ε (string mode) or 0 (numeric mode)."""
    filler = EMPTY if M.mode == STRING else Const(0)
    rules = dict(M.rules)
    for q in M.states:
        for f in M.alphabet:
            rules.setdefault((q, f), filler)
    if len(rules) == len(M.rules):
        return M
    return M.replace(rules=rules)


def bin_state(q, i):
    return f"<{q},{i}>"


def binarize(M):
    """Transducer over bin(Σ) simulating M on encodings, and the checker for bin(T_Σ)."""
    m = max(M.alphabet.max_rank, 1)
    l = M.params
    states = [bin_state(q, i) for q in M.states for i in range(1, m + 1)]
    filler = EMPTY if M.mode == STRING else Const(0)
    rules = {}
    for q in M.states:
        for f in M.alphabet:
            T = M.rules.get((q, f))
            if T is not None:
                rules[bin_state(q, 1), f] = _retarget(T)
            for i in range(2, m + 1):
                rules[bin_state(q, i), f] = Call(bin_state(q, i - 1), 2, tuple(Param(j) for j in range(1, l + 1)))
        for i in range(1, m + 1):
            rules[bin_state(q, i), BOTTOM] = filler
    N = Transducer(bin_alphabet(M.alphabet), states, bin_state(M.initial, 1), rules,
                   params=l, mode=M.mode, output=M.output)
    return N, bin_checker(M.alphabet)


def _retarget(T):
    if isinstance(T, Call):
        return Call(bin_state(T.state, T.var), 1, tuple(_retarget(a) for a in T.args))
    if isinstance(T, Seq):
        return Seq(tuple(_retarget(a) for a in T.items))
    if isinstance(T, Scale):
        return Scale(T.c, _retarget(T.body))
    return T


def letter_digits(M):
    """Output letters ↦ digits 1..s in declaration order."""
    return {a: k for k, a in enumerate(M.output, start=1)}


def encode_word(w, letters):
    """[w]_{s+1} = Σ_j digit(w_j)·(s+1)^(j-1); ε ↦ 0."""
    digits = {a: k for k, a in enumerate(letters, start=1)} if not isinstance(letters, dict) else letters
    base = len(digits) + 1
    total, scale = 0, 1
    for a in w:
        total += digits[a] * scale
        scale *= base
    return total


def unarize(M):
    """Total parameterless string-mode M ↦ numeric transducer with one parameter holding the right context."""
    if M.mode != STRING or M.params != 0:
        raise ValueError("unarize needs a parameterless string-mode transducer")
    if not is_total(M):
        raise ValueError("unarize needs a total transducer")
    digits = letter_digits(M)
    base = len(digits) + 1
    rules = {}
    for key, T in M.rules.items():
        acc = Param(1)
        for item in reversed(flatten(T)):
            if isinstance(item, Out):
                acc = Seq((Const(digits[item.letter]), Scale(base, acc)))
            elif isinstance(item, Call):
                acc = Call(item.state, item.var, (acc,))
            else:
                raise ValueError(f"unexpected node {item!r}")
        rules[key] = acc
    return Transducer(M.alphabet, M.states, M.initial, rules, params=1, mode=NUMERIC)


def to_numeric(M, weights):
    """Replace each output letter a by the constant weights[a] (letter counting)."""
    if M.mode != STRING:
        raise ValueError("to_numeric needs a string-mode transducer")

    def conv(T):
        if isinstance(T, Out):
            return Const(weights.get(T.letter, 0))
        if isinstance(T, Seq):
            return Seq(tuple(conv(a) for a in T.items))
        if isinstance(T, Call):
            return Call(T.state, T.var, tuple(conv(a) for a in T.args))
        return T

    rules = {k: conv(T) for k, T in M.rules.items()}
    return Transducer(M.alphabet, M.states, M.initial, rules, params=M.params, mode=NUMERIC)


def merge(M1, M2):
    """Disjoint union of two transducers; returns (M, q1, q2) with the two initial states."""
    if M1.mode != M2.mode:
        raise ValueError("cannot compare a string-mode with a numeric-mode transducer")
    if M1.params != M2.params:
        raise ValueError("transducers have different parameter counts")
    alphabet = M1.alphabet.union(M2.alphabet)
    if set(M1.states) & set(M2.states):
        r1 = {q: f"L.{q}" for q in M1.states}
        r2 = {q: f"R.{q}" for q in M2.states}
    else:
        r1 = {q: q for q in M1.states}
        r2 = {q: q for q in M2.states}
    rules = {}
    for M, ren in ((M1, r1), (M2, r2)):
        for (q, f), T in M.rules.items():
            rules[ren[q], f] = rename_states(T, ren)
    states = [r1[q] for q in M1.states] + [r2[q] for q in M2.states]
    output = tuple(dict.fromkeys(M1.output + M2.output))
    M = Transducer(alphabet, states, r1[M1.initial], rules, params=M1.params, mode=M1.mode, output=output)
    return M, r1[M1.initial], r2[M2.initial]


def rename_states(T, ren):
    if isinstance(T, Call):
        return Call(ren[T.state], T.var, tuple(rename_states(a, ren) for a in T.args))
    if isinstance(T, Seq):
        return Seq(tuple(rename_states(a, ren) for a in T.items))
    if isinstance(T, Scale):
        return Scale(T.c, rename_states(T.body, ren))
    return T


def restrict_alphabet(M, alphabet):
    """Same transducer over a larger alphabet (no new rules)."""
    return M.replace(alphabet=M.alphabet.union(alphabet))


# polynomial semantics

def x_var(dim, i, coord):
    """Variable number of x_{i,coord}: block i (1-based) of width dim."""
    return i * dim + coord


def symbol_semantics(M, f):
    """r^{(f)}: one polynomial per coordinate (q, k), over the x_{i,q',k'} variables."""
    if M.mode != NUMERIC:
        raise ValueError("symbol semantics need numeric mode")
    l = M.params
    dim = M.dim
    rows = []
    for q in M.states:
        T = M.rules.get((q, f))
        if T is None:
            raise ValueError(f"no rule for ({q}, {f}); totalize first")
        rows.extend(_poly_rhs(M, T, l, dim))
    return tuple(rows)


def _poly_rhs(M, T, l, dim):
    if isinstance(T, Const):
        return [Polynomial.const(T.c)] + [Polynomial()] * l
    if isinstance(T, Param):
        return [Polynomial.const(1) if k == T.j else Polynomial() for k in range(l + 1)]
    if isinstance(T, Seq):
        acc = [Polynomial()] * (l + 1)
        for item in T.items:
            acc = [a + b for a, b in zip(acc, _poly_rhs(M, item, l, dim))]
        return acc
    if isinstance(T, Scale):
        return [a * T.c for a in _poly_rhs(M, T.body, l, dim)]
    if isinstance(T, Call):
        base = M.state_index(T.state) * (l + 1)
        acc = [Polynomial.var(x_var(dim, T.var, base))] + [Polynomial()] * l
        for k, arg in enumerate(T.args, start=1):
            coeff = Polynomial.var(x_var(dim, T.var, base + k))
            a = _poly_rhs(M, arg, l, dim)
            acc = [x + coeff * y for x, y in zip(acc, a)]
        return acc
    raise ValueError(f"bad numeric-mode node {T!r}")


def coordinate_labels(M):
    """(state number, k) per coordinate, both as printed in variable names (state 1-based)."""
    return tuple((qi + 1, k) for qi in range(len(M.states)) for k in range(M.params + 1))


def coordinate(M, q, k=0):
    return M.state_index(q) * (M.params + 1) + k


# text format

def rhs_from_sexpr(expr, mode):
    if isinstance(expr, Atom):
        fail(expr, "expected a right-hand side form like (out a)")
    head = expr.head
    if head == "out":
        expect(expr, "out", 2)
        return Out(atom(expr[1], "letter"))
    if head == "param":
        expect(expr, "param", 2)
        return Param(_index(expr[1], "y"))
    if head == "call":
        expect(expr, "call", 3)
        return Call(atom(expr[1], "state"), _index(expr[2], "x"),
                    tuple(rhs_from_sexpr(a, mode) for a in expr[3:]))
    if head in ("seq", "add"):
        return Seq(tuple(rhs_from_sexpr(a, mode) for a in expr[1:]))
    if head == "const":
        expect(expr, "const", 2)
        return Const(_rational(expr[1]))
    if head == "mul":
        expect(expr, "mul", 3)
        body = [rhs_from_sexpr(a, mode) for a in expr[2:]]
        return Scale(_rational(expr[1]), body[0] if len(body) == 1 else Seq(tuple(body)))
    fail(expr, f"unknown right-hand side form ({head} ...)")


def _index(expr, prefix):
    text = atom(expr, "index")
    if text.startswith(prefix):
        text = text[len(prefix):]
    try:
        return int(text)
    except ValueError:
        fail(expr, f"bad index {atom(expr)!r}")


def _rational(expr):
    text = atom(expr, "number")
    try:
        return _number(Fraction(text))
    except (ValueError, ZeroDivisionError):
        fail(expr, f"bad number {text!r}")


def transducer_from_sexpr(expr):
    expect(expr, "transducer")
    alphabet, states, initial, mode, params, output = None, None, None, STRING, 0, ()
    raw_rules = []
    for item in expr[1:]:
        if not isinstance(item, SList) or item.head is None:
            fail(item, "expected a (keyword ...) clause")
        head = item.head
        if head == "mode":
            expect(item, "mode", 2)
            mode = atom(item[1])
            if mode not in (STRING, NUMERIC):
                fail(item[1], f"unknown mode {mode!r}")
        elif head == "alphabet":
            alphabet = alphabet_from_sexpr(item)
        elif head == "output":
            output = tuple(atom(a, "letter") for a in item[1:])
        elif head == "params":
            expect(item, "params", 2)
            params = integer(item[1])
        elif head == "states":
            states = [atom(s, "state") for s in item[1:]]
        elif head == "init":
            expect(item, "init", 2)
            initial = atom(item[1], "state")
        elif head == "rule":
            expect(item, "rule", 4)
            raw_rules.append(item)
        else:
            fail(item, f"unknown clause ({head} ...)")
    if alphabet is None:
        fail(expr, "missing (alphabet ...)")
    rules = {}
    for item in raw_rules:
        q, f = atom(item[1], "state"), atom(item[2], "symbol")
        if f not in alphabet:
            fail(item[2], f"symbol {f!r} not in the alphabet")
        if not isinstance(item[3], SList):
            fail(item[3], "expected variable list like (x1 x2)")
        if len(item[3]) != alphabet.rank(f):
            fail(item[3], f"symbol {f} has rank {alphabet.rank(f)}")
        body = [rhs_from_sexpr(a, mode) for a in item[4:]]
        T = body[0] if len(body) == 1 else Seq(tuple(body))
        if (q, f) in rules:
            fail(item, f"duplicate rule for ({q}, {f})")
        rules[q, f] = T
    if states is None:
        states = list(dict.fromkeys(q for q, _ in rules))
    if initial is None:
        initial = states[0] if states else None
    try:
        return Transducer(alphabet, states, initial, rules, params=params, mode=mode, output=output)
    except ValueError as exc:
        fail(expr, str(exc))


def parse_transducer(text):
    return transducer_from_sexpr(parse_one(text))


def format_rhs(T, mode):
    if isinstance(T, Out):
        return f"(out {T.letter})"
    if isinstance(T, Param):
        return f"(param {T.j})"
    if isinstance(T, Const):
        return f"(const {T.c})"
    if isinstance(T, Scale):
        return f"(mul {T.c} {format_rhs(T.body, mode)})"
    if isinstance(T, Call):
        inner = "".join(" " + format_rhs(a, mode) for a in T.args)
        return f"(call {T.state} {T.var}{inner})"
    if isinstance(T, Seq):
        head = "seq" if mode == STRING else "add"
        return "(%s)" % " ".join([head] + [format_rhs(a, mode) for a in T.items])
    raise ValueError(f"bad node {T!r}")


def format_transducer(M):
    lines = ["(transducer", f"  (mode {M.mode})", "  " + M.alphabet.to_text()]
    if M.mode == STRING:
        lines.append("  (output %s)" % " ".join(M.output))
    lines.append(f"  (params {M.params})")
    lines.append("  (states %s)" % " ".join(M.states))
    lines.append(f"  (init {M.initial})")
    for q in M.states:
        for f in M.alphabet:
            T = M.rules.get((q, f))
            if T is None:
                continue
            xs = " ".join(f"x{i}" for i in range(1, M.alphabet.rank(f) + 1))
            # a one-item sequence is written explicitly so that parsing restores it
            if isinstance(T, Seq) and len(T.items) != 1:
                items = T.items
            else:
                items = (T,)
            body = "".join(" " + format_rhs(a, M.mode) for a in items)
            lines.append(f"  (rule {q} {f} ({xs}){body})")
    return "\n".join(lines) + ")"
