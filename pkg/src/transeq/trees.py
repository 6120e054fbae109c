"""Ranked trees, deterministic top-down tree automata and the binary encoding."""

from collections import deque
from itertools import product

from .sexpr import Atom, ParseError, SList, atom, expect, fail, integer, parse_one

# nullary symbol closing every list in the first-child-next-sibling encoding
BOTTOM = "⊥"


class RankedAlphabet:
    """Finite map from symbol names to ranks, iterated in name order."""

    def __init__(self, symbols=()):
        ranks = {}
        items = symbols.items() if isinstance(symbols, dict) else symbols
        for name, rank in items:
            if not isinstance(rank, int) or rank < 0:
                raise ValueError(f"bad rank for {name!r}: {rank!r}")
            if name in ranks and ranks[name] != rank:
                raise ValueError(f"symbol {name!r} declared with two ranks")
            ranks[name] = rank
        self._ranks = dict(sorted(ranks.items()))

    def rank(self, name):
        try:
            return self._ranks[name]
        except KeyError:
            raise ValueError(f"unknown symbol {name!r}") from None

    def __contains__(self, name):
        return name in self._ranks

    def __iter__(self):
        return iter(self._ranks)

    def __len__(self):
        return len(self._ranks)

    def items(self):
        return self._ranks.items()

    def of_rank(self, m):
        return [f for f, k in self._ranks.items() if k == m]

    @property
    def max_rank(self):
        return max(self._ranks.values(), default=0)

    def union(self, other):
        return RankedAlphabet(list(self.items()) + list(other.items()))

    def check(self, t):
        """Raise ValueError unless `t` is a tree over this alphabet."""
        for node in t.nodes():
            if self.rank(node.symbol) != len(node.children):
                raise ValueError(f"symbol {node.symbol!r} used with {len(node.children)} children")

    def __eq__(self, other):
        return isinstance(other, RankedAlphabet) and self._ranks == other._ranks

    def __hash__(self):
        return hash(tuple(self._ranks.items()))

    def __repr__(self):
        return "RankedAlphabet(%s)" % ", ".join(f"{f}/{k}" for f, k in self._ranks.items())

    def to_text(self):
        return "(alphabet %s)" % " ".join(f"({f} {k})" for f, k in self._ranks.items())


class Tree:
    """Immutable ranked tree; leaves have depth 1."""

    __slots__ = ("symbol", "children", "depth", "_hash")

    def __init__(self, symbol, children=()):
        children = tuple(children)
        self.symbol = symbol
        self.children = children
        self.depth = 1 + max((c.depth for c in children), default=0)
        self._hash = hash((symbol, children))

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Tree) and self._hash == other._hash
                and self.symbol == other.symbol and self.children == other.children)

    def __hash__(self):
        return self._hash

    def __str__(self):
        if not self.children:
            return f"({self.symbol})"
        return "(%s %s)" % (self.symbol, " ".join(map(str, self.children)))

    __repr__ = __str__

    def nodes(self):
        stack = [self]
        while stack:
            t = stack.pop()
            yield t
            stack.extend(reversed(t.children))

    @property
    def size(self):
        return sum(1 for _ in self.nodes())


def tree(symbol, *children):
    return Tree(symbol, children)


def tree_from_sexpr(expr):
    if isinstance(expr, Atom):
        return Tree(expr.text)
    if not expr or not isinstance(expr[0], Atom):
        fail(expr, "expected (symbol subtree*)")
    return Tree(expr[0].text, [tree_from_sexpr(c) for c in expr[1:]])


def parse_tree(text):
    return tree_from_sexpr(parse_one(text))


def chain(symbols, leaf):
    """a(b(...(leaf))) from a sequence of unary symbols."""
    t = leaf if isinstance(leaf, Tree) else Tree(leaf)
    for f in reversed(list(symbols)):
        t = Tree(f, (t,))
    return t


class Dtta:
    """Deterministic top-down tree automaton with a partial transition map."""

    def __init__(self, alphabet, states, initial, rules):
        self.alphabet = alphabet
        self.states = tuple(dict.fromkeys(states))
        self.initial = initial
        self.rules = {}
        known = set(self.states)
        if initial not in known:
            raise ValueError(f"initial state {initial!r} is not declared")
        for (p, f), targets in rules.items():
            targets = tuple(targets)
            if p not in known:
                raise ValueError(f"undeclared state {p!r}")
            if alphabet.rank(f) != len(targets):
                raise ValueError(f"rule ({p!r}, {f}) has {len(targets)} targets, rank is {alphabet.rank(f)}")
            for q in targets:
                if q not in known:
                    raise ValueError(f"undeclared target state {q!r}")
            self.rules[p, f] = targets

    def step(self, p, f):
        return self.rules.get((p, f))

    def transitions(self):
        """(p, f, targets) triples in state-declaration then symbol order."""
        for p in self.states:
            for f in self.alphabet:
                targets = self.rules.get((p, f))
                if targets is not None:
                    yield p, f, targets

    def __eq__(self, other):
        return (isinstance(other, Dtta) and self.alphabet == other.alphabet
                and self.states == other.states and self.initial == other.initial
                and self.rules == other.rules)

    def __repr__(self):
        return f"Dtta(states={len(self.states)}, rules={len(self.rules)}, init={self.initial!r})"

    def to_text(self):
        lines = ["(dtta", "  " + self.alphabet.to_text(),
                 "  (states %s)" % " ".join(map(state_name, self.states)),
                 f"  (init {state_name(self.initial)})"]
        for p, f, targets in self.transitions():
            lines.append("  (rule %s %s (%s))" % (state_name(p), f, " ".join(map(state_name, targets))))
        return "\n".join(lines) + ")"

    @property
    def size(self):
        return len(self.states) + len(self.rules)


def state_name(p):
    if isinstance(p, frozenset):
        return "{" + ",".join(sorted(map(state_name, p))) + "}"
    if isinstance(p, tuple):
        return "[" + ",".join(map(state_name, p)) + "]"
    return str(p)


def dtta_from_sexpr(expr):
    expect(expr, "dtta")
    alphabet, states, initial, rules = None, None, None, {}
    arities = {}
    for item in expr[1:]:
        if not isinstance(item, SList) or item.head is None:
            fail(item, "expected a (keyword ...) clause")
        head = item.head
        if head == "alphabet":
            alphabet = alphabet_from_sexpr(item)
        elif head == "states":
            states = [atom(s, "state") for s in item[1:]]
        elif head == "init":
            expect(item, "init", 2)
            initial = atom(item[1], "state")
        elif head == "rule":
            expect(item, "rule", 4)
            p, f = atom(item[1], "state"), atom(item[2], "symbol")
            if not isinstance(item[3], SList):
                fail(item[3], "expected target list")
            targets = tuple(atom(q, "state") for q in item[3])
            if (p, f) in rules:
                fail(item, f"duplicate rule for ({p}, {f})")
            rules[p, f] = targets
            if arities.setdefault(f, len(targets)) != len(targets):
                fail(item, f"symbol {f} used with two arities")
        else:
            fail(item, f"unknown clause ({head} ...)")
    if initial is None:
        fail(expr, "missing (init ...)")
    if states is None:
        states = [initial] + sorted({p for p, _ in rules} | {q for t in rules.values() for q in t})
    if alphabet is None:
        alphabet = RankedAlphabet(arities)
    try:
        return Dtta(alphabet, states, initial, rules)
    except ValueError as exc:
        fail(expr, str(exc))


def alphabet_from_sexpr(expr):
    expect(expr, "alphabet")
    pairs = []
    for item in expr[1:]:
        if not isinstance(item, SList) or len(item) != 2:
            fail(item, "expected (symbol rank)")
        pairs.append((atom(item[0], "symbol"), integer(item[1], "rank")))
    try:
        return RankedAlphabet(pairs)
    except ValueError as exc:
        fail(expr, str(exc))


def parse_dtta(text):
    return dtta_from_sexpr(parse_one(text))


def accepts(A, p, t):
    """Is t in dom(p)?"""
    A.alphabet.check(t)
    return _accepts(A, p, t)


def _accepts(A, p, t):
    targets = A.rules.get((p, t.symbol))
    if targets is None:
        return False
    return all(_accepts(A, q, c) for q, c in zip(targets, t.children))


def domain_layers(A, d):
    """layers[k][p] lists the trees of dom(p) of depth exactly k+1, in canonical order."""
    le = {p: [] for p in A.states}       # trees of depth <= k, canonical order
    layers = []
    for k in range(1, d + 1):
        exact = {}
        for p in A.states:
            out = []
            for f in A.alphabet:
                targets = A.rules.get((p, f))
                if targets is None:
                    continue
                if not targets:
                    if k == 1:
                        out.append(Tree(f))
                    continue
                pools = [le[q] for q in targets]
                if any(not pool for pool in pools):
                    continue
                for kids in product(*pools):
                    if max(c.depth for c in kids) == k - 1:
                        out.append(Tree(f, kids))
            exact[p] = out
        layers.append(exact)
        for p in A.states:
            le[p] = le[p] + exact[p]
    return layers


def enumerate_dom(A, p, d):
    """dom_d(p): by depth, then symbol name, then children lexicographically."""
    out = []
    for layer in domain_layers(A, d):
        out.extend(layer[p])
    return out


def nonempty_states(A):
    live = set()
    changed = True
    while changed:
        changed = False
        for (p, f), targets in A.rules.items():
            if p not in live and all(q in live for q in targets):
                live.add(p)
                changed = True
    return live


def trim(A):
    """Drop transitions that lead into empty languages; the language is unchanged."""
    live = nonempty_states(A)
    rules = {k: v for k, v in A.rules.items() if k[0] in live and all(q in live for q in v)}
    return Dtta(A.alphabet, A.states, A.initial, rules)


def universal(alphabet, state="*"):
    """One-state automaton accepting every tree over `alphabet`."""
    return Dtta(alphabet, [state], state, {(state, f): (state,) * k for f, k in alphabet.items()})


def product_dtta(A1, A2):
    """Automaton for L(A1) ∩ L(A2), restricted to reachable pairs."""
    if A1.alphabet != A2.alphabet:
        raise ValueError("alphabets differ")
    start = (A1.initial, A2.initial)
    seen, todo, rules = [start], deque([start]), {}
    while todo:
        p1, p2 = todo.popleft()
        for f in A1.alphabet:
            t1, t2 = A1.rules.get((p1, f)), A2.rules.get((p2, f))
            if t1 is None or t2 is None:
                continue
            targets = tuple(zip(t1, t2))
            rules[(p1, p2), f] = targets
            for q in targets:
                if q not in seen:
                    seen.append(q)
                    todo.append(q)
    return Dtta(A1.alphabet, seen, start, rules)


def dtta_equiv(A1, A2):
    """L(A1) = L(A2), by exploring state pairs of the trimmed automata."""
    if A1.alphabet != A2.alphabet:
        raise ValueError("alphabets differ")
    B1, B2 = trim(A1), trim(A2)
    live1, live2 = nonempty_states(B1), nonempty_states(B2)
    if (B1.initial in live1) != (B2.initial in live2):
        return False
    if B1.initial not in live1:
        return True
    start = (B1.initial, B2.initial)
    seen, todo = {start}, deque([start])
    while todo:
        p1, p2 = todo.popleft()
        for f in B1.alphabet:
            t1, t2 = B1.rules.get((p1, f)), B2.rules.get((p2, f))
            if (t1 is None) != (t2 is None):
                return False
            if t1 is None:
                continue
            for pair in zip(t1, t2):
                if pair not in seen:
                    seen.add(pair)
                    todo.append(pair)
    return True


def _difference_witnesses(A1, A2):
    """Shallowest trees in L(p1) \\ L(p2) (p2 may be None for the empty language)
    and in L(p1) ∩ L(p2), computed round by round so depths are minimal."""
    inter, diff = {}, {}
    states2 = list(A2.states) + [None]
    changed = True
    while changed:
        changed = False
        new_inter, new_diff = {}, {}
        for p1 in A1.states:
            for p2 in states2:
                need_i = p2 is not None and (p1, p2) not in inter
                need_d = (p1, p2) not in diff
                if not (need_i or need_d):
                    continue
                for f in A1.alphabet:
                    t1 = A1.rules.get((p1, f))
                    if t1 is None:
                        continue
                    t2 = A2.rules.get((p2, f)) if p2 is not None else None
                    if need_i and t2 is not None and (p1, p2) not in new_inter:
                        kids = [inter.get(pair) for pair in zip(t1, t2)]
                        if all(k is not None for k in kids):
                            new_inter[p1, p2] = Tree(f, kids)
                    if need_d and (p1, p2) not in new_diff:
                        cand = _diff_candidate(f, t1, t2, inter, diff)
                        if cand is not None:
                            new_diff[p1, p2] = cand
        for key, t in new_inter.items():
            inter[key] = t
            changed = True
        for key, t in new_diff.items():
            diff[key] = t
            changed = True
    return inter, diff


def _diff_candidate(f, t1, t2, inter, diff):
    if t2 is None:
        kids = [diff.get((q, None)) for q in t1]
        return Tree(f, kids) if all(k is not None for k in kids) else None
    best = None
    for i in range(len(t1)):
        kids = []
        for j, (q1, q2) in enumerate(zip(t1, t2)):
            k = diff.get((q1, q2)) if j == i else diff.get((q1, None))
            if k is None:
                break
            kids.append(k)
        else:
            cand = Tree(f, kids)
            if best is None or cand.depth < best.depth:
                best = cand
    return best


def dtta_difference(A1, A2):
    """A shallowest tree in exactly one of L(A1), L(A2), or None if equal."""
    if A1.alphabet != A2.alphabet:
        raise ValueError("alphabets differ")
    found = []
    for X, Y in ((A1, A2), (A2, A1)):
        _, diff = _difference_witnesses(X, Y)
        t = diff.get((X.initial, Y.initial))
        if t is not None:
            found.append(t)
    if not found:
        return None
    return min(found, key=lambda t: (t.depth, str(t)))


def is_empty(A):
    return A.initial not in nonempty_states(A)


def bin_encode(trees):
    """First-child-next-sibling encoding of a sequence of trees."""
    out = Tree(BOTTOM)
    for t in reversed(list(trees)):
        out = Tree(t.symbol, (bin_encode(t.children), out))
    return out


def bin_decode(t):
    """Inverse of bin_encode; returns the tuple of encoded trees."""
    out = []
    while t.symbol != BOTTOM:
        if len(t.children) != 2:
            raise ValueError("not a binary encoding")
        out.append(Tree(t.symbol, bin_decode(t.children[0])))
        t = t.children[1]
    if t.children:
        raise ValueError("not a binary encoding")
    return tuple(out)


def bin_alphabet(alphabet):
    if BOTTOM in alphabet:
        raise ValueError(f"{BOTTOM} is reserved")
    return RankedAlphabet([(f, 2) for f in alphabet] + [(BOTTOM, 0)])


def bin_checker(alphabet):
    """Automaton accepting bin(T_Σ) from state 1; state j reads a list of j trees."""
    m = max(alphabet.max_rank, 1)   # state 1 reads the single encoded tree
    rules = {(0, BOTTOM): ()}
    for j in range(m):
        for f, k in alphabet.items():
            rules[j + 1, f] = (k, j)
    return Dtta(bin_alphabet(alphabet), list(range(m + 1)), 1, rules)


def bin_automaton(A):
    """Automaton accepting bin(L(A)); states are tuples of A-states (one per list entry)."""
    start = (A.initial,)
    seen, todo, rules = [start], deque([start]), {}
    while todo:
        ps = todo.popleft()
        if not ps:
            rules[ps, BOTTOM] = ()
            continue
        for f in A.alphabet:
            targets = A.rules.get((ps[0], f))
            if targets is None:
                continue
            kids = (tuple(targets), ps[1:])
            rules[ps, f] = kids
            for q in kids:
                if q not in seen:
                    seen.append(q)
                    todo.append(q)
    return Dtta(bin_alphabet(A.alphabet), seen, start, rules)
