"""Affine-closure fixpoint over Q or Z_p and the equivalence decisions built on it.

For a multi-affine system the affine hull of {⟦t⟧ : t ∈ dom(p)} is the least
solution of aff(V_p) ⊇ aff(r^{(f)}(V_{p1}, ..., V_{pk})) over the transitions
ρ(p, f) = (p1, ..., pk).  It is computed by a worklist over the transitions;
only basis points are fed into the symbol semantics.
"""

import math
import random
from collections import deque
from itertools import product

from .ideals import buchberger
from .linalg import QQ, Echelon, PrimeField, nullspace
from .polynomials import Polynomial
from .primes import random_prime
from .semantics import unary_system, unary_target
from .transducers import NUMERIC, classify, eval_unary, is_total, size
from .trees import Tree, state_name
from .verdict import Certificate, Status, Verdict

EXPONENT_CAP = 2 ** 20
D_FLOOR = 8


class AffineBasis:
    """Base point plus reduced echelon rows; each inserted point keeps the tree it came from."""

    def __init__(self, field=QQ, dim=0):
        self.field = field
        self.dim = dim
        self.base = None
        self.echelon = Echelon(field, dim)
        self.points = []
        self.trees = []

    def copy(self):
        other = AffineBasis(self.field, self.dim)
        other.base = self.base
        other.echelon.rows = {k: list(v) for k, v in self.echelon.rows.items()}
        other.points = list(self.points)
        other.trees = list(self.trees)
        return other

    def __len__(self):
        return len(self.points)

    @property
    def dimension(self):
        """Dimension of the affine hull; -1 for the empty set."""
        return -1 if self.base is None else len(self.echelon)

    @property
    def rows(self):
        return self.echelon.basis()

    def _offset(self, v):
        f = self.field
        return [f.sub(a, b) for a, b in zip(v, self.base)]

    def contains(self, v):
        v = self._coerce(v)
        if self.base is None:
            return False
        return self.echelon.contains(self._offset(v))

    def _coerce(self, v):
        if len(v) != self.dim:
            raise ValueError(f"vector has length {len(v)}, expected {self.dim}")
        return [self.field.coerce(a) for a in v]

    def insert(self, v, tree=None):
        """Add v unless it lies in the hull already; returns whether it was added."""
        v = self._coerce(v)
        if self.base is None:
            self.base = v
        elif not self.echelon.add(self._offset(v)):
            return False
        self.points.append(tuple(v))
        self.trees.append(tree)
        return True

    def equations(self):
        """Linear polynomials over z cutting out the hull (⟨1⟩ for the empty set)."""
        if self.base is None:
            return [Polynomial.const(1)]
        rows = self.rows
        if rows:
            # functionals c with c·row = 0 for every row
            cols = [[r[j] for r in rows] for j in range(self.dim)]
            kernel = nullspace(cols, self.field)
        else:
            kernel = [[1 if k == j else 0 for k in range(self.dim)] for j in range(self.dim)]
        out = []
        for c in kernel:
            g = Polynomial({((j, 1),): cj for j, cj in enumerate(c) if cj})
            g = g - sum(cj * bj for cj, bj in zip(c, self.base))
            out.append(g)
        return out


def aff_insert(basis, v, tree=None):
    """Functional insert: returns (new basis, inserted)."""
    other = basis.copy()
    inserted = other.insert(v, tree)
    return other, inserted


def closure(system, A, field=QQ, stats=None):
    """Least affine hulls B_p for all automaton states (Kleene iteration over transitions)."""
    if A.alphabet != system.alphabet:
        for f in A.alphabet:
            if f not in system.alphabet or A.alphabet.rank(f) != system.alphabet.rank(f):
                raise ValueError("automaton and system have different alphabets")
    bases = {p: AffineBasis(field, system.dim) for p in A.states}
    transitions = list(A.transitions())
    users = {p: [] for p in A.states}
    for idx, (_, _, targets) in enumerate(transitions):
        for q in set(targets):
            users[q].append(idx)
    done = [set() for _ in transitions]
    queue = deque(range(len(transitions)))
    queued = set(queue)
    inserts = 0
    prime = field.prime
    while queue:
        idx = queue.popleft()
        queued.discard(idx)
        p, f, targets = transitions[idx]
        pools = [range(len(bases[q].points)) for q in targets]
        grew = False
        for combo in product(*pools):
            if combo in done[idx]:
                continue
            done[idx].add(combo)
            args = [bases[q].points[j] for q, j in zip(targets, combo)]
            if prime is None:
                v = system.apply(f, args)
            else:
                v = system.apply_mod(f, args, prime)
            tree = Tree(f, [bases[q].trees[j] for q, j in zip(targets, combo)])
            if bases[p].insert(v, tree):
                inserts += 1
                grew = True
        if grew:
            for user in users[p]:
                if user not in queued:
                    queue.append(user)
                    queued.add(user)
    if stats is not None:
        stats["insertions"] = inserts
        stats["tuples"] = sum(len(d) for d in done)
    return bases


def violations(system, basis, targets):
    """Trees of basis points on which some target does not vanish, shallowest first."""
    prime = basis.field.prime
    bad = []
    for v, t in zip(basis.points, basis.trees):
        values = list(v)
        for h in targets:
            val = h.evaluate(values) if prime is None else h.evaluate_mod(values, prime)
            if val:
                bad.append(t)
                break
    return sorted(bad, key=lambda t: (t.depth, t.size, str(t)))


def affine_certificate(system, A, bases, targets, pipeline=None):
    ideals = {state_name(p): buchberger(bases[p].equations()) for p in A.states}
    return Certificate(system.space, ideals, tuple(targets), state_name(A.initial), 1, dict(pipeline or {}))


def affine_decide(system, A, targets, field=QQ):
    """(witness tree or None, bases) for the targets at the automaton's initial state."""
    for h in targets:
        if h.degree() > 1:
            raise ValueError("the affine engine needs targets of degree ≤ 1")
    bases = closure(system, A, field)
    bad = violations(system, bases[A.initial], targets)
    return (bad[0] if bad else None), bases


def _require_affine(M):
    if M.mode != NUMERIC:
        raise ValueError("the affine engine needs a numeric-mode transducer")
    if not is_total(M):
        raise ValueError("the transducer must be total; totalize it first")
    if M.params and not classify(M).non_self_nested:
        raise ValueError("self-nested transducer: use the invariant engine")


def closure_fixpoint(M, A, field=QQ, stats=None):
    _require_affine(M)
    return closure(unary_system(M), A, field, stats)


def decide_affine(M, A, q1=None, q2=None, pipeline=None):
    """Exact decision for total unary yDT or non-self-nested yDMTT relative to A."""
    _require_affine(M)
    q1 = q1 if q1 is not None else M.initial
    system = unary_system(M)
    H = unary_target(M, q1, q2)
    witness, bases = affine_decide(system, A, [H])
    dims = {p: bases[p].dimension for p in A.states}
    if witness is not None:
        zeros = [0] * M.params
        outs = (eval_unary(M, q1, witness, zeros), eval_unary(M, q2, witness, zeros))
        return Verdict(Status.NOT_EQUIVALENT, engine="affine", witness=witness, outputs=outs, basis_dims=dims)
    cert = affine_certificate(system, A, bases, [H], pipeline)
    return Verdict(Status.EQUIVALENT, engine="affine", certificate=cert, degree=1, basis_dims=dims)


def length_bound(M, N, cap=EXPONENT_CAP):
    """(h+1)^((|M|(m+1))^N) with the exponent capped; bounds values on trees of depth N."""
    exponent = _capped_power(size(M) * (M.alphabet.max_rank + 1), N, cap)
    return (math.ceil(M.h) + 1) ** exponent


def _capped_power(base, n, cap):
    out = 1
    for _ in range(n):
        out *= base
        if out >= cap:
            return cap
    return out


def prime_bound(M, A, cap=EXPONENT_CAP):
    """Upper end of the prime interval, min(D·e^D, 2^64), with 2^D above the bit length bound."""
    N = (M.n * (M.params + 1) + 1) * len(A.states)
    exponent = _capped_power(size(M) * (M.alphabet.max_rank + 1), N, cap)
    bits = exponent * (math.ceil(M.h) + 1).bit_length()
    D = max(bits.bit_length(), D_FLOOR)
    return min(int(D * math.exp(D)), 2 ** 64)


def decide_modular(M, A, q1=None, q2=None, trials=10, seed=0, cap=EXPONENT_CAP, primes=None):
    """Randomized test over Z_p for sampled primes; NotEquivalent answers are always correct."""
    _require_affine(M)
    q1 = q1 if q1 is not None else M.initial
    system = unary_system(M)
    H = unary_target(M, q1, q2)
    rng = random.Random(seed)
    upper = prime_bound(M, A, cap)
    tried = []
    for k in range(trials if primes is None else len(primes)):
        p = primes[k] if primes is not None else random_prime(rng, upper)
        tried.append(p)
        try:
            witness, _ = affine_decide(system, A, [H], PrimeField(p))
        except ZeroDivisionError:
            continue
        if witness is not None:
            zeros = [0] * M.params
            outs = (eval_unary(M, q1, witness, zeros), eval_unary(M, q2, witness, zeros))
            return Verdict(Status.NOT_EQUIVALENT, engine="modular", witness=witness, outputs=outs,
                           field=f"Z_{p}", prime=p, seed=seed)
    return Verdict(Status.PROBABLY_EQUIVALENT, engine="modular", field="Z_p", seed=seed,
                   note="primes " + ",".join(map(str, tried)))
