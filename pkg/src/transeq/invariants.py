"""Polynomial inductive invariants: checking, the monadic fixpoint and the twin-loop decision.

An invariant map assigns an ideal I_p over z to every automaton state such that
for each transition ρ(p, f) = (p1, ..., pk) and each generator g of I_p,
g[r^{(f)}/z] lies in ⟨I_{p1}(x_1) ∪ ... ∪ I_{pk}(x_k)⟩.  Such a map certifies
g(⟦t⟧) = 0 for all t ∈ dom(p).
"""

import heapq
import time
from dataclasses import dataclass
from itertools import product

from .ideals import (UNIT, GroebnerBasis, buchberger, eliminate, extend_basis, intersect_all,
                     vanishing_ideal)
from .linalg import QQ, Echelon, nullspace
from .polynomials import GRLEX, Polynomial, mono_mul
from .semantics import unary_system, unary_target
from .transducers import NUMERIC, eval_unary, is_total
from .trees import Tree, state_name
from .verdict import Certificate, Status, Verdict

D_SWITCH = 3


@dataclass
class Budget:
    """Limits for the twin loops; exhaustion yields an Unknown verdict."""
    max_degree: int = 3
    max_depth: int = 6
    max_points: int = 20000         # cap on distinct values kept per state by the counterexample side
    time_limit: float = None        # seconds
    max_demands: int = 5000         # monadic fixpoint iterations


def wp(r, f, system):
    """Weakest precondition r[r^{(f)}/z]."""
    return system.wp(r, f)


def monadic_wp(r, f, system):
    """wp for a symbol of rank ≤ 1, with the x_1 block renamed back to z."""
    k = system.alphabet.rank(f)
    if k > 1:
        raise ValueError(f"symbol {f} is not monadic")
    p = system.wp(r, f)
    return p.shift(-system.dim) if k == 1 else p


def child_ideal(I, targets, dim):
    """⟨I_{p1}(x_1) ∪ ... ∪ I_{pk}(x_k)⟩; the union of bases on disjoint blocks is a basis."""
    polys = []
    for i, q in enumerate(targets, start=1):
        J = I.get(q)
        if J is None or J.is_zero():
            continue
        if J.is_unit():
            return UNIT
        polys.extend(J.shift(i * dim).polys)
    return GroebnerBasis(polys, GRLEX)


def is_inductive(I, system, A, explain=False):
    """Check every generator of every I_p against every transition out of p."""
    for p, f, targets in A.transitions():
        Ip = I.get(p)
        if Ip is None or Ip.is_zero():
            continue
        J = child_ideal(I, targets, system.dim)
        for g in Ip.polys:
            if not J.contains(system.wp(g, f)):
                if explain:
                    return False, f"generator {system.space.format(g)} of {state_name(p)} fails at {f}"
                return False
    return (True, "") if explain else True


def check_certificate(cert, system, A):
    """(ok, reason): inductive, and every target in the ideal of the initial state."""
    by_name = {state_name(p): p for p in A.states}
    unknown = set(cert.ideals) - set(by_name)
    if unknown:
        return False, f"certificate names unknown states {sorted(unknown)}"
    if cert.initial != state_name(A.initial):
        return False, "certificate initial state does not match the automaton"
    if cert.space != system.space:
        return False, "coordinate labels do not match the transducer"
    I = {by_name[name]: buchberger(J.polys) for name, J in cert.ideals.items()}
    ok, why = is_inductive(I, system, A, explain=True)
    if not ok:
        return False, "not inductive: " + why
    I0 = I.get(A.initial, GroebnerBasis([]))
    for h in cert.targets:
        if not I0.contains(h):
            return False, f"target {system.space.format(h)} is not in the initial ideal"
    return True, "ok"


# counterexample side: values of dom_d(p)

class ValueLayers:
    """Distinct values ⟦t⟧ for t ∈ dom_d(p), grown one depth at a time, each with a tree."""

    def __init__(self, system, A, max_points=None):
        self.system = system
        self.A = A
        self.depth = 0
        self.values = {p: {} for p in A.states}     # value -> tree, insertion ordered
        self.max_points = max_points
        self.saturated = False

    def grow(self):
        """Extend to depth + 1; returns the values new at the initial state."""
        sys_, A = self.system, self.A
        snapshot = {p: list(v.items()) for p, v in self.values.items()}
        fresh = {p: {} for p in A.states}
        for p, f, targets in A.transitions():
            pools = [snapshot[q] for q in targets]
            if any(not pool for pool in pools):
                continue
            for combo in product(*pools):
                if targets and max(t.depth for _, t in combo) != self.depth:
                    continue
                if not targets and self.depth:
                    continue
                v = sys_.apply(f, [val for val, _ in combo])
                if v not in self.values[p] and v not in fresh[p]:
                    fresh[p][v] = Tree(f, [t for _, t in combo])
        for p, new in fresh.items():
            self.values[p].update(new)
        self.depth += 1
        if self.max_points is not None and any(len(v) > self.max_points for v in self.values.values()):
            self.saturated = True
        if not any(fresh.values()):
            self.saturated = True
        return fresh[A.initial]


def point_sets(system, A, d):
    layers = ValueLayers(system, A)
    for _ in range(d):
        layers.grow()
    return {p: list(v) for p, v in layers.values.items()}


def counterexample_pass(system, A, d, method="auto"):
    """bar I^{(d)}: the vanishing ideal of {⟦t⟧ : t ∈ dom_d(p)} for every state p."""
    if method == "auto":
        method = "points" if d <= D_SWITCH else "symbolic"
    if method == "points":
        return {p: vanishing_ideal(pts, system.dim) for p, pts in point_sets(system, A, d).items()}
    if method != "symbolic":
        raise ValueError(f"unknown method {method!r}")
    I = {p: UNIT for p in A.states}
    for _ in range(d):
        I = {p: _iterate_state(system, A, I, p) for p in A.states}
    return I


def _iterate_state(system, A, I, p):
    parts = []
    for f in A.alphabet:
        targets = A.rules.get((p, f))
        if targets is None:
            continue
        img = transfer(system, f, [I[q] for q in targets])
        if not img.is_unit():
            parts.append(img)
    return intersect_all(parts)


def transfer(system, f, ideals):
    """⟦f⟧^♯: (⟨z_j − r^{(f)}_j⟩ + Σ_i I_i(x_i)) ∩ Q[z]."""
    dim = system.dim
    if any(J.is_unit() for J in ideals):
        return UNIT
    gens = [Polynomial.var(j) - system.rows[f][j] for j in range(dim)]
    for i, J in enumerate(ideals, start=1):
        gens.extend(J.shift(i * dim).polys)
    return eliminate(gens, dim)


# invariant side: greatest solution inside degree ≤ d

def monomials_upto(nvars, d):
    """All monomials of total degree ≤ d, in decreasing grlex order."""
    layer = [()]
    out = [()]
    for _ in range(d):
        nxt = set()
        for m in layer:
            for v in range(nvars):
                nxt.add(mono_mul(m, ((v, 1),)))
        layer = list(nxt)
        out.extend(layer)
    return sorted(set(out), key=GRLEX.key, reverse=True)


class _DegreeSpace:
    """Subspaces of Q_d[z] as reduced echelon bases over the decreasing monomial list."""

    def __init__(self, dim, d):
        self.monos = monomials_upto(dim, d)
        self.index = {m: k for k, m in enumerate(self.monos)}

    def to_vec(self, p):
        v = [0] * len(self.monos)
        for m, c in p.terms.items():
            v[self.index[m]] = c
        return v

    def to_poly(self, v):
        return Polynomial({self.monos[k]: c for k, c in enumerate(v) if c})

    def full(self):
        return [Polynomial.monomial(m) for m in self.monos]

    def canonical(self, polys):
        ech = Echelon(QQ, len(self.monos))
        for p in polys:
            ech.add(self.to_vec(p))
        return [self.to_poly(r) for r in ech.basis()]


def invariant_pass(system, A, d, deadline=None):
    """I_{p,d}: greatest solution of I_p ⊆ α_d(⋂_f ⟦f⟧^♯(I_{p1}, ..., I_{pk})).

    Works on the degree-≤d parts W_p = I_p ∩ Q_d[z]: starting from W_p = Q_d[z],
    W_p is cut down to the polynomials whose weakest precondition lies in the
    children's ideal, until nothing changes.  Returns reduced bases of ⟨W_p⟩.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    space = _DegreeSpace(system.dim, d)
    W = {p: space.full() for p in A.states}
    G = {p: UNIT for p in A.states}
    parents = {p: set() for p in A.states}
    out_edges = {p: [] for p in A.states}
    for p, f, targets in A.transitions():
        out_edges[p].append((f, targets))
        for q in targets:
            parents[q].add(p)
    wp_cache = {}

    def wp_mono(f, m):
        key = (f, m)
        if key not in wp_cache:
            wp_cache[key] = system.wp(Polynomial.monomial(m), f)
        return wp_cache[key]

    todo = list(A.states)
    queued = set(todo)
    while todo:
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("invariant pass exceeded the time budget")
        p = todo.pop(0)
        queued.discard(p)
        basis = W[p]
        for f, targets in out_edges[p]:
            if not basis:
                break
            J = child_ideal(G, targets, system.dim)
            if J.is_unit():
                continue
            images = []
            nf_cache = {}
            for w in basis:
                img = Polynomial()
                for m, c in w.terms.items():
                    if m not in nf_cache:
                        nf_cache[m] = J.normal_form(wp_mono(f, m))
                    img = img + nf_cache[m] * c
                images.append(img)
            if not any(images):
                continue
            cols = _columns(images)
            kernel = nullspace(cols, QQ)
            new = [sum((w * c for w, c in zip(basis, vec) if c), Polynomial()) for vec in kernel]
            basis = space.canonical(new)
        if len(basis) != len(W[p]):
            W[p] = basis
            G[p] = buchberger(basis)
            for r in parents[p]:
                if r not in queued:
                    todo.append(r)
                    queued.add(r)
    return {p: G[p] for p in A.states}


def _columns(polys):
    monos = sorted({m for p in polys for m in p.terms}, key=GRLEX.key)
    idx = {m: k for k, m in enumerate(monos)}
    cols = []
    for p in polys:
        v = [0] * len(monos)
        for m, c in p.terms.items():
            v[idx[m]] = c
        cols.append(v)
    return cols


def make_certificate(system, A, I, targets, degree, pipeline=None):
    ideals = {state_name(p): I[p] for p in A.states}
    return Certificate(system.space, ideals, tuple(targets), state_name(A.initial), degree, dict(pipeline or {}))


def invariant_decide(system, A, targets, budget=None, pipeline=None):
    """Twin loops for d = 1, 2, ...: look for a violating value of depth ≤ d, then for a
    degree-d invariant containing the targets.  Returns (status, witness, certificate, degree)."""
    budget = budget or Budget()
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
    layers = ValueLayers(system, A, budget.max_points)
    top = max(budget.max_degree, budget.max_depth)
    for d in range(1, top + 1):
        if d <= budget.max_depth and not layers.saturated:
            fresh = layers.grow()
            for v, t in fresh.items():
                values = list(v)
                if any(h.evaluate(values) for h in targets):
                    return Status.NOT_EQUIVALENT, t, None, d
        if d <= budget.max_degree:
            try:
                I = invariant_pass(system, A, d, deadline)
            except TimeoutError:
                return Status.UNKNOWN, None, None, d
            if all(I[A.initial].contains(h) for h in targets):
                cert = make_certificate(system, A, I, targets, d, pipeline)
                return Status.EQUIVALENT, None, cert, d
        if deadline is not None and time.monotonic() > deadline:
            return Status.UNKNOWN, None, None, d
    return Status.UNKNOWN, None, None, top


def monadic_fixpoint(system, A, targets, max_demands=5000, time_limit=None):
    """Least solution of the wp demands from ⟨targets⟩ at the initial state.

    Returns (status, witness, ideals).  Each accepted demand r at p is checked
    against the nullary transitions of p; a failure yields a witness by walking
    the chain of demands that produced r.  Unknown when a limit is reached.
    """
    deadline = None if time_limit is None else time.monotonic() + time_limit
    if system.alphabet.max_rank > 1:
        raise ValueError("monadic_decide needs an input alphabet of ranks ≤ 1")
    dim = system.dim
    I = {p: GroebnerBasis([]) for p in A.states}
    nullary = {p: [] for p in A.states}
    unary = {p: [] for p in A.states}
    for p, f, targets_ in A.transitions():
        (nullary if not targets_ else unary)[p].append((f, targets_))
    # demand = (state, polynomial, parent demand index, symbol leading here)
    demands = [(A.initial, h, None, None) for h in targets]
    for k, h in enumerate(targets):
        failing = _failing_leaf(system, h, nullary[A.initial])
        if failing is not None:
            return Status.NOT_EQUIVALENT, _chain_witness(demands, k, failing), I
    # lowest degree first: the least solution does not depend on the order
    queue = [(h.degree(), k) for k, h in enumerate(targets)]
    heapq.heapify(queue)
    done = 0
    while queue:
        if done >= max_demands or (deadline is not None and time.monotonic() > deadline):
            return Status.UNKNOWN, None, I
        done += 1
        _, k = heapq.heappop(queue)
        p, r, _, _ = demands[k]
        # the remainder generates the same ideal together with I_p, at lower degree
        r = I[p].normal_form(r)
        if not r:
            continue
        # every demand lies in the least solution, so it is checked at the
        # nullary rules as soon as it exists: shallow witnesses do not wait
        # behind expensive basis extensions
        for f, (q,) in unary[p]:
            w = monadic_wp(r, f, system)
            demands.append((q, w, k, f))
            failing = _failing_leaf(system, w, nullary[q])
            if failing is not None:
                return Status.NOT_EQUIVALENT, _chain_witness(demands, len(demands) - 1, failing), I
            heapq.heappush(queue, (w.degree(), len(demands) - 1))
        try:
            I[p] = extend_basis(I[p], [r], deadline)
        except TimeoutError:
            return Status.UNKNOWN, None, I
    return Status.EQUIVALENT, None, I


def _failing_leaf(system, r, leaves):
    for b, _ in leaves:
        if system.wp(r, b).constant_term():
            return b
    return None


def _chain_witness(demands, k, leaf):
    t = Tree(leaf)
    while k is not None:
        _, _, parent, f = demands[k]
        if f is not None:
            t = Tree(f, (t,))
        k = parent
    return t


# transducer-level entry points

def _require_numeric_total(M):
    if M.mode != NUMERIC:
        raise ValueError("the invariant engine needs a numeric-mode transducer")
    if not is_total(M):
        raise ValueError("the transducer must be total; totalize it first")


def _outputs(M, q1, q2, t):
    zeros = [0] * M.params
    return eval_unary(M, q1, t, zeros), eval_unary(M, q2, t, zeros)


def monadic_search(system, A, targets, max_demands=5000, time_limit=None, invariant_degree=1):
    """(status, witness, ideals, degree) for a monadic system.

    Inductive invariants of degree ≤ invariant_degree are tried first: any of them
    containing the targets proves equivalence, and self-nested rules can make the
    demand degrees double where a linear invariant already exists.  Pass 0 to go
    straight to the least fixpoint.
    """
    if system.alphabet.max_rank > 1:
        raise ValueError("monadic_decide needs an input alphabet of ranks ≤ 1")
    for d in range(1, invariant_degree + 1):
        I = invariant_pass(system, A, d)
        if all(I[A.initial].contains(h) for h in targets):
            return Status.EQUIVALENT, None, I, d
    status, witness, I = monadic_fixpoint(system, A, targets, max_demands, time_limit)
    if status is Status.EQUIVALENT:
        return status, None, I, max(0, max(I[p].degree() for p in A.states))
    return status, witness, I, None


def monadic_decide(M, A, q1=None, q2=None, max_demands=5000, pipeline=None, time_limit=None,
                   invariant_degree=1):
    _require_numeric_total(M)
    q1 = q1 if q1 is not None else M.initial
    system = unary_system(M)
    H = unary_target(M, q1, q2)
    status, witness, I, degree = monadic_search(system, A, [H], max_demands, time_limit, invariant_degree)
    if status is Status.NOT_EQUIVALENT:
        return Verdict(status, engine="monadic", witness=witness, outputs=_outputs(M, q1, q2, witness))
    if status is Status.UNKNOWN:
        return Verdict(status, engine="monadic", note="demand or time limit reached")
    cert = make_certificate(system, A, I, [H], degree, pipeline)
    return Verdict(status, engine="monadic", certificate=cert, degree=degree)


def decide(M, A, q1=None, q2=None, budget=None, pipeline=None):
    _require_numeric_total(M)
    q1 = q1 if q1 is not None else M.initial
    system = unary_system(M)
    H = unary_target(M, q1, q2)
    status, witness, cert, d = invariant_decide(system, A, [H], budget, pipeline)
    if status is Status.NOT_EQUIVALENT:
        return Verdict(status, engine="invariant", witness=witness, outputs=_outputs(M, q1, q2, witness), degree=d)
    if status is Status.EQUIVALENT:
        return Verdict(status, engine="invariant", certificate=cert, degree=d)
    return Verdict(status, engine="invariant", degree=d, note="budget exhausted")
