"""Gröbner bases (Buchberger), normal forms and the ideal operations built on them."""

import heapq
import time
from fractions import Fraction

from .polynomials import (GRLEX, ONE, BlockOrder, Polynomial, mono_coprime, mono_deg,
                          mono_div, mono_divides, mono_lcm, mono_mul)


class GroebnerBasis:
    """Reduced, monic Gröbner basis; the empty basis is the zero ideal."""

    __slots__ = ("polys", "order")

    def __init__(self, polys, order=GRLEX):
        self.polys = tuple(polys)
        self.order = order

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.order == other.order and self.polys == other.polys

    def __hash__(self):
        return hash(self.polys)

    def __repr__(self):
        return "GroebnerBasis([%s])" % ", ".join(map(str, self.polys))

    def is_unit(self):
        return len(self.polys) == 1 and self.polys[0].is_constant()

    def is_zero(self):
        return not self.polys

    def normal_form(self, f):
        return normal_form(f, self.polys, self.order)

    def contains(self, f):
        return not normal_form(f, self.polys, self.order)

    def shift(self, offset):
        """Rename every variable v to v + offset; order-preserving, so still a basis."""
        return GroebnerBasis([g.shift(offset) for g in self.polys], self.order)

    def degree(self):
        return max((g.degree() for g in self.polys), default=-1)


UNIT = GroebnerBasis([Polynomial.const(1)])
ZERO = GroebnerBasis([])


def _keyed(order):
    cache = {}

    def key(m):
        k = cache.get(m)
        if k is None:
            k = cache[m] = order.key(m)
        return k
    return key


class _Desc:
    """Heap entry that pops the largest monomial first."""
    __slots__ = ("k", "m")

    def __init__(self, k, m):
        self.k = k
        self.m = m

    def __lt__(self, other):
        return other.k < self.k


def normal_form(f, polys, order=GRLEX):
    """Fully reduce f by `polys`; the result has no term divisible by a leading monomial."""
    if not polys or not f.terms:
        return f
    leads = []
    for g in polys:
        lm, lc = g.leading(order)
        if not lm:
            return Polynomial()
        leads.append((lm, lc, g))
    key = _keyed(order)
    p = dict(f.terms)
    heap = [_Desc(key(m), m) for m in p]
    heapq.heapify(heap)
    queued = set(p)
    rest = {}
    while heap:
        m = heapq.heappop(heap).m
        queued.discard(m)
        c = p.pop(m, None)
        if c is None:
            continue
        for lm, lc, g in leads:
            q = mono_div(m, lm)
            if q is None:
                continue
            factor = c / lc
            for gm, gc in g.terms.items():
                if gm == lm:
                    continue
                mm = mono_mul(gm, q)
                s = p.get(mm, 0) - factor * gc
                if s:
                    p[mm] = s
                    if mm not in queued:
                        queued.add(mm)
                        heapq.heappush(heap, _Desc(key(mm), mm))
                else:
                    p.pop(mm, None)
            break
        else:
            rest[m] = c
    return Polynomial._raw(rest)


def spoly(f, g, order=GRLEX):
    (mf, cf), (mg, cg) = f.leading(order), g.leading(order)
    lcm = mono_lcm(mf, mg)
    return f.mul_term(mono_div(lcm, mf), 1 / cf) - g.mul_term(mono_div(lcm, mg), 1 / cg)


def _monic_gens(gens, order):
    """Nonzero generators made monic; None when one of them is a nonzero constant."""
    out = []
    for f in gens:
        if not isinstance(f, Polynomial):
            f = Polynomial.const(f)
        if f.terms:
            if f.is_constant():
                return None
            out.append(f.monic(order))
    return out


def buchberger(gens, order=GRLEX):
    """Reduced Gröbner basis of ⟨gens⟩ with product and chain criteria, normal selection."""
    basis = _monic_gens(gens, order)
    if basis is None:
        return GroebnerBasis([Polynomial.const(1)], order)
    return _complete(list(dict.fromkeys(basis)), 0, order)


def extend_basis(G, gens, deadline=None):
    """Reduced basis of ⟨G ∪ gens⟩ for a Gröbner basis G; only pairs with a new element are formed.

    deadline: time.monotonic() value after which TimeoutError is raised.
    """
    if G.is_unit():
        return G
    new = _monic_gens(gens, G.order)
    if new is None:
        return GroebnerBasis([Polynomial.const(1)], G.order)
    basis = list(G.polys)
    new = [f for f in dict.fromkeys(new) if f not in basis]
    return _complete(basis + new, len(basis), G.order, deadline)


def _complete(basis, first_new, order, deadline=None):
    """Run Buchberger's loop when basis[:first_new] is already a Gröbner basis."""
    if not basis:
        return GroebnerBasis([], order)
    key = _keyed(order)
    lms = [g.leading(order)[0] for g in basis]
    pending = set()
    heap = []

    def push(i, j):
        lcm = mono_lcm(lms[i], lms[j])
        pending.add((i, j))
        heapq.heappush(heap, (key(lcm), i, j))

    for j in range(max(first_new, 1), len(basis)):
        for i in range(j):
            push(i, j)
    while heap:
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("Gröbner basis computation exceeded the time budget")
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        if mono_coprime(lms[i], lms[j]):
            continue
        lcm = mono_lcm(lms[i], lms[j])
        if _chain_skip(i, j, lcm, lms, pending):
            continue
        h = normal_form(spoly(basis[i], basis[j], order), basis, order)
        if not h.terms:
            continue
        if h.is_constant():
            return GroebnerBasis([Polynomial.const(1)], order)
        h = h.monic(order)
        basis.append(h)
        lms.append(h.leading(order)[0])
        k = len(basis) - 1
        for i2 in range(k):
            push(i2, k)
    return GroebnerBasis(_reduce_basis(basis, order), order)


def _chain_skip(i, j, lcm, lms, pending):
    for k in range(len(lms)):
        if k == i or k == j:
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        if mono_divides(lms[k], lcm):
            return True
    return False


def _reduce_basis(basis, order):
    """Minimalize then inter-reduce; result sorted by increasing leading monomial."""
    key = _keyed(order)
    basis = sorted(basis, key=lambda g: key(g.leading(order)[0]))
    minimal = []
    for g in basis:
        lm = g.leading(order)[0]
        if not any(mono_divides(h.leading(order)[0], lm) for h in minimal):
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        lm, lc = g.leading(order)
        tail = Polynomial._raw({m: c for m, c in g.terms.items() if m != lm})
        tail = normal_form(tail, others, order)
        out.append((Polynomial.monomial(lm, lc) + tail).monic(order))
    return out


def is_groebner(polys, order=GRLEX):
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    polys = list(polys)
    for j in range(len(polys)):
        for i in range(j):
            if normal_form(spoly(polys[i], polys[j], order), polys, order).terms:
                return False
    return True


def member(f, I):
    return I.contains(f)


def contains_all(I, polys):
    return all(I.contains(g) for g in polys)


def ideal_equal(I, J):
    """Mutual generator membership."""
    return contains_all(I, J.polys) and contains_all(J, I.polys)


def ideal_sum(I1, I2):
    if I1.is_unit() or I2.is_unit():
        return GroebnerBasis([Polynomial.const(1)], I1.order)
    return buchberger(list(I1.polys) + list(I2.polys), I1.order)


def rename(I, block, dim):
    """z_j ↦ x_{block,j}, i.e. shift variables by block*dim."""
    for g in I.polys:
        if any(v >= dim for v in g.variables()):
            raise ValueError("ideal is not over the z variables")
    return I.shift(block * dim)


def substitute(f, images):
    return f.substitute(images)


def eliminate(gens, split):
    """Basis of ⟨gens⟩ ∩ Q[v : v < split], via a block order with the other variables first."""
    G = buchberger(gens, BlockOrder(split))
    kept = [g for g in G.polys if all(v < split for v in g.variables())]
    return GroebnerBasis(kept, GRLEX)


def degree_truncate(I, d):
    """α_d: the ideal generated by the basis elements of degree ≤ d (graded order)."""
    return GroebnerBasis([g for g in I.polys if g.degree() <= d], I.order)


def intersect(I, J):
    """I ∩ J by eliminating t from t·I + (1 − t)·J."""
    if I.is_zero() or J.is_zero():
        return GroebnerBasis([], GRLEX)
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    t = 1 + max(v for g in I.polys + J.polys for v in g.variables())
    tv = Polynomial.var(t)
    gens = [tv * g for g in I.polys] + [(1 - tv) * g for g in J.polys]
    return eliminate(gens, t)


def intersect_all(ideals):
    """Intersection of a list of ideals; the empty intersection is ⟨1⟩."""
    out = None
    for I in ideals:
        out = I if out is None else intersect(out, I)
    return out if out is not None else UNIT


def point_ideal(point):
    """Maximal ideal ⟨v_j − point_j⟩."""
    return GroebnerBasis([Polynomial.var(j) - Fraction(c) for j, c in enumerate(point)][::-1], GRLEX)


def vanishing_ideal_by_intersection(points, nvars):
    pts = list(dict.fromkeys(tuple(Fraction(c) for c in p) for p in points))
    for p in pts:
        if len(p) != nvars:
            raise ValueError("point has wrong dimension")
    return intersect_all([buchberger(point_ideal(p).polys) for p in pts])


def vanishing_ideal(points, nvars):
    """Reduced grlex basis of I(points) over v_0..v_{nvars-1} (Buchberger–Möller)."""
    pts = list(dict.fromkeys(tuple(Fraction(c) for c in p) for p in points))
    for p in pts:
        if len(p) != nvars:
            raise ValueError("point has wrong dimension")
    key = GRLEX.key
    rows = []           # (pivot, vector, polynomial), vectors fully reduced
    basis = []
    lead = []
    todo = {ONE}
    while todo:
        t = min(todo, key=key)
        todo.discard(t)
        if any(mono_divides(m, t) for m in lead):
            continue
        vec = [_mono_value(t, p) for p in pts]
        poly = Polynomial.monomial(t)
        for piv, rv, rp in rows:
            c = vec[piv]
            if c:
                vec = [a - c * b for a, b in zip(vec, rv)]
                poly = poly - rp * c
        piv = next((k for k, c in enumerate(vec) if c), None)
        if piv is None:
            basis.append(poly)
            lead.append(t)
            continue
        c = vec[piv]
        vec = [a / c for a in vec]
        poly = poly * (1 / c)
        for idx, (p2, rv, rp) in enumerate(rows):
            e = rv[piv]
            if e:
                rows[idx] = (p2, [a - e * b for a, b in zip(rv, vec)], rp - poly * e)
        rows.append((piv, vec, poly))
        for v in range(nvars):
            todo.add(mono_mul(t, ((v, 1),)))
    return GroebnerBasis(sorted(basis, key=lambda g: key(g.leading()[0])), GRLEX)


def _mono_value(mono, point):
    out = Fraction(1)
    for v, e in mono:
        out *= point[v] ** e
    return out
