import time
from pathlib import Path

import pytest

from transeq.affine import closure, decide_affine
from transeq.ideals import UNIT, GroebnerBasis, buchberger, ideal_equal, vanishing_ideal
from transeq.invariants import (Budget, counterexample_pass, decide, invariant_pass, is_inductive,
                                monadic_decide, point_sets, wp)
from transeq.polynomials import Polynomial
from transeq.semantics import unary_system, unary_target
from transeq.transducers import (domain_automaton, eval_unary, merge, parse_transducer, semantics_vector,
                                 symbol_semantics, totalize, x_var)
from transeq.trees import Dtta, RankedAlphabet, enumerate_dom, parse_tree, state_name, universal
from transeq.verdict import Status

from generators import (BINARY, MONADIC, all_trees, first_numeric_difference, mutate_constant, random_unary_ydt,
                        random_ydmtt, seeded, shuffle_sums, tree_of_depth)

DATA = Path(__file__).parent / "data"

COUNTERS = """
(transducer (mode numeric) (alphabet (a 1) (e 0)) (states d c m s) (init d)
  (rule d a (x1) (call d 1) (const 2))
  (rule c a (x1) (call c 1) (const 1))
  (rule m a (x1) (call c 1) (call c 1) (const 2))
  (rule s a (x1) (call s 1) (mul 2 (call c 1)) (const 1))
  (rule d e () (const 0)) (rule c e () (const 0)) (rule m e () (const 0)) (rule s e () (const 0)))
"""


def load(name):
    return parse_transducer((DATA / name).read_text())


def product():
    M0 = load("product.tdx")
    return M0, totalize(M0), domain_automaton(M0)


def test_wp_examples():
    _, M, _ = product()
    S = unary_system(M)
    dim = M.dim
    X = lambda i, c: Polynomial.var(x_var(dim, i, c))  # noqa: E731
    z_q0 = Polynomial.var(0)
    assert wp(z_q0, "f", S) == X(1, 2) + X(1, 3) * X(2, 2) + X(1, 3) * X(2, 3)
    assert wp(Polynomial.const(5), "f", S) == Polynomial.const(5)
    # z_{q,1} at the nullary e (rule 0): the parameter coefficient is 0
    assert wp(Polynomial.var(3), "e", S) == Polynomial()
    assert symbol_semantics(M, "e")[3] == Polynomial()


def test_is_inductive_examples():
    _, M, A = product()
    S = unary_system(M)
    assert is_inductive({p: GroebnerBasis([]) for p in A.states}, S, A)
    # ⟨1⟩ everywhere fails at the nullary transition of a non-empty state
    assert not is_inductive({p: UNIT for p in A.states}, S, A)
    E = RankedAlphabet([("b", 0)])
    one = parse_transducer("(transducer (mode numeric) (alphabet (b 0)) (states q) (init q) (rule q b () (const 3)))")
    So = unary_system(one)
    Ao = universal(E)
    bar = {"*": vanishing_ideal([So.value(parse_tree("b"))], So.dim)}
    assert is_inductive(bar, So, Ao)


def test_counterexample_pass_examples():
    _, M, A = product()
    S = unary_system(M)
    assert all(I == UNIT for I in counterexample_pass(S, A, 0).values())
    I1 = counterexample_pass(S, A, 1)
    q = frozenset({"q"})
    e_val = semantics_vector(M, parse_tree("e"))
    assert I1[q] == vanishing_ideal([e_val], S.dim)
    I3 = counterexample_pass(S, A, 3)
    assert I3[A.initial].contains(Polynomial())
    for p in A.states:
        for t in enumerate_dom(A, p, 3):
            assert all(g.evaluate(semantics_vector(M, t)) == 0 for g in I3[p])


def test_counterexample_routes_agree_on_product():
    _, M, A = product()
    S = unary_system(M)
    for d in range(1, 4):
        P = counterexample_pass(S, A, d, method="points")
        Q = counterexample_pass(S, A, d, method="symbolic")
        assert all(ideal_equal(P[p], Q[p]) for p in A.states)


def test_invariant_pass_degree_one_matches_affine_hull():
    _, M, A = product()
    S = unary_system(M)
    I = invariant_pass(S, A, 1)
    assert is_inductive(I, S, A)
    B = closure(S, A)
    for p in A.states:
        assert ideal_equal(I[p], buchberger(B[p].equations()))


def test_invariant_pass_empty_language():
    _, M, _ = product()
    S = unary_system(M)
    dead = Dtta(M.alphabet, ["p"], "p", {("p", "a"): ("p",)})
    assert invariant_pass(S, dead, 2)["p"] == UNIT


def test_decide_examples():
    _, M, A = product()
    v = decide(M, A, "q0", "q0")
    assert v.status is Status.EQUIVALENT and v.degree == 1
    swapped = load("product_swapped.tdx")
    N, q1, q2 = merge(load("product.tdx"), swapped)
    T = totalize(N)
    A2 = domain_automaton(N, q1)
    v = decide(T, A2, q1, q2)
    assert v.status is Status.EQUIVALENT
    assert is_inductive({p: v.certificate.ideals[state_name(p)] for p in A2.states}, unary_system(T), A2)
    plus_n = parse_transducer((DATA / "product.tdx").read_text().replace(
        "(rule q0 f (x1 x2) (call q 1 (call q 2 (const 1))))",
        "(rule q0 f (x1 x2) (call q 1 (call q 2 (const 1))) (call q 1 (const 1)))"))
    N, q1, q2 = merge(load("product.tdx"), plus_n)
    v = decide(totalize(N), domain_automaton(N, q1), q1, q2)
    assert v.status is Status.NOT_EQUIVALENT
    assert v.witness == parse_tree("(f (a e) e)")
    assert v.outputs == (0, 1)


def test_decide_unknown_on_tiny_budget():
    _, M, A = product()
    N, q1, q2 = merge(load("product.tdx"), load("product_swapped.tdx"))
    v = decide(totalize(N), domain_automaton(N, q1), q1, q2, budget=Budget(max_degree=0, max_depth=0))
    assert v.status is Status.UNKNOWN


def test_monadic_examples():
    M = parse_transducer(COUNTERS)
    A = universal(M.alphabet)
    assert monadic_decide(M, A, "d", "d").status is Status.EQUIVALENT
    v = monadic_decide(M, A, "d", "m")
    assert v.status is Status.EQUIVALENT
    for n in range(7):
        t = tree_of_depth("a", n + 1)
        assert eval_unary(M, "d", t) == eval_unary(M, "m", t) == 2 * n
        assert eval_unary(M, "s", t) == n * n
    v = monadic_decide(M, A, "d", "s")
    assert v.status is Status.NOT_EQUIVALENT
    assert v.witness in (parse_tree("(a e)"), tree_of_depth("a", 4))
    assert v.outputs[0] != v.outputs[1]


def test_monadic_doubling_pair():
    N, q1, q2 = merge(load("doubling_nested.tdx"), load("doubling_sum.tdx"))
    T = totalize(N)
    assert monadic_decide(T, universal(T.alphabet), q1, q2).status is Status.EQUIVALENT


def test_monadic_refuses_binary_alphabet():
    _, M, A = product()
    with pytest.raises(ValueError):
        monadic_decide(M, A, "q0", "q")


def test_monadic_time_limit_gives_unknown():
    rng = seeded(4)
    for k in range(45):
        M1 = random_ydmtt(rng, n_states=rng.randint(1, 2), l=rng.randint(0, 2), nest_rate=0.15, max_items=3)
        M2 = shuffle_sums(rng, M1) if k % 2 == 0 else mutate_constant(rng, M1)
    # a self-nested equivalent pair whose least solution has large degree
    N, q1, q2 = merge(M1, M2)
    t0 = time.monotonic()
    v = monadic_decide(N, universal(N.alphabet), q1, q2, time_limit=0.5, invariant_degree=0)
    assert v.status is Status.UNKNOWN
    assert time.monotonic() - t0 < 5
    assert first_numeric_difference(M1, M2, all_trees(MONADIC, 6)) is None
    # a linear invariant already proves it
    v = monadic_decide(N, universal(N.alphabet), q1, q2)
    assert v.status is Status.EQUIVALENT and v.degree == 1


def test_engines_agree_on_non_self_nested():
    rng = seeded(12)
    trees = all_trees(BINARY, 3)
    for k in range(12):
        M1 = random_unary_ydt(rng, n_states=2, max_items=2)
        M2 = shuffle_sums(rng, M1) if k % 2 else mutate_constant(rng, M1)
        N, q1, q2 = merge(M1, M2)
        A = universal(N.alphabet)
        a = decide_affine(N, A, q1, q2)
        b = decide(N, A, q1, q2, budget=Budget(max_degree=2, max_depth=4))
        assert a.status is b.status
        if b.status is Status.NOT_EQUIVALENT:
            assert first_numeric_difference(M1, M2, trees + all_trees(BINARY, 4)) is not None


def test_monadic_agrees_with_brute_force_small():
    rng = seeded(21)
    trees = all_trees(MONADIC, 6)
    for k in range(20):
        M1 = random_ydmtt(rng, n_states=rng.randint(1, 2), l=rng.randint(0, 1), nest_rate=0.2, max_items=2,
                          max_nested=1)
        M2 = shuffle_sums(rng, M1) if k % 2 == 0 else mutate_constant(rng, M1)
        N, q1, q2 = merge(M1, M2)
        v = monadic_decide(N, universal(N.alphabet), q1, q2, time_limit=20, invariant_degree=0)
        d = first_numeric_difference(M1, M2, trees)
        if v.status is Status.NOT_EQUIVALENT:
            assert v.outputs[0] != v.outputs[1]
            assert d is not None
        else:
            assert v.status is Status.EQUIVALENT and d is None


def test_point_sets_are_distinct_values():
    _, M, A = product()
    S = unary_system(M)
    pts = point_sets(S, A, 3)
    for p in A.states:
        vals = {semantics_vector(M, t) for t in enumerate_dom(A, p, 3)}
        assert set(pts[p]) == vals
        I = vanishing_ideal(pts[p], S.dim)
        assert all(g.evaluate(v) == 0 for g in I for v in vals)
    assert unary_target(M, "q0", "q0") == Polynomial()
