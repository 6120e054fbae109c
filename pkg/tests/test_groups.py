from itertools import product
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transeq.groups import (LETTERS, SANOV, decide_free_group, decide_matrix, det2, f1_encode, format_alpha,
                            mat_mul, matrix_symbol_semantics, matrix_system, parse_alpha, parse_word,
                            reduce_word, reduced_words, sanov, verify_matrix_certificate, word_matrix)
from transeq.polynomials import Polynomial
from transeq.sexpr import ParseError
from transeq.transducers import STRING, Call, Out, Seq, Transducer, eval_string, parse_transducer
from transeq.trees import RankedAlphabet, parse_tree
from transeq.verdict import Status

from generators import BINARY, all_trees, free_group_difference, insert_cancelling, random_ydt, seeded

DATA = Path(__file__).parent / "data"
ALPHA = {"a1": ((3, 1), (0, 1)), "a2": ((3, 2), (0, 1))}
LEAF = RankedAlphabet([("g", 1), ("e", 0)])


def load(name):
    return parse_transducer((DATA / name).read_text())


def w(text):
    return parse_word(text)


def writer(word, name="q", letters=LETTERS):
    rules = {(name, "e"): Seq(tuple(Out(a) for a in word)), (name, "g"): Call(name, 1)}
    return Transducer(LEAF, [name], name, rules, mode=STRING, output=letters)


def test_reduce_word_examples():
    assert reduce_word(w("a b b- a-")) == ()
    assert reduce_word(w("a a- a")) == ("a",)
    assert reduce_word(w("a b a-")) == ("a", "b", "a-")


def test_sanov_examples():
    assert sanov(("a",)) == ((1, 0), (2, 1))
    assert sanov(w("a a-")) == ((1, 0), (0, 1))
    assert sanov(w("ab")) == ((1, 2), (2, 5))


def test_f1_examples():
    assert f1_encode(()) == 0
    assert f1_encode(w("a a a-")) == 1
    assert f1_encode(w("a- a-")) == -2
    with pytest.raises(ValueError):
        f1_encode(w("b"))


def test_reduced_word_counts():
    assert [len(reduced_words(n)) for n in range(7)] == [1, 4, 12, 36, 108, 324, 972]


def test_sanov_injective_on_short_reduced_words():
    seen = {}
    for n in range(5):
        for u in reduced_words(n):
            m = sanov(u)
            assert det2(m) == 1
            assert seen.setdefault(m, u) == u


words = st.lists(st.sampled_from(LETTERS), max_size=8).map(tuple)


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_sanov_is_a_homomorphism(u, v):
    assert sanov(u + v) == mat_mul(sanov(u), sanov(v))
    assert det2(sanov(u)) == 1
    assert sanov(u) == sanov(reduce_word(u))


def test_matrix_example_rule_semantics():
    S = RankedAlphabet([("f", 2), ("e", 0)])
    rules = {("q", "f"): Seq((Out("a1"), Call("q1", 2), Out("a2"), Call("q2", 1)))}
    for q in ("q", "q1", "q2"):
        rules[q, "e"] = Seq(())
        rules.setdefault((q, "f"), Seq(()))
    M = Transducer(S, ["q", "q1", "q2"], "q", rules, mode=STRING, output=("a1", "a2"))
    rows = matrix_symbol_semantics(M, ALPHA, "f")
    dim = 3 * 4

    def X(i, state, lam, mu):
        return Polynomial.var(i * dim + state * 4 + (lam - 1) * 2 + (mu - 1))

    def const(m):
        return [[Polynomial.const(c) for c in row] for row in m]

    def var(i, state):
        return [[X(i, state, lam, mu) for mu in (1, 2)] for lam in (1, 2)]

    def mul(A, B):
        return [[sum((A[i][k] * B[k][j] for k in range(2)), Polynomial()) for j in range(2)] for i in range(2)]

    want = mul(mul(mul(const(ALPHA["a1"]), var(2, 1)), const(ALPHA["a2"])), var(1, 2))
    assert list(rows[:4]) == [want[0][0], want[0][1], want[1][0], want[1][1]]
    # q(e) → ε gives the identity
    assert matrix_symbol_semantics(M, ALPHA, "e")[:4] == tuple(Polynomial.const(c) for c in (1, 0, 0, 1))
    assert matrix_system(M, ALPHA).is_multi_affine()


def test_matrix_example_closed_form():
    for s in range(5):
        for js in product((1, 2), repeat=s):
            m = word_matrix(["a%d" % j for j in js], ALPHA)
            assert m == ((3 ** s, sum(3 ** lam * j for lam, j in enumerate(js))), (0, 1))


def test_free_group_examples():
    ab, ba = load("sanov_ab.tdx"), load("sanov_ba.tdx")
    v = decide_free_group(ab, ba)
    assert v.status is Status.NOT_EQUIVALENT
    assert v.witness == parse_tree("(g e)")
    assert reduce_word(v.outputs[0]) != reduce_word(v.outputs[1])
    cancel = load("sanov_cancel.tdx")
    v = decide_free_group(ab, cancel)
    assert v.status is Status.EQUIVALENT
    ok, why = verify_matrix_certificate(v.certificate, ab, cancel, SANOV)
    assert ok, why
    ok, _ = verify_matrix_certificate(v.certificate, ab, ba, SANOV)
    assert not ok


def test_f1_examples_through_counting():
    aa = writer(("a", "a"), letters=("a", "a-"))
    same = writer(("a", "a-", "a", "a"), "r", letters=("a", "a-"))
    other = writer(("a", "a-"), "r", letters=("a", "a-"))
    assert decide_free_group(aa, same, group="F1").status is Status.EQUIVALENT
    assert decide_free_group(aa, other, group="F1").status is Status.NOT_EQUIVALENT
    with pytest.raises(ValueError):
        decide_free_group(aa, writer(("b",), "r"), group="F1")


def test_decide_matrix_on_example_alphabet():
    S = RankedAlphabet([("f", 2), ("e", 0)])
    def infix(name, first, second):
        return Transducer(S, [name], name, {(name, "f"): Seq((Call(name, first), Out("a1"), Call(name, second))),
                                            (name, "e"): Out("a2")}, mode=STRING, output=("a1", "a2"))

    def prefix(name, first, second):
        return Transducer(S, [name], name, {(name, "f"): Seq((Out("a1"), Call(name, first), Call(name, second))),
                                            (name, "e"): Out("a2")}, mode=STRING, output=("a1", "a2"))

    # in-order outputs are (a2 a1)^k a2 whatever the shape, so mirroring changes nothing
    assert decide_matrix(infix("q", 1, 2), infix("r", 2, 1), ALPHA).status is Status.EQUIVALENT
    M, swapped = prefix("q", 1, 2), prefix("r", 2, 1)
    v = decide_matrix(M, swapped, ALPHA)
    assert v.status is Status.NOT_EQUIVALENT
    assert eval_string(M, "q", v.witness) != eval_string(swapped, "r", v.witness)


def test_alpha_text_round_trip():
    alpha = parse_alpha((DATA / "alpha_m12.txt").read_text())
    assert alpha == ALPHA
    assert parse_alpha(format_alpha(alpha)) == alpha
    with pytest.raises(ParseError):
        parse_alpha("(interpretation (a1 (3 1) (0 1)) (a2 (3)))")


def test_free_group_random_linear():
    rng = seeded(40)
    trees = all_trees(BINARY, 3)
    for k in range(15):
        M1 = random_ydt(rng, letters=LETTERS, linear=True, max_items=3)
        M2 = insert_cancelling(rng, M1) if k % 2 else random_ydt(rng, letters=LETTERS, linear=True, prefix="p")
        v = decide_free_group(M1, M2)
        d = free_group_difference(M1, M2, trees)
        assert (v.status is Status.EQUIVALENT) == (d is None)
