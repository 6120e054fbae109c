from pathlib import Path

import pytest

from transeq.equivalence import abelian_decide, decide_partial, evaluate, prepare, verify_certificate
from transeq.invariants import Budget
from transeq.transducers import (STRING, Out, Seq, Transducer, domain_automaton, parse_transducer, totalize)
from transeq.trees import RankedAlphabet, parse_dtta, parse_tree
from transeq.verdict import Certificate, Status

from generators import BINARY, all_trees, first_string_difference, random_ydt, seeded

DATA = Path(__file__).parent / "data"
LEAF = RankedAlphabet([("g", 1), ("e", 0)])


def load(name):
    return parse_transducer((DATA / name).read_text())


def leaf_writer(word, name="q"):
    rules = {(name, "e"): Seq(tuple(Out(a) for a in word)), (name, "g"): Seq(())}
    return Transducer(LEAF, [name], name, rules, mode=STRING, output=("a", "b"))


def test_intro_pair_is_equivalent_with_certificate():
    M, Mp = load("intro_m.tdx"), load("intro_mp.tdx")
    v = decide_partial(M, Mp)
    assert v.status is Status.EQUIVALENT
    assert v.certificate.pipeline["encoding"] == "unarize"
    ok, why = verify_certificate(Certificate.from_text(v.certificate.to_text()), M, Mp)
    assert ok, why
    for t in all_trees(M.alphabet, 4):
        assert evaluate(M, t) == evaluate(Mp, t)


def test_certificate_rejected_for_other_pair():
    M, Mp = load("intro_m.tdx"), load("intro_mp.tdx")
    cert = decide_partial(M, Mp).certificate
    other = Mp.replace(rules={**Mp.rules, ("p", "e"): Seq((Out("b"), Out("a")))})
    ok, _ = verify_certificate(cert, M, other)
    assert not ok


def test_different_domains_give_domain_witness():
    M = load("product.tdx")
    v = decide_partial(M, totalize(M))
    assert v.status is Status.NOT_EQUIVALENT and v.engine == "domain"
    assert v.witness == parse_tree("e")
    assert v.outputs == (None, 0)


def test_totalized_copy_relative_to_domain():
    M = load("product.tdx")
    v = decide_partial(M, totalize(M), relative_to=domain_automaton(M))
    assert v.status is Status.EQUIVALENT


def test_product_vs_plus_and_swapped():
    M = load("product.tdx")
    v = decide_partial(M, load("product_plus.tdx"))
    assert v.status is Status.NOT_EQUIVALENT
    assert v.witness == parse_tree("(f e e)") and v.outputs == (0, 1)
    v = decide_partial(M, load("product_swapped.tdx"))
    assert v.status is Status.EQUIVALENT and v.engine == "affine"
    ok, why = verify_certificate(v.certificate, M, load("product_swapped.tdx"))
    assert ok, why


def test_relative_automaton():
    A = parse_dtta((DATA / "only_a.dtta").read_text())
    M, swapped = load("product.tdx"), load("product_swapped.tdx")
    v = decide_partial(M, swapped, relative_to=A)
    assert v.status is Status.EQUIVALENT
    ok, why = verify_certificate(v.certificate, M, swapped, relative_to=A)
    assert ok, why


def test_abelian_examples():
    ab, ba = leaf_writer("ab"), leaf_writer("ba", "r")
    assert abelian_decide(ab, ab).status is Status.EQUIVALENT
    assert abelian_decide(ab, ba).status is Status.EQUIVALENT
    v = decide_partial(ab, ba)
    assert v.status is Status.NOT_EQUIVALENT and v.witness == parse_tree("e")
    v = abelian_decide(leaf_writer("aab"), ab)
    assert v.status is Status.NOT_EQUIVALENT
    assert "letter a" in v.note


def test_binarize_policies_agree():
    M, Mp = load("intro_m.tdx"), load("intro_mp.tdx")
    for policy in ("never", "always"):
        prep = prepare(M, Mp, binarize_policy=policy)
        assert prep.binarized == (policy == "always")
    with pytest.raises(ValueError):
        prepare(M, Mp, binarize_policy="sometimes")


def test_budget_exhaustion_is_unknown():
    M, Mp = load("intro_m.tdx"), load("intro_mp.tdx")
    v = decide_partial(M, Mp, engine="invariant", budget=Budget(max_degree=0, max_depth=0))
    assert v.status is Status.UNKNOWN and v.exit_code == 2


def test_string_pairs_agree_with_brute_force():
    rng = seeded(17)
    trees = all_trees(BINARY, 4)
    for k in range(25):
        M1 = random_ydt(rng, n_states=2, total=False, linear=True)
        if k % 3 == 0:
            M2 = M1.replace()
        else:
            M2 = random_ydt(rng, n_states=2, total=False, linear=True, prefix="p")
        v = decide_partial(M1, M2)
        d = first_string_difference(M1, M2, trees)
        if v.status is Status.EQUIVALENT:
            assert d is None
        else:
            assert v.status is Status.NOT_EQUIVALENT
            assert evaluate(M1, v.witness) != evaluate(M2, v.witness)
