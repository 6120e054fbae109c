"""End-to-end equivalence of two transducers: domains, encodings and engine dispatch."""

from dataclasses import dataclass, field

from .affine import affine_certificate, affine_decide, decide_modular
from .invariants import Budget, check_certificate, invariant_decide, make_certificate, monadic_search
from .semantics import unary_system, unary_target
from .transducers import (NUMERIC, STRING, bin_state, binarize, classify, eval_string, eval_unary,
                          is_linear, merge, to_numeric, totalize, unarize)
from .trees import (bin_automaton, bin_decode, dtta_difference, product_dtta, state_name, trim)
from .verdict import Status, Verdict
from .transducers import domain_automaton


@dataclass
class Prepared:
    """A merged, total, numeric transducer with the two states to compare and the relative automaton."""
    numeric: object                 # Transducer
    automaton: object               # Dtta
    q1: str
    q2: str
    binarized: bool
    pipeline: dict = field(default_factory=dict)
    domain_witness: object = None   # Tree, when the domains differ


def evaluate(M, t):
    """Translation of t by M at its initial state with empty/zero parameters."""
    if M.mode == STRING:
        return eval_string(M, M.initial, t, [()] * M.params)
    return eval_unary(M, M.initial, t, [0] * M.params)


def _extend(A, alphabet):
    from .trees import Dtta
    if A.alphabet == alphabet:
        return A
    return Dtta(A.alphabet.union(alphabet), A.states, A.initial, A.rules)


def domains(M1, M2, relative_to=None):
    """Merge the pair and compare domains: (total merged M, relative automaton, q1, q2, witness)."""
    M, q1, q2 = merge(M1, M2)
    A1 = domain_automaton(M, q1)
    A2 = domain_automaton(M, q2)
    if relative_to is not None:
        R = _extend(relative_to, M.alphabet)
        A1 = product_dtta(_extend(A1, R.alphabet), R)
        A2 = product_dtta(_extend(A2, R.alphabet), R)
        M = M.replace(alphabet=M.alphabet.union(R.alphabet))
    witness = dtta_difference(A1, A2)
    if witness is not None:
        return None, None, q1, q2, witness
    return totalize(M), trim(A1), q1, q2, None


def prepare(M1, M2, relative_to=None, binarize_policy="auto", weights=None):
    """Domain check, totalization and the encodings that make the pair unary and numeric.

    weights: letter ↦ integer, replacing each output letter by a constant
    (letter counting or signed counting); otherwise multi-letter string-mode
    transducers are unarized in base s+1.
    """
    pipeline = {"relative": "given" if relative_to is not None else "domain"}
    T, A, q1, q2, witness = domains(M1, M2, relative_to)
    if witness is not None:
        return Prepared(None, None, q1, q2, False, pipeline, witness)
    binarized = False
    if T.mode == STRING:
        if weights is not None:
            pipeline["encoding"] = "weights:" + ",".join(f"{a}={w}" for a, w in sorted(weights.items()))
            N = to_numeric(T, weights)
        elif len(T.output) <= 1:
            pipeline["encoding"] = "length"
            N = to_numeric(T, {a: 1 for a in T.output})
        else:
            if T.params:
                raise ValueError("string outputs over several letters need parameterless transducers")
            if _want_binarize(T, binarize_policy):
                T, _ = binarize(T)
                A = bin_automaton(A)
                q1, q2 = bin_state(q1, 1), bin_state(q2, 1)
                binarized = True
            pipeline["encoding"] = "unarize"
            N = unarize(T)
    else:
        pipeline["encoding"] = "numeric"
        N = T
    pipeline["binarize"] = "yes" if binarized else "no"
    return Prepared(N, A, q1, q2, binarized, pipeline)


def _want_binarize(T, policy):
    if policy == "always":
        return True
    if policy == "never":
        return False
    if policy != "auto":
        raise ValueError(f"unknown binarize policy {policy!r}")
    return T.alphabet.max_rank > 2 and not is_linear(T)


def choose_engine(N, engine="auto"):
    if engine != "auto":
        return engine
    cls = classify(N)
    if N.params == 0 or cls.non_self_nested:
        return "affine"
    if cls.monadic_input:
        return "monadic"
    return "invariant"


def run_engine(system, A, targets, engine, budget=None, pipeline=None, seed=0, prime_trials=0):
    """(status, witness, certificate, degree, extra) for one of the engines on a polynomial system."""
    extra = {}
    if engine == "affine":
        if not system.is_multi_affine():
            raise ValueError("the affine engine needs a multi-affine system (non-self-nested)")
        witness, bases = affine_decide(system, A, targets)
        extra["basis_dims"] = {p: bases[p].dimension for p in A.states}
        if witness is not None:
            return Status.NOT_EQUIVALENT, witness, None, None, extra
        return Status.EQUIVALENT, None, affine_certificate(system, A, bases, targets, pipeline), 1, extra
    if engine == "monadic":
        budget = budget or Budget()
        status, witness, I, deg = monadic_search(system, A, targets, budget.max_demands, budget.time_limit)
        if status is Status.EQUIVALENT:
            return status, None, make_certificate(system, A, I, targets, deg, pipeline), deg, extra
        return status, witness, None, None, extra
    if engine == "invariant":
        status, witness, cert, d = invariant_decide(system, A, targets, budget, pipeline)
        return status, witness, cert, d, extra
    raise ValueError(f"unknown engine {engine!r}")


def decide_partial(M1, M2, relative_to=None, engine="auto", budget=None, binarize_policy="auto",
                   weights=None, seed=0, prime_trials=0):
    """Equivalence of two (possibly partial) transducers, optionally relative to an automaton."""
    prep = prepare(M1, M2, relative_to, binarize_policy, weights)
    if prep.domain_witness is not None:
        t = prep.domain_witness
        return Verdict(Status.NOT_EQUIVALENT, engine="domain", witness=t,
                       outputs=(evaluate(M1, t), evaluate(M2, t)), note="domains differ")
    N = prep.numeric
    chosen = choose_engine(N, engine)
    if chosen == "modular":
        v = decide_modular(N, prep.automaton, prep.q1, prep.q2, trials=prime_trials or 10, seed=seed)
        return _finish(v, prep, M1, M2)
    system = unary_system(N)
    targets = [unary_target(N, prep.q1, prep.q2)]
    prep.pipeline["engine"] = chosen
    status, witness, cert, degree, extra = run_engine(system, prep.automaton, targets, chosen, budget,
                                                      prep.pipeline, seed, prime_trials)
    v = Verdict(status, engine=chosen, witness=witness, certificate=cert, degree=degree,
                basis_dims=extra.get("basis_dims"))
    if status is Status.EQUIVALENT and prime_trials:
        # optional cross-check of an exact answer over random primes
        mv = decide_modular(N, prep.automaton, prep.q1, prep.q2, trials=prime_trials, seed=seed) \
            if N.params == 0 or classify(N).non_self_nested else None
        if mv is not None and mv.status is Status.NOT_EQUIVALENT:
            raise AssertionError("modular run contradicts an exact equivalence proof")
    if status is Status.UNKNOWN:
        v.note = "budget exhausted"
    return _finish(v, prep, M1, M2)


def _finish(v, prep, M1, M2):
    if v.witness is not None:
        t = bin_decode(v.witness)[0] if prep.binarized else v.witness
        outs = (evaluate(M1, t), evaluate(M2, t))
        if outs[0] == outs[1]:
            raise AssertionError(f"engine reported a witness with equal outputs: {t}")
        v.witness = t
        v.outputs = outs
    return v


def abelian_decide(M1, M2, relative_to=None, engine="auto", budget=None):
    """Equality of outputs up to letter order: one unary comparison per output letter."""
    if M1.mode != STRING or M2.mode != STRING or M1.params or M2.params:
        raise ValueError("Abelian equivalence needs parameterless string-mode transducers")
    letters = list(dict.fromkeys(M1.output + M2.output))
    last = None
    for a in letters or [None]:
        weights = {b: int(b == a) for b in letters}
        v = decide_partial(M1, M2, relative_to, engine, budget, weights=weights)
        if v.status is not Status.EQUIVALENT:
            if v.status is Status.NOT_EQUIVALENT and v.engine != "domain":
                v.note = f"letter {a} counted differently"
            return v
        last = v
    last.note = "all letter counts agree"
    return last


def verify_certificate(cert, M1, M2, relative_to=None):
    """Rebuild the system named by the certificate's pipeline and replay the checks."""
    pipe = cert.pipeline
    weights = None
    enc = pipe.get("encoding", "")
    if enc.startswith("weights:"):
        weights = {}
        for part in enc[len("weights:"):].split(","):
            if part:
                a, _, w = part.partition("=")
                weights[a] = int(w)
    policy = "always" if pipe.get("binarize") == "yes" else "never"
    prep = prepare(M1, M2, relative_to, policy, weights)
    if prep.domain_witness is not None:
        return False, f"domains differ on {prep.domain_witness}"
    system = unary_system(prep.numeric)
    expected = unary_target(prep.numeric, prep.q1, prep.q2)
    if list(cert.targets) != [expected]:
        return False, "certificate targets do not match the compared states"
    return check_certificate(cert, system, prep.automaton)
