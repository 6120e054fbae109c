"""Outputs read in free groups and matrix monoids.

Letters are "a", "b" and their inverses "a-", "b-".  F1 is handled as the
integers (signed letter count); F2 through the Sanov matrices, which embed it
into 2×2 integer matrices.  A string transducer with a letter interpretation
α: Δ → l×l matrices has a polynomial semantics with coordinates (q, λ, μ).
"""

from fractions import Fraction

from .equivalence import decide_partial, domains, evaluate, run_engine
from .polynomials import Polynomial
from .semantics import PolySystem, VariableSpace
from .sexpr import SList, atom, expect, fail, parse_one
from .transducers import STRING, Call, Out, flatten, is_linear
from .verdict import Status, Verdict

GENERATORS = ("a", "b")
LETTERS = ("a", "a-", "b", "b-")

SANOV = {
    "a": ((1, 0), (2, 1)),
    "b": ((1, 2), (0, 1)),
    "a-": ((1, 0), (-2, 1)),
    "b-": ((1, -2), (0, 1)),
}


def inverse(letter):
    return letter[:-1] if letter.endswith("-") else letter + "-"


def reduce_word(w):
    """Free reduction by a single stack scan."""
    stack = []
    for x in w:
        if stack and stack[-1] == inverse(x):
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def parse_word(text):
    """'a b b-' or 'abb-' style words; ε or empty for the identity."""
    text = text.strip()
    if text in ("", "ε"):
        return ()
    out = []
    i = 0
    s = text.replace(" ", "")
    while i < len(s):
        x = s[i]
        if x not in GENERATORS:
            raise ValueError(f"bad letter {x!r} in {text!r}")
        if s[i + 1:i + 2] == "-":
            out.append(x + "-")
            i += 2
        else:
            out.append(x)
            i += 1
    return tuple(out)


def mat_mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0])))
                 for i in range(len(A)))


def identity(l):
    return tuple(tuple(int(i == j) for j in range(l)) for i in range(l))


def det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def word_matrix(w, alpha, l=None):
    """α(w) as a product of letter images."""
    if l is None:
        l = len(next(iter(alpha.values())))
    out = identity(l)
    for x in w:
        if x not in alpha:
            raise ValueError(f"letter {x!r} has no interpretation")
        out = mat_mul(out, alpha[x])
    return out


def sanov(w):
    return word_matrix(w, SANOV, 2)


def f1_encode(w):
    """Signed count of a word over a and a-."""
    n = 0
    for x in w:
        if x == "a":
            n += 1
        elif x == "a-":
            n -= 1
        else:
            raise ValueError(f"letter {x!r} is not in F1")
    return n


def reduced_words(length):
    """All reduced words of exactly this length, in letter order."""
    words = [()]
    for _ in range(length):
        words = [w + (x,) for w in words for x in LETTERS if not w or w[-1] != inverse(x)]
    return words


# matrix semantics

def check_alpha(alpha):
    """Common size l of the interpretation; rows must be square and equal-sized."""
    sizes = set()
    for x, m in alpha.items():
        l = len(m)
        if l == 0 or any(len(row) != l for row in m):
            raise ValueError(f"interpretation of {x!r} is not a square matrix")
        sizes.add(l)
    if len(sizes) != 1:
        raise ValueError("interpretation matrices have different sizes")
    return sizes.pop()


def matrix_space(M, l):
    return VariableSpace([(qi + 1, lam, mu) for qi in range(M.n)
                          for lam in range(1, l + 1) for mu in range(1, l + 1)])


def _require(M, alpha):
    if M.mode != STRING or M.params:
        raise ValueError("matrix semantics need a parameterless string-mode transducer")
    missing = [a for a in M.output if a not in alpha]
    if missing:
        raise ValueError(f"no interpretation for output letters {missing}")
    return check_alpha(alpha)


def matrix_symbol_semantics(M, alpha, f):
    """r^{(f)}_{qλμ}: per state, the product of letter images and argument matrices."""
    l = _require(M, alpha)
    dim = M.n * l * l
    rows = []
    for q in M.states:
        T = M.rules.get((q, f))
        if T is None:
            raise ValueError(f"no rule for ({q}, {f}); totalize first")
        P = [[Polynomial.const(int(i == j)) for j in range(l)] for i in range(l)]
        for item in flatten(T):
            if isinstance(item, Out):
                m = [[Polynomial.const(Fraction(c)) for c in row] for row in alpha[item.letter]]
            elif isinstance(item, Call):
                base = item.var * dim + M.state_index(item.state) * l * l
                m = [[Polynomial.var(base + i * l + j) for j in range(l)] for i in range(l)]
            else:
                raise ValueError(f"bad node {item!r} in a parameterless string rule")
            P = [[sum((P[i][k] * m[k][j] for k in range(l)), Polynomial()) for j in range(l)]
                 for i in range(l)]
        rows.extend(P[i][j] for i in range(l) for j in range(l))
    return tuple(rows)


def matrix_system(M, alpha):
    l = _require(M, alpha)
    return PolySystem(M.alphabet, matrix_space(M, l),
                      {f: matrix_symbol_semantics(M, alpha, f) for f in M.alphabet})


def matrix_targets(M, l, q1, q2):
    """The l² polynomials z_{q1,λ,μ} − z_{q2,λ,μ}."""
    a = M.state_index(q1) * l * l
    b = M.state_index(q2) * l * l
    return [Polynomial.var(a + k) - Polynomial.var(b + k) for k in range(l * l)]


def matrix_value(M, alpha, q, t):
    """α of the string output, or None outside the domain (reference route)."""
    from .transducers import eval_string
    w = eval_string(M, q, t)
    return None if w is None else word_matrix(w, alpha)


def decide_matrix(M1, M2, alpha, relative_to=None, engine="auto", budget=None, compare=None,
                  pipeline_name="matrix"):
    """Equality of α(outputs) for two total-or-partial parameterless string transducers."""
    for M in (M1, M2):
        if M.mode != STRING or M.params:
            raise ValueError("matrix outputs need parameterless string-mode transducers")
    compare = compare or (lambda u, v: word_matrix(u, alpha) == word_matrix(v, alpha))
    T, A, q1, q2, witness = domains(M1, M2, relative_to)
    if witness is not None:
        return Verdict(Status.NOT_EQUIVALENT, engine="domain", witness=witness,
                       outputs=(evaluate(M1, witness), evaluate(M2, witness)), note="domains differ")
    l = _require(T, alpha)
    system = matrix_system(T, alpha)
    targets = matrix_targets(T, l, q1, q2)
    if engine == "auto":
        engine = "affine" if is_linear(T) else "invariant"
    pipeline = {"relative": "given" if relative_to is not None else "domain",
                "encoding": pipeline_name, "binarize": "no", "engine": engine}
    status, witness, cert, degree, extra = run_engine(system, A, targets, engine, budget, pipeline)
    v = Verdict(status, engine=engine, witness=witness, certificate=cert, degree=degree,
                basis_dims=extra.get("basis_dims"))
    if witness is not None:
        outs = (evaluate(M1, witness), evaluate(M2, witness))
        if compare(*outs):
            raise AssertionError(f"engine reported a witness with equal outputs: {witness}")
        v.outputs = outs
    if status is Status.UNKNOWN:
        v.note = "budget exhausted"
    return v


def decide_free_group(M1, M2, relative_to=None, group="F2", engine="auto", budget=None):
    """Equivalence with outputs read in F1 (signed count) or F2 (Sanov matrices)."""
    letters = set(M1.output) | set(M2.output)
    if group == "F1":
        if not letters <= {"a", "a-"}:
            raise ValueError(f"F1 outputs must use a and a-, got {sorted(letters)}")
        v = decide_partial(M1, M2, relative_to, engine, budget, weights={"a": 1, "a-": -1})
        v.note = (v.note + "; " if v.note else "") + "outputs in F1"
        return v
    if group == "F2":
        if not letters <= set(LETTERS):
            raise ValueError(f"F2 outputs must use a, a-, b, b-, got {sorted(letters)}")
        v = decide_matrix(M1, M2, SANOV, relative_to, engine, budget,
                          compare=lambda u, w: reduce_word(u) == reduce_word(w), pipeline_name="sanov")
        v.note = (v.note + "; " if v.note else "") + "outputs in F2"
        return v
    raise ValueError(f"unsupported group {group!r}")


def verify_matrix_certificate(cert, M1, M2, alpha, relative_to=None):
    """Rebuild the matrix system of a pair and replay the certificate checks."""
    from .invariants import check_certificate
    T, A, q1, q2, witness = domains(M1, M2, relative_to)
    if witness is not None:
        return False, f"domains differ on {witness}"
    l = _require(T, alpha)
    system = matrix_system(T, alpha)
    if [h for h in cert.targets] != matrix_targets(T, l, q1, q2):
        return False, "certificate targets do not match the compared states"
    return check_certificate(cert, system, A)


# interpretation files: (interpretation (a1 (3 1) (0 1)) (a2 (3 2) (0 1)))

def alpha_from_sexpr(expr):
    expect(expr, "interpretation")
    alpha = {}
    for item in expr[1:]:
        if not isinstance(item, SList) or item.head is None or len(item) < 2:
            fail(item, "expected (letter (row ...) ...)")
        rows = []
        for row in item[1:]:
            if not isinstance(row, SList):
                fail(row, "expected a matrix row like (3 1)")
            vals = []
            for c in row:
                try:
                    vals.append(Fraction(atom(c, "number")))
                except (ValueError, ZeroDivisionError):
                    fail(c, "bad matrix entry")
            rows.append(tuple(v.numerator if v.denominator == 1 else v for v in vals))
        alpha[item.head] = tuple(rows)
    try:
        check_alpha(alpha)
    except ValueError as exc:
        fail(expr, str(exc))
    return alpha


def parse_alpha(text):
    return alpha_from_sexpr(parse_one(text))


def format_alpha(alpha):
    parts = []
    for x in sorted(alpha):
        rows = " ".join("(" + " ".join(str(c) for c in row) + ")" for row in alpha[x])
        parts.append(f"  ({x} {rows})")
    return "(interpretation\n" + "\n".join(parts) + ")"
