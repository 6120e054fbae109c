"""Command-line front end.

Exit codes: 0 equivalent (or verified), 1 not equivalent (or rejected),
2 unknown or only probably equivalent, 3 usage/parse/input errors.
Every flag can also be set through an environment variable TRANSEQ_<FLAG>
(upper case, dashes as underscores); explicit flags win.
"""

import argparse
import os
import sys

from .equivalence import abelian_decide, decide_partial, evaluate, verify_certificate
from .groups import SANOV, decide_free_group, decide_matrix, parse_alpha, verify_matrix_certificate
from .invariants import Budget
from .sexpr import ParseError
from .transducers import (NUMERIC, STRING, binarize, classify, format_transducer, parse_transducer,
                          size, totalize, unarize)
from .trees import parse_dtta, parse_tree
from .verdict import Certificate, Status, format_output

ENV_PREFIX = "TRANSEQ_"
ERROR_EXIT = 3
MODES = ("auto", "string", "unary", "abelian", "f1", "f2")
ENGINES = ("auto", "affine", "invariant", "monadic", "modular")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which would read as "unknown"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR_EXIT, f"{self.prog}: error: {message}\n")


def _env(name, default, kind=str):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    try:
        return kind(raw)
    except ValueError:
        raise UsageError(f"bad value {raw!r} in {ENV_PREFIX}{name.upper().replace('-', '_')}")


def _optional_int(text):
    return None if text in ("", "none") else int(text)


def _optional_float(text):
    return None if text in ("", "none") else float(text)


def _decision_flags(p):
    d = Budget()
    p.add_argument("--mode", default=_env("mode", "auto"),
                   help="string | unary | abelian | f1 | f2 | matrix:FILE (default: auto from the input)")
    p.add_argument("--engine", default=_env("engine", "auto"), choices=ENGINES)
    p.add_argument("--relative-to", default=_env("relative-to", None), metavar="AUTOMATON")
    p.add_argument("--max-depth", type=int, default=_env("max-depth", d.max_depth, int),
                   help="depth bound of the counterexample search")
    p.add_argument("--max-degree", type=int, default=_env("max-degree", d.max_degree, int),
                   help="degree bound of the invariant search")
    p.add_argument("--max-demands", type=int, default=_env("max-demands", d.max_demands, int))
    p.add_argument("--time-limit", type=_optional_float, default=_env("time-limit", None, _optional_float),
                   help="seconds for the invariant search")
    p.add_argument("--seed", type=int, default=_env("seed", 0, int))
    p.add_argument("--prime-trials", type=int, default=_env("prime-trials", 0, int),
                   help="primes for the modular engine (10 when 0)")
    p.add_argument("--binarize", default=_env("binarize", "auto"), choices=("auto", "always", "never"))


def build_parser():
    p = _Parser(prog="transeq", description="Equivalence of deterministic top-down tree-to-string transducers.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide equivalence of two transducers")
    c.add_argument("first")
    c.add_argument("second")
    _decision_flags(c)
    c.add_argument("--out", default=_env("out", None), help="also write the verdict record here")
    c.add_argument("--certificate", default=_env("certificate", None),
                   help="write the certificate of an Equivalent verdict here")

    c = sub.add_parser("certify", help="decide and print the certificate of an Equivalent verdict")
    c.add_argument("first")
    c.add_argument("second")
    _decision_flags(c)
    c.add_argument("--out", default=_env("out", None), help="write the certificate here instead of stdout")

    c = sub.add_parser("verify", help="replay a certificate against two transducers")
    c.add_argument("certificate")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--mode", default=_env("mode", "auto"))
    c.add_argument("--relative-to", default=_env("relative-to", None), metavar="AUTOMATON")

    c = sub.add_parser("eval", help="translate one tree")
    c.add_argument("transducer")
    c.add_argument("tree", help="tree file, or the tree text itself")

    c = sub.add_parser("classify", help="print the syntactic class of a transducer")
    c.add_argument("transducer")

    c = sub.add_parser("unarize", help="print the numeric simulation of a string transducer")
    c.add_argument("transducer")
    c.add_argument("--out", default=_env("out", None))

    c = sub.add_parser("binarize", help="print the transducer over binary encodings")
    c.add_argument("transducer")
    c.add_argument("--out", default=_env("out", None))
    c.add_argument("--checker", default=None, help="also write the encoding checker automaton here")
    return p


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _load(path, parser):
    try:
        return parser(_read(path))
    except ParseError as exc:
        raise UsageError(f"{path}:{exc}")


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}")


def _mode(args, M1, M2):
    """(mode, alpha) after checking that the transducers fit the requested interpretation."""
    mode = args.mode
    alpha = None
    if mode.startswith("matrix:"):
        alpha = _load(mode[len("matrix:"):], parse_alpha)
        mode = "matrix"
    elif mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}")
    if mode == "auto":
        mode = "unary" if M1.mode == NUMERIC else "string"
    if mode == "unary":
        if M1.mode != NUMERIC or M2.mode != NUMERIC:
            raise UsageError("mode unary needs numeric-mode transducers")
    elif M1.mode != STRING or M2.mode != STRING:
        raise UsageError(f"mode {mode} needs string-mode transducers")
    return mode, alpha


def _budget(args):
    return Budget(max_degree=args.max_degree, max_depth=args.max_depth,
                  time_limit=args.time_limit, max_demands=args.max_demands)


def _decide(args):
    M1 = _load(args.first, parse_transducer)
    M2 = _load(args.second, parse_transducer)
    A = _load(args.relative_to, parse_dtta) if args.relative_to else None
    mode, alpha = _mode(args, M1, M2)
    budget = _budget(args)
    try:
        if mode in ("string", "unary"):
            v = decide_partial(M1, M2, A, args.engine, budget, args.binarize,
                               seed=args.seed, prime_trials=args.prime_trials)
        elif mode == "abelian":
            v = abelian_decide(M1, M2, A, args.engine, budget)
        elif mode == "f1":
            v = decide_free_group(M1, M2, A, "F1", args.engine, budget)
        elif mode == "f2":
            v = decide_free_group(M1, M2, A, "F2", args.engine, budget)
        else:
            v = decide_matrix(M1, M2, alpha, A, args.engine, budget)
    except ValueError as exc:
        raise UsageError(str(exc))
    if v.seed is None and args.engine == "modular":
        v.seed = args.seed
    return v, mode


def cmd_check(args):
    v, _ = _decide(args)
    record = v.to_record()
    sys.stdout.write(record)
    if args.out:
        _write(args.out, record)
    if args.certificate and v.certificate is not None:
        _write(args.certificate, v.certificate.to_text())
    return v.exit_code


def cmd_certify(args):
    v, mode = _decide(args)
    if v.status is not Status.EQUIVALENT:
        sys.stderr.write(v.to_record())
        return v.exit_code
    if mode == "abelian":
        raise UsageError("abelian verdicts combine one proof per letter; certify each letter count in f1/unary mode")
    _write(args.out, v.certificate.to_text())
    return 0


def cmd_verify(args):
    M1 = _load(args.first, parse_transducer)
    M2 = _load(args.second, parse_transducer)
    A = _load(args.relative_to, parse_dtta) if args.relative_to else None
    try:
        cert = Certificate.from_text(_read(args.certificate))
    except ValueError as exc:
        raise UsageError(f"{args.certificate}: malformed certificate: {exc}")
    mode, alpha = _mode(args, M1, M2)
    enc = cert.pipeline.get("encoding", "")
    if mode == "f2" or enc == "sanov":
        alpha = SANOV
    try:
        if alpha is not None:
            ok, why = verify_matrix_certificate(cert, M1, M2, alpha, A)
        else:
            ok, why = verify_certificate(cert, M1, M2, A)
    except ValueError as exc:
        ok, why = False, str(exc)
    print("verified" if ok else f"rejected: {why}")
    return 0 if ok else 1


def cmd_eval(args):
    M = _load(args.transducer, parse_transducer)
    if os.path.exists(args.tree):
        t = _load(args.tree, parse_tree)
    else:
        try:
            t = parse_tree(args.tree)
        except ParseError as exc:
            raise UsageError(f"tree: {exc}")
    try:
        out = evaluate(M, t)
    except ValueError as exc:
        raise UsageError(str(exc))
    print(format_output(out))
    return 0


def cmd_classify(args):
    M = _load(args.transducer, parse_transducer)
    c = classify(M)
    print(f"mode: {M.mode}")
    print(f"states: {M.n}")
    print(f"params: {M.params}")
    print(f"size: {size(M)}")
    for name in ("linear", "non_self_nested", "total", "unary_output", "monadic_input", "parameterless"):
        print(f"{name.replace('_', '-')}: {'yes' if getattr(c, name) else 'no'}")
    return 0


def cmd_unarize(args):
    M = _load(args.transducer, parse_transducer)
    try:
        N = unarize(totalize(M))
    except ValueError as exc:
        raise UsageError(str(exc))
    _write(args.out, format_transducer(N) + "\n")
    return 0


def cmd_binarize(args):
    M = _load(args.transducer, parse_transducer)
    N, checker = binarize(M)
    _write(args.out, format_transducer(N) + "\n")
    if args.checker:
        _write(args.checker, checker.to_text() + "\n")
    return 0


COMMANDS = {
    "check": cmd_check,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "eval": cmd_eval,
    "classify": cmd_classify,
    "unarize": cmd_unarize,
    "binarize": cmd_binarize,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"transeq: error: {exc}\n")
        return ERROR_EXIT


if __name__ == "__main__":
    sys.exit(main())
