"""Verdicts and certificates, with their line-oriented text records."""

from dataclasses import dataclass, field
from enum import Enum

from .ideals import GroebnerBasis, buchberger
from .trees import parse_tree, state_name


class Status(Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not-equivalent"
    UNKNOWN = "unknown"
    PROBABLY_EQUIVALENT = "probably-equivalent"


EXIT_CODES = {
    Status.EQUIVALENT: 0,
    Status.NOT_EQUIVALENT: 1,
    Status.UNKNOWN: 2,
    # no certificate behind it, so it is not reported as a proof
    Status.PROBABLY_EQUIVALENT: 2,
}


@dataclass
class Certificate:
    """An inductive invariant: one ideal per automaton state, plus the targets it proves."""

    space: object                   # VariableSpace
    ideals: dict                    # state name -> GroebnerBasis over z
    targets: tuple                  # polynomials that must lie in the ideal of `initial`
    initial: str
    degree: int
    pipeline: dict = field(default_factory=dict)

    def to_text(self):
        sp = self.space
        lines = ["certificate 1",
                 "labels: " + " ".join("(" + ",".join(map(str, lab)) + ")" for lab in sp.labels),
                 f"degree: {self.degree}",
                 f"initial: {self.initial}"]
        for key in sorted(self.pipeline):
            lines.append(f"pipeline {key}: {self.pipeline[key]}")
        for h in self.targets:
            lines.append("target: " + sp.format(h))
        for p in sorted(self.ideals):
            lines.append(f"state: {p}")
            for g in self.ideals[p].polys:
                lines.append("  gen: " + sp.format(g))
        lines.append("check: is_inductive(ideals) and every target is in the ideal of the initial state")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        from .semantics import VariableSpace
        lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != "certificate 1":
            raise ValueError("not a certificate (missing 'certificate 1' header)")
        space = None
        degree, initial = None, None
        pipeline, targets, ideals = {}, [], {}
        current = None
        raw_targets, raw_gens = [], {}
        for ln in lines[1:]:
            s = ln.strip()
            key, _, rest = s.partition(":")
            rest = rest.strip()
            if key == "labels":
                labels = []
                for chunk in rest.split():
                    inner = chunk.strip("()")
                    labels.append(tuple(int(x) if x.lstrip("-").isdigit() else x for x in inner.split(",")))
                space = VariableSpace(labels)
            elif key == "degree":
                degree = int(rest)
            elif key == "initial":
                initial = rest
            elif key.startswith("pipeline "):
                pipeline[key[len("pipeline "):]] = rest
            elif key == "target":
                raw_targets.append(rest)
            elif key == "state":
                current = rest
                raw_gens[current] = []
            elif key == "gen":
                if current is None:
                    raise ValueError("generator before any state line")
                raw_gens[current].append(rest)
            elif key == "check":
                continue
            else:
                raise ValueError(f"unknown certificate line {s!r}")
        if space is None or initial is None or degree is None:
            raise ValueError("certificate lacks labels, initial or degree")
        targets = [space.parse(t) for t in raw_targets]
        for p, gens in raw_gens.items():
            # stored generators are taken as given; verification recomputes bases itself
            ideals[p] = GroebnerBasis([space.parse(g) for g in gens])
        return cls(space, ideals, tuple(targets), initial, degree, pipeline)

    def normalized(self):
        """Same certificate with every ideal recomputed as a reduced basis."""
        return Certificate(self.space, {p: buchberger(I.polys) for p, I in self.ideals.items()},
                           self.targets, self.initial, self.degree, dict(self.pipeline))


@dataclass
class Verdict:
    status: Status
    engine: str = ""
    witness: object = None              # Tree
    outputs: tuple = None
    certificate: Certificate = None
    field: str = "Q"
    prime: int = None
    seed: int = None
    degree: int = None
    basis_dims: dict = None
    note: str = ""

    @property
    def exit_code(self):
        return EXIT_CODES[self.status]

    @property
    def equivalent(self):
        return self.status is Status.EQUIVALENT

    def to_record(self):
        """Line-oriented record with stable keys."""
        def fmt(x):
            return "-" if x is None or x == "" else str(x)

        outs = "-"
        if self.outputs is not None:
            outs = " | ".join(format_output(o) for o in self.outputs)
        dims = "-"
        if self.basis_dims:
            dims = " ".join(f"{state_name(p)}={d}" for p, d in self.basis_dims.items())
        lines = [
            f"verdict: {self.status.value}",
            f"engine: {fmt(self.engine)}",
            f"witness: {fmt(self.witness)}",
            f"outputs: {outs}",
            f"degree: {fmt(self.degree)}",
            f"basis-dimensions: {dims}",
            f"field: {fmt(self.field)}",
            f"prime: {fmt(self.prime)}",
            f"seed: {fmt(self.seed)}",
            f"note: {fmt(self.note)}",
        ]
        return "\n".join(lines) + "\n"


def format_output(o):
    if o is None:
        return "undefined"
    if isinstance(o, tuple):
        if all(len(a) == 1 for a in o):
            return "".join(o) if o else "ε"
        return " ".join(o) if o else "ε"
    return str(o)


def parse_record(text):
    out = {}
    for ln in text.splitlines():
        key, _, rest = ln.partition(":")
        out[key.strip()] = rest.strip()
    if out.get("witness", "-") not in ("-", ""):
        out["witness_tree"] = parse_tree(out["witness"])
    return out
