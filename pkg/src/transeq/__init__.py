"""Equivalence checking for deterministic top-down tree-to-string transducers
via polynomial invariants."""

from .affine import closure_fixpoint, decide_affine, decide_modular
from .equivalence import abelian_decide, decide_partial, evaluate, verify_certificate
from .groups import decide_free_group, decide_matrix, reduce_word, sanov
from .ideals import GroebnerBasis, buchberger, eliminate, intersect, vanishing_ideal
from .invariants import Budget, decide, is_inductive, monadic_decide
from .polynomials import Polynomial
from .transducers import Transducer, binarize, classify, parse_transducer, unarize
from .trees import Dtta, RankedAlphabet, Tree, parse_dtta, parse_tree
from .verdict import Certificate, Status, Verdict

__all__ = [
    "Budget", "Certificate", "Dtta", "GroebnerBasis", "Polynomial", "RankedAlphabet", "Status",
    "Transducer", "Tree", "Verdict", "abelian_decide", "binarize", "buchberger", "classify",
    "closure_fixpoint", "decide", "decide_affine", "decide_free_group", "decide_matrix",
    "decide_modular", "decide_partial", "eliminate", "evaluate", "intersect", "is_inductive",
    "monadic_decide", "parse_dtta", "parse_transducer", "parse_tree", "reduce_word", "sanov",
    "unarize", "vanishing_ideal", "verify_certificate",
]
