"""Tooling for polarized deduction modulo: a sequent-calculus proof
checker parameterized by a polarized rewrite system, the combinator
presentations of simple type theory (plain and clausal), proof
translation between them, first-order axiom compilation with TFF
export, and depth-bounded cut-free proof search."""

from .kernel import CheckReport, ProofNode, check, is_cut_free, proof_size
from .rewrite import ReachabilityBudget, e_equal, e_normalize, one_step, reaches
from .search import SearchResult, prove_cutfree
from .syntax import Sequent, parse_prop, parse_sequent, parse_term
from .theory import RewriteSystem, build_hol, build_holpm, get_theory, is_clausal_system
from .translate import TranslationTrace, hol_to_holpm, pullback, substitute_in_proof

__all__ = [
    "CheckReport",
    "ProofNode",
    "ReachabilityBudget",
    "RewriteSystem",
    "SearchResult",
    "Sequent",
    "TranslationTrace",
    "build_hol",
    "build_holpm",
    "check",
    "e_equal",
    "e_normalize",
    "get_theory",
    "hol_to_holpm",
    "is_clausal_system",
    "is_cut_free",
    "one_step",
    "parse_prop",
    "parse_sequent",
    "parse_term",
    "proof_size",
    "prove_cutfree",
    "pullback",
    "reaches",
    "substitute_in_proof",
]
