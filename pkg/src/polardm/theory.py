"""Polarized rewrite systems, clausality analysis, built-in theories.

A system is a triple: term equations, negative proposition rules and
positive proposition rules.  Rule left-hand sides are atomic; schemas
may be polymorphic in sorts (metavariables T, U, V) so that the
sort-indexed families stay finite objects.

The two built-in theories are simple type theory presented with
combinators: `HOL` (every rule present at both polarities) and `HOLpm`,
its clausal variant with choice symbols H_T and double-negation-shaped
positive rules.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as S
from .sexp import SList, error_at, loads
from .syntax import (
    APPLY,
    BOT,
    CHOICE,
    IOTA,
    OMICRON,
    TOP,
    Arrow,
    Atom,
    Const,
    ConstDecl,
    Forall,
    FunDecl,
    Not,
    Or,
    PredDecl,
    Signature,
    SortVar,
    Var,
    apply1,
    applies,
    arrow,
    free_names,
)

NEG = "neg"
POS = "pos"


@dataclass(frozen=True)
class EquationSchema:
    name: str
    lhs: S.Term
    rhs: S.Term


@dataclass(frozen=True)
class PropRuleSchema:
    name: str
    polarity: str  # NEG or POS
    lhs: Atom
    rhs: S.Prop


@dataclass(frozen=True)
class RewriteSystem:
    name: str
    sig: Signature
    equations: tuple
    neg_rules: tuple
    pos_rules: tuple

    def rules(self, polarity):
        return self.neg_rules if polarity == NEG else self.pos_rules

    def rule_named(self, name):
        for r in self.neg_rules + self.pos_rules:
            if r.name == name:
                return r
        raise KeyError(name)


class TheoryError(Exception):
    """A rewrite system violates a structural requirement."""


def validate_system(rs):
    """Check schema well-formedness; raises TheoryError on violation."""
    names = set()
    for eq in rs.equations:
        if eq.lhs.sort != eq.rhs.sort:
            raise TheoryError(f"equation {eq.name}: sides have different sorts")
        if not free_names(eq.rhs) <= free_names(eq.lhs):
            raise TheoryError(f"equation {eq.name}: right side invents variables")
    for rule in rs.neg_rules + rs.pos_rules:
        if rule.name in names:
            raise TheoryError(f"duplicate rule name {rule.name}")
        names.add(rule.name)
        if not isinstance(rule.lhs, Atom):
            raise TheoryError(f"rule {rule.name}: left side must be atomic")
        if not free_names(rule.rhs) <= free_names(rule.lhs):
            raise TheoryError(f"rule {rule.name}: right side has undeclared free variables")
        if rule.polarity not in (NEG, POS):
            raise TheoryError(f"rule {rule.name}: bad polarity {rule.polarity}")
    return rs


# ---------------------------------------------------------------------------
# Clausality


def is_literal(p) -> bool:
    """Atomic, or the negation of an atomic proposition."""
    if isinstance(p, Atom):
        return True
    return isinstance(p, Not) and isinstance(p.body, Atom)


def _is_literal_disjunction(p) -> bool:
    if isinstance(p, Or):
        return _is_literal_disjunction(p.left) and _is_literal_disjunction(p.right)
    return is_literal(p)


def is_clausal(p) -> bool:
    """Bottom, or universally quantified disjunction of literals."""
    if isinstance(p, S.Bottom):
        return True
    while isinstance(p, Forall):
        p = p.body
    return _is_literal_disjunction(p)


@dataclass(frozen=True)
class ClausalityReport:
    ok: bool
    offenders: tuple  # of (rule_name, polarity, reason)


def is_clausal_system(rs) -> ClausalityReport:
    """Negative rules must produce clausal propositions, positive rules
    negations of clausal propositions."""
    offenders = []
    for rule in rs.neg_rules:
        if not is_clausal(rule.rhs):
            offenders.append((rule.name, NEG, "right side is not clausal"))
    for rule in rs.pos_rules:
        if not (isinstance(rule.rhs, Not) and is_clausal(rule.rhs.body)):
            offenders.append((rule.name, POS, "right side is not the negation of a clausal proposition"))
    return ClausalityReport(not offenders, tuple(offenders))


# ---------------------------------------------------------------------------
# Built-in theories

_T = SortVar("T")
_U = SortVar("U")
_V = SortVar("V")


def _base_consts():
    return {
        "kc": ConstDecl("kc", ("T", "U"), arrow(_T, _U, _T)),
        "sc": ConstDecl("sc", ("T", "U", "V"), arrow(arrow(_T, _U, _V), arrow(_T, _U), _T, _V)),
        "dor": ConstDecl("dor", (), arrow(OMICRON, OMICRON, OMICRON)),
        "dnot": ConstDecl("dnot", (), arrow(OMICRON, OMICRON)),
        "dall": ConstDecl("dall", ("T",), arrow(arrow(_T, OMICRON), OMICRON)),
        "zero": ConstDecl("zero", (), IOTA),
        "succ": ConstDecl("succ", (), arrow(IOTA, IOTA)),
        "pred": ConstDecl("pred", (), arrow(IOTA, IOTA)),
        "null": ConstDecl("null", (), arrow(IOTA, OMICRON)),
    }


def hol_signature() -> Signature:
    return Signature(
        base_sorts=frozenset({"i", "o"}),
        consts=_base_consts(),
        funs={APPLY: FunDecl(APPLY, ("T", "U"), (Arrow(_T, _U), _T), _U)},
        preds={"eps": PredDecl("eps", (), (OMICRON,))},
    )


def holpm_signature() -> Signature:
    sig = hol_signature()
    funs = dict(sig.funs)
    funs[CHOICE] = FunDecl(CHOICE, ("T",), (Arrow(_T, OMICRON),), _T)
    return Signature(sig.base_sorts, sig.consts, funs, sig.preds)


def _equations(sig):
    xT, yU = Var("x", _T), Var("y", _U)
    k = Const("kc", (_T, _U), arrow(_T, _U, _T))
    s = Const("sc", (_T, _U, _V), arrow(arrow(_T, _U, _V), arrow(_T, _U), _T, _V))
    xs = Var("x", arrow(_T, _U, _V))
    ys = Var("y", arrow(_T, _U))
    zs = Var("z", _T)
    xi = Var("x", IOTA)
    return (
        EquationSchema("k", applies(k, xT, yU), xT),
        EquationSchema("s", applies(s, xs, ys, zs), applies(xs, zs, applies(ys, zs))),
        EquationSchema(
            "pred-succ",
            apply1(S.const(sig, "pred"), apply1(S.const(sig, "succ"), xi)),
            xi,
        ),
    )


def _rule_parts(sig):
    x, y = Var("x", OMICRON), Var("y", OMICRON)
    xT = Var("x", Arrow(_T, OMICRON))
    xi = Var("x", IOTA)
    dall_t = Const("dall", (_T,), arrow(arrow(_T, OMICRON), OMICRON))
    ep = lambda t: Atom("eps", (t,))
    lhs_or = ep(applies(S.const(sig, "dor"), x, y))
    lhs_not = ep(apply1(S.const(sig, "dnot"), x))
    lhs_all = ep(apply1(dall_t, xT))
    lhs_null_succ = ep(apply1(S.const(sig, "null"), apply1(S.const(sig, "succ"), xi)))
    lhs_null_zero = ep(apply1(S.const(sig, "null"), S.const(sig, "zero")))
    rhs_or = Or(ep(x), ep(y))
    rhs_not = Not(ep(x))
    rhs_all = Forall("y", _T, ep(apply1(xT, Var("y", _T))))
    return (x, y, xT, lhs_or, lhs_not, lhs_all, lhs_null_succ, lhs_null_zero, rhs_or, rhs_not, rhs_all)


def build_hol() -> RewriteSystem:
    """Simple type theory modulo, with every rule at both polarities."""
    sig = hol_signature()
    (x, y, xT, lhs_or, lhs_not, lhs_all, lhs_ns, lhs_nz, rhs_or, rhs_not, rhs_all) = _rule_parts(sig)
    neg = (
        PropRuleSchema("or-neg", NEG, lhs_or, rhs_or),
        PropRuleSchema("not-neg", NEG, lhs_not, rhs_not),
        PropRuleSchema("all-neg", NEG, lhs_all, rhs_all),
        PropRuleSchema("null-succ-neg", NEG, lhs_ns, BOT),
        PropRuleSchema("null-zero-neg", NEG, lhs_nz, TOP),
    )
    pos = (
        PropRuleSchema("or-pos", POS, lhs_or, rhs_or),
        PropRuleSchema("not-pos", POS, lhs_not, rhs_not),
        PropRuleSchema("all-pos", POS, lhs_all, rhs_all),
        PropRuleSchema("null-succ-pos", POS, lhs_ns, BOT),
        PropRuleSchema("null-zero-pos", POS, lhs_nz, TOP),
    )
    return validate_system(RewriteSystem("HOL", sig, _equations(sig), neg, pos))


def build_holpm() -> RewriteSystem:
    """The clausal variant: choice symbols H_T, double-negated positives."""
    sig = holpm_signature()
    (x, y, xT, lhs_or, lhs_not, lhs_all, lhs_ns, lhs_nz, rhs_or, rhs_not, rhs_all) = _rule_parts(sig)
    ep = lambda t: Atom("eps", (t,))
    h_x = S.App(CHOICE, (_T,), (xT,), _T)
    neg = (
        PropRuleSchema("or-neg", NEG, lhs_or, rhs_or),
        PropRuleSchema("not-neg", NEG, lhs_not, rhs_not),
        PropRuleSchema("all-neg", NEG, lhs_all, rhs_all),
        PropRuleSchema("null-succ-neg", NEG, lhs_ns, BOT),
    )
    pos = (
        PropRuleSchema("or-pos-left", POS, lhs_or, Not(Not(ep(x)))),
        PropRuleSchema("or-pos-right", POS, lhs_or, Not(Not(ep(y)))),
        PropRuleSchema("not-pos", POS, lhs_not, rhs_not),
        PropRuleSchema("all-pos", POS, lhs_all, Not(Not(ep(apply1(xT, h_x))))),
        PropRuleSchema("null-zero-pos", POS, lhs_nz, Not(BOT)),
    )
    return validate_system(RewriteSystem("HOLpm", sig, _equations(sig), neg, pos))


# ---------------------------------------------------------------------------
# Theory files


def get_theory(name_or_path) -> RewriteSystem:
    """Resolve a theory argument: built-in name or a theory file path."""
    if name_or_path == "HOL":
        return build_hol()
    if name_or_path in ("HOLpm", "HOL+-", "HOLPM"):
        return build_holpm()
    with open(name_or_path, "r", encoding="utf-8") as fh:
        return load_theory(fh.read(), name=str(name_or_path))


def load_theory(text, name="user") -> RewriteSystem:
    """Parse a theory file.

    Format (all sections optional, concrete sorts only):

      (sorts i o ...)
      (consts (c SORT) ...)
      (funs (f (SORT ...) SORT) ...)
      (preds (p (SORT ...)) ...)
      (eqs (NAME (vars (x SORT) ...) LHS RHS) ...)
      (neg (NAME (vars ...) LHS RHS) ...)
      (pos (NAME (vars ...) LHS RHS) ...)
    """
    sections = {}
    for node in loads(text):
        if not (isinstance(node, SList) and node and isinstance(node[0], str)):
            raise error_at("expected a (section ...) form", node)
        sections.setdefault(str(node[0]), []).append(node)

    base = frozenset(str(s) for sec in sections.get("sorts", []) for s in sec[1:])
    if not base:
        raise TheoryError("theory file declares no sorts")

    consts, funs, preds = {}, {}, {}
    funs[APPLY] = FunDecl(APPLY, ("T", "U"), (Arrow(_T, _U), _T), _U)
    for sec in sections.get("consts", []):
        for entry in sec[1:]:
            nm = str(entry[0])
            consts[nm] = ConstDecl(nm, (), S.parse_sort(entry[1], base))
    for sec in sections.get("funs", []):
        for entry in sec[1:]:
            nm = str(entry[0])
            argsorts = tuple(S.parse_sort(s, base) for s in entry[1])
            funs[nm] = FunDecl(nm, (), argsorts, S.parse_sort(entry[2], base))
    for sec in sections.get("preds", []):
        for entry in sec[1:]:
            nm = str(entry[0])
            preds[nm] = PredDecl(nm, (), tuple(S.parse_sort(s, base) for s in entry[1]))
    sig = Signature(base, consts, funs, preds)

    def rule_entry(entry, want_prop):
        nm = str(entry[0])
        ctx = S.parse_var_block(entry[1], base)
        if want_prop:
            lhs = S.parse_prop(entry[2], sig, ctx)
            if not isinstance(lhs, Atom):
                raise error_at("rule left side must be atomic", entry[2])
            rhs = S.parse_prop(entry[3], sig, ctx)
        else:
            lhs = S.parse_term(entry[2], sig, ctx)
            rhs = S.parse_term(entry[3], sig, ctx)
        return nm, lhs, rhs

    equations = tuple(
        EquationSchema(*rule_entry(e, False))
        for sec in sections.get("eqs", [])
        for e in sec[1:]
    )
    neg = tuple(
        PropRuleSchema(nm, NEG, lhs, rhs)
        for sec in sections.get("neg", [])
        for nm, lhs, rhs in (rule_entry(e, True) for e in sec[1:])
    )
    pos = tuple(
        PropRuleSchema(nm, POS, lhs, rhs)
        for sec in sections.get("pos", [])
        for nm, lhs, rhs in (rule_entry(e, True) for e in sec[1:])
    )
    return validate_system(RewriteSystem(name, sig, equations, neg, pos))
