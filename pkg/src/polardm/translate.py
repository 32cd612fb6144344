"""Constructive proof transformations.

Three operations:

  * `pullback` re-roots a cut-free proof along sequent rewriting: when
    every formula of the source sequent rewrites (at its side's
    polarity) to the corresponding formula of the target, the target's
    proof is accepted for the source unchanged, by transitivity of the
    reachability side conditions.  Node count is preserved exactly.

  * `substitute_in_proof` substitutes a term for a free variable in
    every sequent formula, witness and annotation of a proof, renaming
    eigenvariables when they would clash.

  * `hol_to_holpm` turns a cut-free HOL proof of a choice-free sequent
    into a cut-free HOLpm proof of the same sequent.  Rules backed by
    the same rewrite rule in both theories are kept, with their premise
    proofs pulled back to the undecomposed components; the three rules
    HOLpm replaces by double-negation-shaped ones are compiled into
    gadgets built from contraction and the negation rules.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import syntax as S
from .kernel import (
    LEFT,
    RIGHT,
    InvalidNode,
    ProofNode,
    UndecidedNode,
    check,
    is_cut_free,
    premises_of,
    proof_size,
)
from .rewrite import (
    DEFAULT_BUDGET,
    canonize,
    head_exposures,
    match_term,
    reaches,
)
from .syntax import (
    BOT,
    CHOICE,
    And,
    Atom,
    Bottom,
    Exists,
    Forall,
    Implies,
    Not,
    Or,
    Sequent,
    Top,
    Var,
    alpha_eq,
    apply1,
    contains_fun,
    free_names,
    fresh_name,
    open_binder_as,
    prop_text,
    sort_subst,
    subst,
    substitute,
)
from .theory import NEG, POS, build_hol, build_holpm


class PullbackError(Exception):
    pass


class TranslateError(Exception):
    pass


@dataclass(frozen=True)
class TranslationTrace:
    input_size: int
    output_size: int
    cases: dict  # case name -> count


# ---------------------------------------------------------------------------
# Names and substitution inside proofs


def _obj_names(obj, out):
    if obj is None:
        return
    if isinstance(obj, (S.Var,)):
        out.add(obj.name)
    elif isinstance(obj, S.App):
        for a in obj.args:
            _obj_names(a, out)
    elif isinstance(obj, S.Const):
        pass
    elif isinstance(obj, Atom):
        for a in obj.args:
            _obj_names(a, out)
    elif isinstance(obj, (Top, Bottom)):
        pass
    elif isinstance(obj, Not):
        _obj_names(obj.body, out)
    elif isinstance(obj, (And, Or, Implies)):
        _obj_names(obj.left, out)
        _obj_names(obj.right, out)
    elif isinstance(obj, (Forall, Exists)):
        out.add(obj.var)
        _obj_names(obj.body, out)
    elif isinstance(obj, Sequent):
        for p in obj.formulas():
            _obj_names(p, out)


def proof_names(node) -> set:
    """Every variable name mentioned anywhere in the tree."""
    out = set()
    stack = [node]
    while stack:
        n = stack.pop()
        for obj in (n.a, n.b, n.c, n.body, n.term):
            _obj_names(obj, out)
        if n.var is not None:
            out.add(n.var)
        stack.extend(n.children)
    return out


def _subst_prop(p, mapping):
    return None if p is None else subst(p, mapping)


def _subst_node(node, mapping):
    if not mapping:
        return node
    if node.var is None:
        return replace(
            node,
            a=_subst_prop(node.a, mapping),
            b=_subst_prop(node.b, mapping),
            c=_subst_prop(node.c, mapping),
            term=None if node.term is None else S.term_subst(node.term, mapping),
            children=tuple(_subst_node(c, mapping) for c in node.children),
        )

    # binder node: the bound variable shadows the substitution in its scope
    y, ysort = node.var, node.var_sort
    inner = {k: v for k, v in mapping.items() if k != y}
    value_names = set()
    for v in inner.values():
        value_names |= {x.name for x in S.term_vars(v)}
    eigen_scoped = node.rule in ("all-right", "ex-left")
    body, var, children = node.body, y, node.children
    if y in value_names:
        avoid = value_names | free_names(body) | proof_names(node) | set(inner)
        var = fresh_name(y, avoid)
        ren = {y: Var(var, ysort)}
        body = subst(body, ren)
        if eigen_scoped:
            children = tuple(_subst_node(c, ren) for c in children)
    body = subst(body, inner)
    if eigen_scoped:
        children = tuple(_subst_node(c, inner) for c in children)
        term = node.term
        a, b, c = node.a, node.b, node.c
        a = _subst_prop(a, inner)
        b = _subst_prop(b, inner)
        c = _subst_prop(c, inner)
    else:
        # all-left / ex-right: only the body is under the binder
        children = tuple(_subst_node(ch, mapping) for ch in children)
        term = None if node.term is None else S.term_subst(node.term, mapping)
        a = _subst_prop(node.a, mapping)
        b = _subst_prop(node.b, mapping)
        c = _subst_prop(node.c, mapping)
    return replace(node, a=a, b=b, c=c, var=var, body=body, term=term, children=children)


def substitute_in_proof(proof, x, t) -> ProofNode:
    """Substitute term `t` for the free variable `x` throughout a proof.

    Eigenvariables clashing with `x` or with the free variables of `t`
    are renamed first, so the result is capture-free; size is unchanged.
    """
    if x.sort != t.sort:
        raise S.SortError("substitute_in_proof: variable and term sorts differ")
    return _subst_node(proof, {x.name: t})


def _rename_eigen(node, new_name):
    ren = {node.var: Var(new_name, node.var_sort)}
    body = subst(node.body, ren)
    children = tuple(_subst_node(c, ren) for c in node.children)
    return replace(node, var=new_name, body=body, children=children)


# ---------------------------------------------------------------------------
# Pullback along sequent rewriting


def _materialize(node, seq):
    """Make defaulted annotations explicit relative to this conclusion,
    so the node denotes the same inference over any rewriting ancestor."""
    rule = node.rule
    if rule in ("contr-left", "contr-right", "neg-left", "neg-right",
                "and-left", "and-right", "or-left", "or-right",
                "imp-left", "imp-right"):
        forms = seq.left if node.side == LEFT else seq.right
        prop = forms[node.index]
        if rule.startswith("contr"):
            return replace(
                node,
                b=node.b if node.b is not None else prop,
                c=node.c if node.c is not None else prop,
            )
        if rule.startswith("neg"):
            if node.b is None:
                return replace(node, b=prop.body)
            return node
        cls = {"and": And, "or": Or, "imp": Implies}[rule.split("-")[0]]
        b = node.b if node.b is not None else prop.left
        c = node.c if node.c is not None else prop.right
        return replace(node, b=b, c=c)
    return node


def _pull(node, frm, to, rs, budget):
    node = _materialize(node, to)
    if node.rule in ("all-right", "ex-left"):
        ctx = Sequent(
            frm.left if node.side == RIGHT else frm.left[: node.index] + frm.left[node.index + 1 :],
            frm.right if node.side == LEFT else frm.right[: node.index] + frm.right[node.index + 1 :],
        )
        if node.var in free_names(ctx):
            avoid = free_names(frm) | free_names(to) | proof_names(node)
            node = _rename_eigen(node, fresh_name(node.var, avoid))
    try:
        premises_to = premises_of(node, to, rs, budget)
        premises_frm = premises_of(node, frm, rs, budget)
    except (InvalidNode, UndecidedNode) as e:
        raise PullbackError(f"{node.rule}: {e}")
    children = tuple(
        _pull(c, pf, pt, rs, budget)
        for c, pf, pt in zip(node.children, premises_frm, premises_to)
    )
    return replace(node, children=children)


def pullback(proof, frm, to, rs, budget=DEFAULT_BUDGET) -> ProofNode:
    """Re-root a proof of `to` as a proof of `frm`, where `frm` rewrites
    to `to` formula by formula.  Size is preserved exactly."""
    if len(frm.left) != len(to.left) or len(frm.right) != len(to.right):
        raise PullbackError("sequents differ in shape")
    for side, pol, fs, ts in (
        (LEFT, NEG, frm.left, to.left),
        (RIGHT, POS, frm.right, to.right),
    ):
        for k, (f, t) in enumerate(zip(fs, ts)):
            if not reaches(f, t, pol, rs, budget):
                raise PullbackError(
                    f"{side}[{k}]: {prop_text(f)} does not rewrite to {prop_text(t)}"
                )
    return _pull(proof, frm, to, rs, budget)


# ---------------------------------------------------------------------------
# HOL -> HOLpm


def _match_rule_lhs(prop, rule):
    """Match a canonical atom against a rule's left side; returns the
    (sorts, terms) bindings or None."""
    if not isinstance(prop, Atom) or prop.pred != rule.lhs.pred:
        return None
    if len(prop.args) != len(rule.lhs.args):
        return None
    sorts, terms = {}, {}
    for pa, ta in zip(rule.lhs.args, prop.args):
        if not match_term(pa, ta, sorts, terms):
            return None
    return sorts, terms


class _Translator:
    def __init__(self, hol, holpm, budget):
        self.hol = hol
        self.holpm = holpm
        self.budget = budget
        self.cases = {}

    def _count(self, case):
        self.cases[case] = self.cases.get(case, 0) + 1

    def _target_reach(self, prop, target, pol):
        if not reaches(prop, target, pol, self.holpm, self.budget):
            raise TranslateError(
                f"{prop_text(prop)} does not rewrite to {prop_text(target)} in HOLpm"
            )

    def _premise(self, node, seq):
        try:
            return premises_of(node, seq, self.hol, self.budget)
        except (InvalidNode, UndecidedNode) as e:
            raise TranslateError(f"input proof invalid at {node.rule}: {e}")

    def _recurse_with(self, node, seq, new_node):
        """Pull every premise proof back to `new_node`'s premises, then
        translate them.  Counts 'direct' when nothing moved."""
        old = self._premise(node, seq)
        new = self._premise(new_node, seq)
        moved = False
        children = []
        for child, po, pn in zip(node.children, old, new):
            if alpha_eq(po, pn):
                children.append(self.node(child, pn))
            else:
                moved = True
                pulled = pullback(child, pn, po, self.hol, self.budget)
                children.append(self.node(pulled, pn))
        self._count("pullback" if moved else "direct")
        return replace(new_node, children=tuple(children))

    def _exposure(self, prop, pol, shape):
        for e in head_exposures(prop, pol, self.hol, self.budget):
            if isinstance(e, shape):
                return e
        raise TranslateError(
            f"no {shape.__name__}-shaped head reduct of {prop_text(prop)}"
        )

    def _decisive(self, prop, rule_name):
        rule = self.hol.rule_named(rule_name)
        got = _match_rule_lhs(canonize(prop, self.hol, budget=self.budget), rule)
        if got is None:
            raise TranslateError(
                f"principal {prop_text(prop)} does not expose the head for {rule_name}"
            )
        return got

    # -- rule cases ---------------------------------------------------------

    def node(self, node, seq):
        rule = node.rule
        if rule == "cut":
            raise TranslateError("input proof uses cut")
        if rule == "axiom":
            self._count("direct")
            return node
        if rule in ("weak-left", "weak-right"):
            premise = self._premise(node, seq)[0]
            self._count("direct")
            return replace(node, children=(self.node(node.children[0], premise),))
        side = node.side
        forms = seq.left if side == LEFT else seq.right
        prop = forms[node.index]

        if rule == "top-right":
            if isinstance(prop, Top):
                self._count("direct")
                return node
            if not isinstance(prop, Atom):
                raise TranslateError("top-right on a compound non-top principal")
            self._decisive(prop, "null-zero-pos")
            self._target_reach(prop, Not(BOT), POS)
            n2 = ProofNode("bot-left", side=LEFT, index=len(seq.left))
            self._count("top-right-gadget")
            return ProofNode(
                "neg-right", side=RIGHT, index=node.index, b=BOT, at=len(seq.left),
                children=(n2,),
            )

        if rule == "bot-left":
            self._target_reach(prop, BOT, NEG)
            self._count("direct")
            return node

        if rule in ("contr-left", "contr-right"):
            refl = replace(node, b=None, c=None)
            return self._recurse_with(node, seq, refl)

        if rule in ("neg-left", "neg-right"):
            pol = NEG if rule == "neg-left" else POS
            if isinstance(prop, Not):
                b0 = prop.body
            elif isinstance(prop, Atom):
                b0 = self._exposure(prop, pol, Not).body
            else:
                raise TranslateError(f"{rule} on a {type(prop).__name__} principal")
            self._target_reach(prop, Not(b0), pol)
            return self._recurse_with(node, seq, replace(node, b=b0))

        if rule in ("and-left", "and-right", "imp-left", "imp-right"):
            cls = And if rule.startswith("and") else Implies
            if not isinstance(prop, cls):
                raise TranslateError(f"{rule} on a non-{cls.__name__} principal")
            return self._recurse_with(node, seq, replace(node, b=prop.left, c=prop.right))

        if rule == "or-left":
            if isinstance(prop, Or):
                b0, c0 = prop.left, prop.right
            elif isinstance(prop, Atom):
                e = self._exposure(prop, NEG, Or)
                b0, c0 = e.left, e.right
            else:
                raise TranslateError("or-left on a bad principal")
            self._target_reach(prop, Or(b0, c0), NEG)
            return self._recurse_with(node, seq, replace(node, b=b0, c=c0))

        if rule == "or-right":
            if isinstance(prop, Or):
                return self._recurse_with(
                    node, seq, replace(node, b=prop.left, c=prop.right)
                )
            if not isinstance(prop, Atom):
                raise TranslateError("or-right on a bad principal")
            return self._or_right_gadget(node, seq, prop)

        if rule in ("all-left", "ex-right"):
            return self._instance_rule(node, seq, prop, rule)

        if rule in ("all-right", "ex-left"):
            if rule == "ex-left":
                if not isinstance(prop, Exists):
                    raise TranslateError("ex-left on a non-existential principal")
                return self._eigen_compound(node, seq, prop)
            if isinstance(prop, Forall):
                return self._eigen_compound(node, seq, prop)
            if not isinstance(prop, Atom):
                raise TranslateError("all-right on a bad principal")
            return self._all_right_gadget(node, seq, prop)

        raise TranslateError(f"unhandled rule {rule!r}")

    # -- helpers per family -------------------------------------------------

    def _or_right_gadget(self, node, seq, prop):
        e = self._exposure(prop, POS, Or)
        b0, c0 = e.left, e.right
        i, L = node.index, seq.left
        imm = replace(node, b=b0, c=c0)
        old = self._premise(node, seq)[0]
        new = self._premise(imm, seq)[0]
        child = node.children[0]
        if not alpha_eq(old, new):
            child = pullback(child, new, old, self.hol, self.budget)
        rho = self.node(child, new)
        self._target_reach(prop, Not(Not(b0)), POS)
        self._target_reach(prop, Not(Not(c0)), POS)
        n_d = ProofNode("neg-left", side=LEFT, index=len(L), b=c0, at=i + 1, children=(rho,))
        n_c = ProofNode("neg-left", side=LEFT, index=len(L), b=b0, at=i, children=(n_d,))
        n_b = ProofNode(
            "neg-right", side=RIGHT, index=i, b=Not(c0), at=len(L) + 1, children=(n_c,)
        )
        n_a = ProofNode("neg-right", side=RIGHT, index=i, b=Not(b0), at=len(L), children=(n_b,))
        self._count("or-right-gadget")
        return ProofNode(
            "contr-right", side=RIGHT, index=i, b=Not(Not(b0)), c=Not(Not(c0)),
            children=(n_a,),
        )

    def _all_right_gadget(self, node, seq, prop):
        sorts, terms = self._decisive(prop, "all-pos")
        t = terms["x"]
        tsort = sort_subst(S.SortVar("T"), sorts)
        if node.var_sort != tsort:
            raise TranslateError("all-right: annotated bound sort disagrees with the head")
        if node.var in {v.name for v in S.free_vars(t)}:
            avoid = free_names(seq) | proof_names(node)
            node = _rename_eigen(node, fresh_name(node.var, avoid))
        x = Var(node.var, tsort)
        b_imm = Atom("eps", (apply1(t, x),))
        imm = replace(node, body=b_imm)
        old = self._premise(node, seq)[0]
        new = self._premise(imm, seq)[0]
        child = node.children[0]
        if not alpha_eq(old, new):
            child = pullback(child, new, old, self.hol, self.budget)
        rho = self.node(child, new)
        h_t = S.app(self.holpm.sig, CHOICE, (tsort,), (t,))
        witness_atom = substitute(b_imm, x, h_t)
        rho_s = substitute_in_proof(rho, x, h_t)
        self._target_reach(prop, Not(Not(witness_atom)), POS)
        i, L = node.index, seq.left
        n2 = ProofNode("neg-left", side=LEFT, index=len(L), b=witness_atom, at=i, children=(rho_s,))
        self._count("all-right-gadget")
        return ProofNode(
            "neg-right", side=RIGHT, index=i, b=Not(witness_atom), at=len(L), children=(n2,)
        )

    def _eigen_compound(self, node, seq, prop):
        # same quantifier rule exists in HOLpm; realign the body to the
        # proposition itself and pull the premise back
        if node.var in free_names(prop):
            avoid = free_names(seq) | proof_names(node) | free_names(prop)
            node = _rename_eigen(node, fresh_name(node.var, avoid))
        body0 = open_binder_as(prop, node.var)
        return self._recurse_with(node, seq, replace(node, body=body0))

    def _instance_rule(self, node, seq, prop, rule):
        quant = Forall if rule == "all-left" else Exists
        pol = NEG if rule == "all-left" else POS
        if isinstance(prop, quant):
            if node.var in free_names(prop) and node.var != prop.var:
                fv = free_names(prop) | free_names(seq) | proof_names(node)
                var = fresh_name(node.var, fv)
            else:
                var = node.var
            body0 = open_binder_as(prop, var)
            if prop.sort != node.var_sort:
                raise TranslateError(f"{rule}: bound sort mismatch")
            new = replace(node, var=var, body=body0, c=None)
        elif isinstance(prop, Atom):
            if rule == "ex-right":
                raise TranslateError("ex-right on an atomic principal")
            sorts, terms = self._decisive(prop, "all-neg")
            t = terms["x"]
            tsort = sort_subst(S.SortVar("T"), sorts)
            if node.var_sort != tsort:
                raise TranslateError("all-left: annotated bound sort disagrees with the head")
            var = fresh_name("y", {v.name for v in S.free_vars(t)} | {v.name for v in S.free_vars(node.term)})
            body0 = Atom("eps", (apply1(t, Var(var, tsort)),))
            self._target_reach(prop, Forall(var, tsort, body0), NEG)
            new = replace(node, var=var, body=body0, c=None)
        else:
            raise TranslateError(f"{rule} on a bad principal")
        return self._recurse_with(node, seq, new)


def hol_to_holpm(proof, goal, budget=DEFAULT_BUDGET):
    """Translate a cut-free HOL proof of a choice-free sequent into a
    cut-free HOLpm proof of the same sequent.

    Returns the new proof and a trace recording sizes and which cases
    fired.  Raises TranslateError when the input is out of scope (uses
    cut, mentions a choice symbol in the goal, or fails to check).
    """
    hol, holpm = build_hol(), build_holpm()
    if contains_fun(goal, CHOICE):
        raise TranslateError("goal mentions a choice symbol")
    if not is_cut_free(proof):
        raise TranslateError("input proof uses cut")
    report = check(proof, goal, hol, budget)
    if not report.ok:
        where = report.failure.reason if report.failure else report.status
        raise TranslateError(f"input proof does not check in HOL: {where}")
    tr = _Translator(hol, holpm, budget)
    out = tr.node(proof, goal)
    return out, TranslationTrace(proof_size(proof), proof_size(out), dict(tr.cases))
