"""Depth-bounded cut-free proof search.

The search is complete relative to three documented bounds: the tree
height limit, head-exposure annotations (an atomic principal is only
rewritten at its head until a connective appears; compound principals
decompose as they stand), and quantifier witnesses drawn from the
current sequent's equational subterm closure extended with one layer of
choice applications.  `exhausted` is a definite negative answer
relative to those bounds; running out of rewrite fuel instead yields
`fuel-out`.

Weakening is applied only where the calculus forces it, immediately
below the axiom (whose conclusion must be a singleton on both sides);
any proof can be rearranged into that form without growing its height.
Contraction is offered with annotated reduct pairs, plus plain
duplication for principals that expose a quantifier of the polarity
that consumes witnesses.

Every found proof is re-checked by the kernel before being returned.
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
    premises_of,
)
from .rewrite import (
    DEFAULT_BUDGET,
    FuelExhausted,
    atomic_reach,
    canonize,
    e_normalize,
    head_exposures,
    instantiate_prop,
    match_prop,
)
from .syntax import (
    Arrow,
    Atom,
    Exists,
    Forall,
    Implies,
    Not,
    And,
    Or,
    OMICRON,
    SortVar,
    Var,
    alpha_key,
    free_names,
    fresh_name,
    subst,
)
from .theory import NEG, POS


@dataclass(frozen=True)
class SearchResult:
    outcome: str  # "proved" | "exhausted" | "fuel-out"
    proof: ProofNode | None
    nodes: int
    max_depth: int


def _has_sortvar(obj) -> bool:
    def sort_has(s):
        if isinstance(s, SortVar):
            return True
        if isinstance(s, Arrow):
            return sort_has(s.dom) or sort_has(s.cod)
        return False

    if isinstance(obj, (S.Var,)):
        return sort_has(obj.sort)
    if isinstance(obj, S.Const):
        return any(sort_has(s) for s in obj.sort_args) or sort_has(obj.sort)
    if isinstance(obj, S.App):
        return (
            any(sort_has(s) for s in obj.sort_args)
            or sort_has(obj.sort)
            or any(_has_sortvar(a) for a in obj.args)
        )
    if isinstance(obj, Atom):
        return any(_has_sortvar(a) for a in obj.args)
    return False


def default_cut_candidates(goal, rs, budget=DEFAULT_BUDGET):
    """Cut formulas worth trying for this goal: atoms obtained by matching
    rule right-hand sides against the goal's formulas and their head
    reducts (one inversion step), then the goal's own atoms."""
    out, seen = [], set()

    def add(p):
        k = alpha_key(p)
        if k not in seen:
            seen.add(k)
            out.append(p)

    targets = []
    for f in goal.formulas():
        targets.append(f)
        for pol in (NEG, POS):
            try:
                targets.extend(head_exposures(f, pol, rs, budget))
            except FuelExhausted:
                pass
    for target in targets:
        for rule in rs.neg_rules + rs.pos_rules:
            sorts, terms = {}, {}
            if not match_prop(rule.rhs, target, sorts, terms):
                continue
            lhs = instantiate_prop(rule.lhs, sorts, terms, frozenset())
            if _has_sortvar(lhs):
                continue
            add(canonize(lhs, rs, budget=budget))
    for f in goal.formulas():
        if isinstance(f, Atom):
            add(canonize(f, rs, budget=budget))
    return out


class _Searcher:
    def __init__(self, rs, budget, allow_cut, cut_candidates):
        self.rs = rs
        self.budget = budget
        self.allow_cut = allow_cut
        self.cut_candidates = cut_candidates or []
        self.nodes = 0
        self.deepest = 0
        self.max_depth = 0
        self.undecided = 0
        self.loop_prunes = 0
        self.fail = {}
        self.path = set()
        self._exposure_cache = {}

    # -- helpers ------------------------------------------------------------

    def _canon(self, p):
        return canonize(p, self.rs, budget=self.budget)

    def _key(self, seq):
        return (
            tuple(sorted(alpha_key(self._canon(p)) for p in seq.left)),
            tuple(sorted(alpha_key(self._canon(p)) for p in seq.right)),
        )

    def _exposures(self, p, pol):
        if not isinstance(p, Atom):
            return []
        k = (alpha_key(p), pol)
        got = self._exposure_cache.get(k)
        if got is None:
            try:
                got = head_exposures(p, pol, self.rs, self.budget)
            except FuelExhausted:
                self.undecided += 1
                got = []
            self._exposure_cache[k] = got
        return got

    def _try(self, node, seq):
        try:
            return premises_of(node, seq, self.rs, self.budget)
        except InvalidNode:
            return None
        except (UndecidedNode, FuelExhausted):
            self.undecided += 1
            return None

    def _term_pool(self, seq):
        """Sort-indexed witness terms: the sequent's subterm closure,
        equationally normalized, the theory's plain constants, plus one
        layer of choice applications."""
        pool, seen = {}, set()

        def add(t):
            k = alpha_key(t)
            if k in seen:
                return
            seen.add(k)
            pool.setdefault(t.sort, []).append(t)

        def from_prop(p, bound):
            if isinstance(p, Atom):
                for a in p.args:
                    for t in S.subterms(a):
                        if {v.name for v in S.term_vars(t)} & bound:
                            continue
                        try:
                            add(e_normalize(t, self.rs, self.budget))
                        except FuelExhausted:
                            self.undecided += 1
            elif isinstance(p, Not):
                from_prop(p.body, bound)
            elif isinstance(p, (And, Or, Implies)):
                from_prop(p.left, bound)
                from_prop(p.right, bound)
            elif isinstance(p, (Forall, Exists)):
                from_prop(p.body, bound | {p.var})

        for p in seq.formulas():
            from_prop(p, set())
        for decl in self.rs.sig.consts.values():
            if not decl.metavars:
                add(S.const(self.rs.sig, decl.name))
        if S.CHOICE in self.rs.sig.funs:
            for sort, terms in list(pool.items()):
                if isinstance(sort, Arrow) and sort.cod == OMICRON:
                    for t in list(terms):
                        add(S.app(self.rs.sig, S.CHOICE, (sort.dom,), (t,)))
        return pool

    # -- move generation ------------------------------------------------------

    def _axiom_tree(self, seq, i, j):
        plan = []
        pi, pj = i, j
        for k in range(len(seq.left) - 1, -1, -1):
            if k == pi:
                continue
            plan.append(("weak-left", LEFT, k))
            if k < pi:
                pi -= 1
        for k in range(len(seq.right) - 1, -1, -1):
            if k == pj:
                continue
            plan.append(("weak-right", RIGHT, k))
            if k < pj:
                pj -= 1
        tree = ProofNode("axiom")
        for rule, side, k in reversed(plan):
            tree = ProofNode(rule, side=side, index=k, children=(tree,))
        return tree

    def _moves(self, seq, depth):
        L, R = seq.left, seq.right

        # axiom, reached through the forced weakenings
        closure_height = len(L) + len(R) - 1
        if closure_height <= depth:
            for i, a in enumerate(L):
                for j, b in enumerate(R):
                    try:
                        hit = atomic_reach(a, b, self.rs, self.budget)
                    except FuelExhausted:
                        self.undecided += 1
                        continue
                    if hit:
                        yield self._axiom_tree(seq, i, j), []

        # cut is offered at the root sequent only: it exists to exhibit
        # cut-only provability, and premises of inner cuts regrow the space
        if self.allow_cut and depth == self.max_depth:
            for a in self.cut_candidates:
                for b in [a] + self._exposures(a, NEG):
                    for c in [a] + self._exposures(a, POS):
                        node = ProofNode("cut", a=a, b=b, c=c)
                        premises = self._try(node, seq)
                        if premises is not None:
                            yield node, premises

        for rule, side, forms, quant in (
            ("contr-left", LEFT, L, Forall),
            ("contr-right", RIGHT, R, Exists),
        ):
            for i, f in enumerate(forms):
                options = [f] + self._exposures(f, NEG if side == LEFT else POS)
                dup_ok = any(isinstance(o, quant) for o in options)
                for b in options:
                    for c in options:
                        refl = b is f and c is f
                        if refl and not dup_ok:
                            continue
                        node = ProofNode(rule, side=side, index=i, b=b, c=c)
                        premises = self._try(node, seq)
                        if premises is not None:
                            yield node, premises

        for j, f in enumerate(R):
            node = ProofNode("top-right", side=RIGHT, index=j)
            premises = self._try(node, seq)
            if premises is not None:
                yield node, premises
        for i, f in enumerate(L):
            node = ProofNode("bot-left", side=LEFT, index=i)
            premises = self._try(node, seq)
            if premises is not None:
                yield node, premises

        unary = (
            ("neg-left", LEFT, L, Not, NEG),
            ("neg-right", RIGHT, R, Not, POS),
            ("and-left", LEFT, L, And, NEG),
            ("and-right", RIGHT, R, And, POS),
            ("or-left", LEFT, L, Or, NEG),
            ("or-right", RIGHT, R, Or, POS),
            ("imp-left", LEFT, L, Implies, NEG),
            ("imp-right", RIGHT, R, Implies, POS),
        )
        for rule, side, forms, shape, pol in unary:
            for i, f in enumerate(forms):
                shaped = [f] if isinstance(f, shape) else [
                    e for e in self._exposures(f, pol) if isinstance(e, shape)
                ]
                for target in shaped:
                    if shape is Not:
                        node = ProofNode(rule, side=side, index=i, b=target.body)
                    else:
                        node = ProofNode(rule, side=side, index=i, b=target.left, c=target.right)
                    premises = self._try(node, seq)
                    if premises is not None:
                        yield node, premises

        pool = None
        for rule, side, forms, quant, pol in (
            ("all-left", LEFT, L, Forall, NEG),
            ("ex-right", RIGHT, R, Exists, POS),
        ):
            for i, f in enumerate(forms):
                shaped = [f] if isinstance(f, quant) else [
                    e for e in self._exposures(f, pol) if isinstance(e, quant)
                ]
                for q in shaped:
                    if pool is None:
                        pool = self._term_pool(seq)
                    for t in pool.get(q.sort, []):
                        node = ProofNode(
                            rule, side=side, index=i,
                            var=q.var, var_sort=q.sort, body=q.body, term=t,
                        )
                        premises = self._try(node, seq)
                        if premises is not None:
                            yield node, premises

        for rule, side, forms, quant, pol in (
            ("all-right", RIGHT, R, Forall, POS),
            ("ex-left", LEFT, L, Exists, NEG),
        ):
            for i, f in enumerate(forms):
                shaped = [f] if isinstance(f, quant) else [
                    e for e in self._exposures(f, pol) if isinstance(e, quant)
                ]
                for q in shaped:
                    eigen = fresh_name(q.var, free_names(seq) | free_names(q))
                    body = subst(q.body, {q.var: Var(eigen, q.sort)})
                    node = ProofNode(
                        rule, side=side, index=i, var=eigen, var_sort=q.sort, body=body
                    )
                    premises = self._try(node, seq)
                    if premises is not None:
                        yield node, premises

    # -- the search ----------------------------------------------------------

    def search(self, seq, depth):
        self.nodes += 1
        self.deepest = max(self.deepest, self.max_depth - depth)
        if depth <= 0:
            return None
        key = self._key(seq)
        if self.fail.get(key, -1) >= depth:
            return None
        if key in self.path:
            self.loop_prunes += 1
            return None
        self.path.add(key)
        impure_before = (self.loop_prunes, self.undecided)
        try:
            for node, premises in self._moves(seq, depth):
                children = []
                for premise in premises:
                    sub = self.search(premise, depth - 1)
                    if sub is None:
                        break
                    children.append(sub)
                else:
                    # leaf moves (axiom with its weakenings) come fully built
                    return replace(node, children=tuple(children)) if premises else node
            if (self.loop_prunes, self.undecided) == impure_before:
                # no loop pruning or fuel event below: the failure is absolute
                self.fail[key] = max(self.fail.get(key, -1), depth)
            return None
        finally:
            self.path.discard(key)


def prove_cutfree(
    goal,
    rs,
    max_depth=8,
    budget=DEFAULT_BUDGET,
    allow_cut=False,
    cut_candidates=None,
) -> SearchResult:
    """Search for a proof of height at most `max_depth`.

    Cut is offered only on request, restricted to the supplied (or
    goal-derived) cut-formula candidates.  A returned proof has been
    re-checked by the kernel.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if allow_cut and cut_candidates is None:
        cut_candidates = default_cut_candidates(goal, rs, budget)
    searcher = _Searcher(rs, budget, allow_cut, cut_candidates)
    searcher.max_depth = max_depth
    proof = searcher.search(goal, max_depth)
    if proof is not None:
        report = check(proof, goal, rs, budget)
        if not report.ok:
            raise RuntimeError(
                f"internal error: found proof fails the kernel: {report.failure}"
            )
        return SearchResult("proved", proof, searcher.nodes, searcher.deepest)
    outcome = "fuel-out" if searcher.undecided else "exhausted"
    return SearchResult(outcome, None, searcher.nodes, searcher.deepest)
