"""Equational normalization and polarized proposition rewriting.

Equations are oriented left-to-right into a terminating rewrite system
and decided by normal-form comparison.  One-step proposition rewriting
follows the polarity discipline: negation and the left of implication
flip the polarity, everything else preserves it.  Equational steps
inside atoms are collapsed to one canonical representative per
equivalence class, which is what every provability-relevant question
depends on.

Reachability is breadth-first search with memoization on canonical
forms, guarded by a fuel budget so that queries stay total on arbitrary
user theories.  For the built-in theories the search is exact: every
proposition rule step strictly consumes the exposed head symbol, so the
reduct set is finite.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .syntax import (
    And,
    App,
    Atom,
    Bottom,
    Const,
    Exists,
    Forall,
    Implies,
    Not,
    Or,
    Top,
    Var,
    alpha_key,
    fresh_name,
    sort_match,
    sort_subst,
    term_vars,
)
from .theory import NEG, POS


class FuelExhausted(Exception):
    """A rewriting query ran out of its exploration budget."""


@dataclass(frozen=True)
class ReachabilityBudget:
    fuel: int = 10000


DEFAULT_BUDGET = ReachabilityBudget()


class _Meter:
    def __init__(self, fuel):
        self.left = fuel

    def spend(self, n=1):
        self.left -= n
        if self.left < 0:
            raise FuelExhausted("rewrite exploration budget exhausted")


def flip(polarity):
    return POS if polarity == NEG else NEG


# ---------------------------------------------------------------------------
# First-order matching and schema instantiation


def match_term(pattern, term, sorts, terms) -> bool:
    """Match a schema term against a concrete term.

    `sorts` collects sort-metavariable bindings, `terms` bindings of
    schema variables; both are extended in place.
    """
    if isinstance(pattern, Var):
        if not sort_match(pattern.sort, term.sort, sorts):
            return False
        bound = terms.get(pattern.name)
        if bound is None:
            terms[pattern.name] = term
            return True
        return bound == term
    if isinstance(pattern, Const):
        if not (isinstance(term, Const) and term.name == pattern.name):
            return False
        return all(sort_match(p, s, sorts) for p, s in zip(pattern.sort_args, term.sort_args))
    if isinstance(pattern, App):
        if not (
            isinstance(term, App)
            and term.fun == pattern.fun
            and len(term.args) == len(pattern.args)
        ):
            return False
        if not all(sort_match(p, s, sorts) for p, s in zip(pattern.sort_args, term.sort_args)):
            return False
        return all(match_term(p, t, sorts, terms) for p, t in zip(pattern.args, term.args))
    raise TypeError(pattern)


def instantiate_term(pattern, sorts, terms):
    if isinstance(pattern, Var):
        if pattern.name in terms:
            return terms[pattern.name]
        return Var(pattern.name, sort_subst(pattern.sort, sorts))
    if isinstance(pattern, Const):
        return Const(
            pattern.name,
            tuple(sort_subst(s, sorts) for s in pattern.sort_args),
            sort_subst(pattern.sort, sorts),
        )
    return App(
        pattern.fun,
        tuple(sort_subst(s, sorts) for s in pattern.sort_args),
        tuple(instantiate_term(a, sorts, terms) for a in pattern.args),
        sort_subst(pattern.sort, sorts),
    )


def instantiate_prop(pattern, sorts, terms, avoid):
    """Instantiate a rule right-hand side.

    Binders in the schema (the fresh quantified variables some rules
    introduce) are renamed away from `avoid` and from anything free in
    the substituted terms, so instantiation never captures.
    """
    if isinstance(pattern, Atom):
        return Atom(pattern.pred, tuple(instantiate_term(a, sorts, terms) for a in pattern.args))
    if isinstance(pattern, (Top, Bottom)):
        return pattern
    if isinstance(pattern, Not):
        return Not(instantiate_prop(pattern.body, sorts, terms, avoid))
    if isinstance(pattern, (And, Or, Implies)):
        return type(pattern)(
            instantiate_prop(pattern.left, sorts, terms, avoid),
            instantiate_prop(pattern.right, sorts, terms, avoid),
        )
    if isinstance(pattern, (Forall, Exists)):
        sort = sort_subst(pattern.sort, sorts)
        taken = set(avoid)
        for value in terms.values():
            taken |= {v.name for v in term_vars(value)}
        name = fresh_name(pattern.var, taken)
        inner = dict(terms)
        inner[pattern.var] = Var(name, sort)
        return type(pattern)(
            name, sort, instantiate_prop(pattern.body, sorts, inner, avoid | {name})
        )
    raise TypeError(pattern)


# ---------------------------------------------------------------------------
# Equational normalization


def _rewrite_root(t, rs, meter):
    for eq in rs.equations:
        sorts, terms = {}, {}
        if match_term(eq.lhs, t, sorts, terms):
            meter.spend()
            return instantiate_term(eq.rhs, sorts, terms)
    return None


def _normalize(t, rs, meter):
    if isinstance(t, App):
        t = App(t.fun, t.sort_args, tuple(_normalize(a, rs, meter) for a in t.args), t.sort)
    while True:
        new = _rewrite_root(t, rs, meter)
        if new is None:
            return t
        t = _normalize(new, rs, meter)


def e_normalize(t, rs, budget=DEFAULT_BUDGET):
    """Normal form under the oriented equations, innermost first."""
    return _normalize(t, rs, _Meter(budget.fuel))


def e_equal(t, u, rs, budget=DEFAULT_BUDGET) -> bool:
    """Decide the equational congruence by comparing normal forms."""
    meter = _Meter(budget.fuel)
    return _normalize(t, rs, meter) == _normalize(u, rs, meter)


def canonize(p, rs, meter=None, budget=DEFAULT_BUDGET):
    """Normalize every atom argument; identity on everything else."""
    if meter is None:
        meter = _Meter(budget.fuel)
    if isinstance(p, Atom):
        return Atom(p.pred, tuple(_normalize(a, rs, meter) for a in p.args))
    if isinstance(p, (Top, Bottom)):
        return p
    if isinstance(p, Not):
        return Not(canonize(p.body, rs, meter))
    if isinstance(p, (And, Or, Implies)):
        return type(p)(canonize(p.left, rs, meter), canonize(p.right, rs, meter))
    if isinstance(p, (Forall, Exists)):
        return type(p)(p.var, p.sort, canonize(p.body, rs, meter))
    raise TypeError(p)


# ---------------------------------------------------------------------------
# One-step polarized rewriting


def _rule_steps_atom(p, polarity, rs, meter):
    out = []
    avoid = {v.name for a in p.args for v in term_vars(a)}
    for rule in rs.rules(polarity):
        if rule.lhs.pred != p.pred or len(rule.lhs.args) != len(p.args):
            continue
        sorts, terms = {}, {}
        if all(match_term(pa, ta, sorts, terms) for pa, ta in zip(rule.lhs.args, p.args)):
            meter.spend()
            out.append(instantiate_prop(rule.rhs, sorts, terms, frozenset(avoid)))
    return out


def _rule_steps(p, polarity, rs, meter):
    if isinstance(p, Atom):
        return _rule_steps_atom(p, polarity, rs, meter)
    if isinstance(p, (Top, Bottom)):
        return []
    if isinstance(p, Not):
        return [Not(q) for q in _rule_steps(p.body, flip(polarity), rs, meter)]
    if isinstance(p, (And, Or)):
        cls = type(p)
        left = [cls(q, p.right) for q in _rule_steps(p.left, polarity, rs, meter)]
        right = [cls(p.left, q) for q in _rule_steps(p.right, polarity, rs, meter)]
        return left + right
    if isinstance(p, Implies):
        left = [Implies(q, p.right) for q in _rule_steps(p.left, flip(polarity), rs, meter)]
        right = [Implies(p.left, q) for q in _rule_steps(p.right, polarity, rs, meter)]
        return left + right
    if isinstance(p, (Forall, Exists)):
        return [type(p)(p.var, p.sort, q) for q in _rule_steps(p.body, polarity, rs, meter)]
    raise TypeError(p)


def one_step(p, polarity, rs, budget=DEFAULT_BUDGET):
    """All one-step reducts of `p` at the given polarity.

    Equational steps are represented by the canonical form (one
    representative of the whole equivalence class); rule steps are
    computed on that canonical form.  Deterministic order, deduplicated
    up to alpha-equivalence.
    """
    meter = _Meter(budget.fuel)
    pc = canonize(p, rs, meter)
    out = []
    if pc != p:
        out.append(pc)
    out.extend(_rule_steps(pc, polarity, rs, meter))
    seen, unique = set(), []
    for q in out:
        k = alpha_key(q)
        if k not in seen:
            seen.add(k)
            unique.append(q)
    return unique


def reaches(a, b, polarity, rs, budget=DEFAULT_BUDGET) -> bool:
    """Whether `b` is reachable from `a` (reflexive-transitive closure),
    comparing modulo the equations and alpha-equivalence."""
    meter = _Meter(budget.fuel)
    start = canonize(a, rs, meter)
    goal = alpha_key(canonize(b, rs, meter))
    seen = {alpha_key(start)}
    if alpha_key(start) == goal:
        return True
    queue = deque([start])
    while queue:
        meter.spend()
        cur = queue.popleft()
        for nxt in _rule_steps(cur, polarity, rs, meter):
            nxt = canonize(nxt, rs, meter)
            k = alpha_key(nxt)
            if k == goal:
                return True
            if k not in seen:
                seen.add(k)
                queue.append(nxt)
    return False


def _atomic_closure(p, polarity, rs, meter):
    """Keys of all atomic propositions reachable from an atomic `p`."""
    start = canonize(p, rs, meter)
    seen = {alpha_key(start)}
    queue = deque([start])
    while queue:
        meter.spend()
        cur = queue.popleft()
        for nxt in _rule_steps_atom(cur, polarity, rs, meter):
            if not isinstance(nxt, Atom):
                continue  # compound reducts never become atomic again
            nxt = canonize(nxt, rs, meter)
            k = alpha_key(nxt)
            if k not in seen:
                seen.add(k)
                queue.append(nxt)
    return seen


def atomic_reach(a, b, rs, budget=DEFAULT_BUDGET) -> bool:
    """Whether some atomic P satisfies a ->-* P and b ->+* P.

    Only atoms can reach an atom (every rule or congruence step keeps a
    compound proposition compound), so both sides must be atomic and
    meet inside the purely atomic reduction graph.
    """
    if not (isinstance(a, Atom) and isinstance(b, Atom)):
        return False
    meter = _Meter(budget.fuel)
    return bool(_atomic_closure(a, NEG, rs, meter) & _atomic_closure(b, POS, rs, meter))


def head_exposures(p, polarity, rs, budget=DEFAULT_BUDGET):
    """Non-atomic reducts reachable by rewriting an atom at its head.

    Chases chains of atomic right-hand sides (possible in user theories;
    the built-ins expose a connective in one step).  Deterministic order.
    """
    if not isinstance(p, Atom):
        return []
    meter = _Meter(budget.fuel)
    start = canonize(p, rs, meter)
    seen_atoms = {alpha_key(start)}
    seen_out, out = set(), []
    queue = deque([start])
    while queue:
        meter.spend()
        cur = queue.popleft()
        for nxt in _rule_steps_atom(cur, polarity, rs, meter):
            if isinstance(nxt, Atom):
                nxt = canonize(nxt, rs, meter)
                k = alpha_key(nxt)
                if k not in seen_atoms:
                    seen_atoms.add(k)
                    queue.append(nxt)
            else:
                nxt = canonize(nxt, rs, meter)
                k = alpha_key(nxt)
                if k not in seen_out:
                    seen_out.add(k)
                    out.append(nxt)
    return out


# ---------------------------------------------------------------------------
# Proposition pattern matching (schema right sides against concrete goals)


def match_prop(pattern, target, sorts, terms, bound=None) -> bool:
    """Match a rule proposition (with schema variables) against a concrete
    proposition, up to alpha for binders.

    A schema variable may not bind a term containing a variable bound in
    the target (it would escape its scope).
    """
    if bound is None:
        bound = {}
    if isinstance(pattern, Atom):
        if not (
            isinstance(target, Atom)
            and target.pred == pattern.pred
            and len(target.args) == len(pattern.args)
        ):
            return False
        return all(
            _match_term_scoped(pa, ta, sorts, terms, bound)
            for pa, ta in zip(pattern.args, target.args)
        )
    if isinstance(pattern, (Top, Bottom)):
        return type(target) is type(pattern)
    if isinstance(pattern, Not):
        return isinstance(target, Not) and match_prop(pattern.body, target.body, sorts, terms, bound)
    if isinstance(pattern, (And, Or, Implies)):
        return (
            type(target) is type(pattern)
            and match_prop(pattern.left, target.left, sorts, terms, bound)
            and match_prop(pattern.right, target.right, sorts, terms, bound)
        )
    if isinstance(pattern, (Forall, Exists)):
        if type(target) is not type(pattern):
            return False
        if not sort_match(pattern.sort, target.sort, sorts):
            return False
        inner = dict(bound)
        inner[pattern.var] = target.var
        return match_prop(pattern.body, target.body, sorts, terms, inner)
    raise TypeError(pattern)


def _match_term_scoped(pattern, term, sorts, terms, bound):
    if isinstance(pattern, Var) and pattern.name in bound:
        # a schema-side bound variable must line up with the target binder
        return (
            isinstance(term, Var)
            and term.name == bound[pattern.name]
            and sort_match(pattern.sort, term.sort, sorts)
        )
    if isinstance(pattern, Var):
        target_bound = set(bound.values())
        if any(v.name in target_bound for v in term_vars(term)):
            return False
        return match_term(pattern, term, sorts, terms)
    if isinstance(pattern, Const):
        return match_term(pattern, term, sorts, terms)
    if isinstance(pattern, App):
        if not (
            isinstance(term, App)
            and term.fun == pattern.fun
            and len(term.args) == len(pattern.args)
        ):
            return False
        if not all(sort_match(p, s, sorts) for p, s in zip(pattern.sort_args, term.sort_args)):
            return False
        return all(
            _match_term_scoped(p, t, sorts, terms, bound)
            for p, t in zip(pattern.args, term.args)
        )
    raise TypeError(pattern)
