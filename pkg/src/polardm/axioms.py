"""First-order axiom generation and typed interchange-format export.

A rewrite system is compiled, over an explicit finite sort universe,
into the axiom set that makes provability modulo the system coincide
with plain first-order provability: the equality theory for the
finitized language, the universal closures of the equations, `P => A`
for each negative rule `P -> A`, and `A => P` for each positive one.

The full sort-indexed axiom set is infinite; a finite universe of sorts
picks out the instances that matter for a given conjecture.  Export
targets the TPTP TFF dialect with native equality; the generated
equality-theory axioms are emitted only on request.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import syntax as S
from .rewrite import instantiate_prop, instantiate_term
from .syntax import (
    And,
    App,
    Arrow,
    Atom,
    Base,
    Bottom,
    Const,
    Exists,
    Forall,
    Implies,
    Not,
    Or,
    PredDecl,
    Sequent,
    Signature,
    SortVar,
    Top,
    Var,
    free_vars,
    sort_text,
)
from .theory import RewriteSystem

EQ = "eq"

TAG_EQUALITY = "equality-theory"
TAG_EQUATION = "equation"
TAG_NEG = "neg-rule"
TAG_POS = "pos-rule"

_TAG_ORDER = (TAG_EQUALITY, TAG_EQUATION, TAG_NEG, TAG_POS)


class UniverseError(Exception):
    """The sort universe is not closed under subsorts."""


class ExportError(Exception):
    pass


@dataclass(frozen=True)
class NamedAxiom:
    name: str
    tag: str
    prop: S.Prop


@dataclass(frozen=True)
class AxiomSet:
    theory: str
    sig: Signature  # the rewrite system's signature extended with eq
    universe: tuple
    axioms: tuple

    def tagged(self, tag):
        return tuple(a for a in self.axioms if a.tag == tag)


# ---------------------------------------------------------------------------
# Sort bookkeeping


def mangle_sort(sort) -> str:
    if isinstance(sort, Base):
        return sort.name
    if isinstance(sort, Arrow):
        return f"fun_{mangle_sort(sort.dom)}_{mangle_sort(sort.cod)}"
    raise ExportError(f"cannot mangle schematic sort {sort_text(sort)}")


def _sort_key(sort):
    return (len(mangle_sort(sort)), mangle_sort(sort))


def collect_sorts(obj, out=None) -> set:
    """Every sort carried by a subterm or binder of `obj`."""
    if out is None:
        out = set()
    if isinstance(obj, (Var, Const, App)):
        for t in S.subterms(obj):
            out.add(t.sort)
    elif isinstance(obj, Atom):
        for a in obj.args:
            collect_sorts(a, out)
    elif isinstance(obj, (Top, Bottom)):
        pass
    elif isinstance(obj, Not):
        collect_sorts(obj.body, out)
    elif isinstance(obj, (And, Or, Implies)):
        collect_sorts(obj.left, out)
        collect_sorts(obj.right, out)
    elif isinstance(obj, (Forall, Exists)):
        out.add(obj.sort)
        collect_sorts(obj.body, out)
    elif isinstance(obj, Sequent):
        for p in obj.formulas():
            collect_sorts(p, out)
    return out


def default_universe(conjecture) -> tuple:
    """Sorts occurring in the conjecture, closed under one arrow unfolding."""
    sorts = collect_sorts(conjecture)
    for s in list(sorts):
        if isinstance(s, Arrow):
            sorts.add(s.dom)
            sorts.add(s.cod)
    return tuple(sorted(sorts, key=_sort_key))


def check_universe(universe):
    for s in universe:
        if isinstance(s, Arrow):
            for part in (s.dom, s.cod):
                if part not in universe:
                    raise UniverseError(
                        f"universe is missing {sort_text(part)}"
                        f" (component of {sort_text(s)})"
                    )


# ---------------------------------------------------------------------------
# Closures and schema instantiation


def occurrence_vars(p):
    """Free variables in order of first occurrence (left to right)."""
    seen, out = set(), []

    def term(t):
        if isinstance(t, Var):
            if t.name not in bound and t.name not in seen:
                seen.add(t.name)
                out.append(t)
        elif isinstance(t, App):
            for a in t.args:
                term(a)

    bound = set()

    def walk(q):
        if isinstance(q, Atom):
            for a in q.args:
                term(a)
        elif isinstance(q, Not):
            walk(q.body)
        elif isinstance(q, (And, Or, Implies)):
            walk(q.left)
            walk(q.right)
        elif isinstance(q, (Forall, Exists)):
            fresh = q.var not in bound
            if fresh:
                bound.add(q.var)
            walk(q.body)
            if fresh:
                bound.discard(q.var)

    walk(p)
    return out


def universal_closure(p, order=None) -> S.Prop:
    """Close over the free variables, by default in occurrence order.

    `order` overrides the binder order (rule axioms close in the order
    the variables appear in the rule itself, whichever way the
    implication points).
    """
    for v in reversed(order if order is not None else occurrence_vars(p)):
        p = Forall(v.name, v.sort, p)
    return p


def _assignments(metavars, universe):
    if not metavars:
        yield {}
        return
    head, rest = metavars[0], metavars[1:]
    for s in universe:
        for m in _assignments(rest, universe):
            yield {head: s, **m}


def _admissible(obj, universe) -> bool:
    return collect_sorts(obj) <= set(universe)


def _schema_metavars(*objs):
    names = []

    def sorts_of(obj):
        if isinstance(obj, (Var, Const, App)):
            for t in S.subterms(obj):
                yield t.sort
                if isinstance(t, (Const, App)):
                    yield from t.sort_args
        elif isinstance(obj, Atom):
            for a in obj.args:
                yield from sorts_of(a)
        elif isinstance(obj, Not):
            yield from sorts_of(obj.body)
        elif isinstance(obj, (And, Or, Implies)):
            yield from sorts_of(obj.left)
            yield from sorts_of(obj.right)
        elif isinstance(obj, (Forall, Exists)):
            yield obj.sort
            yield from sorts_of(obj.body)

    for obj in objs:
        for s in sorts_of(obj):
            for mv in sorted(S.sort_metavars(s)):
                if mv not in names:
                    names.append(mv)
    return tuple(names)


def _inst_suffix(metavars, assignment):
    if not metavars:
        return ""
    return "@" + ",".join(mangle_sort(assignment[m]) for m in metavars)


# ---------------------------------------------------------------------------
# Symbol instances of the finitized language


def _const_instances(sig, universe):
    out = []
    for decl in sorted(sig.consts.values(), key=lambda d: d.name):
        for asg in _assignments(decl.metavars, universe):
            sort = S.sort_subst(decl.sort, asg)
            if set(S.subsorts(sort)) <= set(universe):
                out.append((decl.name, tuple(asg[m] for m in decl.metavars)))
    return out


def _fun_instances(sig, universe):
    out = []
    for decl in sorted(sig.funs.values(), key=lambda d: d.name):
        for asg in _assignments(decl.metavars, universe):
            sorts = [S.sort_subst(s, asg) for s in decl.arg_sorts]
            sorts.append(S.sort_subst(decl.result, asg))
            if all(set(S.subsorts(s)) <= set(universe) for s in sorts):
                out.append((decl.name, tuple(asg[m] for m in decl.metavars)))
    return out


def _pred_instances(sig, universe):
    out = []
    for decl in sorted(sig.preds.values(), key=lambda d: d.name):
        for asg in _assignments(decl.metavars, universe):
            sorts = [S.sort_subst(s, asg) for s in decl.arg_sorts]
            if all(set(S.subsorts(s)) <= set(universe) for s in sorts):
                out.append((decl.name, tuple(asg[m] for m in decl.metavars)))
    return out


def _eq_atom(t, u):
    return Atom(EQ, (t, u))


def _conj(props):
    out = props[-1]
    for p in reversed(props[:-1]):
        out = And(p, out)
    return out


def _equality_axioms(sig, universe):
    axioms = []
    for sort in universe:
        x = Var("x", sort)
        axioms.append(
            NamedAxiom(f"eq-refl@{mangle_sort(sort)}", TAG_EQUALITY,
                       universal_closure(_eq_atom(x, x)))
        )
    for name, sort_args in _fun_instances(sig, universe):
        decl = sig.funs[name]
        asg = dict(zip(decl.metavars, sort_args))
        arg_sorts = [S.sort_subst(s, asg) for s in decl.arg_sorts]
        xs = [Var(f"x{i+1}", s) for i, s in enumerate(arg_sorts)]
        ys = [Var(f"y{i+1}", s) for i, s in enumerate(arg_sorts)]
        eqs = [_eq_atom(x, y) for x, y in zip(xs, ys)]
        conc = _eq_atom(S.app(sig, name, sort_args, tuple(xs)),
                        S.app(sig, name, sort_args, tuple(ys)))
        suffix = _inst_suffix(decl.metavars, asg)
        axioms.append(
            NamedAxiom(f"eq-cong-{name}{suffix}", TAG_EQUALITY,
                       universal_closure(Implies(_conj(eqs), conc)))
        )
    for name, sort_args in _pred_instances(sig, universe):
        decl = sig.preds[name]
        asg = dict(zip(decl.metavars, sort_args))
        arg_sorts = [S.sort_subst(s, asg) for s in decl.arg_sorts]
        if not arg_sorts:
            continue
        xs = [Var(f"x{i+1}", s) for i, s in enumerate(arg_sorts)]
        ys = [Var(f"y{i+1}", s) for i, s in enumerate(arg_sorts)]
        eqs = [_eq_atom(x, y) for x, y in zip(xs, ys)]
        suffix = _inst_suffix(decl.metavars, asg)
        axioms.append(
            NamedAxiom(f"eq-cong-{name}{suffix}", TAG_EQUALITY,
                       universal_closure(Implies(_conj(eqs), Implies(Atom(name, tuple(xs)),
                                                                     Atom(name, tuple(ys))))))
        )
    return axioms


def compile_axioms(rs: RewriteSystem, universe) -> AxiomSet:
    """Build the first-order axiom set of `rs` finitized at `universe`.

    Raises UniverseError when the universe is not subsort-closed.  Every
    produced axiom is closed; the counts per tag are exactly (schemas x
    admissible instantiations).
    """
    universe = tuple(sorted(set(universe), key=_sort_key))
    check_universe(universe)
    if EQ in rs.sig.preds:
        raise ExportError("the theory already declares 'eq'")
    preds = dict(rs.sig.preds)
    _t = SortVar("T")
    preds[EQ] = PredDecl(EQ, ("T",), (_t, _t))
    sig = Signature(rs.sig.base_sorts, rs.sig.consts, rs.sig.funs, preds)

    axioms = list(_equality_axioms(sig, universe))

    for eq in rs.equations:
        metavars = _schema_metavars(eq.lhs, eq.rhs)
        for asg in _assignments(metavars, universe):
            lhs = instantiate_term(eq.lhs, asg, {})
            rhs = instantiate_term(eq.rhs, asg, {})
            if not (_admissible(lhs, universe) and _admissible(rhs, universe)):
                continue
            axioms.append(
                NamedAxiom(f"eqn-{eq.name}{_inst_suffix(metavars, asg)}", TAG_EQUATION,
                           universal_closure(_eq_atom(lhs, rhs)))
            )

    for rules, tag, prefix in ((rs.neg_rules, TAG_NEG, "neg"), (rs.pos_rules, TAG_POS, "pos")):
        for rule in rules:
            metavars = _schema_metavars(rule.lhs, rule.rhs)
            for asg in _assignments(metavars, universe):
                lhs = instantiate_prop(rule.lhs, asg, {}, frozenset())
                rhs = instantiate_prop(rule.rhs, asg, {}, S.free_names(lhs))
                if not (_admissible(lhs, universe) and _admissible(rhs, universe)):
                    continue
                body = Implies(lhs, rhs) if tag == TAG_NEG else Implies(rhs, lhs)
                order = occurrence_vars(Implies(lhs, rhs))
                axioms.append(
                    NamedAxiom(f"{prefix}-{rule.name}{_inst_suffix(metavars, asg)}", tag,
                               universal_closure(body, order))
                )

    for ax in axioms:
        if free_vars(ax.prop):
            raise ExportError(f"axiom {ax.name} is not closed")
    ordered = []
    for tag in _TAG_ORDER:
        ordered.extend(sorted((a for a in axioms if a.tag == tag), key=lambda a: a.name))
    return AxiomSet(rs.name, sig, universe, tuple(ordered))


# ---------------------------------------------------------------------------
# TFF export


def _fname(name):
    out = re.sub(r"[^A-Za-z0-9_]", "_", name).lower()
    if not out or not out[0].isalpha():
        out = "a_" + out
    return out


def _mangle_symbol(name, sort_args):
    bits = [_fname(name)] + [mangle_sort(s) for s in sort_args]
    return "_".join(bits)


def _collect_instances(obj, consts, funs, preds):
    if isinstance(obj, Var):
        return
    if isinstance(obj, Const):
        consts.add((obj.name, obj.sort_args))
    elif isinstance(obj, App):
        funs.add((obj.fun, obj.sort_args))
        for a in obj.args:
            _collect_instances(a, consts, funs, preds)
    elif isinstance(obj, Atom):
        if obj.pred != EQ:
            preds.add((obj.pred, ()))
        for a in obj.args:
            _collect_instances(a, consts, funs, preds)
    elif isinstance(obj, (Top, Bottom)):
        pass
    elif isinstance(obj, Not):
        _collect_instances(obj.body, consts, funs, preds)
    elif isinstance(obj, (And, Or, Implies)):
        _collect_instances(obj.left, consts, funs, preds)
        _collect_instances(obj.right, consts, funs, preds)
    elif isinstance(obj, (Forall, Exists)):
        _collect_instances(obj.body, consts, funs, preds)


def conjecture_prop(seq) -> S.Prop:
    """A sequent as one closed formula: premises imply some conclusion."""
    left = list(seq.left)
    right = list(seq.right)
    if right:
        body = right[-1]
        for p in reversed(right[:-1]):
            body = Or(p, body)
    else:
        body = None
    if left:
        hyp = left[-1]
        for p in reversed(left[:-1]):
            hyp = And(p, hyp)
        prop = Implies(hyp, body) if body is not None else Not(hyp)
    else:
        prop = body if body is not None else S.BOT
    return universal_closure(prop)


class _TffWriter:
    def __init__(self, axset):
        self.axset = axset
        self.sig = axset.sig

    def _var_env(self):
        return ({}, set())

    def _tvar(self, name, env):
        mapping, used = env
        if name in mapping:
            return mapping[name]
        cand = name[0].upper() + name[1:]
        while cand in used:
            cand = cand + "0"
        mapping[name] = cand
        used.add(cand)
        return cand

    def term(self, t, env):
        if isinstance(t, Var):
            return self._tvar(t.name, env)
        if isinstance(t, Const):
            return _mangle_symbol(t.name, t.sort_args)
        args = ", ".join(self.term(a, env) for a in t.args)
        return f"{_mangle_symbol(t.fun, t.sort_args)}({args})"

    def formula(self, p, env):
        if isinstance(p, Top):
            return "$true"
        if isinstance(p, Bottom):
            return "$false"
        if isinstance(p, Atom):
            if p.pred == EQ:
                return f"({self.term(p.args[0], env)} = {self.term(p.args[1], env)})"
            if not p.args:
                return _fname(p.pred)
            args = ", ".join(self.term(a, env) for a in p.args)
            return f"{_fname(p.pred)}({args})"
        if isinstance(p, Not):
            return f"~({self.formula(p.body, env)})"
        if isinstance(p, (And, Or, Implies)):
            op = {"And": "&", "Or": "|", "Implies": "=>"}[type(p).__name__]
            return f"({self.formula(p.left, env)} {op} {self.formula(p.right, env)})"
        if isinstance(p, (Forall, Exists)):
            q = "!" if isinstance(p, Forall) else "?"
            mapping, used = env
            inner = (dict(mapping), set(used))
            inner[0].pop(p.var, None)
            v = self._tvar(p.var, inner)
            return f"{q}[{v}: {mangle_sort(p.sort)}]: ({self.formula(p.body, inner)})"
        raise ExportError(f"cannot export {type(p).__name__}")


def export_tff(axset, conjecture=None, explicit_equality=False) -> str:
    """Emit the axiom set (and optional conjecture sequent) as TFF text.

    Native `=` carries the equality theory unless `explicit_equality`
    asks for the generated reflexivity and congruence axioms too.
    """
    writer = _TffWriter(axset)
    axioms = [a for a in axset.axioms if explicit_equality or a.tag != TAG_EQUALITY]
    conj = conjecture_prop(conjecture) if conjecture is not None else None

    consts, funs, preds = set(), set(), set()
    sorts = set(axset.universe)
    for a in axioms:
        _collect_instances(a.prop, consts, funs, preds)
        collect_sorts(a.prop, sorts)
    if conj is not None:
        _collect_instances(conj, consts, funs, preds)
        collect_sorts(conj, sorts)

    lines = ["% theory: " + axset.theory]
    for s in sorted(sorts, key=_sort_key):
        m = mangle_sort(s)
        lines.append(f"tff(ty_{m}, type, {m}: $tType).")
    decls = []
    for name, sort_args in consts:
        decl = axset.sig.consts[name]
        asg = dict(zip(decl.metavars, sort_args))
        decls.append((_mangle_symbol(name, sort_args),
                      mangle_sort(S.sort_subst(decl.sort, asg))))
    for name, sort_args in funs:
        decl = axset.sig.funs[name]
        asg = dict(zip(decl.metavars, sort_args))
        args = " * ".join(mangle_sort(S.sort_subst(s, asg)) for s in decl.arg_sorts)
        res = mangle_sort(S.sort_subst(decl.result, asg))
        decls.append((_mangle_symbol(name, sort_args), f"({args}) > {res}"))
    for name, _ in preds:
        decl = axset.sig.preds[name]
        if decl.arg_sorts:
            args = " * ".join(mangle_sort(s) for s in decl.arg_sorts)
            args = args if len(decl.arg_sorts) > 1 else mangle_sort(decl.arg_sorts[0])
            decls.append((_fname(name), f"{args} > $o"))
        else:
            decls.append((_fname(name), "$o"))
    seen = set()
    for mangled, ty in sorted(decls):
        if mangled in seen:
            continue
        seen.add(mangled)
        lines.append(f"tff(d_{mangled}, type, {mangled}: {ty}).")
    for a in axioms:
        body = writer.formula(a.prop, writer._var_env())
        lines.append(f"tff({_fname(a.name)}, axiom, {body}).")
    if conj is not None:
        body = writer.formula(conj, writer._var_env())
        lines.append(f"tff(goal, conjecture, {body}).")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Parsing the exported dialect back (round-trip support)

_TOKEN = re.compile(
    r"\s*(=>|[()\[\]:,.!?~&|=*>]|\$?[A-Za-z0-9_]+)"
)


def _tokenize_tff(text):
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        pos = 0
        while pos < len(line):
            m = _TOKEN.match(line, pos)
            if not m:
                raise ExportError(f"cannot tokenize TFF near {line[pos:pos+20]!r}")
            out.append(m.group(1))
            pos = m.end()
    return out


class _TffParser:
    def __init__(self, tokens, axset, extra_sorts=()):
        self.toks = tokens
        self.i = 0
        self.sig = axset.sig
        scope = set(axset.universe)
        for s in extra_sorts:
            scope |= S.subsorts(s)
        scope = tuple(sorted(scope, key=_sort_key))
        self.sorts = {mangle_sort(s): s for s in scope}
        self.consts, self.funs = {}, {}
        for name, sort_args in _const_instances(axset.sig, scope):
            self.consts[_mangle_symbol(name, sort_args)] = (name, sort_args)
        for name, sort_args in _fun_instances(axset.sig, scope):
            self.funs[_mangle_symbol(name, sort_args)] = (name, sort_args)
        self.preds = {_fname(p): p for p in axset.sig.preds if p != EQ}

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ExportError("unexpected end of TFF input")
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise ExportError(f"expected {tok!r}, got {got!r}")

    def register_sort(self, mangled):
        # inverse of mangle_sort for names not drawn from the universe
        if mangled in self.sorts:
            return self.sorts[mangled]
        raise ExportError(f"unknown sort name {mangled!r}")

    def formula(self, env):
        tok = self.peek()
        if tok in ("!", "?"):
            self.next()
            self.expect("[")
            binders = []
            while True:
                v = self.next()
                self.expect(":")
                sort = self.register_sort(self.next())
                binders.append((v, sort))
                if self.peek() == ",":
                    self.next()
                    continue
                break
            self.expect("]")
            self.expect(":")
            inner = dict(env)
            inner.update(binders)
            body = self.formula(inner)
            cls = Forall if tok == "!" else Exists
            for v, sort in reversed(binders):
                body = cls(v, sort, body)
            return body
        if tok == "~":
            self.next()
            return Not(self.formula(env))
        if tok == "(":
            self.next()
            # formula group, possibly binary, or a term equality: decide by
            # whether the head token can start a formula
            head = self.peek()
            starts_formula = head in ("!", "?", "~", "(", "$true", "$false") or head in self.preds
            if starts_formula:
                left = self.formula(env)
                op = self.peek()
                if op in ("&", "|", "=>"):
                    self.next()
                    right = self.formula(env)
                    self.expect(")")
                    cls = {"&": And, "|": Or, "=>": Implies}[op]
                    return cls(left, right)
                self.expect(")")
                return left
            t = self.term(env)
            self.expect("=")
            u = self.term(env)
            self.expect(")")
            return _eq_atom(t, u)
        if tok == "$true":
            self.next()
            return S.TOP
        if tok == "$false":
            self.next()
            return S.BOT
        name = self.next()
        if name in self.preds and self.peek() == "(":
            self.next()
            args = [self.term(env)]
            while self.peek() == ",":
                self.next()
                args.append(self.term(env))
            self.expect(")")
            return S.atom(self.sig, self.preds[name], tuple(args))
        raise ExportError(f"cannot parse formula at {name!r}")

    def term(self, env):
        name = self.next()
        if name in env:
            return Var(name, env[name])
        if name in self.funs and self.peek() == "(":
            fun, sort_args = self.funs[name]
            self.next()
            args = [self.term(env)]
            while self.peek() == ",":
                self.next()
                args.append(self.term(env))
            self.expect(")")
            return S.app(self.sig, fun, sort_args, tuple(args))
        if name in self.consts:
            cname, sort_args = self.consts[name]
            return S.const(self.sig, cname, sort_args)
        raise ExportError(f"unknown term symbol {name!r}")


def parse_tff(text, axset, extra_sorts=()):
    """Parse text in the exported dialect back into named propositions.

    Returns (axioms, conjecture) where axioms is a list of (name, role,
    prop) and conjecture is a proposition or None.  Type declarations
    are checked for syntactic shape and skipped.  `extra_sorts` widens
    the symbol tables beyond the axiom set's universe (for conjectures).
    """
    toks = _tokenize_tff(text)
    parser = _TffParser(toks, axset, extra_sorts)
    axioms, conjecture = [], None
    while parser.peek() is not None:
        parser.expect("tff")
        parser.expect("(")
        name = parser.next()
        parser.expect(",")
        role = parser.next()
        parser.expect(",")
        if role == "type":
            depth = 0
            while True:
                tok = parser.next()
                if tok == "(":
                    depth += 1
                elif tok == ")":
                    if depth == 0:
                        break
                    depth -= 1
        else:
            prop = parser.formula({})
            parser.expect(")")
            if role == "conjecture":
                conjecture = prop
            else:
                axioms.append((name, role, prop))
        parser.expect(".")
    return axioms, conjecture
