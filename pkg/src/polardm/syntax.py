"""Sorted terms, propositions and sequents, with parsing and printing.

The term language is first order.  Families of constants indexed by
sorts (combinators, the dotted quantifier) are declared once with sort
metavariables; a concrete occurrence records the instantiation that
picks it out of the family.  Application is the explicit binary
function symbol `alpha`, so `(t u)` in the surface syntax is sugar for
`alpha(t, u)` at the appropriate sorts.

Propositions bind variables by name.  Whenever two propositions are
compared the comparison is up to alpha-equivalence; `alpha_key` gives
the canonical hashable form used for that everywhere.
All values here are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .sexp import SAtom, SList, SexpError, dumps, error_at, loads_one


class SortError(Exception):
    """A term or proposition violates the sort discipline."""


class ParseError(SexpError):
    """Input text fails to denote a well-sorted object."""


# ---------------------------------------------------------------------------
# Sorts


@dataclass(frozen=True)
class Base:
    name: str


@dataclass(frozen=True)
class Arrow:
    dom: "Sort"
    cod: "Sort"


@dataclass(frozen=True)
class SortVar:
    """Sort metavariable; occurs only inside schemas, never in parsed input."""

    name: str


Sort = Union[Base, Arrow, SortVar]

IOTA = Base("i")
OMICRON = Base("o")


def arrow(*sorts):
    """Right-associated arrow: arrow(a, b, c) is a -> (b -> c)."""
    if not sorts:
        raise ValueError("arrow() needs at least one sort")
    result = sorts[-1]
    for s in reversed(sorts[:-1]):
        result = Arrow(s, result)
    return result


def sort_metavars(sort) -> frozenset:
    if isinstance(sort, SortVar):
        return frozenset([sort.name])
    if isinstance(sort, Arrow):
        return sort_metavars(sort.dom) | sort_metavars(sort.cod)
    return frozenset()


def sort_subst(sort, mapping):
    """Replace sort metavariables according to `mapping` (name -> Sort)."""
    if isinstance(sort, SortVar):
        return mapping.get(sort.name, sort)
    if isinstance(sort, Arrow):
        return Arrow(sort_subst(sort.dom, mapping), sort_subst(sort.cod, mapping))
    return sort


def sort_match(pattern, sort, mapping) -> bool:
    """One-way matching of a schematic sort against a concrete one.

    Extends `mapping` in place; returns False (leaving partial bindings)
    on mismatch, so callers should match against a scratch dict.
    """
    if isinstance(pattern, SortVar):
        bound = mapping.get(pattern.name)
        if bound is None:
            mapping[pattern.name] = sort
            return True
        return bound == sort
    if isinstance(pattern, Base):
        return pattern == sort
    if isinstance(pattern, Arrow):
        return (
            isinstance(sort, Arrow)
            and sort_match(pattern.dom, sort.dom, mapping)
            and sort_match(pattern.cod, sort.cod, mapping)
        )
    raise TypeError(pattern)


def subsorts(sort) -> set:
    """The sort together with every sort nested inside it."""
    out = {sort}
    if isinstance(sort, Arrow):
        out |= subsorts(sort.dom)
        out |= subsorts(sort.cod)
    return out


# ---------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class ConstDecl:
    name: str
    metavars: tuple
    sort: Sort


@dataclass(frozen=True)
class FunDecl:
    name: str
    metavars: tuple
    arg_sorts: tuple
    result: Sort


@dataclass(frozen=True)
class PredDecl:
    name: str
    metavars: tuple
    arg_sorts: tuple


@dataclass(frozen=True)
class Signature:
    base_sorts: frozenset
    consts: Mapping[str, ConstDecl]
    funs: Mapping[str, FunDecl]
    preds: Mapping[str, PredDecl]

    def __post_init__(self):
        seen = set()
        for group in (self.consts, self.funs, self.preds):
            for name, decl in group.items():
                if name != decl.name:
                    raise ValueError(f"signature key {name!r} != decl name {decl.name!r}")
                if name in seen:
                    raise ValueError(f"symbol {name!r} declared twice")
                seen.add(name)
        for decl in self.consts.values():
            if sort_metavars(decl.sort) != frozenset(decl.metavars):
                raise ValueError(f"constant {decl.name}: metavariables not determined by its sort")
        for decl in self.funs.values():
            used = frozenset().union(
                *(sort_metavars(s) for s in decl.arg_sorts), sort_metavars(decl.result)
            )
            if used != frozenset(decl.metavars):
                raise ValueError(f"function {decl.name}: metavariables not determined by its rank")
        for decl in self.preds.values():
            used = frozenset().union(*(sort_metavars(s) for s in decl.arg_sorts), frozenset())
            if used != frozenset(decl.metavars):
                raise ValueError(f"predicate {decl.name}: metavariables not determined by its rank")


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort


@dataclass(frozen=True)
class Const:
    name: str
    sort_args: tuple
    sort: Sort


@dataclass(frozen=True)
class App:
    fun: str
    sort_args: tuple
    args: tuple
    sort: Sort


Term = Union[Var, Const, App]

APPLY = "alpha"  # the binary application function symbol
CHOICE = "H"  # the unary choice function symbol (HOLpm only)


def const(sig, name, sort_args=()) -> Const:
    decl = sig.consts.get(name)
    if decl is None:
        raise SortError(f"unknown constant {name!r}")
    if len(sort_args) != len(decl.metavars):
        raise SortError(
            f"constant {name} expects {len(decl.metavars)} sort arguments, got {len(sort_args)}"
        )
    mapping = dict(zip(decl.metavars, sort_args))
    return Const(name, tuple(sort_args), sort_subst(decl.sort, mapping))


def app(sig, fun, sort_args, args) -> App:
    decl = sig.funs.get(fun)
    if decl is None:
        raise SortError(f"unknown function symbol {fun!r}")
    if len(sort_args) != len(decl.metavars):
        raise SortError(
            f"function {fun} expects {len(decl.metavars)} sort arguments, got {len(sort_args)}"
        )
    mapping = dict(zip(decl.metavars, sort_args))
    want = tuple(sort_subst(s, mapping) for s in decl.arg_sorts)
    if len(args) != len(want):
        raise SortError(f"function {fun} expects {len(want)} arguments, got {len(args)}")
    for i, (term, expect) in enumerate(zip(args, want)):
        if term.sort != expect:
            raise SortError(
                f"argument {i + 1} of {fun}: expected sort {sort_text(expect)},"
                f" got {sort_text(term.sort)}"
            )
    return App(fun, tuple(sort_args), tuple(args), sort_subst(decl.result, mapping))


def apply1(t, u) -> App:
    """Application sugar: build alpha_{T,U}(t, u) from t : T -> U and u : T."""
    if not isinstance(t.sort, Arrow):
        raise SortError(f"cannot apply a term of sort {sort_text(t.sort)}")
    if t.sort.dom != u.sort:
        raise SortError(
            f"application sort mismatch: function wants {sort_text(t.sort.dom)},"
            f" argument has {sort_text(u.sort)}"
        )
    return App(APPLY, (t.sort.dom, t.sort.cod), (t, u), t.sort.cod)


def applies(t, *us) -> Term:
    for u in us:
        t = apply1(t, u)
    return t


def sort_of(t) -> Sort:
    """Sort of a well-formed term; total by construction."""
    return t.sort


# ---------------------------------------------------------------------------
# Propositions


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    body: "Prop"


@dataclass(frozen=True)
class And:
    left: "Prop"
    right: "Prop"


@dataclass(frozen=True)
class Or:
    left: "Prop"
    right: "Prop"


@dataclass(frozen=True)
class Implies:
    left: "Prop"
    right: "Prop"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: Sort
    body: "Prop"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: Sort
    body: "Prop"


Prop = Union[Atom, Top, Bottom, Not, And, Or, Implies, Forall, Exists]

TOP = Top()
BOT = Bottom()

_BINARY = (And, Or, Implies)
_QUANT = (Forall, Exists)


@dataclass(frozen=True)
class Sequent:
    left: tuple
    right: tuple

    def formulas(self) -> Iterator[Prop]:
        yield from self.left
        yield from self.right


def eps(sig, t) -> Atom:
    """The content atom over a term of sort o."""
    return atom(sig, "eps", (t,))


def atom(sig, pred, args) -> Atom:
    decl = sig.preds.get(pred)
    if decl is None:
        raise SortError(f"unknown predicate {pred!r}")
    if len(args) != len(decl.arg_sorts):
        raise SortError(f"predicate {pred} expects {len(decl.arg_sorts)} arguments")
    mapping = {}
    for i, (term, want) in enumerate(zip(args, decl.arg_sorts)):
        if not sort_match(want, term.sort, mapping):
            raise SortError(
                f"argument {i + 1} of {pred}: sort {sort_text(term.sort)} does not fit"
            )
    return Atom(pred, tuple(args))


# ---------------------------------------------------------------------------
# Free variables, substitution, alpha-equivalence


def term_vars(t) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif isinstance(t, App):
        for a in t.args:
            yield from term_vars(a)


def free_vars(obj) -> frozenset:
    """Free variables (as Var nodes) of a term, proposition or sequent."""
    out = set()
    _free_vars(obj, set(), out)
    return frozenset(out)


def _free_vars(obj, bound, out):
    if isinstance(obj, Sequent):
        for p in obj.formulas():
            _free_vars(p, bound, out)
    elif isinstance(obj, (Var, Const, App)):
        for v in term_vars(obj):
            if v.name not in bound:
                out.add(v)
    elif isinstance(obj, Atom):
        for a in obj.args:
            _free_vars(a, bound, out)
    elif isinstance(obj, Not):
        _free_vars(obj.body, bound, out)
    elif isinstance(obj, _BINARY):
        _free_vars(obj.left, bound, out)
        _free_vars(obj.right, bound, out)
    elif isinstance(obj, _QUANT):
        if obj.var in bound:
            _free_vars(obj.body, bound, out)
        else:
            _free_vars(obj.body, bound | {obj.var}, out)


def free_names(obj) -> frozenset:
    return frozenset(v.name for v in free_vars(obj))


def fresh_name(stem, avoid) -> str:
    """Deterministic fresh name: the stem itself, else stem1, stem2, ..."""
    if stem not in avoid:
        return stem
    base = stem.rstrip("0123456789") or stem
    n = 1
    while f"{base}{n}" in avoid:
        n += 1
    return f"{base}{n}"


def term_subst(t, mapping) -> Term:
    """Substitute free variables by name; terms contain no binders.

    Raises SortError when a replacement disagrees with the variable's sort.
    """
    if isinstance(t, Var):
        new = mapping.get(t.name)
        if new is None:
            return t
        if new.sort != t.sort:
            raise SortError(
                f"substituting {t.name}: expected sort {sort_text(t.sort)},"
                f" got {sort_text(new.sort)}"
            )
        return new
    if isinstance(t, App):
        return App(t.fun, t.sort_args, tuple(term_subst(a, mapping) for a in t.args), t.sort)
    return t


def subst(p, mapping) -> Prop:
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return p
    if isinstance(p, Atom):
        return Atom(p.pred, tuple(term_subst(a, mapping) for a in p.args))
    if isinstance(p, (Top, Bottom)):
        return p
    if isinstance(p, Not):
        return Not(subst(p.body, mapping))
    if isinstance(p, _BINARY):
        return type(p)(subst(p.left, mapping), subst(p.right, mapping))
    if isinstance(p, _QUANT):
        inner = {k: v for k, v in mapping.items() if k != p.var}
        if not inner:
            return p
        value_names = set()
        for v in inner.values():
            value_names |= {x.name for x in term_vars(v)}
        var, body = p.var, p.body
        if var in value_names:
            avoid = value_names | free_names(body) | set(inner)
            var = fresh_name(p.var, avoid)
            body = subst(body, {p.var: Var(var, p.sort)})
        return type(p)(var, p.sort, subst(body, inner))
    raise TypeError(p)


def substitute(p, x, t) -> Prop:
    """Substitute term `t` for the variable `x` (a Var) in proposition `p`."""
    if x.sort != t.sort:
        raise SortError(
            f"cannot substitute a term of sort {sort_text(t.sort)}"
            f" for {x.name} of sort {sort_text(x.sort)}"
        )
    return subst(p, {x.name: t})


def open_binder_as(p, name):
    """Rewrite the bound variable of a quantifier to `name`, returning the body.

    Fails when the renaming would capture, i.e. `name` is already free in `p`.
    """
    if not isinstance(p, _QUANT):
        raise SortError("open_binder_as: not a quantified proposition")
    if p.var == name:
        return p.body
    if name in free_names(p):
        raise SortError(f"cannot open binder as {name}: it occurs free")
    return subst(p.body, {p.var: Var(name, p.sort)})


def _skey(sort):
    if isinstance(sort, Base):
        return ("b", sort.name)
    if isinstance(sort, Arrow):
        return ("a", _skey(sort.dom), _skey(sort.cod))
    return ("m", sort.name)


def alpha_key(obj, env=None, depth=0):
    """Canonical hashable key; equal keys iff alpha-equivalent objects."""
    if env is None:
        env = {}
    if isinstance(obj, Sequent):
        return (
            "seq",
            tuple(alpha_key(p, env, depth) for p in obj.left),
            tuple(alpha_key(p, env, depth) for p in obj.right),
        )
    if isinstance(obj, Var):
        lvl = env.get(obj.name)
        if lvl is not None:
            return ("bv", lvl)
        return ("fv", obj.name, _skey(obj.sort))
    if isinstance(obj, Const):
        return ("c", obj.name, tuple(_skey(s) for s in obj.sort_args))
    if isinstance(obj, App):
        return (
            "ap",
            obj.fun,
            tuple(_skey(s) for s in obj.sort_args),
            tuple(alpha_key(a, env, depth) for a in obj.args),
        )
    if isinstance(obj, Atom):
        return ("at", obj.pred, tuple(alpha_key(a, env, depth) for a in obj.args))
    if isinstance(obj, Top):
        return ("top",)
    if isinstance(obj, Bottom):
        return ("bot",)
    if isinstance(obj, Not):
        return ("not", alpha_key(obj.body, env, depth))
    if isinstance(obj, _BINARY):
        tag = {"And": "and", "Or": "or", "Implies": "imp"}[type(obj).__name__]
        return (tag, alpha_key(obj.left, env, depth), alpha_key(obj.right, env, depth))
    if isinstance(obj, _QUANT):
        tag = "all" if isinstance(obj, Forall) else "ex"
        inner = dict(env)
        inner[obj.var] = depth
        return (tag, _skey(obj.sort), alpha_key(obj.body, inner, depth + 1))
    raise TypeError(obj)


def alpha_eq(a, b) -> bool:
    return alpha_key(a) == alpha_key(b)


def contains_fun(obj, fun) -> bool:
    """Whether some term inside `obj` uses the function symbol `fun`."""
    if isinstance(obj, Sequent):
        return any(contains_fun(p, fun) for p in obj.formulas())
    if isinstance(obj, App):
        return obj.fun == fun or any(contains_fun(a, fun) for a in obj.args)
    if isinstance(obj, (Var, Const, Top, Bottom)):
        return False
    if isinstance(obj, Atom):
        return any(contains_fun(a, fun) for a in obj.args)
    if isinstance(obj, Not):
        return contains_fun(obj.body, fun)
    if isinstance(obj, _BINARY):
        return contains_fun(obj.left, fun) or contains_fun(obj.right, fun)
    if isinstance(obj, _QUANT):
        return contains_fun(obj.body, fun)
    raise TypeError(obj)


def subterms(t) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


# ---------------------------------------------------------------------------
# Parsing

_RESERVED = {
    "true",
    "false",
    "not",
    "and",
    "or",
    "imp",
    "all",
    "ex",
    "seq",
    "vars",
    "->",
}


def parse_sort(node, base_sorts):
    if isinstance(node, SAtom):
        if node in base_sorts:
            return Base(str(node))
        raise ParseError(f"unknown base sort {node!r}", node.line, node.col)
    if not isinstance(node, SList) or not node:
        raise error_at("expected a sort", node)
    # arrow chain: s1 -> s2 -> ... -> sn, associated to the right
    parts = []
    expect_sort = True
    for item in node:
        if expect_sort:
            parts.append(parse_sort(item, base_sorts))
        elif not (isinstance(item, SAtom) and item == "->"):
            raise error_at("expected '->' in arrow sort", item)
        expect_sort = not expect_sort
    if expect_sort or len(parts) < 2:
        raise error_at("malformed arrow sort", node)
    return arrow(*parts)


def _parse_sorts(nodes, base_sorts):
    return tuple(parse_sort(n, base_sorts) for n in nodes)


def parse_term(node, sig, ctx):
    """Parse a term; `ctx` maps free-variable names to sorts."""
    if isinstance(node, str) and not isinstance(node, (SAtom, SList)):
        node = loads_one(node)
    if isinstance(node, SAtom):
        name = str(node)
        if name in ctx:
            return Var(name, ctx[name])
        decl = sig.consts.get(name)
        if decl is not None:
            if decl.metavars:
                raise ParseError(
                    f"constant {name} needs {len(decl.metavars)} sort arguments",
                    node.line,
                    node.col,
                )
            return const(sig, name)
        raise ParseError(f"unknown symbol {name!r}", node.line, node.col)
    if not isinstance(node, SList) or not node:
        raise error_at("expected a term", node)
    head = node[0]
    if isinstance(head, SAtom):
        name = str(head)
        cdecl = sig.consts.get(name)
        if cdecl is not None and cdecl.metavars:
            if len(node) != 1 + len(cdecl.metavars):
                raise error_at(f"{name} takes {len(cdecl.metavars)} sort arguments", node)
            try:
                return const(sig, name, _parse_sorts(node[1:], sig.base_sorts))
            except SortError as e:
                raise error_at(str(e), node)
        fdecl = sig.funs.get(name)
        if fdecl is not None and name != APPLY:
            nmeta, nargs = len(fdecl.metavars), len(fdecl.arg_sorts)
            if len(node) != 1 + nmeta + nargs:
                raise error_at(
                    f"{name} takes {nmeta} sort and {nargs} term arguments", node
                )
            sorts = _parse_sorts(node[1 : 1 + nmeta], sig.base_sorts)
            args = tuple(parse_term(a, sig, ctx) for a in node[1 + nmeta :])
            try:
                return app(sig, name, sorts, args)
            except SortError as e:
                raise error_at(str(e), node)
    # application sugar (t u1 ... un)
    if len(node) < 2:
        raise error_at("application needs at least one argument", node)
    if APPLY not in sig.funs:
        raise error_at("this signature has no application symbol", node)
    t = parse_term(node[0], sig, ctx)
    for arg_node in node[1:]:
        u = parse_term(arg_node, sig, ctx)
        try:
            t = apply1(t, u)
        except SortError as e:
            raise error_at(str(e), arg_node)
    return t


def parse_prop(node, sig, ctx):
    if isinstance(node, str) and not isinstance(node, (SAtom, SList)):
        node = loads_one(node)
    if isinstance(node, SAtom):
        if node == "true":
            return TOP
        if node == "false":
            return BOT
        raise ParseError(f"expected a proposition, got {node!r}", node.line, node.col)
    if not isinstance(node, SList) or not node:
        raise error_at("expected a proposition", node)
    head = node[0]
    if isinstance(head, SAtom):
        name = str(head)
        if name == "not":
            _expect_len(node, 2)
            return Not(parse_prop(node[1], sig, ctx))
        if name in ("and", "or", "imp"):
            _expect_len(node, 3)
            cls = {"and": And, "or": Or, "imp": Implies}[name]
            return cls(parse_prop(node[1], sig, ctx), parse_prop(node[2], sig, ctx))
        if name in ("all", "ex"):
            _expect_len(node, 4)
            var = node[1]
            if not isinstance(var, SAtom) or var in _RESERVED:
                raise error_at("expected a variable name", var)
            sort = parse_sort(node[2], sig.base_sorts)
            inner = dict(ctx)
            inner[str(var)] = sort
            body = parse_prop(node[3], sig, inner)
            cls = Forall if name == "all" else Exists
            return cls(str(var), sort, body)
        if name in sig.preds:
            args = tuple(parse_term(a, sig, ctx) for a in node[1:])
            try:
                return atom(sig, name, args)
            except SortError as e:
                raise error_at(str(e), node)
    raise error_at("expected a proposition", node)


def _expect_len(node, n):
    if len(node) != n:
        raise error_at(f"expected {n - 1} arguments after {node[0]}", node)


def parse_var_block(node, base_sorts):
    """Parse (vars (x SORT) ...) into an ordered name -> Sort mapping."""
    if not (isinstance(node, SList) and node and node[0] == "vars"):
        raise error_at("expected (vars ...)", node)
    ctx = {}
    for entry in node[1:]:
        if not (isinstance(entry, SList) and len(entry) == 2 and isinstance(entry[0], SAtom)):
            raise error_at("expected (name SORT)", entry)
        name = str(entry[0])
        if name in ctx:
            raise error_at(f"variable {name} declared twice", entry)
        ctx[name] = parse_sort(entry[1], base_sorts)
    return ctx


def parse_sequent(node, sig, ctx=None):
    """Parse (seq (vars ...)? (P ...) (Q ...)); returns (Sequent, ctx)."""
    if isinstance(node, str) and not isinstance(node, (SAtom, SList)):
        node = loads_one(node)
    if not (isinstance(node, SList) and node and node[0] == "seq"):
        raise error_at("expected (seq ...)", node)
    ctx = dict(ctx or {})
    rest = node[1:]
    if rest and isinstance(rest[0], SList) and rest[0] and rest[0][0] == "vars":
        ctx.update(parse_var_block(rest[0], sig.base_sorts))
        rest = rest[1:]
    if len(rest) != 2 or not all(isinstance(x, SList) for x in rest):
        raise error_at("expected two formula lists in (seq ...)", node)
    left = tuple(parse_prop(p, sig, ctx) for p in rest[0])
    right = tuple(parse_prop(p, sig, ctx) for p in rest[1])
    return Sequent(left, right), ctx


# ---------------------------------------------------------------------------
# Printing (inverse of parsing, up to alpha-equivalence)


def print_sort(sort):
    if isinstance(sort, Base):
        return SAtom(sort.name)
    if isinstance(sort, SortVar):
        return SAtom("?" + sort.name)
    parts = [print_sort(sort.dom)]
    rest = sort.cod
    while isinstance(rest, Arrow):
        parts.append(print_sort(rest.dom))
        rest = rest.cod
    parts.append(print_sort(rest))
    out = SList()
    for i, p in enumerate(parts):
        if i:
            out.append(SAtom("->"))
        out.append(p)
    return out


def print_term(t):
    if isinstance(t, Var):
        return SAtom(t.name)
    if isinstance(t, Const):
        if t.sort_args:
            return SList([SAtom(t.name), *(print_sort(s) for s in t.sort_args)])
        return SAtom(t.name)
    if t.fun == APPLY:
        spine = []
        cur = t
        while isinstance(cur, App) and cur.fun == APPLY:
            spine.append(cur.args[1])
            cur = cur.args[0]
        spine.append(cur)
        spine.reverse()
        return SList([print_term(x) for x in spine])
    return SList(
        [SAtom(t.fun), *(print_sort(s) for s in t.sort_args), *(print_term(a) for a in t.args)]
    )


def print_prop(p):
    if isinstance(p, Top):
        return SAtom("true")
    if isinstance(p, Bottom):
        return SAtom("false")
    if isinstance(p, Atom):
        return SList([SAtom(p.pred), *(print_term(a) for a in p.args)])
    if isinstance(p, Not):
        return SList([SAtom("not"), print_prop(p.body)])
    if isinstance(p, _BINARY):
        tag = {"And": "and", "Or": "or", "Implies": "imp"}[type(p).__name__]
        return SList([SAtom(tag), print_prop(p.left), print_prop(p.right)])
    if isinstance(p, _QUANT):
        tag = "all" if isinstance(p, Forall) else "ex"
        return SList([SAtom(tag), SAtom(p.var), print_sort(p.sort), print_prop(p.body)])
    raise TypeError(p)


def print_sequent(seq, ctx=None):
    """Render a sequent; free variables become an explicit (vars ...) block."""
    out = SList([SAtom("seq")])
    fv = sorted(free_vars(seq), key=lambda v: v.name)
    if ctx:
        declared = {name: sort for name, sort in ctx.items()}
        for v in fv:
            declared.setdefault(v.name, v.sort)
        fv = [Var(n, s) for n, s in sorted(declared.items())]
    if fv:
        out.append(
            SList([SAtom("vars"), *(SList([SAtom(v.name), print_sort(v.sort)]) for v in fv)])
        )
    out.append(SList([print_prop(p) for p in seq.left]))
    out.append(SList([print_prop(p) for p in seq.right]))
    return out


def sort_text(sort):
    return dumps(print_sort(sort))


def term_text(t):
    return dumps(print_term(t))


def prop_text(p):
    return dumps(print_prop(p))


def sequent_text(seq, ctx=None):
    return dumps(print_sequent(seq, ctx))
