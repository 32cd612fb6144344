"""The proof checker for the polarized sequent calculus modulo.

A proof is a tree of annotated rule applications.  Each node names its
rule, the principal formula by side and index, and carries the reduct
propositions the rule's side condition is about.  The checker never
infers reducts by normalization (positive rewriting in the clausal
theory is not confluent, so that would be incomplete); it only verifies
the annotated reachability obligations.  Omitted annotations default to
the reflexive instance.

Premise sequents are built positionally:

  * in-place rules put their reducts at the principal's index,
  * a formula moved across the turnstile lands at the front of the
    right-hand side or at the end of the left-hand side, unless the
    node carries an explicit insertion index,
  * cut extends the left premise with B at the end and the right
    premise with C at the front.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as S
from .sexp import SAtom, SList, dumps, error_at, loads_one
from .syntax import (
    BOT,
    TOP,
    And,
    Atom,
    Exists,
    Forall,
    Implies,
    Not,
    Or,
    Sequent,
    Var,
    free_names,
    prop_text,
)
from .rewrite import DEFAULT_BUDGET, FuelExhausted, atomic_reach, reaches
from .theory import NEG, POS

LEFT = "left"
RIGHT = "right"

# rule name -> number of children
RULES = {
    "axiom": 0,
    "cut": 2,
    "contr-left": 1,
    "contr-right": 1,
    "weak-left": 1,
    "weak-right": 1,
    "top-right": 0,
    "bot-left": 0,
    "neg-left": 1,
    "neg-right": 1,
    "and-left": 1,
    "and-right": 2,
    "or-left": 2,
    "or-right": 1,
    "imp-left": 2,
    "imp-right": 1,
    "all-left": 1,
    "all-right": 1,
    "ex-left": 1,
    "ex-right": 1,
}

CUT = "cut"


@dataclass(frozen=True)
class ProofNode:
    """One rule application.

    Field use by rule:
      cut        : a = cut formula, b/c = its negative/positive reducts
      contr-*    : b, c = the two reducts of the principal (default: itself)
      neg-*      : b = body of the reached negation; at = insertion index
      and/or/imp : b, c = components of the reached connective; at = insertion
      all-left,
      ex-right   : var/var_sort/body = reached quantifier, term = witness,
                   c = reduct of the instantiated body (default: the instance)
      all-right,
      ex-left    : var/var_sort/body = reached quantifier (var is the
                   eigenvariable)
      axiom      : b = optional common atomic reduct
    """

    rule: str
    side: str | None = None
    index: int | None = None
    a: S.Prop | None = None
    b: S.Prop | None = None
    c: S.Prop | None = None
    var: str | None = None
    var_sort: S.Sort | None = None
    body: S.Prop | None = None
    term: S.Term | None = None
    at: int | None = None
    children: tuple = ()


@dataclass(frozen=True)
class Failure:
    path: tuple
    rule: str
    reason: str


@dataclass(frozen=True)
class CheckReport:
    status: str  # "ok" | "invalid" | "undecided"
    size: int
    failure: Failure | None = None

    @property
    def ok(self):
        return self.status == "ok"


class InvalidNode(Exception):
    pass


class UndecidedNode(Exception):
    pass


def proof_size(proof) -> int:
    """Number of rule applications in the tree."""
    return 1 + sum(proof_size(c) for c in proof.children)


def proof_height(proof) -> int:
    return 1 + max((proof_height(c) for c in proof.children), default=0)


def is_cut_free(proof) -> bool:
    return proof.rule != CUT and all(is_cut_free(c) for c in proof.children)


def _pick(seq, side, index):
    forms = seq.left if side == LEFT else seq.right
    if index is None or not (0 <= index < len(forms)):
        raise InvalidNode(f"principal index {index} out of range on the {side}")
    return forms[index]


def _replace(forms, index, new):
    return forms[:index] + tuple(new) + forms[index + 1 :]


def _insert(forms, index, item):
    return forms[:index] + (item,) + forms[index:]


def _require_reach(a, b, polarity, rs, budget, what):
    try:
        ok = reaches(a, b, polarity, rs, budget)
    except FuelExhausted:
        raise UndecidedNode(f"{what}: fuel exhausted deciding {prop_text(a)} ->{polarity}* {prop_text(b)}")
    if not ok:
        raise InvalidNode(f"{what}: {prop_text(a)} does not rewrite ({polarity}) to {prop_text(b)}")


def _split(node, prop, cls, what):
    """Annotated components b, c, or the syntactic split of the principal."""
    b, c = node.b, node.c
    if b is None or c is None:
        if not isinstance(prop, cls):
            raise InvalidNode(f"{what}: reduct annotations required for {prop_text(prop)}")
        b = prop.left if b is None else b
        c = prop.right if c is None else c
    return b, c


def premises_of(node, seq, rs, budget=DEFAULT_BUDGET):
    """Validate one node against its conclusion; build its premises.

    Raises InvalidNode / UndecidedNode.  This is the single source of
    truth for the calculus; checking, proof search, translation and
    pullback all construct sequents through it.
    """
    rule = node.rule
    if rule not in RULES:
        raise InvalidNode(f"unknown rule {rule!r}")
    L, R = seq.left, seq.right

    if rule == "axiom":
        if len(L) != 1 or len(R) != 1:
            raise InvalidNode("axiom: conclusion must have exactly one formula on each side")
        if node.b is not None:
            if not isinstance(node.b, Atom):
                raise InvalidNode("axiom: annotated common reduct must be atomic")
            _require_reach(L[0], node.b, NEG, rs, budget, "axiom")
            _require_reach(R[0], node.b, POS, rs, budget, "axiom")
        else:
            try:
                ok = atomic_reach(L[0], R[0], rs, budget)
            except FuelExhausted:
                raise UndecidedNode("axiom: fuel exhausted")
            if not ok:
                raise InvalidNode(
                    f"axiom: no common atomic reduct of {prop_text(L[0])} and {prop_text(R[0])}"
                )
        return []

    if rule == CUT:
        if node.a is None:
            raise InvalidNode("cut: missing cut formula")
        b = node.b if node.b is not None else node.a
        c = node.c if node.c is not None else node.a
        _require_reach(node.a, b, NEG, rs, budget, "cut")
        _require_reach(node.a, c, POS, rs, budget, "cut")
        return [Sequent(L + (b,), R), Sequent(L, (c,) + R)]

    side, index = node.side, node.index
    if side not in (LEFT, RIGHT):
        raise InvalidNode(f"{rule}: bad principal side {side!r}")
    prop = _pick(seq, side, index)
    pol = NEG if side == LEFT else POS

    if rule in ("contr-left", "contr-right"):
        want = LEFT if rule == "contr-left" else RIGHT
        if side != want:
            raise InvalidNode(f"{rule}: principal must be on the {want}")
        b = node.b if node.b is not None else prop
        c = node.c if node.c is not None else prop
        _require_reach(prop, b, pol, rs, budget, rule)
        _require_reach(prop, c, pol, rs, budget, rule)
        if side == LEFT:
            return [Sequent(_replace(L, index, (b, c)), R)]
        return [Sequent(L, _replace(R, index, (b, c)))]

    if rule == "weak-left":
        if side != LEFT:
            raise InvalidNode("weak-left: principal must be on the left")
        return [Sequent(_replace(L, index, ()), R)]
    if rule == "weak-right":
        if side != RIGHT:
            raise InvalidNode("weak-right: principal must be on the right")
        return [Sequent(L, _replace(R, index, ()))]

    if rule == "top-right":
        if side != RIGHT:
            raise InvalidNode("top-right: principal must be on the right")
        _require_reach(prop, TOP, POS, rs, budget, rule)
        return []
    if rule == "bot-left":
        if side != LEFT:
            raise InvalidNode("bot-left: principal must be on the left")
        _require_reach(prop, BOT, NEG, rs, budget, rule)
        return []

    if rule in ("neg-left", "neg-right"):
        want = LEFT if rule == "neg-left" else RIGHT
        if side != want:
            raise InvalidNode(f"{rule}: principal must be on the {want}")
        b = node.b
        if b is None:
            if not isinstance(prop, Not):
                raise InvalidNode(f"{rule}: annotation required for {prop_text(prop)}")
            b = prop.body
        _require_reach(prop, Not(b), pol, rs, budget, rule)
        if rule == "neg-left":
            at = node.at if node.at is not None else 0
            if not (0 <= at <= len(R)):
                raise InvalidNode(f"{rule}: insertion index {at} out of range")
            return [Sequent(_replace(L, index, ()), _insert(R, at, b))]
        at = node.at if node.at is not None else len(L)
        if not (0 <= at <= len(L)):
            raise InvalidNode(f"{rule}: insertion index {at} out of range")
        return [Sequent(_insert(L, at, b), _replace(R, index, ()))]

    if rule in ("and-left", "and-right"):
        b, c = _split(node, prop, And, rule)
        _require_reach(prop, And(b, c), pol, rs, budget, rule)
        if rule == "and-left":
            if side != LEFT:
                raise InvalidNode("and-left: principal must be on the left")
            return [Sequent(_replace(L, index, (b, c)), R)]
        if side != RIGHT:
            raise InvalidNode("and-right: principal must be on the right")
        return [Sequent(L, _replace(R, index, (b,))), Sequent(L, _replace(R, index, (c,)))]

    if rule in ("or-left", "or-right"):
        b, c = _split(node, prop, Or, rule)
        _require_reach(prop, Or(b, c), pol, rs, budget, rule)
        if rule == "or-left":
            if side != LEFT:
                raise InvalidNode("or-left: principal must be on the left")
            return [Sequent(_replace(L, index, (b,)), R), Sequent(_replace(L, index, (c,)), R)]
        if side != RIGHT:
            raise InvalidNode("or-right: principal must be on the right")
        return [Sequent(L, _replace(R, index, (b, c)))]

    if rule in ("imp-left", "imp-right"):
        b, c = _split(node, prop, Implies, rule)
        _require_reach(prop, Implies(b, c), pol, rs, budget, rule)
        if rule == "imp-left":
            if side != LEFT:
                raise InvalidNode("imp-left: principal must be on the left")
            at = node.at if node.at is not None else 0
            if not (0 <= at <= len(R)):
                raise InvalidNode(f"{rule}: insertion index {at} out of range")
            return [
                Sequent(_replace(L, index, ()), _insert(R, at, b)),
                Sequent(_replace(L, index, (c,)), R),
            ]
        if side != RIGHT:
            raise InvalidNode("imp-right: principal must be on the right")
        at = node.at if node.at is not None else len(L)
        if not (0 <= at <= len(L)):
            raise InvalidNode(f"{rule}: insertion index {at} out of range")
        return [Sequent(_insert(L, at, b), _replace(R, index, (c,)))]

    if rule in ("all-left", "ex-right"):
        want, quant = (LEFT, Forall) if rule == "all-left" else (RIGHT, Exists)
        if side != want:
            raise InvalidNode(f"{rule}: principal must be on the {want}")
        if node.var is None or node.var_sort is None or node.body is None or node.term is None:
            raise InvalidNode(f"{rule}: needs variable, body and witness term annotations")
        x = Var(node.var, node.var_sort)
        if node.term.sort != node.var_sort:
            raise InvalidNode(
                f"{rule}: witness term has sort {S.sort_text(node.term.sort)},"
                f" bound variable has {S.sort_text(node.var_sort)}"
            )
        _require_reach(prop, quant(node.var, node.var_sort, node.body), pol, rs, budget, rule)
        instance = S.substitute(node.body, x, node.term)
        c = node.c if node.c is not None else instance
        _require_reach(instance, c, pol, rs, budget, rule)
        if rule == "all-left":
            return [Sequent(_replace(L, index, (c,)), R)]
        return [Sequent(L, _replace(R, index, (c,)))]

    if rule in ("all-right", "ex-left"):
        want, quant = (RIGHT, Forall) if rule == "all-right" else (LEFT, Exists)
        if side != want:
            raise InvalidNode(f"{rule}: principal must be on the {want}")
        if node.var is None or node.var_sort is None or node.body is None:
            raise InvalidNode(f"{rule}: needs variable and body annotations")
        _require_reach(prop, quant(node.var, node.var_sort, node.body), pol, rs, budget, rule)
        context = Sequent(_replace(L, index, ()) if side == LEFT else L,
                          R if side == LEFT else _replace(R, index, ()))
        if node.var in free_names(context):
            raise InvalidNode(
                f"{rule}: eigenvariable {node.var} occurs free in the conclusion's context"
            )
        if rule == "all-right":
            return [Sequent(L, _replace(R, index, (node.body,)))]
        return [Sequent(_replace(L, index, (node.body,)), R)]

    raise InvalidNode(f"unhandled rule {rule!r}")


def _check(node, seq, rs, budget, path):
    try:
        premises = premises_of(node, seq, rs, budget)
        if len(node.children) != len(premises):
            raise InvalidNode(
                f"{node.rule}: expected {len(premises)} premises, got {len(node.children)}"
            )
    except InvalidNode as e:
        return Failure(path, node.rule, str(e)), "invalid"
    except UndecidedNode as e:
        return Failure(path, node.rule, str(e)), "undecided"
    for i, (child, premise) in enumerate(zip(node.children, premises)):
        fail, status = _check(child, premise, rs, budget, path + (i,))
        if fail is not None:
            return fail, status
    return None, "ok"


def check(proof, goal, rs, budget=DEFAULT_BUDGET) -> CheckReport:
    """Check an annotated derivation of `goal` against the calculus."""
    failure, status = _check(proof, goal, rs, budget, ())
    return CheckReport(status, proof_size(proof), failure)


# ---------------------------------------------------------------------------
# Proof text format
#
#   (RULE (principal SIDE INDEX)? (witness (KEY VALUE)...)? CHILD...)
#
# Witness keys: formula (cut formula), reduct-b, reduct-c, bind (NAME SORT),
# body, term, insert.


def print_proof(node):
    out = SList([SAtom(node.rule)])
    if node.side is not None:
        out.append(SList([SAtom("principal"), SAtom(node.side), SAtom(str(node.index))]))
    wit = SList([SAtom("witness")])
    if node.a is not None:
        wit.append(SList([SAtom("formula"), S.print_prop(node.a)]))
    if node.b is not None:
        wit.append(SList([SAtom("reduct-b"), S.print_prop(node.b)]))
    if node.c is not None:
        wit.append(SList([SAtom("reduct-c"), S.print_prop(node.c)]))
    if node.var is not None:
        wit.append(SList([SAtom("bind"), SAtom(node.var), S.print_sort(node.var_sort)]))
    if node.body is not None:
        wit.append(SList([SAtom("body"), S.print_prop(node.body)]))
    if node.term is not None:
        wit.append(SList([SAtom("term"), S.print_term(node.term)]))
    if node.at is not None:
        wit.append(SList([SAtom("insert"), SAtom(str(node.at))]))
    if len(wit) > 1:
        out.append(wit)
    for child in node.children:
        out.append(print_proof(child))
    return out


def proof_text(node) -> str:
    return dumps(print_proof(node), pretty=True)


def parse_proof(node, sig, ctx):
    """Parse a proof tree; `ctx` gives sorts of the goal's free variables.

    Eigenvariables and rule-introduced binders extend the context for
    the subtrees below the node that introduces them.
    """
    if isinstance(node, str) and not isinstance(node, (SAtom, SList)):
        node = loads_one(node)
    if not (isinstance(node, SList) and node and isinstance(node[0], SAtom)):
        raise error_at("expected a proof node", node)
    rule = str(node[0])
    if rule not in RULES:
        raise error_at(f"unknown rule {rule!r}", node[0])
    fields = {"rule": rule}
    rest = list(node[1:])
    if rest and isinstance(rest[0], SList) and rest[0] and rest[0][0] == "principal":
        blk = rest.pop(0)
        if len(blk) != 3 or str(blk[1]) not in (LEFT, RIGHT):
            raise error_at("malformed (principal SIDE INDEX)", blk)
        fields["side"] = str(blk[1])
        try:
            fields["index"] = int(str(blk[2]))
        except ValueError:
            raise error_at("principal index must be an integer", blk[2])
    inner_ctx = dict(ctx)
    body_node = None
    if rest and isinstance(rest[0], SList) and rest[0] and rest[0][0] == "witness":
        blk = rest.pop(0)
        for entry in blk[1:]:
            if not (isinstance(entry, SList) and len(entry) >= 2 and isinstance(entry[0], SAtom)):
                raise error_at("malformed witness entry", entry)
            key = str(entry[0])
            if key == "formula":
                fields["a"] = S.parse_prop(entry[1], sig, ctx)
            elif key == "reduct-b":
                fields["b"] = S.parse_prop(entry[1], sig, ctx)
            elif key == "reduct-c":
                fields["c"] = S.parse_prop(entry[1], sig, ctx)
            elif key == "bind":
                if len(entry) != 3:
                    raise error_at("bind expects a name and a sort", entry)
                fields["var"] = str(entry[1])
                fields["var_sort"] = S.parse_sort(entry[2], sig.base_sorts)
                inner_ctx[fields["var"]] = fields["var_sort"]
            elif key == "body":
                body_node = entry[1]  # parsed after bind is known
            elif key == "term":
                fields["term"] = S.parse_term(entry[1], sig, ctx)
            elif key == "insert":
                fields["at"] = int(str(entry[1]))
            else:
                raise error_at(f"unknown witness key {key!r}", entry)
    if body_node is not None:
        fields["body"] = S.parse_prop(body_node, sig, inner_ctx)
    child_ctx = inner_ctx if rule in ("all-right", "ex-left") else dict(ctx)
    fields["children"] = tuple(parse_proof(c, sig, child_ctx) for c in rest)
    return ProofNode(**fields)
