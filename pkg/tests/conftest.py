import os

import pytest

from polardm import syntax as S
from polardm.sexp import loads_one
from polardm.theory import build_hol, build_holpm

GOLDEN = os.path.join(os.path.dirname(__file__), os.pardir, "golden")


@pytest.fixture(scope="session")
def hol():
    return build_hol()


@pytest.fixture(scope="session")
def holpm():
    return build_holpm()


@pytest.fixture(scope="session")
def golden_dir():
    return os.path.abspath(GOLDEN)


# shared variable context for hand-written test inputs
CTX = {
    "v": S.OMICRON,
    "w": S.OMICRON,
    "n": S.IOTA,
    "m": S.IOTA,
    "f": S.arrow(S.IOTA, S.OMICRON),
    "g": S.arrow(S.OMICRON, S.OMICRON),
    "x": S.arrow(S.IOTA, S.OMICRON),
}


def pt(text, sig, ctx=None):
    return S.parse_term(loads_one(text), sig, dict(CTX if ctx is None else ctx))


def pp(text, sig, ctx=None):
    return S.parse_prop(loads_one(text), sig, dict(CTX if ctx is None else ctx))


def ps(text, sig, ctx=None):
    seq, out_ctx = S.parse_sequent(loads_one(text), sig, dict(ctx or {}))
    return seq, out_ctx


def load_golden(name, sig, golden=GOLDEN):
    with open(os.path.join(golden, name + ".goal.sexp"), encoding="utf-8") as fh:
        goal, ctx = S.parse_sequent(loads_one(fh.read()), sig, {})
    from polardm.kernel import parse_proof

    with open(os.path.join(golden, name + ".proof.sexp"), encoding="utf-8") as fh:
        proof = parse_proof(loads_one(fh.read()), sig, ctx)
    return goal, ctx, proof


# ---------------------------------------------------------------------------
# Seeded random generators for property-style tests


def random_term(rng, sig, sort, depth):
    leaves = {
        S.OMICRON: ["v", "w"],
        S.IOTA: ["n", "m", "zero"],
        S.arrow(S.IOTA, S.OMICRON): ["f", "null"],
        S.arrow(S.OMICRON, S.OMICRON): ["g", "dnot"],
    }

    def leaf(s):
        name = rng.choice(leaves[s])
        if name in CTX:
            return S.Var(name, CTX[name])
        return S.const(sig, name)

    if depth <= 0 or rng.random() < 0.25:
        return leaf(sort)
    o, i = S.OMICRON, S.IOTA
    if sort == o:
        k = rng.randrange(5)
        if k == 0:
            return S.apply1(S.const(sig, "dnot"), random_term(rng, sig, o, depth - 1))
        if k == 1:
            return S.applies(
                S.const(sig, "dor"),
                random_term(rng, sig, o, depth - 1),
                random_term(rng, sig, o, depth - 1),
            )
        if k == 2:
            return S.apply1(S.const(sig, "null"), random_term(rng, sig, i, depth - 1))
        if k == 3:
            return S.applies(
                S.const(sig, "kc", (o, o)),
                random_term(rng, sig, o, depth - 1),
                random_term(rng, sig, o, depth - 1),
            )
        return S.apply1(
            S.const(sig, "dall", (i,)),
            random_term(rng, sig, S.arrow(i, o), depth - 1),
        )
    if sort == i:
        k = rng.randrange(4)
        if k == 0:
            return S.apply1(S.const(sig, "succ"), random_term(rng, sig, i, depth - 1))
        if k == 1:
            return S.apply1(S.const(sig, "pred"), random_term(rng, sig, i, depth - 1))
        if k == 2:
            return S.applies(
                S.const(sig, "kc", (i, i)),
                random_term(rng, sig, i, depth - 1),
                random_term(rng, sig, i, depth - 1),
            )
        return leaf(i)
    if sort == S.arrow(i, o):
        if rng.random() < 0.5:
            return S.applies(
                S.const(sig, "kc", (S.arrow(i, o), o)),
                random_term(rng, sig, S.arrow(i, o), depth - 1),
                random_term(rng, sig, o, depth - 1),
            )
        return leaf(sort)
    return leaf(sort)


def random_prop(rng, sig, depth, term_depth=4, bound=0):
    if depth <= 0:
        k = rng.randrange(8)
        if k == 0:
            return S.TOP
        if k == 1:
            return S.BOT
        return S.Atom("eps", (random_term(rng, sig, S.OMICRON, term_depth),))
    k = rng.randrange(7)
    if k == 0:
        return S.Not(random_prop(rng, sig, depth - 1, term_depth, bound))
    if k in (1, 2, 3):
        cls = (S.And, S.Or, S.Implies)[k - 1]
        return cls(
            random_prop(rng, sig, depth - 1, term_depth, bound),
            random_prop(rng, sig, depth - 1, term_depth, bound),
        )
    if k == 4:
        var = f"q{bound}"
        sort = rng.choice((S.IOTA, S.OMICRON))
        return S.Forall(var, sort, random_prop(rng, sig, depth - 1, term_depth, bound + 1))
    if k == 5:
        var = f"q{bound}"
        sort = rng.choice((S.IOTA, S.OMICRON))
        return S.Exists(var, sort, random_prop(rng, sig, depth - 1, term_depth, bound + 1))
    return S.Atom("eps", (random_term(rng, sig, S.OMICRON, term_depth),))
