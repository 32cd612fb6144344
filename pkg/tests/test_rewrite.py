import random

import pytest

from polardm import syntax as S
from polardm.rewrite import (
    FuelExhausted,
    ReachabilityBudget,
    atomic_reach,
    canonize,
    e_equal,
    e_normalize,
    head_exposures,
    one_step,
    reaches,
)
from polardm.theory import NEG, POS

from conftest import pp, pt, random_prop


def keys(props):
    return {S.alpha_key(p) for p in props}


# ---------------------------------------------------------------------------
# Equational normalization


K_INSTANCES = (
    ("((kc i i) n m)", "n"),
    ("((kc i o) n v)", "n"),
    ("((kc (i -> i) o) succ v)", "succ"),
)

S_INSTANCES = (
    # (S x y z) = (x z (y z)) needs x : T -> U -> V, y : T -> U, z : T
    ("((sc i i i) ((kc (i -> i) i) succ) ((kc i i) zero) zero)", "(succ zero)"),
    ("((sc i (i -> i) i) (kc i (i -> i)) (kc i i) m)", "m"),
    ("((sc i i o) ((kc (i -> o) i) null) ((kc i i) zero) n)", "(null zero)"),
)

PRED_INSTANCES = (
    ("(pred (succ zero))", "zero"),
    ("(pred (succ (succ m)))", "(succ m)"),
    ("(pred (succ (pred (succ n))))", "n"),
)


@pytest.mark.parametrize("text,want", K_INSTANCES + S_INSTANCES + PRED_INSTANCES)
def test_e_normalize_equation_instances(hol, text, want):
    assert e_normalize(pt(text, hol.sig), hol) == pt(want, hol.sig)


def test_skk_identity_by_manual_steps(hol):
    sig = hol.sig
    t = pt("n", sig)
    skk_t = pt("((sc i (i -> i) i) (kc i (i -> i)) (kc i i) n)", sig)
    # one combinator-composition step by hand: (S K K t) = (K t (K t))
    k1 = S.const(sig, "kc", (S.IOTA, S.arrow(S.IOTA, S.IOTA)))
    k2 = S.const(sig, "kc", (S.IOTA, S.IOTA))
    mid = S.applies(k1, t, S.apply1(k2, t))
    # and one projection step: (K t (K t)) = t
    assert e_normalize(mid, hol) == t
    assert e_normalize(skk_t, hol) == t


def test_e_equal(hol):
    assert e_equal(pt("((kc o o) v w)", hol.sig), pt("v", hol.sig), hol)
    assert e_equal(pt("n", hol.sig), pt("n", hol.sig), hol)
    assert not e_equal(pt("zero", hol.sig), pt("(succ zero)", hol.sig), hol)


def test_e_normalize_idempotent(holpm):
    rng = random.Random(11)
    from conftest import random_term

    for _ in range(100):
        t = random_term(rng, holpm.sig, S.OMICRON, 4)
        n1 = e_normalize(t, holpm)
        assert e_normalize(n1, holpm) == n1


def test_fuel_exhaustion_is_reported(hol):
    deep = "zero"
    for _ in range(40):
        deep = f"(pred (succ {deep}))"
    with pytest.raises(FuelExhausted):
        e_normalize(pt(deep, hol.sig), hol, ReachabilityBudget(fuel=3))


# ---------------------------------------------------------------------------
# One-step rewriting


def test_one_step_or_negative(holpm):
    p = pp("(eps (dor v w))", holpm.sig)
    assert keys(one_step(p, NEG, holpm)) == keys([pp("(or (eps v) (eps w))", holpm.sig)])


def test_one_step_or_positive(holpm):
    p = pp("(eps (dor v w))", holpm.sig)
    got = keys(one_step(p, POS, holpm))
    assert keys([pp("(not (not (eps v)))", holpm.sig)]) <= got
    assert keys([pp("(not (not (eps w)))", holpm.sig)]) <= got


def test_one_step_flips_under_negation(holpm):
    p = pp("(not (eps (dor v w)))", holpm.sig)
    got = keys(one_step(p, NEG, holpm))
    assert keys([pp("(not (not (not (eps v))))", holpm.sig)]) <= got
    assert keys([pp("(not (not (not (eps w))))", holpm.sig)]) <= got


def test_one_step_includes_canonical_form(hol):
    p = pp("(eps ((kc o o) v w))", hol.sig)
    got = one_step(p, NEG, hol)
    assert pp("(eps v)", hol.sig) in got


def test_polarity_flip_property(holpm):
    rng = random.Random(12)
    for _ in range(60):
        p = random_prop(rng, holpm.sig, 2)
        pos = keys(one_step(p, POS, holpm))
        neg_wrapped = keys(q.body for q in one_step(S.Not(p), NEG, holpm))
        assert pos == neg_wrapped


def test_canonical_step_polarity_independent(holpm):
    rng = random.Random(13)
    for _ in range(60):
        p = random_prop(rng, holpm.sig, 2)
        assert canonize(p, holpm) == canonize(p, holpm)
        pc = canonize(p, holpm)
        in_neg = pc in one_step(p, NEG, holpm)
        in_pos = pc in one_step(p, POS, holpm)
        assert in_neg == in_pos


# ---------------------------------------------------------------------------
# Reachability


def test_reaches_all_rule(hol):
    a = pp("(eps ((dall i) x))", hol.sig)
    b = pp("(all y i (eps (x y)))", hol.sig)
    assert reaches(a, b, NEG, hol)


def test_reaches_reflexive(holpm):
    p = pp("(eps (dor v w))", holpm.sig)
    assert reaches(p, p, NEG, holpm)
    assert reaches(p, p, POS, holpm)


def test_positive_or_never_bare_disjunction(holpm):
    a = pp("(eps (dor v w))", holpm.sig)
    b = pp("(or (eps v) (eps w))", holpm.sig)
    assert not reaches(a, b, POS, holpm)
    assert reaches(a, b, NEG, holpm)


def test_atomic_reach(hol):
    e = pp("(eps v)", hol.sig)
    assert atomic_reach(e, e, hol)
    assert atomic_reach(pp("(eps ((kc o o) v w))", hol.sig), e, hol)
    disj = pp("(or (eps v) (eps w))", hol.sig)
    assert not atomic_reach(disj, disj, hol)


def test_head_exposures(holpm):
    p = pp("(eps ((kc o o) (dor v w) v))", holpm.sig)
    # the head is exposed after equational collapse
    exposed = head_exposures(p, NEG, holpm)
    assert keys(exposed) == keys([pp("(or (eps v) (eps w))", holpm.sig)])
    assert head_exposures(pp("(or (eps v) (eps w))", holpm.sig), NEG, holpm) == []


# ---------------------------------------------------------------------------
# Brute-force oracle agreement (small scale; the acceptance suite runs 200)


def closure_levels(p, pol, rs, levels):
    seen = {}
    start = canonize(p, rs)
    seen[S.alpha_key(start)] = start
    frontier = [start]
    for _ in range(levels):
        new = []
        for q in frontier:
            for r in one_step(q, pol, rs):
                rc = canonize(r, rs)
                k = S.alpha_key(rc)
                if k not in seen:
                    seen[k] = rc
                    new.append(rc)
        frontier = new
    return seen, frontier


def test_reaches_agrees_with_bruteforce(holpm):
    rng = random.Random(14)
    checked = 0
    for _ in range(40):
        p = random_prop(rng, holpm.sig, 2, term_depth=3)
        for pol in (NEG, POS):
            seen, frontier = closure_levels(p, pol, holpm, 4)
            for q in seen.values():
                assert reaches(p, q, pol, holpm)
            if not frontier:  # closure is saturated: negatives are definite
                for q in list(seen.values())[:5]:
                    mutant = S.Not(q)
                    expect = S.alpha_key(canonize(mutant, holpm)) in seen
                    assert reaches(p, mutant, pol, holpm) == expect
            checked += 1
    assert checked == 80
