import os

import pytest

from polardm import syntax as S
from polardm.kernel import check, is_cut_free, proof_size
from polardm.search import default_cut_candidates, prove_cutfree
from polardm.sexp import loads_one

from conftest import pp, ps


def load_counterexample(holpm, golden_dir):
    with open(os.path.join(golden_dir, "cutgoal.sexp"), encoding="utf-8") as fh:
        goal, ctx = S.parse_sequent(loads_one(fh.read()), holpm.sig, {})
    return goal


def test_trivial_axiom_at_depth_one(holpm):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", holpm.sig)
    result = prove_cutfree(goal, holpm, max_depth=1)
    assert result.outcome == "proved"
    assert proof_size(result.proof) == 1


def test_counterexample_exhausted_without_cut(holpm, golden_dir):
    goal = load_counterexample(holpm, golden_dir)
    result = prove_cutfree(goal, holpm, max_depth=8)
    assert result.outcome == "exhausted"


def test_counterexample_proved_with_cut(holpm, golden_dir):
    goal = load_counterexample(holpm, golden_dir)
    result = prove_cutfree(goal, holpm, max_depth=8, allow_cut=True)
    assert result.outcome == "proved"
    assert not is_cut_free(result.proof)
    assert check(result.proof, goal, holpm).ok


def test_cut_candidates_contain_the_quantifier_head(holpm, golden_dir):
    goal = load_counterexample(holpm, golden_dir)
    cands = default_cut_candidates(goal, holpm)
    want = pp("(eps ((dall i) x))", holpm.sig, {"x": S.arrow(S.IOTA, S.OMICRON)})
    assert any(S.alpha_eq(c, want) for c in cands)


def test_monotone_in_depth(hol):
    goal, _ = ps("(seq (vars (v o)) () ((eps (dor v (dnot v)))))", hol.sig)
    depths = {}
    for d in (1, 2, 3, 4, 5, 6):
        depths[d] = prove_cutfree(goal, hol, max_depth=d).outcome
    first = min(d for d, out in depths.items() if out == "proved")
    assert all(depths[d] == "proved" for d in depths if d >= first)
    assert all(depths[d] == "exhausted" for d in depths if d < first)


def test_unprovable_goals_exhaust(hol, holpm):
    for rs in (hol, holpm):
        goal, _ = ps("(seq (vars (v o)) () ((eps v)))", rs.sig)
        assert prove_cutfree(goal, rs, max_depth=6).outcome == "exhausted"
        goal2, _ = ps("(seq (vars (v o) (w o)) ((eps v)) ((eps w)))", rs.sig)
        assert prove_cutfree(goal2, rs, max_depth=6).outcome == "exhausted"


def test_existential_witness_from_constants(hol):
    goal, _ = ps("(seq () ((ex y i (eps (null y)))))", hol.sig)
    result = prove_cutfree(goal, hol, max_depth=4)
    assert result.outcome == "proved"


def test_found_proofs_always_check(hol, holpm, golden_dir):
    from polardm.report import corpus_pairs

    for name in corpus_pairs(golden_dir)[:6]:
        with open(os.path.join(golden_dir, name + ".goal.sexp"), encoding="utf-8") as fh:
            goal, _ = S.parse_sequent(loads_one(fh.read()), hol.sig, {})
        result = prove_cutfree(goal, hol, max_depth=8)
        if result.outcome == "proved":
            assert check(result.proof, goal, hol).ok
            assert is_cut_free(result.proof)


def test_statistics_are_populated(holpm):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", holpm.sig)
    result = prove_cutfree(goal, holpm, max_depth=3)
    assert result.nodes >= 1
    assert result.max_depth >= 0


def test_bad_depth_rejected(holpm):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", holpm.sig)
    with pytest.raises(ValueError):
        prove_cutfree(goal, holpm, max_depth=0)
