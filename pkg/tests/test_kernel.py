import pytest

from polardm import syntax as S
from polardm.kernel import (
    ProofNode,
    check,
    is_cut_free,
    parse_proof,
    premises_of,
    proof_size,
    proof_text,
    InvalidNode,
)
from polardm.rewrite import ReachabilityBudget
from polardm.sexp import loads_one

from conftest import load_golden, pp, ps


def test_axiom_accepts_reflexive(holpm):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", holpm.sig)
    report = check(ProofNode("axiom"), goal, holpm)
    assert report.ok and report.size == 1


def test_golden_cut_proof(holpm, golden_dir):
    import os

    with open(os.path.join(golden_dir, "cutgoal.sexp"), encoding="utf-8") as fh:
        goal, ctx = S.parse_sequent(loads_one(fh.read()), holpm.sig, {})
    with open(os.path.join(golden_dir, "cutproof.sexp"), encoding="utf-8") as fh:
        proof = parse_proof(loads_one(fh.read()), holpm.sig, ctx)
    report = check(proof, goal, holpm)
    assert report.ok
    assert report.size == 9
    assert not is_cut_free(proof)


def test_or_right_positive_reachability_rejected(holpm):
    # claiming the bare disjunction as a positive reduct must fail here
    goal, _ = ps("(seq (vars (v o) (w o)) () ((eps (dor v w))))", holpm.sig)
    node = ProofNode(
        "or-right", side="right", index=0,
        b=pp("(eps v)", holpm.sig), c=pp("(eps w)", holpm.sig),
        children=(ProofNode("axiom"),),
    )
    report = check(node, goal, holpm)
    assert report.status == "invalid"
    assert report.failure.rule == "or-right"
    assert "does not rewrite" in report.failure.reason


def test_positional_integrity(hol):
    # a proof for (A B |- A) must not check after permuting the left side
    goal, _ = ps("(seq (vars (v o) (w o)) ((eps v) (eps w)) ((eps v)))", hol.sig)
    proof = ProofNode("weak-left", side="left", index=1, children=(ProofNode("axiom"),))
    assert check(proof, goal, hol).ok
    permuted = S.Sequent((goal.left[1], goal.left[0]), goal.right)
    assert check(proof, permuted, hol).status == "invalid"


def test_arity_mismatch_rejected(hol):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", hol.sig)
    bad = ProofNode("weak-left", side="left", index=0)
    report = check(bad, goal, hol)
    assert report.status == "invalid"
    assert "premises" in report.failure.reason


def test_index_out_of_range(hol):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", hol.sig)
    bad = ProofNode("weak-left", side="left", index=3, children=(ProofNode("axiom"),))
    assert check(bad, goal, hol).status == "invalid"


def test_eigenvariable_condition(hol):
    goal, _ = ps("(seq (vars (f (i -> o)) (z i)) ((eps (f z))) ((all y i (eps (f y)))))", hol.sig)
    body = pp("(eps (f z))", hol.sig, {"f": S.arrow(S.IOTA, S.OMICRON), "z": S.IOTA})
    bad = ProofNode(
        "all-right", side="right", index=0, var="z", var_sort=S.IOTA, body=body,
        children=(ProofNode("axiom"),),
    )
    report = check(bad, goal, hol)
    assert report.status == "invalid"
    assert "eigenvariable" in report.failure.reason


def test_witness_sort_mismatch(hol):
    goal, _ = ps("(seq (vars (f (i -> o))) ((eps ((dall i) f))) ((eps (f zero))))", hol.sig)
    body = pp("(eps (f y))", hol.sig, {"f": S.arrow(S.IOTA, S.OMICRON), "y": S.IOTA})
    bad = ProofNode(
        "all-left", side="left", index=0, var="y", var_sort=S.IOTA, body=body,
        term=S.Var("v", S.OMICRON),
        children=(ProofNode("axiom"),),
    )
    report = check(bad, goal, hol)
    assert report.status == "invalid"
    assert "sort" in report.failure.reason


def test_undecided_on_fuel_exhaustion_never_ok(hol):
    goal, _ = ps(
        "(seq ((eps (null (succ (pred (succ zero)))))) ())", hol.sig
    )
    proof = ProofNode("bot-left", side="left", index=0)
    report = check(proof, goal, hol, ReachabilityBudget(fuel=1))
    assert report.status == "undecided"
    assert not report.ok


def test_fuel_monotonicity_on_corpus(hol, golden_dir):
    from polardm.report import corpus_pairs

    for name in corpus_pairs(golden_dir):
        goal, ctx, proof = load_golden(name, hol.sig, golden_dir)
        assert check(proof, goal, hol, ReachabilityBudget(10000)).ok
        assert check(proof, goal, hol, ReachabilityBudget(20000)).ok


def test_weakening_adds_one_node(hol):
    goal, _ = ps("(seq (vars (v o) (w o)) ((eps w) (eps v)) ((eps v)))", hol.sig)
    inner = ProofNode("axiom")
    proof = ProofNode("weak-left", side="left", index=0, children=(inner,))
    assert proof_size(proof) == proof_size(inner) + 1
    assert check(proof, goal, hol).ok


def test_cut_premises_shape(holpm):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", holpm.sig)
    a = pp("(eps v)", holpm.sig)
    node = ProofNode("cut", a=a)
    premises = premises_of(node, goal, holpm)
    assert premises[0].left == goal.left + (a,)
    assert premises[1].right == (a,) + goal.right


def test_proof_text_roundtrip_on_corpus(hol, golden_dir):
    from polardm.report import corpus_pairs

    for name in corpus_pairs(golden_dir):
        goal, ctx, proof = load_golden(name, hol.sig, golden_dir)
        back = parse_proof(loads_one(proof_text(proof)), hol.sig, ctx)
        assert back == proof


def test_unknown_rule_rejected(hol):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", hol.sig)
    with pytest.raises(InvalidNode):
        premises_of(ProofNode("mystery"), goal, hol)
