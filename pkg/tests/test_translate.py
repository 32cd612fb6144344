import pytest

from polardm import syntax as S
from polardm.kernel import ProofNode, check, is_cut_free, parse_proof, proof_size
from polardm.sexp import loads_one
from polardm.translate import (
    PullbackError,
    TranslateError,
    hol_to_holpm,
    pullback,
    substitute_in_proof,
)

from conftest import load_golden, pp, ps, pt


# ---------------------------------------------------------------------------
# pullback


def test_pullback_reflexive(hol):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", hol.sig)
    out = pullback(ProofNode("axiom"), goal, goal, hol)
    assert check(out, goal, hol).ok
    assert proof_size(out) == 1


def test_pullback_e_step(hol):
    frm, _ = ps("(seq (vars (v o) (w o)) ((eps ((kc o o) v w))) ((eps v)))", hol.sig)
    to, _ = ps("(seq (vars (v o) (w o)) ((eps v)) ((eps v)))", hol.sig)
    out = pullback(ProofNode("axiom"), frm, to, hol)
    assert check(out, frm, hol).ok
    assert proof_size(out) == 1


def test_pullback_or_right_case(hol):
    frm, _ = ps("(seq (vars (v o)) () ((eps (dor v (dnot v)))))", hol.sig)
    to, ctx = ps("(seq (vars (v o)) () ((or (eps v) (eps (dnot v)))))", hol.sig)
    proof = parse_proof(
        loads_one(
            """
            (or-right (principal right 0)
              (neg-right (principal right 1) (witness (reduct-b (eps v)))
                (axiom)))"""
        ),
        hol.sig,
        ctx,
    )
    assert check(proof, to, hol).ok
    out = pullback(proof, frm, to, hol)
    assert check(out, frm, hol).ok
    assert proof_size(out) == proof_size(proof)


def test_pullback_renames_clashing_eigenvariable(hol):
    to, ctx = ps(
        "(seq (vars (v o)) ((eps v)) ((all z i (eps (dnot (null (succ z)))))))", hol.sig
    )
    proof = parse_proof(
        loads_one(
            """
            (all-right (principal right 0)
                       (witness (bind z i) (body (eps (dnot (null (succ z))))))
              (neg-right (principal right 0) (witness (reduct-b (eps (null (succ z)))))
                (weak-left (principal left 0)
                  (bot-left (principal left 0)))))"""
        ),
        hol.sig,
        ctx,
    )
    assert check(proof, to, hol).ok
    frm, _ = ps(
        "(seq (vars (v o) (z i)) ((eps ((kc o i) v z))) ((all z i (eps (dnot (null (succ z)))))))",
        hol.sig,
    )
    out = pullback(proof, frm, to, hol)
    assert check(out, frm, hol).ok
    assert proof_size(out) == proof_size(proof)
    assert out.var != "z"


def test_pullback_rejects_unrelated_sequents(hol):
    frm, _ = ps("(seq (vars (v o) (w o)) ((eps w)) ((eps v)))", hol.sig)
    to, _ = ps("(seq (vars (v o) (w o)) ((eps v)) ((eps v)))", hol.sig)
    with pytest.raises(PullbackError):
        pullback(ProofNode("axiom"), frm, to, hol)


# ---------------------------------------------------------------------------
# substitution in proofs


def test_substitute_in_proof_identity(hol):
    goal, ctx = ps("(seq (vars (f (i -> o)) (x i)) ((eps (f x))) ((eps (f x))))", hol.sig)
    proof = ProofNode("axiom")
    out = substitute_in_proof(proof, S.Var("x", S.IOTA), S.Var("x", S.IOTA))
    assert out == proof
    assert check(out, goal, hol).ok


def test_substitute_in_proof_choice_term(holpm):
    # a proof using eps(f x), with x free, specialized at x := H(f)
    goal, ctx = ps(
        "(seq (vars (f (i -> o)) (x i) (w o)) ((eps (f x))) ((eps (f x)) (eps w)))",
        holpm.sig,
    )
    proof = parse_proof(
        loads_one(
            """
            (weak-right (principal right 1)
              (axiom))"""
        ),
        holpm.sig,
        ctx,
    )
    assert check(proof, goal, holpm).ok
    h_f = S.app(holpm.sig, "H", (S.IOTA,), (S.Var("f", S.arrow(S.IOTA, S.OMICRON)),))
    out = substitute_in_proof(proof, S.Var("x", S.IOTA), h_f)
    new_goal = S.Sequent(
        tuple(S.subst(p, {"x": h_f}) for p in goal.left),
        tuple(S.subst(p, {"x": h_f}) for p in goal.right),
    )
    report = check(out, new_goal, holpm)
    assert report.ok
    assert S.contains_fun(new_goal, "H")
    assert proof_size(out) == proof_size(proof)


def test_substitute_in_proof_renames_clashing_eigen(hol):
    goal, ctx = ps(
        "(seq (vars (x i)) ((eps (null x))) ((all z i (eps ((kc o i) (null x) z)))))",
        hol.sig,
    )
    proof = parse_proof(
        loads_one(
            """
            (all-right (principal right 0)
                       (witness (bind z i) (body (eps ((kc o i) (null x) z))))
              (axiom))"""
        ),
        hol.sig,
        ctx,
    )
    assert check(proof, goal, hol).ok
    # substituting x := (succ z) collides with the eigenvariable z
    out = substitute_in_proof(proof, S.Var("x", S.IOTA), pt("(succ z)", hol.sig, {"x": S.IOTA, "z": S.IOTA}))
    new_goal = S.Sequent(
        tuple(S.subst(p, {"x": pt("(succ z)", hol.sig, {"x": S.IOTA, "z": S.IOTA})}) for p in goal.left),
        tuple(S.subst(p, {"x": pt("(succ z)", hol.sig, {"x": S.IOTA, "z": S.IOTA})}) for p in goal.right),
    )
    report = check(out, new_goal, hol)
    assert report.ok
    assert out.var != "z"


# ---------------------------------------------------------------------------
# the translation


def test_translation_over_corpus(hol, holpm, golden_dir):
    from polardm.report import corpus_pairs

    names = corpus_pairs(golden_dir)
    assert len(names) >= 10
    seen_cases = set()
    for name in names:
        goal, ctx, proof = load_golden(name, hol.sig, golden_dir)
        out, trace = hol_to_holpm(proof, goal)
        seen_cases |= set(trace.cases)
        report = check(out, goal, holpm)
        assert report.ok, (name, report.failure)
        assert is_cut_free(out), name
        assert not S.contains_fun(goal, "H")
        assert trace.input_size == proof_size(proof)
        assert trace.output_size == proof_size(out)
    assert {"direct", "pullback", "or-right-gadget", "all-right-gadget",
            "top-right-gadget"} <= seen_cases


def test_translation_rejects_cut(holpm, hol):
    goal, _ = ps("(seq (vars (v o)) ((eps v)) ((eps v)))", hol.sig)
    a = pp("(eps v)", hol.sig)
    proof = ProofNode(
        "cut", a=a,
        children=(
            ProofNode("weak-left", side="left", index=1, children=(ProofNode("axiom"),)),
            ProofNode("weak-right", side="right", index=0, children=(ProofNode("axiom"),)),
        ),
    )
    assert check(proof, goal, hol).ok
    with pytest.raises(TranslateError):
        hol_to_holpm(proof, goal)


def test_translation_rejects_choice_in_goal(hol, holpm):
    goal, ctx = ps("(seq (vars (x (i -> o))) ((eps (x (H i x)))) ((eps (x (H i x)))))", holpm.sig)
    with pytest.raises(TranslateError):
        hol_to_holpm(ProofNode("axiom"), goal)


def test_translation_rejects_invalid_proof(hol):
    goal, _ = ps("(seq (vars (v o) (w o)) ((eps v)) ((eps w)))", hol.sig)
    with pytest.raises(TranslateError):
        hol_to_holpm(ProofNode("axiom"), goal)


def test_top_gadget_in_isolation(hol, holpm):
    goal, _ = ps("(seq () ((eps (null zero))))", hol.sig)
    proof = ProofNode("top-right", side="right", index=0)
    out, trace = hol_to_holpm(proof, goal)
    assert trace.cases == {"top-right-gadget": 1}
    assert out.rule == "neg-right" and out.children[0].rule == "bot-left"
    assert check(out, goal, holpm).ok


def test_pullback_preserves_size_across_corpus_instances(hol):
    # sequent-rewriting instances: each goal pulled back from a one-step
    # predecessor, proof size must be exactly preserved
    cases = [
        (
            "(seq (vars (v o)) () ((eps (dor v (dnot v)))))",
            "(seq (vars (v o)) () ((or (eps v) (eps (dnot v)))))",
            """
            (or-right (principal right 0)
              (neg-right (principal right 1) (witness (reduct-b (eps v)))
                (axiom)))""",
        ),
        (
            "(seq (vars (v o) (w o)) ((eps ((kc o o) v w))) ((eps v)))",
            "(seq (vars (v o) (w o)) ((eps v)) ((eps v)))",
            "(axiom)",
        ),
    ]
    for frm_text, to_text, proof_text in cases:
        frm, _ = ps(frm_text, hol.sig)
        to, ctx = ps(to_text, hol.sig)
        proof = parse_proof(loads_one(proof_text), hol.sig, ctx)
        assert check(proof, to, hol).ok
        out = pullback(proof, frm, to, hol)
        assert check(out, frm, hol).ok
        assert proof_size(out) == proof_size(proof)
