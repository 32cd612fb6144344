import pytest

from polardm import syntax as S
from polardm.axioms import (
    TAG_EQUALITY,
    TAG_EQUATION,
    TAG_NEG,
    TAG_POS,
    UniverseError,
    compile_axioms,
    conjecture_prop,
    default_universe,
    export_tff,
    parse_tff,
    _fname,
)
from polardm.search import prove_cutfree
from polardm.theory import RewriteSystem

from conftest import pp, ps

O, I = S.OMICRON, S.IOTA
DOR_UNIVERSE = (O, S.arrow(O, O), S.arrow(O, O, O))
FULL_UNIVERSE = (
    I, O, S.arrow(I, I), S.arrow(I, O), S.arrow(O, O), S.arrow(O, O, O),
    S.arrow(S.arrow(O, O), O),
)


def test_holpm_disjunction_axioms_exact(holpm):
    ax = compile_axioms(holpm, DOR_UNIVERSE)
    want_left = pp(
        "(all x o (all y o (imp (not (not (eps x))) (eps (dor x y)))))", ax.sig, {}
    )
    want_right = pp(
        "(all x o (all y o (imp (not (not (eps y))) (eps (dor x y)))))", ax.sig, {}
    )
    dor_pos = [a.prop for a in ax.tagged(TAG_POS) if "or" in a.name]
    assert len(dor_pos) == 2
    assert any(S.alpha_eq(p, want_left) for p in dor_pos)
    assert any(S.alpha_eq(p, want_right) for p in dor_pos)


def test_hol_disjunction_axiom_exact(hol):
    ax = compile_axioms(hol, DOR_UNIVERSE)
    want = pp(
        "(all x o (all y o (imp (or (eps x) (eps y)) (eps (dor x y)))))", ax.sig, {}
    )
    dor_pos = [a.prop for a in ax.tagged(TAG_POS) if "or" in a.name]
    assert len(dor_pos) == 1
    assert S.alpha_eq(dor_pos[0], want)


def test_empty_system_only_equality_axioms():
    sig = S.Signature(frozenset({"i"}), {}, {}, {})
    empty = RewriteSystem("empty", sig, (), (), ())
    ax = compile_axioms(empty, (I,))
    assert ax.tagged(TAG_EQUATION) == ()
    assert ax.tagged(TAG_NEG) == () and ax.tagged(TAG_POS) == ()
    names = [a.name for a in ax.axioms]
    assert "eq-refl@i" in names
    assert any(n.startswith("eq-cong-eq") for n in names)  # eq is itself a predicate


def test_axioms_are_closed(hol, holpm):
    for rs in (hol, holpm):
        for a in compile_axioms(rs, FULL_UNIVERSE).axioms:
            assert not S.free_vars(a.prop), a.name


def test_rule_axiom_counts_match_admissible_instances(hol, holpm):
    ax = compile_axioms(hol, FULL_UNIVERSE)
    # every rule has exactly one admissible instantiation at this universe
    assert len(ax.tagged(TAG_NEG)) == len(hol.neg_rules)
    assert len(ax.tagged(TAG_POS)) == len(hol.pos_rules)
    ax2 = compile_axioms(holpm, FULL_UNIVERSE)
    assert len(ax2.tagged(TAG_NEG)) == len(holpm.neg_rules)
    assert len(ax2.tagged(TAG_POS)) == len(holpm.pos_rules)


def test_orientation_matches_polarity(holpm):
    ax = compile_axioms(holpm, FULL_UNIVERSE)
    for a in ax.tagged(TAG_NEG):
        body = a.prop
        while isinstance(body, S.Forall):
            body = body.body
        assert isinstance(body, S.Implies) and isinstance(body.left, S.Atom)
        assert body.left.pred == "eps"
    for a in ax.tagged(TAG_POS):
        body = a.prop
        while isinstance(body, S.Forall):
            body = body.body
        assert isinstance(body, S.Implies) and isinstance(body.right, S.Atom)
        assert body.right.pred == "eps"


def test_universe_closure_error_names_missing_sort(hol):
    with pytest.raises(UniverseError) as e:
        compile_axioms(hol, (S.arrow(O, O),))
    assert "o" in str(e.value)


def test_default_universe_from_conjecture(hol):
    seq, _ = ps("(seq (vars (v o) (w o)) () ((eps (dor v w))))", hol.sig)
    uni = default_universe(seq)
    assert set(DOR_UNIVERSE) <= set(uni)
    compile_axioms(hol, uni)  # subsort-closed by construction here


def test_tff_roundtrip(holpm):
    ax = compile_axioms(holpm, DOR_UNIVERSE)
    text = export_tff(ax, explicit_equality=True)
    parsed, conj = parse_tff(text, ax)
    assert conj is None
    assert len(parsed) == len(ax.axioms)
    by_name = {_fname(a.name): a.prop for a in ax.axioms}
    for name, role, prop in parsed:
        assert role == "axiom"
        assert S.alpha_eq(by_name[name], prop), name


def test_tff_equality_axioms_filtered_by_default(holpm):
    ax = compile_axioms(holpm, DOR_UNIVERSE)
    text = export_tff(ax)
    parsed, _ = parse_tff(text, ax)
    assert len(parsed) == len(ax.axioms) - len(ax.tagged(TAG_EQUALITY))
    assert all(not name.startswith("eq_") for name, _, _ in parsed)


def test_tff_conjecture_roundtrip(holpm):
    ax = compile_axioms(holpm, DOR_UNIVERSE)
    seq, _ = ps("(seq (vars (v o)) ((eps v)) ((eps (dor v v))))", holpm.sig)
    text = export_tff(ax, conjecture=seq)
    parsed, conj = parse_tff(text, ax)
    assert conj is not None
    assert S.alpha_eq(conj, conjecture_prop(seq))


def test_conjecture_prop_shapes(holpm):
    sig = holpm.sig
    seq, _ = ps("(seq (vars (v o) (w o)) ((eps v)) ((eps w)))", sig)
    assert S.alpha_eq(conjecture_prop(seq), pp("(all v o (all w o (imp (eps v) (eps w))))", sig, {}))
    seq2, _ = ps("(seq (vars (v o)) ((eps v)) ())", sig)
    assert S.alpha_eq(conjecture_prop(seq2), pp("(all v o (not (eps v)))", sig, {}))
    seq3, _ = ps("(seq () ())", sig)
    assert S.alpha_eq(conjecture_prop(seq3), S.BOT)


def test_rule_axioms_provable_modulo_their_theory(hol, holpm):
    # the computable half of the compatibility property, at desk scale;
    # equality-theory and equation axioms are out of the probe's scope
    for rs in (hol, holpm):
        ax = compile_axioms(rs, FULL_UNIVERSE)
        for a in ax.tagged(TAG_NEG) + ax.tagged(TAG_POS):
            goal = S.Sequent((), (a.prop,))
            result = prove_cutfree(goal, rs, max_depth=10)
            assert result.outcome == "proved", (rs.name, a.name)
