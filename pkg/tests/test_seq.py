from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from falsifiable import limits
from falsifiable.errors import CapacityError, InputError
from falsifiable.seq import (GameSpec, LiftedTheory, Path, Tree, all_trees, effective_lifted_hypotheses,
                             hard_falsifiability_seq, hard_risk_seq, hindsight_comparator, littlestone_by_trees,
                             littlestone_dimension, minimax_value_seq, path_apply, q_image_count, seq_rademacher,
                             seq_shatters, soft_falsifiability_seq, soft_risk_seq, vc_lifted, verify_chain_seq,
                             worst_tree_seq, zero_cover_number)
from falsifiable.slt import Domain, Theory

import oracles

CONSTANTS = Theory.constants(2)
A_BB = Tree(2, 2, (0, 1, 1))


def all_theories(m, max_size=None):
    vectors = list(product((0, 1), repeat=m))
    for k in range(1, (max_size or len(vectors)) + 1):
        for combo in combinations(vectors, k):
            yield Theory(Domain(m), combo)


@st.composite
def theory_and_tree(draw, max_m=3, max_depth=3):
    m = draw(st.integers(1, max_m))
    vectors = list(product((0, 1), repeat=m))
    chosen = draw(st.lists(st.sampled_from(vectors), min_size=1, max_size=min(len(vectors), 6), unique=True))
    depth = draw(st.integers(1, max_depth))
    nodes = draw(st.lists(st.integers(0, m - 1), min_size=2**depth - 1, max_size=2**depth - 1))
    return Theory(Domain(m), tuple(chosen)), Tree(m, depth, tuple(nodes), allow_degenerate=True)


def test_path_apply_orientation():
    tree = Tree(3, 2, (0, 1, 2))
    assert path_apply(tree, Path((-1, 1))) == (0, 1)
    assert path_apply(tree, Path((1, -1))) == (0, 2)
    assert path_apply(Tree(1, 1, (0,)), Path((1,))) == (0,)
    with pytest.raises(InputError):
        path_apply(tree, Path((1,)))


def test_tree_validation():
    with pytest.raises(InputError):
        Tree(2, 2, (0, 0, 0))
    assert Tree(2, 2, (0, 0, 0), allow_degenerate=True).is_degenerate
    with pytest.raises(InputError):
        Tree(2, 2, (0, 1))
    with pytest.raises(InputError):
        Path((0, 1))


def test_soft_and_hard_risk_examples():
    lifted = LiftedTheory(CONSTANTS, 2)
    assert soft_risk_seq(CONSTANTS, Path((1, 1)), A_BB, (0, 1)) == Fraction(1, 2)
    assert soft_risk_seq(Theory.full(2), Path((1, 1)), A_BB, (0, 1)) == 0
    assert soft_risk_seq(Theory.from_strings("00"), Path((1, 1)), A_BB, (1, 1)) == 1
    assert hard_risk_seq(lifted, A_BB, (0, 0)) == 0
    assert hard_risk_seq(lifted, A_BB, (0, 1)) == Fraction(1, 2)
    # A labelling of the domain read along a path.
    assert hard_risk_seq(lifted, A_BB, (1, 0), rho=Path((-1, 1))) == Fraction(1, 2)


def test_falsifiability_examples():
    assert soft_falsifiability_seq(CONSTANTS, A_BB) == Fraction(1, 2)
    assert hard_falsifiability_seq(CONSTANTS, A_BB) == pytest.approx(0.5)
    assert soft_falsifiability_seq(Theory.from_strings("01"), A_BB) == 1
    assert hard_falsifiability_seq(Theory.from_strings("01"), A_BB) == pytest.approx(1.0)
    assert soft_falsifiability_seq(Theory.full(2), A_BB) == 0
    assert hard_falsifiability_seq(Theory.full(2), A_BB) == pytest.approx(0.0)


def test_rademacher_examples():
    assert seq_rademacher(Theory.from_strings("00"), A_BB) == 0
    assert seq_rademacher(CONSTANTS, A_BB) == Fraction(1, 4)
    assert seq_rademacher(Theory.full(2), A_BB) == Fraction(1, 2)
    assert seq_rademacher(CONSTANTS, A_BB, form="loss") == Fraction(1, 4)
    with pytest.raises(InputError):
        seq_rademacher(CONSTANTS, A_BB, form="class", labels=(0, 0, 0))


def test_rademacher_depends_on_child_order_but_soft_falsifiability_does_not():
    theory = Theory.from_strings("00", "01", "10")
    left = Tree(2, 2, (0, 0, 1), allow_degenerate=True)
    right = Tree(2, 2, (0, 1, 0), allow_degenerate=True)
    assert soft_falsifiability_seq(theory, left) == soft_falsifiability_seq(theory, right) == Fraction(1, 8)
    # Enumeration oracle values.
    assert seq_rademacher(theory, left) == Fraction(1, 4)
    assert seq_rademacher(theory, right) == Fraction(3, 8)


@settings(max_examples=150, deadline=None)
@given(theory_and_tree())
def test_rademacher_matches_oracle(case):
    theory, tree = case
    assert seq_rademacher(theory, tree) == oracles.seq_radem_class(theory.predictors, tree.nodes, tree.depth)
    # A label tree flips the children at labelled nodes; all-zero labels match the class form.
    assert seq_rademacher(theory, tree, form="loss") == seq_rademacher(theory, tree)


def test_q_image_examples():
    # Singleton indicators on a tree with distinct values: q-image is exactly n + 1.
    for depth, nodes in ((2, (0, 1, 2)), (3, (0, 1, 2, 3, 4, 5, 6))):
        m = len(nodes)
        theory = Theory.singleton_indicators(m)
        assert q_image_count(LiftedTheory(theory, depth), Tree(m, depth, nodes)) == depth + 1
    assert q_image_count(LiftedTheory(CONSTANTS, 2), A_BB) == 2
    assert q_image_count(LiftedTheory(Theory.full(2), 2), A_BB) == 4


def test_zero_cover_examples():
    assert zero_cover_number(Theory.from_strings("01"), A_BB) == 1
    assert zero_cover_number(CONSTANTS, A_BB) == 2
    with pytest.raises(CapacityError):
        zero_cover_number(Theory.full(4), Tree(4, 2, (0, 1, 2)))


def _brute_zero_cover(theory, tree):
    size = len(tree.nodes)
    needs = []
    for path in tree.paths():
        idx, out = 0, []
        for s in path.signs:
            out.append(idx)
            idx = 2 * idx + (2 if s == 1 else 1)
        for f in theory:
            needs.append([(i, f[tree.nodes[i]]) for i in out])
    labellings = list(product((0, 1), repeat=size))
    for k in range(1, len(needs) + 1):
        for cover in combinations(labellings, k):
            if all(any(all(v[i] == y for i, y in need) for v in cover) for need in needs):
                return k


@settings(max_examples=60, deadline=None)
@given(theory_and_tree(max_m=2, max_depth=2))
def test_zero_cover_matches_brute_force(case):
    theory, tree = case
    assert zero_cover_number(theory, tree) == _brute_zero_cover(theory, tree)
    assert zero_cover_number(theory, tree) <= q_image_count(LiftedTheory(theory, tree.depth), tree)


def test_effective_class_count_detects_degenerate_trees():
    assert len(effective_lifted_hypotheses(A_BB)) == 4
    degenerate = Tree(2, 2, (0, 0, 0), allow_degenerate=True)
    assert len(effective_lifted_hypotheses(degenerate)) == 2


@settings(max_examples=120, deadline=None)
@given(theory_and_tree())
def test_gain_counts_q_image_on_nondegenerate_trees(case):
    theory, tree = case
    n = tree.depth
    q = q_image_count(LiftedTheory(theory, n), tree)
    h = hard_falsifiability_seq(theory, tree)
    assert h == pytest.approx((oracles.log2(len(effective_lifted_hypotheses(tree))) - oracles.log2(q)) / n, abs=1e-9)
    if not tree.is_degenerate:
        assert h == pytest.approx((n - oracles.log2(q)) / n, abs=1e-9)


@settings(max_examples=120, deadline=None)
@given(theory_and_tree(), st.data())
def test_hard_risk_never_exceeds_soft_risk(case, data):
    theory, tree = case
    path = Path(data.draw(st.lists(st.sampled_from((-1, 1)), min_size=tree.depth, max_size=tree.depth)))
    sigma = data.draw(st.lists(st.integers(0, 1), min_size=tree.depth, max_size=tree.depth))
    assert hard_risk_seq(LiftedTheory(theory, tree.depth), tree, sigma) <= soft_risk_seq(theory, path, tree, sigma)


def test_shattering_and_littlestone():
    assert seq_shatters(Theory.full(2), A_BB)
    assert not seq_shatters(CONSTANTS, A_BB)
    assert littlestone_dimension(Theory.full(3)) == 3
    assert littlestone_dimension(CONSTANTS) == 1
    assert littlestone_dimension(Theory.from_strings("010")) == 0


def test_littlestone_recursion_matches_oracle_and_trees():
    for m in (1, 2):
        for theory in all_theories(m):
            ldim = littlestone_dimension(theory)
            assert ldim == oracles.ldim_by_recursion(theory.predictors, m)
            assert ldim == littlestone_by_trees(theory, 3)


def test_vc_lifted_examples():
    assert vc_lifted(Theory.from_strings("01"), 3) == 0
    assert vc_lifted(CONSTANTS, 3) == 1
    with pytest.raises(CapacityError):
        vc_lifted(CONSTANTS, 4)


def test_vc_lifted_exceeds_littlestone_on_a_three_point_theory():
    # Along the tree (a; b, c) the pairs (f, left) and (f, right) realize all four
    # label sequences although no tree of depth 2 is sequentially shattered. At
    # depth 3 the tree (a; b, c; b, c, b, c) is shattered too (enumeration oracle).
    theory = Theory.from_strings("001", "101")
    tree = Tree(3, 2, (0, 1, 2))
    assert q_image_count(LiftedTheory(theory, 2), tree) == 4
    assert littlestone_dimension(theory) == 1
    assert q_image_count(LiftedTheory(theory, 3), Tree(3, 3, (0, 1, 2, 1, 2, 1, 2))) == 8
    assert vc_lifted(theory, 3) == 3


def test_game_examples():
    assert minimax_value_seq(GameSpec(Theory.from_strings("0"), 3)) == 0
    assert minimax_value_seq(GameSpec(Theory.constants(1), 1)) == Fraction(1, 2)
    assert minimax_value_seq(GameSpec(Theory.full(1), 1)) == Fraction(1, 2)
    assert minimax_value_seq(GameSpec(CONSTANTS, 2)) == Fraction(1, 4)
    assert minimax_value_seq(GameSpec(Theory.full(2), 2)) == Fraction(1, 2)
    assert minimax_value_seq(GameSpec(Theory.constants(1), 3)) == Fraction(1, 4)


def test_game_ceilings():
    with pytest.raises(CapacityError):
        GameSpec(Theory.full(5), 1)
    with pytest.raises(CapacityError):
        GameSpec(CONSTANTS, 5)
    with limits.override(game_rounds=5):
        GameSpec(CONSTANTS, 5)


def test_game_matches_history_oracle():
    for theory in all_theories(2, 3):
        assert minimax_value_seq(GameSpec(theory, 2)) == oracles.seq_game_value(theory.predictors, 2, 2)
    for theory in all_theories(1):
        assert minimax_value_seq(GameSpec(theory, 3)) == oracles.seq_game_value(theory.predictors, 1, 3)


@settings(max_examples=80, deadline=None)
@given(theory_and_tree(max_m=2, max_depth=1), st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), max_size=5), st.data())
def test_adding_a_predictor_never_raises_the_comparator(case, events, data):
    theory, _ = case
    m = theory.domain.size
    events = [(x % m, y) for x, y in events]
    extra = data.draw(st.sampled_from(list(product((0, 1), repeat=m))))
    bigger = Theory(theory.domain, tuple(dict.fromkeys(theory.predictors + (extra,))))
    assert hindsight_comparator(bigger, events) <= hindsight_comparator(theory, events)


def test_worst_tree_reports_minimizers():
    worst = worst_tree_seq(CONSTANTS, 2)
    assert worst.family_size == len(list(all_trees(2, 2)))
    assert soft_falsifiability_seq(CONSTANTS, worst.soft_tree) == worst.soft
    with pytest.raises(InputError):
        worst_tree_seq(CONSTANTS, 3)


def test_chain_examples():
    rep = verify_chain_seq(Theory.from_strings("01"), 2)
    assert rep.value == 0 and rep.worst.soft == 1 and rep.holds
    rep = verify_chain_seq(Theory.constants(1), 1)
    assert rep.value == Fraction(1, 2) and rep.worst.soft == 0 and rep.holds
    rep = verify_chain_seq(Theory.full(2), 2)
    assert rep.worst.soft == 0 and rep.holds
