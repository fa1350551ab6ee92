import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import tree
from oracles import has_common_chain, naive_pendant_blocks
from rsprkernel.random_trees import default_labels, uniform_tree, yule_tree
from rsprkernel.reductions import _chain_reduction
from rsprkernel.tree import (
    RHO,
    RootedTree,
    TreeError,
    all_maximal_common_chains,
    is_chain,
    is_isomorphic,
    is_pendant_chain,
    maximal_common_chains,
    maximal_common_pendant_subtrees,
    restrict,
)


@st.composite
def trees(draw, n_min=1, n_max=12):
    n = draw(st.integers(n_min, n_max))
    seed = draw(st.integers(0, 2**32 - 1))
    make = draw(st.sampled_from([uniform_tree, yule_tree]))
    return make(default_labels(n), random.Random(seed))


@st.composite
def tree_pairs(draw, n_min=2, n_max=10):
    n = draw(st.integers(n_min, n_max))
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    return uniform_tree(default_labels(n), rng), yule_tree(default_labels(n), rng)


def test_rho_sits_above_the_original_root():
    t = tree("((a,b),c);")
    assert t.label(0) == RHO
    assert t.children(0) == (t.top,)
    assert t.labels == {"a", "b", "c", RHO}
    assert t.taxa == {"a", "b", "c"}


def test_preorder_numbering():
    t = tree("((a,(b,c)),(d,e));")
    assert all(t.parent(v) < v for v in range(1, len(t)))


def test_non_binary_and_bad_labels_are_rejected():
    with pytest.raises(TreeError):
        RootedTree.from_nested(("a", "b", "c"))
    with pytest.raises(TreeError):
        RootedTree.from_nested(("a", "a"))
    with pytest.raises(TreeError):
        RootedTree.from_nested(("a", RHO))
    with pytest.raises(TreeError):
        RootedTree.from_nested(("a", ""))


def test_restrict_examples():
    t = tree("((a,b),c);")
    assert restrict(t, t.labels) == t
    assert restrict(t, {"a", "c"}) == tree("(a,c);")
    assert restrict(tree("((a,(b,c)),(d,e));"), {"b", "c", "d"}) == tree("((b,c),d);")
    assert restrict(t, {"a", RHO}).taxa == {"a"}


def test_restrict_errors():
    t = tree("((a,b),c);")
    with pytest.raises(TreeError):
        restrict(t, {"a", "zz"})
    with pytest.raises(TreeError):
        restrict(t, set())


def test_isomorphism():
    assert is_isomorphic(tree("((a,b),c);"), tree("(c,(b,a));"))
    assert not is_isomorphic(tree("((a,b),c);"), tree("((a,c),b);"))
    with pytest.raises(TreeError):
        is_isomorphic(tree("(a,b);"), tree("(a,c);"))


def test_span_and_lca():
    t = tree("((a,b),(c,d));")
    va, vb, vc = (t.vertex(x) for x in "abc")
    assert t.lca([va, vb]) == t.parent(va)
    assert t.span(["a", "b"]) == {va, vb, t.parent(va)}
    assert t.lca([va, vc]) == t.top
    assert t.span([RHO, "a"]) == {0, t.top, t.parent(va), va}


def test_pendant_subtree_examples():
    t = tree("((a,b),c);")
    assert maximal_common_pendant_subtrees(t, t) == [frozenset("abc")]
    assert maximal_common_pendant_subtrees(tree("(((a,b),c),d);"), tree("(((a,b),d),c);")) == [frozenset("ab")]
    assert maximal_common_pendant_subtrees(tree("((a,b),(c,d));"), tree("((a,c),(b,d));")) == []


def test_chain_predicate_examples():
    t = tree("((a,b),c);")
    assert is_pendant_chain(t, ["a", "b"])
    assert is_pendant_chain(t, ["a", "b", "c"])
    assert not is_pendant_chain(t, ["c", "a", "b"])
    with pytest.raises(TreeError):
        is_chain(t, ["a", "zz"])


def test_chains_on_identical_caterpillars():
    t = tree("(((((a,b),c),d),e),f);")
    chains = all_maximal_common_chains(t, t)
    assert [c.leaves for c in chains] == [("a", "b", "c", "d", "e", "f")]
    assert chains[0].pendant == (True, True)


def test_no_common_chain():
    # every ordered pair linked in one tree fails in the other
    t1, t2 = tree("((a,b),(c,d));"), tree("((a,c),(b,d));")
    assert all(len(c) < 3 for c in all_maximal_common_chains(t1, t2))
    assert not has_common_chain(t1, t2, 3)


@settings(max_examples=200, deadline=None)
@given(tree_pairs())
def test_found_chains_satisfy_the_definition(pair):
    t1, t2 = pair
    for chain in all_maximal_common_chains(t1, t2):
        assert RHO not in chain.leaves
        assert is_chain(t1, chain.leaves) and is_chain(t2, chain.leaves)
        for t, flag in zip(pair, chain.pendant):
            assert is_pendant_chain(t, chain.leaves) == flag


@settings(max_examples=200, deadline=None)
@given(tree_pairs(n_min=4, n_max=9), st.sampled_from([(4, 3), (3, 2)]))
def test_chain_rule_applicability_matches_brute_force(pair, rule):
    t1, t2 = pair
    blocks = maximal_common_pendant_subtrees(t1, t2)
    fires = _chain_reduction(t1, t2, rule[0], rule[1], None) is not None
    assert fires == has_common_chain(t1, t2, rule[0], blocks)


@settings(max_examples=100, deadline=None)
@given(tree_pairs())
def test_leaf_disjoint_chains(pair):
    seen = set()
    for chain in maximal_common_chains(*pair):
        assert seen.isdisjoint(chain.leaves)
        seen.update(chain.leaves)


@settings(max_examples=200, deadline=None)
@given(tree_pairs())
def test_pendant_subtrees_match_brute_force(pair):
    t1, t2 = pair
    blocks = maximal_common_pendant_subtrees(t1, t2)
    assert blocks == naive_pendant_blocks(t1, t2)
    for b in blocks:
        assert restrict(t1, b) == restrict(t2, b)
    assert sum(len(b) for b in blocks) == len(set().union(*blocks)) if blocks else True


@settings(max_examples=200, deadline=None)
@given(trees(n_min=2), st.data())
def test_restrict_is_idempotent_and_commutes(t, data):
    labels = sorted(t.taxa)
    keep = data.draw(st.sets(st.sampled_from(labels), min_size=1))
    once = restrict(t, keep)
    assert restrict(once, keep) == once
    assert once.taxa == keep
    shuffled = RootedTree.from_nested(_mirror(t.nested()))
    assert restrict(shuffled, keep) == once


def _mirror(nested):
    if isinstance(nested, str):
        return nested
    return (_mirror(nested[1]), _mirror(nested[0]))
