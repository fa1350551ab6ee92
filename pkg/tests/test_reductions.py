import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import tree
from rsprkernel.forests import maaf_bruteforce, maf_bruteforce
from rsprkernel.random_trees import chain32_witness
from rsprkernel.reductions import (
    KernelResult,
    Mode,
    Rule,
    apply_32_chain_reduction,
    apply_chain_reduction_hyb,
    apply_chain_reduction_rspr,
    apply_subtree_reduction,
    applicable_rules,
    kernel_bound,
    kernelize,
    verify_kernel_bound,
)
from rsprkernel.tight import build_tight
from rsprkernel.tree import restrict
from test_tree import tree_pairs

FIVE_CHAIN = (
    tree("((((((p,(q,r)),x1),x2),x3),x4),x5);"),
    tree("(((((((p,q),r),x1),x2),x3),x4),x5);"),
)
WITNESS = (tree("(((a,z),b),(c,(d,e)));"), tree("(((z,b),a),((c,d),e));"))


def test_subtree_reduction_examples():
    t = tree("((a,b),(c,d));")
    s1, s2, step = apply_subtree_reduction(t, t)
    assert s1.taxa == {"a"} and s2 == s1
    assert step.rule is Rule.SUBTREE and step.removed_labels == {"b", "c", "d"}

    t1, t2 = tree("(((a,b),c),d);"), tree("(((a,b),d),c);")
    s1, s2, step = apply_subtree_reduction(t1, t2)
    assert (s1, s2) == (tree("((a,c),d);"), tree("((a,d),c);"))
    assert step.kept == "a" and step.distance_offset == 0
    assert maf_bruteforce(t1, t2)[1] == maf_bruteforce(s1, s2)[1] == 1

    assert apply_subtree_reduction(tree("((a,b),(c,d));"), tree("((a,c),(b,d));")) is None


def test_rspr_chain_reduction_on_a_five_chain():
    t1, t2 = FIVE_CHAIN
    assert apply_subtree_reduction(t1, t2) is None
    s1, s2, step = apply_chain_reduction_rspr(t1, t2)
    assert step.rule is Rule.CHAIN_RSPR and step.removed_labels == {"x4", "x5"}
    assert maf_bruteforce(t1, t2)[1] == maf_bruteforce(s1, s2)[1] == 1


def test_chain_rules_need_long_enough_chains():
    t1 = restrict(FIVE_CHAIN[0], {"p", "q", "r", "x1", "x2", "x3"})
    t2 = restrict(FIVE_CHAIN[1], {"p", "q", "r", "x1", "x2", "x3"})
    assert apply_chain_reduction_rspr(t1, t2) is None
    s1, s2, step = apply_chain_reduction_hyb(t1, t2)
    assert step.removed_labels == {"x3"}


def test_hybridization_chain_reduction_keeps_two():
    s1, s2, step = apply_chain_reduction_hyb(*FIVE_CHAIN)
    assert step.rule is Rule.CHAIN_HYB and step.removed_labels == {"x3", "x4", "x5"}
    assert apply_chain_reduction_hyb(tree("((a,b),(c,d));"), tree("((a,c),(b,d));")) is None


def test_identical_trees_are_left_to_the_subtree_rule():
    t = tree("(((((a,b),c),d),e),f);")
    assert apply_chain_reduction_rspr(t, t) is None
    assert apply_chain_reduction_hyb(t, t) is None
    result = kernelize(t, t)
    assert result.n_leaves == 1 and result.offset == 0


def test_32_chain_witness():
    t1, t2 = WITNESS
    s1, s2, step = apply_32_chain_reduction(t1, t2)
    assert step.rule is Rule.CHAIN32 and step.removed_labels == {"a"} and step.distance_offset == 1
    assert maf_bruteforce(t1, t2)[1] == maf_bruteforce(s1, s2)[1] + 1
    # the surviving pair (z, b) is now a common cherry
    assert apply_subtree_reduction(s1, s2)[2].removed_labels == {"z"}
    result = kernelize(t1, t2)
    assert [s.rule for s in result.trace[:2]] == [Rule.CHAIN32, Rule.SUBTREE]
    assert result.offset >= 1 and result.irreducible
    assert maf_bruteforce(t1, t2)[1] == maf_bruteforce(result.s1, result.s2)[1] + result.offset


def test_no_pendant_three_chain():
    assert apply_32_chain_reduction(tree("((a,b),(c,d));"), tree("((a,c),(b,d));")) is None


def test_tight_pair_is_already_a_kernel():
    fam = build_tight(2, Mode.RSPR)
    result = kernelize(fam.s1, fam.s2)
    assert result.trace == () and result.s1 == fam.s1 and result.s2 == fam.s2


def test_kernel_bounds():
    assert kernel_bound(1) == 6
    assert kernel_bound(2) == 15
    assert kernel_bound(2, Mode.HYBRIDIZATION) == 12
    fam = build_tight(2)
    result = kernelize(fam.s1, fam.s2)
    assert verify_kernel_bound(result, 2)
    assert not verify_kernel_bound(result, 1)
    with pytest.raises(ValueError):
        verify_kernel_bound(result, 0)


def _check_kernel(result: KernelResult):
    assert result.offset == sum(s.rule is Rule.CHAIN32 for s in result.trace)
    for s in result.trace:
        if s.rule is Rule.CHAIN32:
            assert s.distance_offset == 1 and len(s.removed_labels) == 1
        else:
            assert s.distance_offset == 0
    if result.mode is Mode.RSPR:
        assert result.distance_exact
    else:
        assert result.distance_exact == (not any(s.rule is Rule.CHAIN_HYB for s in result.trace))
    assert result.irreducible
    assert result.n_leaves <= 1 or not applicable_rules(result.s1, result.s2, result.mode)


@settings(max_examples=150, deadline=None)
@given(tree_pairs(n_min=2, n_max=9), st.sampled_from(list(Mode)))
def test_kernel_invariants(pair, mode):
    _check_kernel(kernelize(*pair, mode))


def test_single_leaf_input():
    t = tree("(a,a2);")
    one = restrict(t, {"a"})
    result = kernelize(one, one)
    assert result.trace == () and result.n_leaves == 1


@settings(max_examples=80, deadline=None)
@given(tree_pairs(n_min=3, n_max=8))
def test_each_rule_moves_the_oracles_as_claimed(pair):
    t1, t2 = pair
    rules = [apply_subtree_reduction, apply_chain_reduction_rspr, apply_32_chain_reduction]
    while t1.n_leaves > 1:
        for rule in rules:
            step = rule(t1, t2)
            if step is not None:
                break
        else:
            break
        s1, s2, info = step
        drop = info.distance_offset
        assert maf_bruteforce(t1, t2)[1] == maf_bruteforce(s1, s2)[1] + drop
        if info.rule is not Rule.CHAIN_RSPR:
            assert maaf_bruteforce(t1, t2)[1] == maaf_bruteforce(s1, s2)[1] + drop
        t1, t2 = s1, s2


def test_random_32_chain_witnesses():
    rng = random.Random(3)
    for _ in range(20):
        t1, t2, xj = chain32_witness(rng.randint(2, 5), rng)
        s1, s2, step = apply_32_chain_reduction(t1, t2)
        assert step.rule is Rule.CHAIN32
        assert maf_bruteforce(t1, t2)[1] == maf_bruteforce(s1, s2)[1] + 1
        assert maaf_bruteforce(t1, t2)[1] == maaf_bruteforce(s1, s2)[1] + 1
