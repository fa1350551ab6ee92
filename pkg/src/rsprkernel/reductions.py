"""Subtree, chain and 3-2-chain reductions and the kernelization driver.

``kernelize`` first applies the subtree and 3-2-chain reductions until
neither fires, then applies the chain reduction of the chosen mode until it
no longer fires.  In that order the result admits none of the three rules.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

from .tree import (
    RootedTree,
    TreeError,
    all_maximal_common_chains,
    maximal_common_pendant_subtrees,
    restrict,
)

logger = logging.getLogger(__name__)


class Rule(str, enum.Enum):
    SUBTREE = "subtree"
    CHAIN_RSPR = "chain_rspr"
    CHAIN_HYB = "chain_hyb"
    CHAIN32 = "chain32"


class Mode(str, enum.Enum):
    RSPR = "rspr"
    HYBRIDIZATION = "hybridization"


@dataclass(frozen=True)
class ReductionStep:
    rule: Rule
    removed_labels: frozenset
    distance_offset: int = 0
    kept: str | None = None  # label standing in for a collapsed subtree


@dataclass(frozen=True)
class KernelResult:
    s1: RootedTree
    s2: RootedTree
    offset: int
    trace: tuple
    mode: Mode
    distance_exact: bool
    irreducible: bool = True

    @property
    def n_leaves(self) -> int:
        return self.s1.n_leaves


def _drop(t1: RootedTree, t2: RootedTree, removed) -> tuple:
    keep = t1.taxa - set(removed)
    return restrict(t1, keep), restrict(t2, keep)


def _same_taxa(t1, t2) -> None:
    if t1.taxa != t2.taxa:
        raise TreeError("trees have different label sets")


def apply_subtree_reduction(t1: RootedTree, t2: RootedTree):
    """Collapse a maximal common pendant subtree to its smallest label."""
    _same_taxa(t1, t2)
    for block in maximal_common_pendant_subtrees(t1, t2):
        keep = min(block)
        removed = block - {keep}
        s1, s2 = _drop(t1, t2, removed)
        return s1, s2, ReductionStep(Rule.SUBTREE, frozenset(removed), 0, keep)
    return None


def _chain_reduction(t1, t2, min_len: int, keep_len: int, rule: Rule):
    _same_taxa(t1, t2)
    chains = [c for c in all_maximal_common_chains(t1, t2) if len(c) >= min_len]
    if not chains:
        return None
    # chains lying inside a common pendant subtree belong to the subtree rule
    common = maximal_common_pendant_subtrees(t1, t2)
    for chain in chains:
        if any(block.issuperset(chain.leaves) for block in common):
            continue
        removed = frozenset(chain.leaves[keep_len:])
        s1, s2 = _drop(t1, t2, removed)
        return s1, s2, ReductionStep(rule, removed, 0)
    return None


def apply_chain_reduction_rspr(t1: RootedTree, t2: RootedTree):
    """Shorten a maximal common chain with at least four leaves to its first three."""
    return _chain_reduction(t1, t2, 4, 3, Rule.CHAIN_RSPR)


def apply_chain_reduction_hyb(t1: RootedTree, t2: RootedTree):
    """Shorten a maximal common chain with at least three leaves to its first two."""
    return _chain_reduction(t1, t2, 3, 2, Rule.CHAIN_HYB)


def _pendant_three_chains(t: RootedTree):
    """(x1, x2, x3) with x1, x2 a cherry and x3 the sibling of their parent."""
    for a, b in t.cherries():
        p = t.parent(t.vertex(a))
        s = t.sibling(p)
        if s is not None and t.label(s) is not None:
            yield a, b, t.label(s)


def find_32_chain(t1: RootedTree, t2: RootedTree):
    """The leaf a 3-2-chain reduction would delete, or None."""
    for host, other in ((t1, t2), (t2, t1)):
        cherries = set(other.cherries())
        for x1, x2, x3 in _pendant_three_chains(host):
            for xi, xj in ((x1, x2), (x2, x1)):
                if tuple(sorted((xi, x3))) in cherries:
                    return xj
    return None


def apply_32_chain_reduction(t1: RootedTree, t2: RootedTree):
    """Delete x_j when (x1, x2, x3) is pendant in one tree and (x_i, x3) in the other.

    Unlike the other rules this lowers the distance by exactly one.
    """
    _same_taxa(t1, t2)
    if t1.n_leaves < 3:
        return None
    xj = find_32_chain(t1, t2)
    if xj is None:
        return None
    s1, s2 = _drop(t1, t2, {xj})
    return s1, s2, ReductionStep(Rule.CHAIN32, frozenset((xj,)), 1)


def _chain_rule(mode: Mode):
    return apply_chain_reduction_rspr if Mode(mode) is Mode.RSPR else apply_chain_reduction_hyb


def applicable_rules(t1: RootedTree, t2: RootedTree, mode: Mode = Mode.RSPR) -> list:
    """Names of the rules that could still be applied to the pair."""
    found = []
    if apply_subtree_reduction(t1, t2) is not None:
        found.append(Rule.SUBTREE)
    if _chain_rule(mode)(t1, t2) is not None:
        found.append(Rule.CHAIN_RSPR if Mode(mode) is Mode.RSPR else Rule.CHAIN_HYB)
    if apply_32_chain_reduction(t1, t2) is not None:
        found.append(Rule.CHAIN32)
    return found


def kernelize(t1: RootedTree, t2: RootedTree, mode: Mode = Mode.RSPR, phase_two: bool = True) -> KernelResult:
    """Reduce the pair exhaustively in the safe order.

    With ``phase_two=False`` only the subtree and 3-2-chain rules are used;
    the hybridization solver relies on that to keep its answer exact.
    """
    _same_taxa(t1, t2)
    mode = Mode(mode)
    trace = []
    while t1.n_leaves > 1:
        step = apply_subtree_reduction(t1, t2) or apply_32_chain_reduction(t1, t2)
        if step is None:
            break
        t1, t2, s = step
        trace.append(s)
    if phase_two:
        chain_rule = _chain_rule(mode)
        while t1.n_leaves > 1:
            step = chain_rule(t1, t2)
            if step is None:
                break
            t1, t2, s = step
            trace.append(s)
    offset = sum(s.distance_offset for s in trace)
    exact = mode is Mode.RSPR or not any(s.rule is Rule.CHAIN_HYB for s in trace)
    irreducible = t1.n_leaves <= 1 or not applicable_rules(t1, t2, mode) if phase_two else True
    if not irreducible:
        logger.warning("kernel still reducible after both phases: %s", applicable_rules(t1, t2, mode))
    return KernelResult(t1, t2, offset, tuple(trace), mode, exact, irreducible)


def kernel_bound(d: int, mode: Mode = Mode.RSPR) -> int:
    if d < 1:
        raise ValueError("the kernel bound needs a distance of at least 1")
    return 9 * d - 3 if Mode(mode) is Mode.RSPR else 7 * d - 2


def verify_kernel_bound(result: KernelResult, d: int) -> bool:
    """Whether the kernel respects 9d - 3 (rSPR) or 7d - 2 (hybridization) leaves."""
    return result.n_leaves <= kernel_bound(d, result.mode)
