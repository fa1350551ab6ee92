"""Agreement forests: validation, inheritance graphs and exhaustive oracles.

The oracles enumerate set partitions as restricted-growth strings.  Agreement
(identical restrictions) and disjointness of spanning subtrees are both
inherited by subsets, so a partial partition that already fails either test
is never extended.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass
from typing import Iterable

from .tree import RHO, RootedTree, TreeError, restrict


class CapExceededError(ValueError):
    """Raised when an exhaustive routine is asked to handle too many leaves."""


@dataclass(frozen=True)
class AgreementForest:
    """A partition of X and rho; ``blocks[0]`` is the block containing rho."""

    blocks: tuple

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[str]]) -> "AgreementForest":
        sets = [frozenset(b) for b in blocks]
        if any(not b for b in sets):
            raise ValueError("empty block")
        rho = [b for b in sets if RHO in b]
        if len(rho) != 1:
            raise ValueError("exactly one block must contain rho")
        rest = sorted((b for b in sets if RHO not in b), key=min)
        seen: set = set()
        for b in sets:
            if not seen.isdisjoint(b):
                raise ValueError("blocks overlap")
            seen |= b
        return cls((rho[0], *rest))

    @property
    def rho_block(self) -> int:
        return 0

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def labels(self) -> frozenset:
        return frozenset().union(*self.blocks)

    def as_lists(self) -> list:
        return [sorted(b) for b in self.blocks]


def _check_partition(t1: RootedTree, t2: RootedTree, forest: AgreementForest) -> None:
    if t1.taxa != t2.taxa:
        raise TreeError("trees have different label sets")
    if forest.labels != t1.labels:
        raise ValueError("forest is not a partition of the trees' label set")


def is_agreement_forest(t1: RootedTree, t2: RootedTree, forest: AgreementForest) -> bool:
    _check_partition(t1, t2, forest)
    for block in forest.blocks:
        taxa = block - {RHO}
        if len(taxa) >= 2 and restrict(t1, taxa) != restrict(t2, taxa):
            return False
    for t in (t1, t2):
        used: set = set()
        for block in forest.blocks:
            span = t.span(block)
            if not used.isdisjoint(span):
                return False
            used |= span
    return True


@dataclass(frozen=True)
class InheritanceGraph:
    nodes: tuple
    arcs: frozenset


def _block_root(t: RootedTree, block) -> int:
    return t.lca(t.vertex(lab) for lab in block)


def inheritance_graph(t1: RootedTree, t2: RootedTree, forest: AgreementForest) -> InheritanceGraph:
    """Arc (i, j) when block i's root is a proper ancestor of block j's root in either tree."""
    arcs = set()
    for t in (t1, t2):
        roots = [_block_root(t, b) for b in forest.blocks]
        for i, ri in enumerate(roots):
            for j, rj in enumerate(roots):
                if i != j and ri != rj and t.is_ancestor(ri, rj):
                    arcs.add((i, j))
    return InheritanceGraph(tuple(range(len(forest))), frozenset(arcs))


def is_acyclic_forest(t1: RootedTree, t2: RootedTree, forest: AgreementForest) -> bool:
    if not is_agreement_forest(t1, t2, forest):
        raise ValueError("not an agreement forest")
    return is_dag(inheritance_graph(t1, t2, forest))


def is_dag(graph: InheritanceGraph) -> bool:
    sorter = graphlib.TopologicalSorter({i: set() for i in graph.nodes})
    for i, j in graph.arcs:
        sorter.add(j, i)
    try:
        sorter.prepare()
    except graphlib.CycleError:
        return False
    return True


# -- bitmask machinery for the exhaustive oracles ------------------------------

class _TreeMasks:
    __slots__ = ("anc", "vanc", "clusters")

    def __init__(self, t: RootedTree, bit: dict):
        n = len(t)
        vanc = [0] * n
        for v in range(n):
            p = t.parent(v)
            vanc[v] = (vanc[p] if p >= 0 else 0) | (1 << v)
        self.vanc = vanc
        self.anc = {lab: vanc[t.vertex(lab)] for lab in bit}
        clusters = [0] * n
        for v in range(n - 1, -1, -1):
            lab = t.label(v)
            if lab is not None and lab in bit:
                clusters[v] |= bit[lab]
            p = t.parent(v)
            if p >= 0:
                clusters[p] |= clusters[v]
        self.clusters = clusters


class _PairIndex:
    """Per-mask agreement and span queries for a tree pair, memoised."""

    def __init__(self, t1: RootedTree, t2: RootedTree, with_rho: bool = True, unrooted: bool = False):
        taxa = [t1.label(v) for v in t1.vertices if t1.label(v) not in (None, RHO)]
        self.elements = ([RHO] if with_rho else []) + taxa
        self.bit = {lab: 1 << i for i, lab in enumerate(self.elements)}
        self.trees = (_TreeMasks(t1, self.bit), _TreeMasks(t2, self.bit))
        self.unrooted = unrooted
        self._agree: dict = {}
        self._span: dict = {}

    def _shape(self, tm: _TreeMasks, mask: int):
        if self.unrooted:
            low = mask & -mask
            sides = set()
            for c in tm.clusters:
                side = c & mask
                if side & low:
                    side ^= mask
                if bin(side).count("1") >= 2 and bin(mask ^ side).count("1") >= 2:
                    sides.add(side)
            return frozenset(sides)
        return frozenset(c & mask for c in tm.clusters) - {0}

    def agree(self, mask: int) -> bool:
        hit = self._agree.get(mask)
        if hit is None:
            a, b = self.trees
            hit = self._shape(a, mask) == self._shape(b, mask)
            self._agree[mask] = hit
        return hit

    def span(self, mask: int) -> tuple:
        """(span in t1, span in t2, root in t1, root in t2) as vertex bitmasks / ids."""
        hit = self._span.get(mask)
        if hit is None:
            out = []
            roots = []
            for tm in self.trees:
                union, common = 0, -1
                m, i = mask, 0
                while m:
                    if m & 1:
                        a = tm.anc[self.elements[i]]
                        union |= a
                        common &= a
                    m >>= 1
                    i += 1
                root = common.bit_length() - 1
                out.append((union & ~common) | (1 << root))
                roots.append(root)
            hit = (out[0], out[1], roots[0], roots[1])
            self._span[mask] = hit
        return hit


def _partitions(idx: _PairIndex, max_blocks: int):
    """Yield every valid partition (as element masks) with at most ``max_blocks`` blocks."""
    n = len(idx.elements)
    blocks: list = []
    spans1: list = []
    spans2: list = []
    union = [0, 0]

    def rec(pos):
        if pos == n:
            yield list(blocks)
            return
        bit = 1 << pos
        for i in range(len(blocks)):
            nm = blocks[i] | bit
            if not idx.agree(nm):
                continue
            s1, s2, _, _ = idx.span(nm)
            if s1 & (union[0] ^ spans1[i]) or s2 & (union[1] ^ spans2[i]):
                continue
            old = blocks[i], spans1[i], spans2[i], union[0], union[1]
            blocks[i], spans1[i], spans2[i] = nm, s1, s2
            union[0] = (old[3] ^ old[1]) | s1
            union[1] = (old[4] ^ old[2]) | s2
            yield from rec(pos + 1)
            blocks[i], spans1[i], spans2[i], union[0], union[1] = old
        if len(blocks) < max_blocks:
            s1, s2, _, _ = idx.span(bit)
            blocks.append(bit)
            spans1.append(s1)
            spans2.append(s2)
            union[0] |= s1
            union[1] |= s2
            yield from rec(pos + 1)
            blocks.pop()
            spans1.pop()
            spans2.pop()
            union[0] ^= s1
            union[1] ^= s2

    return rec(0)


def _masks_to_forest(idx: _PairIndex, masks) -> list:
    out = []
    for m in masks:
        out.append(frozenset(lab for lab in idx.elements if idx.bit[lab] & m))
    return out


def _acyclic_masks(idx: _PairIndex, masks) -> bool:
    roots = [idx.span(m)[2:] for m in masks]
    k = len(masks)
    succ = [[] for _ in range(k)]
    indeg = [0] * k
    for ti, tm in enumerate(idx.trees):
        for i in range(k):
            ri = roots[i][ti]
            for j in range(k):
                rj = roots[j][ti]
                if i != j and ri != rj and tm.vanc[rj] >> ri & 1:
                    succ[i].append(j)
                    indeg[j] += 1
    todo = [i for i in range(k) if indeg[i] == 0]
    seen = 0
    while todo:
        i = todo.pop()
        seen += 1
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                todo.append(j)
    return seen == k


def _check_cap(t1: RootedTree, t2: RootedTree, cap: int) -> None:
    if t1.taxa != t2.taxa:
        raise TreeError("trees have different label sets")
    if t1.n_leaves > cap:
        raise CapExceededError(f"{t1.n_leaves} leaves exceeds the cap of {cap}")


def maf_bruteforce(t1: RootedTree, t2: RootedTree, cap: int = 10) -> tuple:
    """Maximum agreement forest by exhaustive partition search; returns (forest, d)."""
    _check_cap(t1, t2, cap)
    idx = _PairIndex(t1, t2)
    for k in range(1, len(idx.elements) + 1):
        for masks in _partitions(idx, k):
            forest = AgreementForest.from_blocks(_masks_to_forest(idx, masks))
            return forest, len(forest) - 1
    raise AssertionError("the singleton partition is always an agreement forest")


def maaf_bruteforce(t1: RootedTree, t2: RootedTree, cap: int = 9) -> tuple:
    """Maximum acyclic agreement forest by exhaustive search; returns (forest, r)."""
    _check_cap(t1, t2, cap)
    idx = _PairIndex(t1, t2)
    for k in range(1, len(idx.elements) + 1):
        for masks in _partitions(idx, k):
            if len(masks) == k and _acyclic_masks(idx, masks):
                forest = AgreementForest.from_blocks(_masks_to_forest(idx, masks))
                return forest, len(forest) - 1
    raise AssertionError("the singleton partition is always acyclic")


def tbr_bruteforce(t1: RootedTree, t2: RootedTree, cap: int = 10) -> int:
    """TBR distance of the unrooted trees obtained by deleting rho.

    Computed as the size of a maximum unrooted agreement forest minus one.
    """
    _check_cap(t1, t2, cap)
    idx = _PairIndex(t1, t2, with_rho=False, unrooted=True)
    for k in range(1, len(idx.elements) + 1):
        for _ in _partitions(idx, k):
            return k - 1
    raise AssertionError("the singleton partition is always an agreement forest")
