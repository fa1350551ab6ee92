"""Exact rSPR distance and hybridization number by bounded branching.

The search keeps two forests.  F1 is what is left of the first tree after
isolated components have been removed; F2 is the second tree with some edges
cut.  Leaves of both are composite: a leaf stands for a set of labels whose
subtrees already agree.  rho is an ordinary leaf hanging from an artificial
root next to the original root.

At each node a sibling pair (a, c) of F1 is resolved.  If a and c lie in
different components of F2 one of them must end up alone, so we branch on
cutting a or cutting c.  If they share a component we may also keep them
together, which forces every subtree hanging off the F2 path between them to
be cut, after which a and c are siblings in both forests and are merged.
When F1 is down to one leaf the components of F2 form an agreement forest.

In rSPR mode a pair that is already a sibling pair in F2 is merged without
branching.  The hybridization search keeps the free "together" branch next to
the two cuts, which enumerates every agreement forest within the budget, and
tests acyclicity at the leaves of the search.
"""

from __future__ import annotations

import logging

from .forests import AgreementForest, inheritance_graph, is_dag
from .reductions import Mode, Rule, kernelize
from .tree import RootedTree, TreeError

logger = logging.getLogger(__name__)


class SolverLimitError(RuntimeError):
    """Raised when the answer would exceed the configured search depth."""


class _Forest:
    """A mutable binary forest with composite leaves."""

    __slots__ = ("parent", "children", "leaf", "node_of")

    def __init__(self, parent, children, leaf, node_of):
        self.parent = parent
        self.children = children
        self.leaf = leaf
        self.node_of = node_of

    @classmethod
    def from_tree(cls, t: RootedTree) -> "_Forest":
        top = len(t)
        parent = {0: top, top: None}
        children = {top: (0, t.top), 0: ()}
        for v in range(1, len(t)):
            parent[v] = top if v == t.top else t.parent(v)
            children[v] = t.children(v)
        leaf = {v: frozenset((t.label(v),)) for v in t.vertices if t.label(v) is not None}
        node_of = {key: v for v, key in leaf.items()}
        return cls(parent, children, leaf, node_of)

    def copy(self) -> "_Forest":
        return _Forest(dict(self.parent), dict(self.children), dict(self.leaf), dict(self.node_of))

    def detach(self, v) -> None:
        """Cut the edge above v and suppress its former parent."""
        p = self.parent[v]
        if p is None:
            return
        self.parent[v] = None
        a, b = self.children[p]
        rest = b if a == v else a
        g = self.parent.pop(p)
        del self.children[p]
        self.parent[rest] = g
        if g is not None:
            x, y = self.children[g]
            self.children[g] = (rest, y) if x == p else (x, rest)

    def remove_leaf(self, v) -> None:
        self.detach(v)
        del self.parent[v]
        del self.children[v]
        del self.node_of[self.leaf.pop(v)]


def _merge(f: _Forest, a, c) -> None:
    p = f.parent[a]
    ka, kc = f.leaf.pop(a), f.leaf.pop(c)
    del f.node_of[ka], f.node_of[kc]
    for v in (a, c):
        del f.parent[v]
        del f.children[v]
    f.children[p] = ()
    f.leaf[p] = ka | kc
    f.node_of[ka | kc] = p


def _ancestors(f: _Forest, v) -> list:
    out = [v]
    while f.parent[out[-1]] is not None:
        out.append(f.parent[out[-1]])
    return out


def _path_pendants(f: _Forest, a, c):
    """Roots of the subtrees hanging off the path between a and c, or None if
    they are in different components."""
    up_a = _ancestors(f, a)
    index = {v: i for i, v in enumerate(up_a)}
    up_c = [c]
    while up_c[-1] not in index:
        nxt = f.parent[up_c[-1]]
        if nxt is None:
            return None
        up_c.append(nxt)
    lca = up_c[-1]
    path = up_a[: index[lca]] + up_c[:-1]
    on_path = set(path) | {lca}
    pendants = []
    for v in path:
        if v in (a, c):
            continue
        for w in f.children[v]:
            if w not in on_path:
                pendants.append(w)
    return pendants


def _sibling_pair(f: _Forest):
    """A pair of sibling leaves of F1, chosen deterministically."""
    best = None
    for p, kids in f.children.items():
        if len(kids) == 2 and not f.children[kids[0]] and not f.children[kids[1]]:
            a, c = kids
            if min(f.leaf[c]) < min(f.leaf[a]):
                a, c = c, a
            key = min(f.leaf[a])
            if best is None or key < best[0]:
                best = (key, a, c)
    return best[1], best[2]


class _Search:
    def __init__(self, t1: RootedTree, t2: RootedTree, acyclic: bool):
        self.t1 = t1
        self.t2 = t2
        self.acyclic = acyclic
        self.nodes = 0

    def accept(self, blocks) -> bool:
        if not self.acyclic:
            return True
        forest = AgreementForest.from_blocks(blocks)
        return is_dag(inheritance_graph(self.t1, self.t2, forest))

    def run(self, k: int):
        return self.step(_Forest.from_tree(self.t1), _Forest.from_tree(self.t2), k)

    def step(self, f1: _Forest, f2: _Forest, k: int):
        self.nodes += 1
        while True:
            # a leaf that is already alone in F2 leaves F1 for free
            lone = [v for v, key in f1.leaf.items() if f2.parent[f2.node_of[key]] is None]
            if not lone:
                break
            for v in lone:
                f1.remove_leaf(v)
        if len(f1.leaf) <= 1:
            blocks = [key for v, key in f2.leaf.items() if f2.parent[v] is None]
            if len(blocks) != sum(1 for p in f2.parent.values() if p is None):
                raise AssertionError("F2 has a component without a composite leaf")
            return blocks if self.accept(blocks) else None

        a1, c1 = _sibling_pair(f1)
        ka, kc = f1.leaf[a1], f1.leaf[c1]
        a2, c2 = f2.node_of[ka], f2.node_of[kc]
        siblings = f2.parent[a2] == f2.parent[c2]
        if siblings and not self.acyclic:
            _merge(f1, a1, c1)
            _merge(f2, a2, c2)
            return self.step(f1, f2, k)

        pendants = [] if siblings else _path_pendants(f2, a2, c2)
        if pendants is not None and len(pendants) <= k:
            g1, g2 = f1.copy(), f2.copy()
            for w in pendants:
                g2.detach(w)
            _merge(g1, a1, c1)
            _merge(g2, a2, c2)
            found = self.step(g1, g2, k - len(pendants))
            if found is not None:
                return found
        if k == 0:
            return None
        for x in (a2, c2):
            g2 = f2.copy()
            g2.detach(x)
            found = self.step(f1.copy(), g2, k - 1)
            if found is not None:
                return found
        return None


def agreement_forest_within(t1: RootedTree, t2: RootedTree, k: int, acyclic: bool = False):
    """An (acyclic) agreement forest with at most k + 1 blocks, or None."""
    if t1.taxa != t2.taxa:
        raise TreeError("trees have different label sets")
    if k < 0:
        return None
    blocks = _Search(t1, t2, acyclic).run(k)
    return None if blocks is None else AgreementForest.from_blocks(blocks)


def _deepen(t1, t2, acyclic: bool, start: int, depth_cap: int):
    for k in range(start, depth_cap + 1):
        forest = agreement_forest_within(t1, t2, k, acyclic)
        if forest is not None:
            return len(forest) - 1, forest
    raise SolverLimitError(f"no solution within depth {depth_cap}")


def _lift(forest: AgreementForest, trace) -> AgreementForest:
    """Undo subtree and 3-2-chain reductions on a certificate, newest step first."""
    blocks = [set(b) for b in forest.blocks]
    for step in reversed(trace):
        if step.rule is Rule.SUBTREE:
            for b in blocks:
                if step.kept in b:
                    b.update(step.removed_labels)
                    break
        elif step.rule is Rule.CHAIN32:
            blocks.append(set(step.removed_labels))
        else:
            raise ValueError(f"cannot lift a {step.rule.value} step")
    return AgreementForest.from_blocks(blocks)


def rspr_distance(t1: RootedTree, t2: RootedTree, depth_cap: int = 12) -> tuple:
    """Exact rSPR distance with a maximum agreement forest of the input pair."""
    if t1.taxa != t2.taxa:
        raise TreeError("trees have different label sets")
    kernel = kernelize(t1, t2, Mode.RSPR)
    dk, forest = _deepen(kernel.s1, kernel.s2, False, 0, depth_cap)
    d = dk + kernel.offset
    if d > depth_cap:
        raise SolverLimitError(f"distance {d} exceeds depth {depth_cap}")
    if any(s.rule is Rule.CHAIN_RSPR for s in kernel.trace):
        # chain reductions do not lift; search the input pair at the known depth
        forest = agreement_forest_within(t1, t2, d)
    else:
        forest = _lift(forest, kernel.trace)
    return d, forest


def hybridization_number(t1: RootedTree, t2: RootedTree, depth_cap: int = 12) -> tuple:
    """Exact hybridization number with a maximum acyclic agreement forest."""
    if t1.taxa != t2.taxa:
        raise TreeError("trees have different label sets")
    kernel = kernelize(t1, t2, Mode.HYBRIDIZATION, phase_two=False)
    lower, _ = _deepen(kernel.s1, kernel.s2, False, 0, depth_cap)
    rk, forest = _deepen(kernel.s1, kernel.s2, True, lower, depth_cap)
    r = rk + kernel.offset
    if r > depth_cap:
        raise SolverLimitError(f"hybridization number {r} exceeds depth {depth_cap}")
    return r, _lift(forest, kernel.trace)
