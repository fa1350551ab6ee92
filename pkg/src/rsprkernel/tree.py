"""Rooted binary phylogenetic trees and the structural primitives built on them.

Every tree carries a formal root leaf labelled :data:`RHO` that sits above the
original root on a pendant edge.  Vertices are numbered in preorder, so a
vertex id is always larger than the ids of its ancestors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

RHO = "__rho__"

Nested = Union[str, tuple]


class TreeError(ValueError):
    """Raised for malformed trees or invalid label arguments."""


def _validate_label(label) -> None:
    if not isinstance(label, str) or not label:
        raise TreeError(f"leaf labels must be non-empty strings, got {label!r}")
    if label == RHO:
        raise TreeError(f"the label {RHO!r} is reserved for the root")


class RootedTree:
    """An immutable rooted binary phylogenetic X-tree with the root leaf rho.

    Build one from a nested structure of labels, e.g.
    ``RootedTree.from_nested((("a", "b"), "c"))``.  Equality and hashing are
    label-preserving isomorphism.
    """

    __slots__ = ("_parent", "_children", "_label", "_vertex", "_minlabel", "_nested", "_clusters", "_depth")

    def __init__(self, parent: Sequence[int], children: Sequence[tuple], label: Sequence):
        self._parent = tuple(parent)
        self._children = tuple(tuple(c) for c in children)
        self._label = tuple(label)
        self._vertex = {lab: v for v, lab in enumerate(self._label) if lab is not None}
        self._clusters = None
        self._check()
        self._canonicalize()
        depth = [0] * len(self._parent)
        for v in range(1, len(self._parent)):
            depth[v] = depth[self._parent[v]] + 1
        self._depth = tuple(depth)

    @classmethod
    def from_nested(cls, nested: Nested) -> "RootedTree":
        parent = [-1]
        children: list[list[int]] = [[]]
        label: list = [RHO]
        stack = [(nested, 0)]
        while stack:
            node, par = stack.pop()
            v = len(parent)
            parent.append(par)
            children.append([])
            children[par].append(v)
            if isinstance(node, str):
                label.append(node)
                continue
            if not isinstance(node, tuple) or len(node) != 2:
                raise TreeError(f"internal vertices must have exactly two children, got {node!r}")
            label.append(None)
            # reversed so the first child is popped (and numbered) first
            for child in reversed(node):
                stack.append((child, v))
        # renumber into strict preorder (the stack above already yields preorder)
        return cls(parent, children, label)

    def _check(self) -> None:
        if not self._label or self._label[0] != RHO or self._parent[0] != -1:
            raise TreeError("vertex 0 must be the root leaf rho")
        if len(self._children[0]) != 1:
            raise TreeError("rho must have out-degree 1")
        seen = set()
        for v in range(1, len(self._label)):
            lab = self._label[v]
            kids = self._children[v]
            if lab is None:
                if len(kids) != 2:
                    raise TreeError(f"vertex {v} is not binary")
            else:
                _validate_label(lab)
                if kids:
                    raise TreeError(f"labelled vertex {lab!r} is not a leaf")
                if lab in seen:
                    raise TreeError(f"duplicate leaf label {lab!r}")
                seen.add(lab)
            if self._parent[v] >= v:
                raise TreeError("vertices must be numbered in preorder")

    def _canonicalize(self) -> None:
        n = len(self._label)
        minlabel: list = [None] * n
        nested: list = [None] * n
        for v in range(n - 1, 0, -1):
            if self._label[v] is not None:
                minlabel[v] = self._label[v]
                nested[v] = self._label[v]
            else:
                a, b = self._children[v]
                if minlabel[b] < minlabel[a]:
                    a, b = b, a
                minlabel[v] = minlabel[a]
                nested[v] = (nested[a], nested[b])
        self._minlabel = tuple(minlabel)
        self._nested = nested[self._children[0][0]]

    # -- basic accessors -------------------------------------------------
    @property
    def root(self) -> int:
        return 0

    @property
    def top(self) -> int:
        """The original root, i.e. the child of rho."""
        return self._children[0][0]

    def __len__(self) -> int:
        return len(self._label)

    @property
    def vertices(self) -> range:
        return range(len(self._label))

    @property
    def taxa(self) -> frozenset:
        """The leaf set X (rho excluded)."""
        return frozenset(lab for lab in self._label[1:] if lab is not None)

    @property
    def labels(self) -> frozenset:
        """L(T) = X together with rho."""
        return frozenset(self._vertex)

    @property
    def n_leaves(self) -> int:
        return len(self._vertex) - 1

    def parent(self, v: int) -> int:
        return self._parent[v]

    def children(self, v: int) -> tuple:
        return self._children[v]

    def label(self, v: int):
        return self._label[v]

    def vertex(self, label: str) -> int:
        try:
            return self._vertex[label]
        except KeyError:
            raise TreeError(f"unknown label {label!r}") from None

    def is_leaf(self, v: int) -> bool:
        return not self._children[v]

    def depth(self, v: int) -> int:
        return self._depth[v]

    def sibling(self, v: int):
        p = self._parent[v]
        if p <= 0:
            return None
        a, b = self._children[p]
        return b if a == v else a

    def min_label(self, v: int) -> str:
        return self._minlabel[v]

    def cluster(self, v: int) -> frozenset:
        """Labels of X below v (rho is never part of a cluster)."""
        if self._clusters is None:
            clusters: list = [None] * len(self._label)
            for u in range(len(self._label) - 1, 0, -1):
                if self._label[u] is not None:
                    clusters[u] = frozenset((self._label[u],))
                else:
                    a, b = self._children[u]
                    clusters[u] = clusters[a] | clusters[b]
            clusters[0] = clusters[self.top]
            self._clusters = tuple(clusters)
        return self._clusters[v]

    def is_ancestor(self, u: int, v: int) -> bool:
        """True if u lies on the path from rho to v (u == v included)."""
        while v > u:
            v = self._parent[v]
        return v == u

    def descendants(self, v: int) -> list:
        out = [v]
        i = 0
        while i < len(out):
            out.extend(self._children[out[i]])
            i += 1
        return out

    def lca(self, vertices: Iterable[int]) -> int:
        it = iter(vertices)
        acc = next(it)
        for v in it:
            a, b = acc, v
            while a != b:
                if a > b:
                    a = self._parent[a]
                else:
                    b = self._parent[b]
            acc = a
        return acc

    def span(self, labels: Iterable[str]) -> frozenset:
        """Vertex set of T[labels], the minimal subtree connecting the labels."""
        verts = [self.vertex(lab) for lab in labels]
        if not verts:
            return frozenset()
        top = self.lca(verts)
        out = {top}
        for v in verts:
            while v != top and v not in out:
                out.add(v)
                v = self._parent[v]
        return frozenset(out)

    def nested(self) -> Nested:
        """Canonical nested form: children ordered by smallest contained label."""
        return self._nested

    def edges(self) -> list:
        return [(self._parent[v], v) for v in range(1, len(self._label))]

    def cherries(self) -> list:
        """All pairs of sibling leaves, each as a label pair in sorted order."""
        out = []
        for v in range(1, len(self._label)):
            kids = self._children[v]
            if kids and all(self._label[c] is not None for c in kids):
                out.append(tuple(sorted(self._label[c] for c in kids)))
        return sorted(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self._nested == other._nested

    def __hash__(self) -> int:
        return hash(self._nested)

    def __repr__(self) -> str:
        return f"RootedTree({_nested_to_text(self._nested)})"


def _nested_to_text(nested: Nested) -> str:
    if isinstance(nested, str):
        return nested
    return "(" + ",".join(_nested_to_text(c) for c in nested) + ")"


def restrict(t: RootedTree, labels: Iterable[str]) -> RootedTree:
    """T|labels: the minimal connecting subtree with unary vertices suppressed.

    rho may or may not be included in ``labels``; the result always carries it.
    """
    keep = set(labels)
    keep.discard(RHO)
    for lab in keep:
        t.vertex(lab)
    if not keep:
        raise TreeError("cannot restrict to an empty leaf set")
    n = len(t)
    part: list = [None] * n
    for v in range(n - 1, 0, -1):
        lab = t.label(v)
        if lab is not None:
            part[v] = lab if lab in keep else None
            continue
        a, b = (part[c] for c in t.children(v))
        if a is None:
            part[v] = b
        elif b is None:
            part[v] = a
        else:
            part[v] = (a, b)
    return RootedTree.from_nested(part[t.top])


def is_isomorphic(t1: RootedTree, t2: RootedTree) -> bool:
    if t1.taxa != t2.taxa:
        raise TreeError("trees have different label sets")
    return t1.nested() == t2.nested()


def _same_taxa(t1: RootedTree, t2: RootedTree) -> None:
    if t1.taxa != t2.taxa:
        raise TreeError("trees have different label sets")


def _subtree_nested(t: RootedTree, v: int) -> Nested:
    # canonical forms of subtrees agree with restriction to the cluster
    return restrict(t, t.cluster(v)).nested() if t.label(v) is None else t.label(v)


def maximal_common_pendant_subtrees(t1: RootedTree, t2: RootedTree) -> list:
    """Leaf sets (size >= 2) of maximal pendant subtrees common to both trees.

    Returned sorted by smallest label; the sets are pairwise disjoint.
    """
    _same_taxa(t1, t2)
    where2 = {t2.cluster(v): v for v in range(1, len(t2)) if t2.label(v) is None}
    common = []
    for v in range(1, len(t1)):
        if t1.label(v) is not None:
            continue
        c = t1.cluster(v)
        u = where2.get(c)
        if u is None:
            continue
        if _subtree_nested(t1, v) == _subtree_nested(t2, u):
            common.append(c)
    maximal = [c for c in common if not any(c < d for d in common)]
    return sorted(maximal, key=min)


# -- chains ---------------------------------------------------------------

def _grandparent(t: RootedTree, v: int):
    p = t.parent(v)
    return t.parent(p) if p > 0 else -1


def _first_link(t: RootedTree, a: str, b: str) -> bool:
    """Condition on the first two chain entries."""
    va, vb = t.vertex(a), t.vertex(b)
    pa, pb = t.parent(va), t.parent(vb)
    return pa == pb or pb == _grandparent(t, va)


def _ladder_link(t: RootedTree, a: str, b: str) -> bool:
    """Condition on consecutive entries from the third position on."""
    va, vb = t.vertex(a), t.vertex(b)
    return t.parent(vb) == _grandparent(t, va)


def is_chain(t: RootedTree, seq: Sequence[str]) -> bool:
    """Whether ``seq`` (length >= 2, no rho) is a chain of ``t``."""
    if len(seq) < 2 or len(set(seq)) != len(seq) or RHO in seq:
        return False
    for lab in seq:
        t.vertex(lab)
    if not _first_link(t, seq[0], seq[1]):
        return False
    return all(_ladder_link(t, seq[i - 1], seq[i]) for i in range(2, len(seq)))


def is_pendant_chain(t: RootedTree, seq: Sequence[str]) -> bool:
    if not is_chain(t, seq):
        return False
    return t.parent(t.vertex(seq[0])) == t.parent(t.vertex(seq[1]))


@dataclass(frozen=True)
class Chain:
    """A chain common to two trees.

    ``pendant`` holds, per tree, whether the first two leaves are siblings.
    """

    leaves: tuple
    pendant: tuple = (False, False)

    def __len__(self) -> int:
        return len(self.leaves)


def _first_candidates(t: RootedTree, b: str) -> list:
    """Leaves a with (a, b) satisfying the first-link condition in t."""
    vb = t.vertex(b)
    s = t.sibling(vb)
    if s is None:
        return []
    if t.label(s) is not None:
        return [t.label(s)]
    return [t.label(c) for c in t.children(s) if t.label(c) is not None]


def _ladder_successor(t: RootedTree, a: str):
    va = t.vertex(a)
    p = t.parent(va)
    if p <= 0:
        return None
    s = t.sibling(p)
    if s is None or t.label(s) is None:
        return None
    return t.label(s)


def all_maximal_common_chains(t1: RootedTree, t2: RootedTree) -> list:
    """Every maximal common chain, possibly sharing leaves.

    Pendant-swap duplicates are merged (smaller label first).
    """
    _same_taxa(t1, t2)
    trees = (t1, t2)
    succ = {}
    for a in t1.taxa:
        b = _ladder_successor(t1, a)
        if b is not None and _ladder_link(t2, a, b):
            succ[a] = b

    def first_common(a, b):
        return all(_first_link(t, a, b) for t in trees)

    found = {}
    for b in sorted(t1.taxa):
        for a in _first_candidates(t1, b):
            if not _first_link(t2, a, b):
                continue
            seq = [a, b]
            while seq[-1] in succ and succ[seq[-1]] not in seq:
                seq.append(succ[seq[-1]])
            front = succ.get(a) == b and any(
                first_common(y, a) for y in _first_candidates(t1, a) if y not in seq
            )
            if front:
                continue
            pendant = tuple(t.parent(t.vertex(a)) == t.parent(t.vertex(b)) for t in trees)
            if all(pendant) and b < a:
                seq[0], seq[1] = b, a
            found[tuple(seq)] = Chain(tuple(seq), pendant)
    return sorted(found.values(), key=lambda c: c.leaves)


def maximal_common_chains(t1: RootedTree, t2: RootedTree) -> list:
    """Leaf-disjoint maximal common chains.

    When two maximal chains share a leaf, the one whose first label is
    lexicographically smaller is kept.
    """
    kept = []
    used: set = set()
    for chain in all_maximal_common_chains(t1, t2):
        if used.isdisjoint(chain.leaves):
            kept.append(chain)
            used.update(chain.leaves)
    return kept
