"""Random trees, tree pairs and graphs for tests and experiments."""

from __future__ import annotations

import random
from typing import Sequence

from .networks import LeafLabeledGraph, require_valid
from .tree import RootedTree


def default_labels(n: int) -> list:
    return [f"x{i}" for i in range(1, n + 1)]


def _insert(nested, target_path: tuple, leaf: str):
    """Put ``leaf`` as a sibling of the subtree at ``target_path``."""
    if not target_path:
        return (nested, leaf)
    i = target_path[0]
    kids = list(nested)
    kids[i] = _insert(kids[i], target_path[1:], leaf)
    return tuple(kids)


def _paths(nested, prefix=()):
    yield prefix
    if isinstance(nested, tuple):
        for i, c in enumerate(nested):
            yield from _paths(c, prefix + (i,))


def uniform_tree(labels: Sequence[str], rng: random.Random) -> RootedTree:
    """Uniformly random rooted binary tree (stepwise addition onto a random edge)."""
    labels = list(labels)
    rng.shuffle(labels)
    nested = labels[0]
    for leaf in labels[1:]:
        paths = list(_paths(nested))
        nested = _insert(nested, rng.choice(paths), leaf)
    return RootedTree.from_nested(nested)


def yule_tree(labels: Sequence[str], rng: random.Random) -> RootedTree:
    """Yule-Harding tree: repeatedly split a uniformly chosen leaf."""
    labels = list(labels)
    rng.shuffle(labels)
    nested = labels[0]
    for leaf in labels[1:]:
        leaves = [p for p in _paths(nested) if _at(nested, p).__class__ is str]
        nested = _insert(nested, rng.choice(leaves), leaf)
    return RootedTree.from_nested(nested)


def _at(nested, path):
    for i in path:
        nested = nested[i]
    return nested


def _remove(nested, path):
    """Tree with the subtree at ``path`` pruned and its parent suppressed."""
    if len(path) == 1:
        return nested[1 - path[0]]
    kids = list(nested)
    kids[path[0]] = _remove(kids[path[0]], path[1:])
    return tuple(kids)


def random_spr(t: RootedTree, rng: random.Random) -> RootedTree:
    """Apply one random rSPR move (which may leave the tree unchanged)."""
    nested = t.nested()
    if isinstance(nested, str):
        return t
    paths = [p for p in _paths(nested) if p]
    prune = rng.choice(paths)
    sub = _at(nested, prune)
    rest = _remove(nested, prune)
    target = rng.choice(list(_paths(rest)))
    return RootedTree.from_nested(_insert(rest, target, sub))


def spr_walk(t: RootedTree, moves: int, rng: random.Random) -> RootedTree:
    for _ in range(moves):
        t = random_spr(t, rng)
    return t


def random_pair(n: int, rng: random.Random, shape: str = "uniform", moves: int | None = None) -> tuple:
    """A tree and a second tree on the same labels.

    With ``moves`` the second tree is a random rSPR walk from the first;
    otherwise it is drawn independently.
    """
    make = uniform_tree if shape == "uniform" else yule_tree
    labels = default_labels(n)
    t1 = make(labels, rng)
    t2 = spr_walk(t1, moves, rng) if moves is not None else make(labels, rng)
    return t1, t2


def chain32_witness(n_extra: int, rng: random.Random) -> tuple:
    """A pair where (x1, x2, x3) is a pendant 3-chain of the first tree and
    (x_i, x3) a cherry of the second; returns (t1, t2, x_j)."""
    base = default_labels(n_extra + 1)
    x1, x2, x3 = "c1", "c2", "c3"
    xi, xj = (x1, x2) if rng.random() < 0.5 else (x2, x1)
    n1 = uniform_tree(base, rng).nested()
    n2 = uniform_tree(base, rng).nested()

    def replace(nested, leaf, sub):
        if nested == leaf:
            return sub
        if isinstance(nested, str):
            return nested
        return tuple(replace(c, leaf, sub) for c in nested)

    y = rng.choice(base)
    n1 = replace(n1, y, ((x1, x2), x3))
    n2 = replace(n2, y, (xi, x3))
    # inserting next to x_i or x3 would break their cherry
    spots = [p for p in _paths(n2) if _at(n2, p) not in (xi, x3)]
    n2 = _insert(n2, rng.choice(spots), xj)
    return RootedTree.from_nested(n1), RootedTree.from_nested(n2), xj


def random_graph(n: int, r: int, rng: random.Random, labels: Sequence[str] | None = None) -> LeafLabeledGraph:
    """A valid leaf-labelled graph with ``r`` reticulations; it may contain cycles.

    Starts from a random tree and repeatedly joins a point on one edge to a
    point on another edge.
    """
    t = uniform_tree(labels or default_labels(n), rng)
    edges = list(t.edges())
    labels_map = {v: t.label(v) for v in t.vertices if t.label(v) is not None}
    nxt = len(t)
    for _ in range(r):
        e1, e2 = rng.sample(edges, 2)
        s, h = nxt, nxt + 1
        nxt += 2
        edges.remove(e1)
        edges.remove(e2)
        edges += [(e1[0], s), (s, e1[1]), (e2[0], h), (h, e2[1]), (s, h)]
    g = LeafLabeledGraph(edges, labels_map)
    require_valid(g)
    return g


def collapse_pendant_subtrees(g: LeafLabeledGraph) -> LeafLabeledGraph:
    """Replace every maximal reticulation-free pendant subtree by its smallest leaf."""
    rets = set(g.reticulations)
    free = {}
    for v in g.vertices:
        if v != g.root and v not in g.labels:
            free[v] = rets.isdisjoint(_below(g, v))
    tops = [v for v, ok in free.items() if ok and not free.get(g.pred[v][0], False)]
    drop = set()
    relabel = {}
    for v in tops:
        below = _below(g, v)
        drop |= below
        relabel[v] = min(g.labels[u] for u in below if u in g.labels)
    edges = [(u, w) for u, w in g.edges if u not in drop and (w not in drop or w in relabel)]
    labels = {v: lab for v, lab in g.labels.items() if v not in drop}
    labels.update(relabel)
    out = LeafLabeledGraph(edges, labels)
    require_valid(out)
    return out


def _below(g: LeafLabeledGraph, v) -> set:
    seen = {v}
    todo = [v]
    while todo:
        u = todo.pop()
        for w in g.succ[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def random_generator_graph(n: int, r: int, rng: random.Random) -> LeafLabeledGraph:
    """A random graph with no pendant subtree on two or more leaves."""
    return collapse_pendant_subtrees(random_graph(n, r, rng))
