"""Fitch parsimony on binary characters and the d2MP distance."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .forests import CapExceededError
from .tree import RootedTree, TreeError


@dataclass(frozen=True)
class BinaryCharacter:
    """A 0/1 state for every taxon in X (rho excluded)."""

    assignment: Mapping

    @classmethod
    def from_zero_set(cls, taxa, zeros) -> "BinaryCharacter":
        zeros = set(zeros)
        return cls({x: 0 if x in zeros else 1 for x in taxa})

    def __getitem__(self, label: str) -> int:
        return self.assignment[label]


def _states(t: RootedTree, f) -> dict:
    assignment = f.assignment if isinstance(f, BinaryCharacter) else f
    if set(assignment) != set(t.taxa):
        raise ValueError("character must be defined on exactly the taxa of the tree")
    if any(s not in (0, 1) for s in assignment.values()):
        raise ValueError("binary characters take values 0 and 1")
    return assignment


def fitch_score(t: RootedTree, f) -> int:
    """Parsimony score of ``f`` on the unrooted version of ``t``.

    Fitch's count on the rooted tree below rho is the same number: the score
    does not depend on where the tree is rooted.
    """
    assignment = _states(t, f)
    sets = [0] * len(t)
    score = 0
    for v in range(len(t) - 1, 0, -1):
        lab = t.label(v)
        if lab is not None:
            sets[v] = 1 << assignment[lab]
            continue
        a, b = (sets[c] for c in t.children(v))
        both = a & b
        if both:
            sets[v] = both
        else:
            sets[v] = a | b
            score += 1
    return score


def _unrooted_adjacency(t: RootedTree) -> dict:
    """Undirected adjacency after deleting rho and suppressing the old root."""
    adj = {v: set() for v in t.vertices if v != 0}
    for u, v in t.edges():
        if u != 0:
            adj[u].add(v)
            adj[v].add(u)
    top = t.top
    if len(adj[top]) == 2:
        a, b = adj.pop(top)
        adj[a].discard(top)
        adj[b].discard(top)
        adj[a].add(b)
        adj[b].add(a)
    return adj


def parsimony_score_bruteforce(t: RootedTree, f) -> int:
    """Minimum number of changing edges over every extension of ``f``.

    Exponential in the number of internal vertices; an oracle for tests.
    """
    assignment = _states(t, f)
    adj = _unrooted_adjacency(t)
    leaves = {v: assignment[t.label(v)] for v in adj if t.label(v) is not None}
    inner = [v for v in adj if v not in leaves]
    edges = [(u, v) for u in adj for v in adj[u] if u < v]
    best = len(edges)
    for states in itertools.product((0, 1), repeat=len(inner)):
        g = dict(leaves)
        g.update(zip(inner, states))
        best = min(best, sum(g[u] != g[v] for u, v in edges))
    return best


def _fitch_all(t: RootedTree, order: list, n_chars: int) -> np.ndarray:
    """Fitch scores of every character index in ``range(n_chars)``.

    Taxon ``order[0]`` is fixed to state 0; taxon ``order[i]`` takes bit i-1
    of the character index.
    """
    idx = np.arange(n_chars, dtype=np.int64)
    pos = {lab: i for i, lab in enumerate(order)}
    sets: dict = {}
    score = np.zeros(n_chars, dtype=np.int16)
    for v in range(len(t) - 1, 0, -1):
        lab = t.label(v)
        if lab is not None:
            i = pos[lab]
            state = np.zeros(n_chars, dtype=np.uint8) if i == 0 else ((idx >> (i - 1)) & 1).astype(np.uint8)
            sets[v] = np.left_shift(1, state).astype(np.uint8)
            continue
        a, b = (sets.pop(c) for c in t.children(v))
        both = a & b
        empty = both == 0
        score += empty
        sets[v] = np.where(empty, a | b, both)
    return score


def dmp2(t1: RootedTree, t2: RootedTree, cap: int = 20) -> int:
    """max over binary characters of |l_f(t1) - l_f(t2)|.

    Characters are enumerated as bitmasks with the first taxon fixed, which
    skips complements (they have identical scores).
    """
    if t1.taxa != t2.taxa:
        raise TreeError("trees have different label sets")
    n = t1.n_leaves
    if n > cap:
        raise CapExceededError(f"{n} leaves exceeds the cap of {cap}")
    if n <= 1:
        return 0
    order = sorted(t1.taxa)
    n_chars = 1 << (n - 1)
    diff = _fitch_all(t1, order, n_chars).astype(np.int32) - _fitch_all(t2, order, n_chars)
    return int(np.abs(diff).max())


def character_gap(t1: RootedTree, t2: RootedTree, f) -> int:
    return abs(fitch_score(t1, f) - fitch_score(t2, f))

