"""Tree pairs whose kernels meet the 9k - 3 and 7k - 2 leaf bounds exactly.

The backbone for parameter k is a spine rho -> u1 -> ... -> u(2k-1).  Vertex
side v_i takes its left in-edge from u_i and its right in-edge from a spine
vertex further down (u(k+i) by default, with the last spine vertex feeding the
last two).  One leaf goes on each vertex side and on each edge into a vertex
side; every spine edge gets three leaves (rSPR) or two (hybridization).  The
two trees are what remains after dropping all right, respectively all left,
reticulation edges.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from .forests import CapExceededError
from .networks import (
    CyclicGenerator,
    LeafLabeledGraph,
    _attach,
    displays,
    enumerate_sides,
    reticulation_count,
    switching_tree,
)
from .parsimony import BinaryCharacter, character_gap, dmp2
from .reductions import Mode, applicable_rules, kernel_bound
from .solver import agreement_forest_within
from .tree import RootedTree

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TightFamily:
    k: int
    mode: Mode
    generator: CyclicGenerator
    graph: LeafLabeledGraph
    s1: RootedTree
    s2: RootedTree
    right_parents: tuple

    @property
    def expected_leaves(self) -> int:
        return kernel_bound(self.k, self.mode)


@dataclass(frozen=True)
class TightnessReport:
    k: int
    mode: Mode
    leaf_count: int
    expected_leaves: int
    irreducible: bool
    applicable: tuple
    upper_bound: int | None
    lower_bound: int
    certificate_kind: str | None  # "mp2_character", "solver_exhaustion" or None
    character_gap: int
    dmp2: int | None = None

    @property
    def tight(self) -> bool:
        return (
            self.irreducible
            and self.upper_bound == self.k
            and self.lower_bound == self.k
            and self.leaf_count == self.expected_leaves
        )


def default_right_parents(k: int) -> tuple:
    """Spine index of the right parent of v_1 .. v_k."""
    return tuple(min(k + i, 2 * k - 1) for i in range(1, k + 1))


def _backbone(k: int, right_parents) -> tuple:
    """Generator plus the edge indices of left and right reticulation edges."""
    edges = [("rho", "u1")] + [(f"u{j}", f"u{j + 1}") for j in range(1, 2 * k - 1)]
    left, right = [], []
    for i in range(1, k + 1):
        left.append(len(edges))
        edges.append((f"u{i}", f"v{i}"))
        right.append(len(edges))
        edges.append((f"u{right_parents[i - 1]}", f"v{i}"))
    return CyclicGenerator(tuple(edges), "rho"), left, right


def _check_right_parents(k: int, right_parents) -> tuple:
    right_parents = tuple(right_parents)
    slots = sorted(default_right_parents(k))
    if len(right_parents) != k or sorted(right_parents) != slots:
        raise ValueError(f"right parents must use the spine slots {slots} once each")
    return right_parents


def build_tight(k: int, mode: Mode = Mode.RSPR, right_parents=None) -> TightFamily:
    if k < 1:
        raise ValueError("k must be at least 1")
    mode = Mode(mode)
    if k == 1:
        logger.warning("k = 1 forces parallel edges; the pair is reported, not assumed tight")
    right_parents = _check_right_parents(k, right_parents or default_right_parents(k))
    gen, left, right = _backbone(k, right_parents)
    edge_sides, vertex_sides = enumerate_sides(gen)
    per_spine = 3 if mode is Mode.RSPR else 2
    assignment: dict = {}
    for side in edge_sides:
        if side.index in left:
            assignment[side] = [f"l{left.index(side.index) + 1}"]
        elif side.index in right:
            assignment[side] = [f"r{right.index(side.index) + 1}"]
        else:
            j = side.index + 1  # spine edge into u_j
            assignment[side] = [f"s{j}{c}" for c in "abc"[:per_spine]]
    for side in vertex_sides:
        assignment[side] = side.vertex.replace("v", "y")
    graph, points = _attach(gen, assignment)

    def kept(indices):
        return {("g", f"v{i + 1}"): points[edge_sides[e]][-1] for i, e in enumerate(indices)}

    s1 = switching_tree(graph, kept(left))
    s2 = switching_tree(graph, kept(right))
    return TightFamily(k, mode, gen, graph, s1, s2, right_parents)


def separating_character(fam: TightFamily) -> BinaryCharacter:
    """The "zero below one vertex of s1" character with the largest Fitch gap."""
    s1, s2 = fam.s1, fam.s2
    best = (0, BinaryCharacter.from_zero_set(s1.taxa, ()))
    for v in range(1, len(s1)):
        f = BinaryCharacter.from_zero_set(s1.taxa, s1.cluster(v))
        gap = character_gap(s1, s2, f)
        if gap > best[0]:
            best = (gap, f)
    return best[1]


def verify_tightness(fam: TightFamily, char_cap: int = 20, depth_cap: int = 12) -> TightnessReport:
    """Check irreducibility, the displaying upper bound and a lower-bound certificate."""
    s1, s2, k = fam.s1, fam.s2, fam.k
    rules = tuple(r.value for r in applicable_rules(s1, s2, fam.mode))
    upper = None
    if displays(fam.graph, s1) is not None and displays(fam.graph, s2) is not None:
        upper = reticulation_count(fam.graph)

    gap = character_gap(s1, s2, separating_character(fam))
    exact_mp2 = None
    if s1.n_leaves <= char_cap:
        try:
            exact_mp2 = dmp2(s1, s2, cap=char_cap)
        except CapExceededError:
            exact_mp2 = None
    lower, kind = gap, "mp2_character" if gap > 0 else None
    if lower < k and k - 1 <= depth_cap:
        # the rSPR distance bounds the hybridization number from below, so a
        # failed unrestricted search certifies both
        if agreement_forest_within(s1, s2, k - 1) is None:
            lower, kind = k, "solver_exhaustion"
    return TightnessReport(
        k=k,
        mode=fam.mode,
        leaf_count=s1.n_leaves,
        expected_leaves=fam.expected_leaves,
        irreducible=not rules,
        applicable=rules,
        upper_bound=upper,
        lower_bound=lower,
        certificate_kind=kind,
        character_gap=gap,
        dmp2=exact_mp2,
    )


def search_tight(k: int, mode: Mode = Mode.RSPR, char_cap: int = 20, depth_cap: int = 12):
    """Try every ordering of right parents; return the first tight family and its report."""
    last = None
    for order in dict.fromkeys(itertools.permutations(default_right_parents(k))):
        fam = build_tight(k, mode, order)
        report = verify_tightness(fam, char_cap, depth_cap)
        if report.tight:
            return fam, report
        last = (fam, report)
    return last
