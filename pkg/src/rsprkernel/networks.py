"""Rooted leaf-labelled graphs, display checking and cyclic generators.

A leaf-labelled graph may contain directed cycles.  Its reticulation number
is |E| - (|V| - 1).  Two constructions connect graphs with agreement forests:
:func:`graph_from_forest` glues the components of a forest into a graph that
displays both trees, and :func:`forest_from_graph` cuts a displaying graph
back into an agreement forest.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

import networkx as nx

from .tree import RHO, RootedTree, TreeError, restrict
from .forests import AgreementForest


class GraphValidationError(ValueError):
    def __init__(self, report: "ValidationReport"):
        super().__init__(report.message)
        self.report = report


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violated: str | None = None  # one of "structure", "i", "ii", "iii", "iv"
    vertex: Hashable = None
    message: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def _sort_key(v):
    # integers in numeric order, everything else by its text
    if isinstance(v, int):
        return ("int", v)
    return (type(v).__name__, str(v))


class LeafLabeledGraph:
    """Rooted directed graph whose out-degree-0 vertices carry the labels X.

    ``labels`` maps vertex ids to labels and must include the root (labelled
    rho).  Construction does not validate; see :func:`validate_graph`.
    """

    def __init__(self, edges: Iterable[tuple], labels: Mapping, vertices: Iterable = ()):
        self.edges = tuple(tuple(e) for e in edges)
        self.labels = dict(labels)
        verts = dict.fromkeys(vertices)
        for u, v in self.edges:
            verts.setdefault(u)
            verts.setdefault(v)
        for v in self.labels:
            verts.setdefault(v)
        self.vertices = tuple(verts)
        self.succ = {v: [] for v in self.vertices}
        self.pred = {v: [] for v in self.vertices}
        for u, v in self.edges:
            self.succ[u].append(v)
            self.pred[v].append(u)
        roots = [v for v, lab in self.labels.items() if lab == RHO]
        self.root = roots[0] if len(roots) == 1 else None
        self._vertex_of = {lab: v for v, lab in self.labels.items()}

    @classmethod
    def from_tree(cls, t: RootedTree) -> "LeafLabeledGraph":
        labels = {v: t.label(v) for v in t.vertices if t.label(v) is not None}
        return cls(t.edges(), labels, t.vertices)

    @property
    def taxa(self) -> frozenset:
        return frozenset(lab for lab in self.labels.values() if lab != RHO)

    def vertex(self, label: str):
        return self._vertex_of[label]

    @property
    def reticulations(self) -> list:
        return sorted((v for v in self.vertices if len(self.pred[v]) == 2), key=_sort_key)

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for v in self.vertices:
            g.add_node(v, label=self.labels.get(v))
        g.add_edges_from(self.edges)
        return g

    def __repr__(self) -> str:
        return f"LeafLabeledGraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, taxa={sorted(self.taxa)})"


def validate_graph(g: LeafLabeledGraph) -> ValidationReport:
    """Check the four defining properties; report the first violation."""
    seen = set()
    for u, v in g.edges:
        if u == v:
            return ValidationReport(False, "structure", u, f"loop at {u!r}")
        if (u, v) in seen:
            return ValidationReport(False, "structure", u, f"parallel edge {u!r}->{v!r}")
        seen.add((u, v))
    rhos = [v for v, lab in g.labels.items() if lab == RHO]
    if len(rhos) != 1:
        return ValidationReport(False, "i", None, f"expected exactly one vertex labelled rho, found {len(rhos)}")
    root = rhos[0]
    if g.pred[root] or len(g.succ[root]) != 1:
        return ValidationReport(False, "i", root, "rho must have in-degree 0 and out-degree 1")
    for v in g.vertices:
        if v != root and not g.pred[v]:
            return ValidationReport(False, "i", v, f"second vertex {v!r} with in-degree 0")
    counts = Counter(g.labels.values())
    for lab, c in counts.items():
        if c > 1:
            return ValidationReport(False, "ii", None, f"label {lab!r} used {c} times")
    for v in g.vertices:
        if v == root:
            continue
        nin, nout = len(g.pred[v]), len(g.succ[v])
        labelled = v in g.labels
        if nout == 0:
            if not labelled:
                return ValidationReport(False, "ii", v, f"unlabelled vertex {v!r} with out-degree 0")
            if nin != 1:
                return ValidationReport(False, "ii", v, f"leaf {g.labels[v]!r} has in-degree {nin}")
        elif labelled:
            return ValidationReport(False, "ii", v, f"labelled vertex {g.labels[v]!r} has out-degree {nout}")
        elif (nin, nout) not in ((1, 2), (2, 1)):
            return ValidationReport(False, "iii", v, f"vertex {v!r} has in-degree {nin} and out-degree {nout}")
    reached = _reachable(g.succ, root)
    for v in g.vertices:
        if v not in reached:
            return ValidationReport(False, "iv", v, f"vertex {v!r} is not reachable from rho")
    return ValidationReport(True)


def _reachable(succ: Mapping, start) -> set:
    seen = {start}
    todo = [start]
    while todo:
        u = todo.pop()
        for w in succ[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def require_valid(g: LeafLabeledGraph) -> None:
    report = validate_graph(g)
    if not report:
        raise GraphValidationError(report)


def reticulation_count(g: LeafLabeledGraph) -> int:
    require_valid(g)
    r = len(g.edges) - (len(g.vertices) - 1)
    assert r == len(g.reticulations), "edge formula disagrees with in-degree count"
    return r


# -- display ---------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingWitness:
    """How a tree sits inside a graph.

    ``switching`` keeps one in-edge per reticulation.  ``subdivision_edges``
    is a subdivision of the first tree; ``spanning_edges`` extends a
    subdivision of the second tree to a spanning tree, and ``cut_set`` holds
    the subdivision edges that are missing from it.
    """

    switching: Mapping
    subdivision_edges: frozenset
    spanning_edges: frozenset = frozenset()
    cut_set: frozenset = frozenset()


def _nested_from_arborescence(children: Mapping, labels: Mapping, root):
    """Nested form of the labelled tree hanging below ``root``.

    Unlabelled dead ends are dropped and unary vertices are suppressed.
    """
    out: dict = {}
    order = []
    stack = [root]
    while stack:
        u = stack.pop()
        order.append(u)
        stack.extend(children.get(u, ()))
    for u in reversed(order):
        if u in labels and u != root:
            out[u] = labels[u]
            continue
        parts = [out[c] for c in children.get(u, ()) if out[c] is not None]
        if not parts:
            out[u] = None
        elif len(parts) == 1:
            out[u] = parts[0]
        else:
            out[u] = tuple(parts)
    return out[root]


def _switched_children(g: LeafLabeledGraph, keep: Mapping) -> dict:
    children = {v: [] for v in g.vertices}
    for u, v in g.edges:
        if len(g.pred[v]) == 2 and keep[v] != u:
            continue
        children[u].append(v)
    return children


def _cleaned_edges(g: LeafLabeledGraph, children: Mapping) -> frozenset | None:
    """Edges of the switched graph after pruning; None if a leaf is lost."""
    reached = _reachable(children, g.root)
    if any(v not in reached for v in g.labels):
        return None
    useful = {}

    def is_useful(v):
        # iterative post-order so deep graphs do not hit the recursion limit
        stack = [(v, False)]
        while stack:
            u, done = stack.pop()
            if u in useful:
                continue
            if done:
                useful[u] = u in g.labels or any(useful[c] for c in children[u])
            else:
                stack.append((u, True))
                stack.extend((c, False) for c in children[u] if c not in useful)
        return useful[v]

    is_useful(g.root)
    return frozenset((u, v) for u in reached for v in children[u] if useful.get(v))


def switching_tree(g: LeafLabeledGraph, keep: Mapping):
    """Tree obtained by keeping the in-edge ``keep[r]`` at each reticulation.

    Returns None when some leaf becomes unreachable.
    """
    children = _switched_children(g, keep)
    if _cleaned_edges(g, children) is None:
        return None
    nested = _nested_from_arborescence(children, g.labels, g.root)
    return RootedTree.from_nested(nested)


def _switchings(g: LeafLabeledGraph):
    rets = g.reticulations
    parents = {r: sorted(g.pred[r], key=_sort_key) for r in rets}
    for mask in range(1 << len(rets)):
        yield {r: parents[r][(mask >> i) & 1] for i, r in enumerate(rets)}


def displays(g: LeafLabeledGraph, t: RootedTree):
    """An :class:`EmbeddingWitness` if ``g`` displays ``t``, else None."""
    if g.taxa != t.taxa:
        raise TreeError("graph and tree have different label sets")
    target = t.nested()
    for keep in _switchings(g):
        children = _switched_children(g, keep)
        edges = _cleaned_edges(g, children)
        if edges is None:
            continue
        found = RootedTree.from_nested(_nested_from_arborescence(children, g.labels, g.root))
        if found.nested() == target:
            return EmbeddingWitness(keep, edges)
    return None


def embedding_witness(g: LeafLabeledGraph, t1: RootedTree, t2: RootedTree) -> EmbeddingWitness:
    """Subdivision of ``t1``, spanning extension of a subdivision of ``t2``, and the cut set."""
    w1 = displays(g, t1)
    w2 = displays(g, t2)
    if w1 is None or w2 is None:
        raise ValueError("graph does not display both trees")
    spanning = set(w2.subdivision_edges)
    covered = {g.root} | {v for e in spanning for v in e}
    queue = deque(sorted(covered, key=_sort_key))
    while queue:
        u = queue.popleft()
        for v in sorted(g.succ[u], key=_sort_key):
            if v not in covered:
                covered.add(v)
                spanning.add((u, v))
                queue.append(v)
    assert len(spanning) == len(g.vertices) - 1
    cut = w1.subdivision_edges - spanning
    return EmbeddingWitness(w1.switching, w1.subdivision_edges, frozenset(spanning), frozenset(cut))


def _cleanup_components(vertices: set, edges: set, labels: Mapping, root) -> None:
    """Apply the three clean-up rules in place until none applies."""
    succ = {v: set() for v in vertices}
    pred = {v: set() for v in vertices}
    for u, v in edges:
        succ[u].add(v)
        pred[v].add(u)
    changed = True
    while changed:
        changed = False
        for v in sorted(vertices, key=_sort_key):
            if v not in vertices:
                continue
            if v != root and not pred[v] and len(succ[v]) == 1:
                (w,) = succ[v]
                pred[w].discard(v)
            elif v not in labels and not succ[v]:
                for u in pred[v]:
                    succ[u].discard(v)
            elif len(pred[v]) == 1 and len(succ[v]) == 1 and v not in labels:
                (u,), (w,) = pred[v], succ[v]
                succ[u].discard(v)
                pred[w].discard(v)
                succ[u].add(w)
                pred[w].add(u)
            else:
                continue
            vertices.discard(v)
            del succ[v], pred[v]
            changed = True
    edges.clear()
    edges.update((u, w) for u in vertices for w in succ[u])


def forest_from_graph(g: LeafLabeledGraph, t1: RootedTree, t2: RootedTree) -> AgreementForest:
    """Cut a graph displaying both trees into an agreement forest.

    The forest has at most |cut set| + 1 <= r(g) + 1 blocks.
    """
    w = embedding_witness(g, t1, t2)
    edges = set(w.subdivision_edges - w.cut_set)
    comp = nx.Graph()
    comp.add_nodes_from(g.vertices)
    comp.add_edges_from(edges)
    vertices = set()
    for part in nx.connected_components(comp):
        if any(v in g.labels for v in part):
            vertices |= part
    edges = {e for e in edges if e[0] in vertices}
    _cleanup_components(vertices, edges, g.labels, g.root)
    comp = nx.Graph()
    comp.add_nodes_from(vertices)
    comp.add_edges_from(edges)
    blocks = [{g.labels[v] for v in part if v in g.labels} for part in nx.connected_components(comp)]
    return AgreementForest.from_blocks(b for b in blocks if b)


# -- forest gluing ---------------------------------------------------------

class _Fresh:
    def __init__(self, start: int = 0):
        self.n = start

    def __call__(self) -> int:
        self.n += 1
        return self.n


def graph_from_forest(t1: RootedTree, t2: RootedTree, forest: AgreementForest) -> LeafLabeledGraph:
    """A graph with r = |forest| - 1 reticulations displaying both trees.

    Each block becomes a tree; every non-rho block hangs below a reticulation
    whose two in-edges reproduce where the block attaches in ``t1`` and in
    ``t2``.  The result is checked before it is returned.
    """
    from .forests import is_agreement_forest

    if not is_agreement_forest(t1, t2, forest):
        raise ValueError("not an agreement forest for these trees")
    fresh = _Fresh()
    edges: list = []
    labels = {}
    blocks = forest.blocks
    fvert = {}  # (block index, cluster) -> vertex
    fparent = {}  # vertex -> parent vertex within its block tree (or reticulation)
    hret = {}  # block index -> reticulation vertex

    def build(nested, m, parent):
        stack = [(nested, parent)]
        while stack:
            node, par = stack.pop()
            v = fresh()
            fparent[v] = par
            if isinstance(node, str):
                labels[v] = node
                fvert[(m, frozenset((node,)))] = v
            else:
                fvert[(m, _leafset(node))] = v
                stack.extend((c, v) for c in node)

    rho = fresh()
    labels[rho] = RHO
    for m, block in enumerate(blocks):
        taxa = block - {RHO}
        if m == 0:
            if taxa:
                build(restrict(t1, taxa).nested(), 0, rho)
        else:
            h = fresh()
            hret[m] = h
            build(restrict(t1, taxa).nested(), m, h)

    points: dict = {}  # block-tree vertex -> list of (side, depth, attachment)
    rho_sides = []
    for side, t in enumerate((t1, t2)):
        block_of = {lab: m for m, b in enumerate(blocks) for lab in b}
        cut_root = {}
        for m in range(1, len(blocks)):
            cut_root[t.lca(t.vertex(lab) for lab in blocks[m])] = m

        def in_span(u, m):
            if m == 0 and u == 0:
                return True
            return not t.cluster(u).isdisjoint(blocks[m])

        for croot, m in [(0, 0)] + sorted(cut_root.items()):
            stack = [croot]
            while stack:
                u = stack.pop()
                span_kids = [c for c in t.children(u) if c not in cut_root and in_span(c, m)]
                stack.extend(span_kids)
                for c in t.children(u):
                    if c in cut_root or not in_span(c, m):
                        attach = _side_structure(t, c, cut_root)
                        if m == 0 and u == 0:
                            rho_sides.append(attach)
                        else:
                            b = fvert[(m, (t.cluster(u) & blocks[m]) - {RHO})]
                            points.setdefault(b, []).append((side, t.depth(u), attach))

    # cut roots are identified by (tree side, vertex); resolve them to blocks
    resolver = {}
    for side, t in enumerate((t1, t2)):
        for m in range(1, len(blocks)):
            resolver[(side, t.lca(t.vertex(lab) for lab in blocks[m]))] = m

    def emit_side(parent, attach, side):
        kind, payload = attach
        if kind == "cut":
            edges.append((parent, hret[resolver[(side, payload)]]))
            return
        d = fresh()
        edges.append((parent, d))
        for sub in payload:
            emit_side(d, sub, side)

    for v, par in fparent.items():
        chain = sorted(points.get(v, []), key=lambda p: (p[0], p[1]))
        prev = par
        for side, _, attach in chain:
            x = fresh()
            edges.append((prev, x))
            emit_side(x, attach, side)
            prev = x
        edges.append((prev, v))

    if len(blocks[0]) == 1:
        (a1, a2) = rho_sides
        if a1[0] == a2[0] == "cut" and resolver[(0, a1[1])] == resolver[(1, a2[1])]:
            # both trees hang the same block directly below rho
            m = resolver[(0, a1[1])]
            h = hret[m]
            (child,) = [v for v, p in fparent.items() if p == h]
            edges.remove((h, child))
            x = fresh()
            edges.extend([(rho, h), (h, x), (x, child), (x, h)])
        else:
            y = fresh()
            edges.append((rho, y))
            emit_side(y, a1, 0)
            emit_side(y, a2, 1)

    g = LeafLabeledGraph(edges, labels)
    require_valid(g)
    if displays(g, t1) is None or displays(g, t2) is None:
        raise RuntimeError("glued graph fails to display an input tree")
    return g


def _leafset(nested) -> frozenset:
    if isinstance(nested, str):
        return frozenset((nested,))
    return frozenset().union(*(_leafset(c) for c in nested))


def _side_structure(t: RootedTree, c: int, cut_root: Mapping):
    """Describe the part of ``t`` hanging off a span vertex through child ``c``."""
    if c in cut_root:
        return ("cut", c)
    if t.is_leaf(c):
        raise RuntimeError("labelled leaf outside its block span")
    return ("dangling", tuple(_side_structure(t, k, cut_root) for k in t.children(c)))


# -- cyclic generators -----------------------------------------------------

@dataclass(frozen=True)
class EdgeSide:
    """Edge number ``index`` of a generator, directed from ``tail`` to ``head``."""

    index: int
    tail: Hashable
    head: Hashable


@dataclass(frozen=True)
class VertexSide:
    vertex: Hashable


@dataclass(frozen=True)
class CyclicGenerator:
    """A leaf-free backbone; parallel edges allowed, loops not.

    Edges are kept as a list so parallel copies stay distinguishable by index.
    """

    edges: tuple
    root: Hashable

    @property
    def vertices(self) -> tuple:
        seen = dict.fromkeys([self.root])
        for u, v in self.edges:
            seen.setdefault(u)
            seen.setdefault(v)
        return tuple(seen)

    def _degrees(self):
        nin, nout = Counter(), Counter()
        for u, v in self.edges:
            nout[u] += 1
            nin[v] += 1
        return nin, nout

    @property
    def vertex_sides(self) -> list:
        nin, nout = self._degrees()
        return sorted((v for v in self.vertices if nin[v] == 2 and nout[v] == 0), key=_sort_key)

    @property
    def k0(self) -> int:
        return len(self.vertex_sides)

    @property
    def k1(self) -> int:
        nin, nout = self._degrees()
        return sum(1 for v in self.vertices if nin[v] == 2 and nout[v] == 1)

    @property
    def k(self) -> int:
        return self.k0 + self.k1

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for v in self.vertices:
            g.add_node(v, root=v == self.root)
        g.add_edges_from(self.edges)
        return g


def check_generator(gen: CyclicGenerator) -> None:
    """Raise :class:`GeneratorError` unless ``gen`` is a cyclic k-generator with k >= 1."""
    nin, nout = gen._degrees()
    if any(u == v for u, v in gen.edges):
        raise GeneratorError("generators have no loops")
    if nin[gen.root] != 0 or nout[gen.root] != 1:
        raise GeneratorError("the root must have in-degree 0 and out-degree 1")
    for v in gen.vertices:
        if v == gen.root:
            continue
        if (nin[v], nout[v]) not in ((1, 2), (2, 0), (2, 1)):
            raise GeneratorError(f"vertex {v!r} has in-degree {nin[v]} and out-degree {nout[v]}")
    if gen.k < 1:
        raise GeneratorError("a generator needs at least one in-degree-2 vertex")
    succ: dict = {v: [] for v in gen.vertices}
    for u, v in gen.edges:
        succ[u].append(v)
    if len(_reachable(succ, gen.root)) != len(gen.vertices):
        raise GeneratorError("some vertex is not reachable from the root")


def _has_pendant_tree(g: LeafLabeledGraph) -> bool:
    """Whether some vertex other than rho roots a reticulation-free part with >= 2 leaves."""
    rets = set(g.reticulations)
    free: dict = {}
    for v in g.vertices:
        if v == g.root or v in g.labels or v in free:
            continue
        reach = _reachable(g.succ, v)
        free[v] = rets.isdisjoint(reach)
        if free[v]:
            return True
    return False


def extract_generator(g: LeafLabeledGraph) -> CyclicGenerator:
    """Delete every leaf and suppress the resulting in-1/out-1 vertices."""
    require_valid(g)
    if len(g.reticulations) == 0:
        raise GeneratorError("a tree has no generator")
    if _has_pendant_tree(g):
        raise GeneratorError("the graph has a pendant subtree with two or more leaves")
    edges = [(u, v) for u, v in g.edges if not (v in g.labels)]
    while True:
        nin, nout = Counter(), Counter()
        for u, v in edges:
            nout[u] += 1
            nin[v] += 1
        unary = [v for v in nin if nin[v] == 1 and nout[v] == 1]
        if not unary:
            break
        w = min(unary, key=_sort_key)
        (i_in,) = [i for i, e in enumerate(edges) if e[1] == w]
        (i_out,) = [i for i, e in enumerate(edges) if e[0] == w]
        u, x = edges[i_in][0], edges[i_out][1]
        if u == x:
            raise GeneratorError("suppression would create a loop")
        edges = [e for i, e in enumerate(edges) if i not in (i_in, i_out)] + [(u, x)]
    gen = CyclicGenerator(tuple(sorted(edges, key=lambda e: (_sort_key(e[0]), _sort_key(e[1])))), g.root)
    check_generator(gen)
    return gen


def enumerate_sides(gen: CyclicGenerator) -> tuple:
    """(edge sides, vertex sides); the edge count obeys 4 k0 + 3 k1 - 1."""
    check_generator(gen)
    edge_sides = [EdgeSide(i, u, v) for i, (u, v) in enumerate(gen.edges)]
    vertex_sides = [VertexSide(v) for v in gen.vertex_sides]
    if len(edge_sides) != 4 * gen.k0 + 3 * gen.k1 - 1:
        raise GeneratorError(
            f"{len(edge_sides)} edge sides, expected {4 * gen.k0 + 3 * gen.k1 - 1}"
        )
    return edge_sides, vertex_sides


def _attach(gen: CyclicGenerator, assignment: Mapping) -> tuple:
    """Graph plus, per edge side, the subdivision vertices in tail-to-head order."""
    edge_sides, vertex_sides = enumerate_sides(gen)
    known = set(edge_sides) | set(vertex_sides)
    for side in assignment:
        if side not in known:
            raise GeneratorError(f"{side!r} is not a side of this generator")
    pairs = Counter(gen.edges)
    for side in edge_sides:
        if pairs[(side.tail, side.head)] > 1:
            twins = [s for s in edge_sides if (s.tail, s.head) == (side.tail, side.head)]
            if not any(assignment.get(s) for s in twins):
                raise GeneratorError(f"parallel edges {side.tail!r}->{side.head!r} need a leaf")
    for side in vertex_sides:
        if not assignment.get(side):
            raise GeneratorError(f"vertex side {side.vertex!r} needs a tree")

    fresh = _Fresh()
    names = {v: ("g", v) for v in gen.vertices}
    edges: list = []
    labels = {names[gen.root]: RHO}

    def hang(parent, nested):
        stack = [(nested, parent)]
        while stack:
            node, par = stack.pop()
            v = ("a", fresh())
            edges.append((par, v))
            if isinstance(node, str):
                if node == RHO:
                    raise TreeError("rho cannot be attached")
                labels[v] = node
            else:
                if len(node) != 2:
                    raise TreeError("attached trees must be binary")
                stack.extend((c, v) for c in node)

    points = {}
    for side in edge_sides:
        prev = names[side.tail]
        chain = []
        for item in assignment.get(side, ()):
            x = ("a", fresh())
            edges.append((prev, x))
            hang(x, item)
            chain.append(x)
            prev = x
        edges.append((prev, names[side.head]))
        points[side] = chain
    for side in vertex_sides:
        hang(names[side.vertex], assignment[side])
    if len(set(labels.values())) != len(labels):
        raise GeneratorError("duplicate leaf labels in the assignment")
    g = LeafLabeledGraph(edges, labels)
    require_valid(g)
    return g, points


def attach(gen: CyclicGenerator, assignment: Mapping) -> LeafLabeledGraph:
    """Subdivide edge sides and hang trees on vertex sides.

    ``assignment`` maps an :class:`EdgeSide` to a sequence of leaves or
    subtrees (in tail-to-head order) and a :class:`VertexSide` to one leaf or
    subtree.  Generator vertex ``v`` becomes graph vertex ``("g", v)``.
    """
    return _attach(gen, assignment)[0]


def generators_isomorphic(a: CyclicGenerator, b: CyclicGenerator) -> bool:
    return nx.is_isomorphic(
        a.to_networkx(), b.to_networkx(), node_match=lambda x, y: x["root"] == y["root"]
    )
