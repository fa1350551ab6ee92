import random

import pytest

from conftest import tree
from rsprkernel.forests import is_agreement_forest, maf_bruteforce
from rsprkernel.networks import (
    CyclicGenerator,
    EdgeSide,
    GeneratorError,
    GraphValidationError,
    LeafLabeledGraph,
    VertexSide,
    attach,
    displays,
    embedding_witness,
    enumerate_sides,
    extract_generator,
    forest_from_graph,
    generators_isomorphic,
    graph_from_forest,
    reticulation_count,
    switching_tree,
    validate_graph,
)
from rsprkernel.random_trees import random_generator_graph, random_graph, random_pair
from rsprkernel.tight import _backbone, default_right_parents
from rsprkernel.tree import RHO

# reticulation 4 has parents 1 and 2, and 2 is a child of 1
SAME_SWITCHINGS = LeafLabeledGraph(
    [(0, 1), (1, 2), (1, 4), (2, 4), (2, 5), (4, 6)], {0: RHO, 5: "a", 6: "b"}
)
# switching at 4 decides whether a joins b or c
TWO_TREES = LeafLabeledGraph(
    [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (2, 6), (3, 7)],
    {0: RHO, 5: "a", 6: "b", 7: "c"},
)


def _violation(edges, labels):
    return validate_graph(LeafLabeledGraph(edges, labels)).violated


def test_validation_names_the_property():
    assert validate_graph(TWO_TREES).ok
    assert _violation([(0, 1), (1, 2), (1, 3)], {0: "x", 2: "a", 3: "b"}) == "i"
    assert _violation([(0, 1), (1, 2), (1, 3), (9, 1)], {0: RHO, 2: "a", 3: "b"}) == "i"
    assert _violation([(0, 1), (1, 2), (1, 3)], {0: RHO, 2: "a", 3: "a"}) == "ii"
    assert _violation([(0, 1), (1, 2), (1, 3)], {0: RHO, 2: "a"}) == "ii"
    assert _violation([(0, 1), (1, 2), (1, 3), (1, 4)], {0: RHO, 2: "a", 3: "b", 4: "c"}) == "iii"
    # a closed piece whose vertices all have in-degree >= 1 but no path from rho
    edges = [(0, 1), (1, 2), (1, 3), (4, 6), (4, 7), (5, 6), (5, 7), (6, 5), (7, 4)]
    assert _violation(edges, {0: RHO, 2: "a", 3: "b"}) == "iv"
    assert _violation([(0, 1), (1, 1)], {0: RHO}) == "structure"
    with pytest.raises(GraphValidationError):
        reticulation_count(LeafLabeledGraph([(0, 1), (1, 2), (1, 3)], {0: RHO, 2: "a", 3: "a"}))


def test_reticulation_count():
    assert reticulation_count(LeafLabeledGraph.from_tree(tree("((a,b),c);"))) == 0
    assert reticulation_count(TWO_TREES) == 1
    rng = random.Random(3)
    for r in range(4):
        assert reticulation_count(random_graph(6, r, rng)) == r


def test_displays():
    t = tree("((a,b),c);")
    w = displays(LeafLabeledGraph.from_tree(t), t)
    assert w is not None and dict(w.switching) == {}
    assert displays(TWO_TREES, tree("((a,b),c);")) is not None
    assert displays(TWO_TREES, tree("((a,c),b);")) is not None
    assert displays(TWO_TREES, tree("((b,c),a);")) is None
    ab = tree("(a,b);")
    for parent in (1, 2):
        assert switching_tree(SAME_SWITCHINGS, {4: parent}) == ab


def test_forest_graph_round_trip():
    rng = random.Random(5)
    for _ in range(40):
        t1, t2 = random_pair(rng.randint(3, 8), rng)
        forest, d = maf_bruteforce(t1, t2)
        g = graph_from_forest(t1, t2, forest)
        assert reticulation_count(g) == d
        assert displays(g, t1) is not None and displays(g, t2) is not None
        w = embedding_witness(g, t1, t2)
        assert len(w.cut_set) <= d
        back = forest_from_graph(g, t1, t2)
        assert is_agreement_forest(t1, t2, back) and len(back) <= d + 1


def test_forest_from_random_graph():
    rng = random.Random(9)
    for _ in range(30):
        g = random_graph(rng.randint(3, 7), rng.randint(0, 3), rng)
        keeps = [{r: sorted(g.pred[r], key=str)[rng.randint(0, 1)] for r in g.reticulations} for _ in range(2)]
        t1, t2 = (switching_tree(g, k) for k in keeps)
        if t1 is None or t2 is None:
            continue
        forest = forest_from_graph(g, t1, t2)
        assert is_agreement_forest(t1, t2, forest)
        assert len(forest) <= reticulation_count(g) + 1


def test_side_counts():
    one = CyclicGenerator((("rho", "u"), ("u", "v"), ("u", "v")), "rho")
    edges, vertices = enumerate_sides(one)
    assert (one.k0, one.k1, len(edges), len(vertices)) == (1, 0, 3, 1)
    loop = CyclicGenerator(
        (("rho", "a"), ("a", "r1"), ("a", "r2"), ("r1", "r2"), ("r2", "r1")), "rho"
    )
    edges, vertices = enumerate_sides(loop)
    assert (loop.k0, loop.k1, len(edges), len(vertices)) == (0, 2, 5, 0)
    for k in (2, 3, 4):
        gen, left, right = _backbone(k, default_right_parents(k))
        edges, vertices = enumerate_sides(gen)
        assert len(edges) == 4 * k - 1 and len(vertices) == k
        assert sum(1 for s in edges if s.head.startswith("v")) == 2 * k


def test_generator_rejections():
    with pytest.raises(GeneratorError):
        extract_generator(LeafLabeledGraph.from_tree(tree("((a,b),c);")))
    # a and b form a pendant cherry
    g = LeafLabeledGraph(
        [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (2, 6), (3, 7), (7, 8), (7, 9)],
        {0: RHO, 5: "c", 6: "d", 8: "a", 9: "b"},
    )
    with pytest.raises(GeneratorError):
        extract_generator(g)


def test_extract_attach_round_trip():
    rng = random.Random(21)
    done = 0
    while done < 40:
        try:
            gen = extract_generator(random_generator_graph(rng.randint(4, 9), rng.randint(1, 3), rng))
        except GeneratorError:
            continue
        edges, vertices = enumerate_sides(gen)
        assert len(edges) == 4 * gen.k0 + 3 * gen.k1 - 1
        assignment = {s: [f"e{s.index}"] for s in edges}
        assignment.update({s: f"w{i}" for i, s in enumerate(vertices)})
        g = attach(gen, assignment)
        assert reticulation_count(g) == gen.k
        assert generators_isomorphic(extract_generator(g), gen)
        done += 1


def test_attach_coverage_errors():
    one = CyclicGenerator((("rho", "u"), ("u", "v"), ("u", "v")), "rho")
    e0, e1, e2 = enumerate_sides(one)[0]
    v = VertexSide("v")
    with pytest.raises(GeneratorError, match="vertex side"):
        attach(one, {e1: ["a"]})
    with pytest.raises(GeneratorError, match="parallel"):
        attach(one, {v: "a"})
    with pytest.raises(GeneratorError):
        attach(one, {v: "a", e1: ["b"], EdgeSide(7, "u", "v"): ["c"]})
    with pytest.raises(GeneratorError, match="duplicate"):
        attach(one, {v: "a", e1: ["a"]})
    g = attach(one, {v: ("a", "b"), e2: ["c"], e0: ["d"]})
    assert reticulation_count(g) == 1 and g.taxa == {"a", "b", "c", "d"}
