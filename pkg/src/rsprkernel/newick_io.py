"""Newick trees, the graph edge-list format and DOT export.

Newick text never mentions rho: the parser adds it above the root and the
writer leaves it out.  Branch lengths, internal labels and bracketed comments
are accepted and dropped with a warning.

Edge-list format for leaf-labelled graphs::

    # comments and blank lines are ignored
    graph <number of vertices> <number of edges> root=<id>
    <u> <v>                 one line per edge u -> v
    label <id> <name>       one line per leaf, plus the root as __rho__

Vertex ids are whitespace-free tokens; all-digit ids are read as integers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .networks import (
    CyclicGenerator,
    LeafLabeledGraph,
    _sort_key,
    require_valid,
)
from .tree import RHO, RootedTree, TreeError

logger = logging.getLogger(__name__)

_SPECIAL = set("()[]':;, \t\r\n")


class NewickError(ValueError):
    """Malformed input; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int | None = None):
        where = f" at byte {offset}" if offset is not None else ""
        super().__init__(message + where)
        self.offset = offset


@dataclass(frozen=True)
class TreeDocument:
    newick_text: str
    tree: RootedTree

    @classmethod
    def from_text(cls, text: str) -> "TreeDocument":
        return cls(text, parse_tree(text))


@dataclass(frozen=True)
class GraphDocument:
    header: tuple  # (vertex count, edge count, root id)
    edges: tuple
    labels: dict

    def to_graph(self) -> LeafLabeledGraph:
        n, _, _ = self.header
        g = LeafLabeledGraph(self.edges, self.labels)
        if len(g.vertices) != n:
            raise NewickError(f"header announces {n} vertices, found {len(g.vertices)}")
        return g


# -- Newick ----------------------------------------------------------------

class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.dropped = set()
        self.seen = set()

    def error(self, message: str):
        return NewickError(message, len(self.text[: self.pos].encode("utf-8")))

    def skip(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "[":
                end = self.text.find("]", self.pos)
                if end < 0:
                    raise self.error("unterminated comment")
                self.dropped.add("comments")
                self.pos = end + 1
            else:
                break

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def label(self):
        self.skip()
        if self.peek() == "'":
            out = []
            self.pos += 1
            while True:
                if self.pos >= len(self.text):
                    raise self.error("unterminated quoted label")
                ch = self.text[self.pos]
                if ch == "'":
                    if self.text[self.pos + 1 : self.pos + 2] == "'":
                        out.append("'")
                        self.pos += 2
                        continue
                    self.pos += 1
                    return "".join(out)
                out.append(ch)
                self.pos += 1
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _SPECIAL:
            self.pos += 1
        return self.text[start : self.pos]

    def branch_length(self):
        if self.peek() == ":":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] not in _SPECIAL:
                self.pos += 1
            token = self.text[start : self.pos]
            try:
                float(token)
            except ValueError:
                raise self.error(f"bad branch length {token!r}") from None
            self.dropped.add("branch lengths")

    def subtree(self):
        # iterative to cope with deep caterpillars
        stack = []
        while True:
            if self.peek() == "(":
                start = self.pos
                self.pos += 1
                stack.append((start, []))
                continue
            node_start = self.pos
            lab = self.label()
            if not lab:
                raise self.error("expected a leaf label")
            self._check_label(lab, node_start)
            node = lab
            self.branch_length()
            while True:
                if not stack:
                    return node
                start, kids = stack[-1]
                kids.append(node)
                ch = self.peek()
                if ch == ",":
                    self.pos += 1
                    break
                if ch != ")":
                    raise self.error("expected ',' or ')'")
                self.pos += 1
                stack.pop()
                if len(kids) != 2:
                    saved = self.pos
                    self.pos = start
                    err = self.error(f"vertex with {len(kids)} children; only binary trees are supported")
                    self.pos = saved
                    raise err
                if self.peek() not in ("", ",", ")", ":", ";"):
                    if self.label():
                        self.dropped.add("internal labels")
                self.branch_length()
                node = tuple(kids)

    def _check_label(self, lab: str, start: int):
        problem = None
        if lab == RHO:
            problem = f"the label {RHO!r} is reserved"
        elif lab in self.seen:
            problem = f"duplicate leaf label {lab!r}"
        if problem:
            self.skip()
            saved, self.pos = self.pos, start
            self.skip()
            err = self.error(problem)
            self.pos = saved
            raise err
        self.seen.add(lab)


def parse_tree(text: str) -> RootedTree:
    """Read one rooted binary Newick tree terminated by ';'."""
    reader = _Reader(text)
    if not reader.peek():
        raise NewickError("empty input", 0)
    nested = reader.subtree()
    if reader.peek() != ";":
        raise reader.error("expected ';'")
    reader.pos += 1
    if reader.peek():
        raise reader.error("trailing text after ';'")
    if reader.dropped:
        logger.warning("ignored %s", ", ".join(sorted(reader.dropped)))
    try:
        return RootedTree.from_nested(nested)
    except TreeError as e:
        raise NewickError(str(e)) from None


def parse_trees(text: str) -> list:
    """Every non-empty, non-comment line of ``text`` as a tree."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(parse_tree(line))
    return out


def _quote(label: str) -> str:
    if any(ch in _SPECIAL for ch in label):
        return "'" + label.replace("'", "''") + "'"
    return label


def _nested_text(nested) -> str:
    parts = []
    stack = [nested]
    while stack:
        x = stack.pop()
        if isinstance(x, str) and x in "(),":
            parts.append(x)
        elif isinstance(x, _Token):
            parts.append(_quote(x.label))
        else:
            stack.extend([")", x[1], ",", x[0], "("])
    return "".join(parts)


class _Token:
    __slots__ = ("label",)

    def __init__(self, label):
        self.label = label


def _wrap(nested):
    if isinstance(nested, str):
        return _Token(nested)
    return tuple(_wrap(c) for c in nested)


def write_tree(t: RootedTree) -> str:
    """Canonical Newick: children ordered by smallest label, rho left out."""
    return _nested_text(_wrap(t.nested())) + ";"


# -- graph edge lists ------------------------------------------------------

def _token(tok: str):
    return int(tok) if tok.isdigit() else tok


def parse_graph_document(text: str) -> GraphDocument:
    header = None
    edges = []
    labels = {}
    offset = 0
    for line in text.splitlines(keepends=True):
        here = offset
        offset += len(line.encode("utf-8"))
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if header is None:
            if parts[0] != "graph" or len(parts) != 4 or not parts[3].startswith("root="):
                raise NewickError("expected 'graph <|V|> <|E|> root=<id>'", here)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise NewickError("vertex and edge counts must be integers", here) from None
            header = (n, m, _token(parts[3][5:]))
        elif parts[0] == "label":
            if len(parts) < 3:
                raise NewickError("expected 'label <id> <name>'", here)
            v = _token(parts[1])
            if v in labels:
                raise NewickError(f"vertex {v!r} labelled twice", here)
            labels[v] = " ".join(parts[2:])
        elif len(parts) == 2:
            edges.append((_token(parts[0]), _token(parts[1])))
        else:
            raise NewickError(f"cannot read line {body!r}", here)
    if header is None:
        raise NewickError("missing 'graph' header", 0)
    if len(edges) != header[1]:
        raise NewickError(f"header announces {header[1]} edges, found {len(edges)}")
    if labels.get(header[2]) != RHO:
        raise NewickError(f"the root must carry the label {RHO}")
    return GraphDocument(header, tuple(edges), labels)


def parse_graph(text: str) -> LeafLabeledGraph:
    """Read and validate a leaf-labelled graph; raises GraphValidationError naming the property."""
    g = parse_graph_document(text).to_graph()
    require_valid(g)
    return g


def _numbering(vertices, root) -> dict:
    ordered = [root] + sorted((v for v in vertices if v != root), key=_sort_key)
    return {v: i for i, v in enumerate(ordered)}


def write_graph(g: LeafLabeledGraph) -> str:
    """Edge-list text; vertices are renumbered 0, 1, ... with the root first."""
    num = _numbering(g.vertices, g.root)
    lines = [f"graph {len(g.vertices)} {len(g.edges)} root={num[g.root]}"]
    lines += [f"{a} {b}" for a, b in sorted((num[u], num[v]) for u, v in g.edges)]
    lines += [f"label {i} {lab}" for i, lab in sorted((num[v], lab) for v, lab in g.labels.items())]
    return "\n".join(lines) + "\n"


# -- DOT -------------------------------------------------------------------

def _dot_label(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(obj) -> str:
    """DOT digraph for a tree, graph or generator.

    Reticulations are drawn as red boxes and vertex sides as double circles.
    """
    if isinstance(obj, RootedTree):
        obj = LeafLabeledGraph.from_tree(obj)
    lines = ["digraph G {", "  node [shape=circle, label=\"\"];"]
    if isinstance(obj, LeafLabeledGraph):
        num = _numbering(obj.vertices, obj.root)
        rets = set(obj.reticulations)
        for v in sorted(obj.vertices, key=num.get):
            attrs = []
            if v in obj.labels:
                attrs.append(f"shape=plaintext, label={_dot_label(obj.labels[v])}")
            elif v in rets:
                attrs.append("shape=box, color=red")
            lines.append(f"  n{num[v]}" + (f" [{', '.join(attrs)}];" if attrs else ";"))
        for a, b in sorted((num[u], num[v]) for u, v in obj.edges):
            lines.append(f"  n{a} -> n{b};")
    elif isinstance(obj, CyclicGenerator):
        num = _numbering(obj.vertices, obj.root)
        sides = set(obj.vertex_sides)
        for v in sorted(obj.vertices, key=num.get):
            if v == obj.root:
                lines.append(f"  n{num[v]} [shape=plaintext, label={_dot_label(RHO)}];")
            elif v in sides:
                lines.append(f"  n{num[v]} [shape=doublecircle];")
            else:
                lines.append(f"  n{num[v]};")
        for a, b in sorted((num[u], num[v]) for u, v in obj.edges):
            lines.append(f"  n{a} -> n{b};")
    else:
        raise TypeError(f"cannot draw {type(obj).__name__}")
    lines.append("}")
    return "\n".join(lines) + "\n"
