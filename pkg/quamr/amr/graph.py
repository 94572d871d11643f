#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import collections
import logging
import re

import networkx as nx
import penman
from networkx.algorithms import isomorphism
from penman.exceptions import PenmanError as _PenmanSyntaxError

from ..common.rng import numpy_generator


__all__ = [
    "AmrGraph",
    "Edge",
    "Node",
    "Triple",
    "PenmanError",
    "UnbalancedParens",
    "DuplicateVariableBinding",
    "EmptyGraph",
    "DanglingReference",
    "parse_penman",
    "serialize_penman",
    "randomize_surface",
    "extract_triples",
    "isomorphic",
    "read_sembank",
    "write_sembank",
]

# unbound bare targets of this shape are treated as variable references:
VARIABLE_PATTERN = re.compile(r"^[a-z]\d*$")

# inverse roles that are lexicalized and must not be inverted:
NON_INVERTIBLE_ROLES = {"consist-of", "prep-out-of", "prep-on-behalf-of"}


class PenmanError(ValueError):
    pass


class UnbalancedParens(PenmanError):
    pass


class DuplicateVariableBinding(PenmanError):
    pass


class EmptyGraph(PenmanError):
    pass


class DanglingReference(PenmanError):
    pass


class Node(collections.namedtuple("Node", "id concept value")):
    """A graph node: a variable with its concept, or a constant with its value."""

    __slots__ = ()

    @property
    def is_variable(self):
        return self.concept is not None

    @property
    def label(self):
        return self.concept if self.is_variable else self.value


Edge = collections.namedtuple("Edge", "source role target index")

Triple = collections.namedtuple("Triple", "kind source label target")


class AmrGraph(object):
    """
    A rooted, labeled, directed graph read from PENMAN notation.

    Variable nodes are keyed by their variable name; constants get synthetic
    ids (``#0``, ``#1``, ...) in order of appearance. Edges are stored as
    written, so an inverse role such as ``:arg0-of`` keeps its textual
    direction. The edge list order is the order in which edges are rendered.

    Instances are treated as immutable.
    """

    def __init__(self, root, nodes, edges, metadata=None):
        self.root = root
        self.nodes = collections.OrderedDict((node.id, node) for node in nodes)
        self.edges = tuple(
            Edge(e.source, e.role, e.target, idx) for idx, e in enumerate(edges)
        )
        self.metadata = dict(metadata or {})
        assert root in self.nodes, "root must be a node of the graph"
        assert self.nodes[root].is_variable, "root must be a variable"
        self._out_edges = collections.defaultdict(list)
        for edge in self.edges:
            assert edge.source in self.nodes, "unknown edge source %s" % edge.source
            assert edge.target in self.nodes, "unknown edge target %s" % edge.target
            assert edge.role.startswith(":"), "relation labels begin with ':'"
            self._out_edges[edge.source].append(edge)

    def out_edges(self, node_id):
        return list(self._out_edges.get(node_id, []))

    def variables(self):
        return [n.id for n in self.nodes.values() if n.is_variable]

    def concept(self, node_id):
        return self.nodes[node_id].concept

    def incoming_counts(self):
        """Number of edges pointing at each node."""
        counts = collections.Counter(edge.target for edge in self.edges)
        return {node_id: counts.get(node_id, 0) for node_id in self.nodes}

    def reentrant_variables(self):
        """Variables that are the target of two or more edges, or of an edge and the root."""
        counts = self.incoming_counts()
        return [
            v
            for v in self.variables()
            if counts[v] >= 2 or (v == self.root and counts[v] >= 1)
        ]

    @property
    def id(self):
        return self.metadata.get("id")

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return "AmrGraph(root={}, nodes={}, edges={})".format(
            self.root, len(self.nodes), len(self.edges)
        )

    def __str__(self):
        return serialize_penman(self)


def _strip_comments(text):
    """Splits a block into PENMAN text and '# ::key value' metadata."""
    metadata, body = {}, []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            for field in re.split(r"(?:^|\s)::", stripped.lstrip("#").strip())[1:]:
                key, _, value = field.strip().partition(" ")
                if key:
                    metadata[key] = value.strip()
        else:
            body.append(line)
    return "\n".join(body), metadata


def _check_parens(text):
    depth, closed_top, in_quote = 0, False, False
    for idx, char in enumerate(text):
        if closed_top and not char.isspace():
            if char == ")":
                raise UnbalancedParens("unexpected ')' at offset {}".format(idx))
            raise PenmanError("trailing content after the top node")
        if char == '"' and (idx == 0 or text[idx - 1] != "\\"):
            in_quote = not in_quote
        elif in_quote:
            continue
        elif char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise UnbalancedParens("unexpected ')' at offset {}".format(idx))
            closed_top = depth == 0
    if depth != 0 or in_quote:
        raise UnbalancedParens("{} unclosed '(' in PENMAN text".format(depth))


def _collect_bindings(node, bindings):
    var, branches = node
    if not branches or branches[0][0] != "/" or branches[0][1] is None:
        raise PenmanError("node {} has no concept".format(var))
    if var in bindings:
        raise DuplicateVariableBinding("variable {} is bound twice".format(var))
    bindings[var] = branches[0][1]
    for role, target in branches[1:]:
        if role == "/":
            raise PenmanError("node {} has more than one concept".format(var))
        if isinstance(target, tuple):
            _collect_bindings(target, bindings)


def parse_penman(text):
    """
    Parses a single PENMAN expression into an `AmrGraph`.

    ``# ::`` comment lines are kept as metadata. Raises `UnbalancedParens`,
    `DuplicateVariableBinding`, `EmptyGraph` or `DanglingReference` on
    malformed input and `PenmanError` on any other syntax error.
    """
    body, metadata = _strip_comments(text)
    if not body.strip():
        raise EmptyGraph("no PENMAN expression found")
    _check_parens(body)
    try:
        tree = penman.parse(body)
    except _PenmanSyntaxError as e:
        raise PenmanError(str(e)) from e

    bindings = collections.OrderedDict()
    _collect_bindings(tree.node, bindings)

    nodes, edges = [], []

    def visit(node):
        var, branches = node
        nodes.append(Node(var, bindings[var], None))
        for role, target in branches[1:]:
            if isinstance(target, tuple):
                edges.append(Edge(var, role, target[0], None))
                visit(target)
            elif target in bindings:
                edges.append(Edge(var, role, target, None))
            elif target is None:
                raise PenmanError("role {} of {} has no target".format(role, var))
            elif VARIABLE_PATTERN.match(target):
                raise DanglingReference("variable {} is never bound".format(target))
            else:
                constant = Node("#{}".format(len(edges)), None, target)
                nodes.append(constant)
                edges.append(Edge(var, role, constant.id, None))

    visit(tree.node)
    return AmrGraph(tree.node[0], nodes, edges, metadata=metadata)


def _to_tree_node(g, node_id, seen):
    seen.add(node_id)
    branches = [("/", g.concept(node_id))]
    for edge in g.out_edges(node_id):
        target = g.nodes[edge.target]
        if not target.is_variable:
            branches.append((edge.role, target.value))
        elif edge.target in seen:
            branches.append((edge.role, edge.target))
        else:
            branches.append((edge.role, _to_tree_node(g, edge.target, seen)))
    return (node_id, branches)


def serialize_penman(g, indent=4):
    """
    Renders g in PENMAN notation; every edge starts a new line indented one
    level deeper than its source. Re-entrant mentions are bare variables.
    """
    if not isinstance(indent, int) or indent <= 0:
        raise ValueError("Invalid indent width: {}".format(indent))
    tree = penman.Tree(_to_tree_node(g, g.root, set()))
    return penman.format(tree, indent=indent)


def _layout_order(g, out_edges):
    """Re-indexes nodes and edges of g in rendering order for the given out-edge lists."""
    nodes, edges, seen = [], [], set()

    def visit(node_id):
        seen.add(node_id)
        nodes.append(g.nodes[node_id])
        for edge in out_edges.get(node_id, []):
            edges.append(edge)
            target = g.nodes[edge.target]
            if not target.is_variable:
                nodes.append(target)
            elif edge.target not in seen:
                visit(edge.target)

    visit(g.root)
    return nodes, edges


def randomize_surface(g, seed):
    """
    Returns a copy of g whose out-edges are traversed in a random order at
    every node. The triple set is unchanged.
    """
    generator = numpy_generator(seed, "surface")
    out_edges = {}
    for node_id in g.nodes:
        edges = g.out_edges(node_id)
        if len(edges) > 1:
            edges = [edges[i] for i in generator.permutation(len(edges))]
        out_edges[node_id] = edges
    nodes, edges = _layout_order(g, out_edges)
    return AmrGraph(g.root, nodes, edges, metadata=g.metadata)


def _split_inverse(role):
    label = role[1:] if role.startswith(":") else role
    if label.lower().endswith("-of") and label.lower() not in NON_INVERTIBLE_ROLES:
        return label[:-3], True
    return label, False


def extract_triples(g):
    """
    Returns the instance, attribute and relation triples of g.

    Instance triples come first (one per variable), then the synthetic
    (root, TOP, concept) attribute, then one triple per edge in edge order.
    Inverse relations (``:arg0-of``) are normalized to their base direction.
    """
    triples = [
        Triple("instance", v, "instance", g.concept(v)) for v in g.variables()
    ]
    triples.append(Triple("attribute", g.root, "TOP", g.concept(g.root)))
    for edge in g.edges:
        target = g.nodes[edge.target]
        if not target.is_variable:
            label = edge.role[1:] if edge.role.startswith(":") else edge.role
            triples.append(Triple("attribute", edge.source, label, target.value))
            continue
        label, inverted = _split_inverse(edge.role)
        if inverted:
            triples.append(Triple("relation", edge.target, label, edge.source))
        else:
            triples.append(Triple("relation", edge.source, label, edge.target))
    return triples


def to_networkx(g):
    """Labeled multigraph view of g; variable names are dropped from labels."""
    graph = nx.MultiDiGraph()
    for node in g.nodes.values():
        graph.add_node(
            node.id,
            label=("concept", node.concept) if node.is_variable else ("value", node.value),
            root=node.id == g.root,
        )
    for edge in g.edges:
        graph.add_edge(edge.source, edge.target, role=edge.role)
    return graph


def isomorphic(g1, g2):
    """True when g1 and g2 are equal up to variable renaming and edge order."""
    if len(g1.nodes) != len(g2.nodes) or len(g1.edges) != len(g2.edges):
        return False
    return nx.is_isomorphic(
        to_networkx(g1),
        to_networkx(g2),
        node_match=isomorphism.categorical_node_match(["label", "root"], [None, False]),
        edge_match=isomorphism.categorical_multiedge_match("role", None),
    )


SembankEntry = collections.namedtuple("SembankEntry", "id metadata graph error")


def _blocks(text):
    block = []
    for line in text.splitlines():
        if line.strip():
            block.append(line)
        elif block:
            yield "\n".join(block)
            block = []
    if block:
        yield "\n".join(block)


def read_sembank(text):
    """
    Reads PENMAN blocks separated by blank lines.

    Returns a list of `SembankEntry`; a malformed block carries its exception
    in ``error`` and None as ``graph``. Ids come from ``# ::id`` lines and
    fall back to the block position.
    """
    entries = []
    for position, block in enumerate(_blocks(text)):
        body, metadata = _strip_comments(block)
        if not body.strip():
            continue
        entry_id = metadata.get("id", str(position))
        try:
            graph = parse_penman(block)
            graph.metadata.setdefault("id", entry_id)
            entries.append(SembankEntry(entry_id, metadata, graph, None))
        except PenmanError as e:
            logging.warning("Skipping malformed graph %s: %s" % (entry_id, e))
            entries.append(SembankEntry(entry_id, metadata, None, e))
    return entries


def write_sembank(graphs, indent=4):
    """Renders graphs as a sembank with their ``# ::`` metadata lines."""
    blocks = []
    for g in graphs:
        lines = ["# ::{} {}".format(k, v) for k, v in g.metadata.items()]
        lines.append(serialize_penman(g, indent=indent))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
