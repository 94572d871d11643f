#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Synthetic candidate graphs made by editing gold graphs. Every edit keeps the
graph rooted and connected, so corrupted graphs serialize and parse back.
"""

import logging

from ..amr.graph import NON_INVERTIBLE_ROLES, AmrGraph, Edge, Node
from ..common.rng import derive_seed, numpy_generator
from .dataset import DatasetRecord


__all__ = ["OPERATIONS", "Uncorruptible", "corrupt", "synthesize_corpus"]

DEFAULT_ROLES = (":arg0", ":arg1", ":arg2", ":arg3", ":mod", ":time", ":location", ":manner")

DEFAULT_CONCEPTS = ("thing", "person", "and", "say-01", "have-03", "go-02", "good-02")


class Uncorruptible(ValueError):
    pass


def _rebuild(g, nodes, edges):
    return AmrGraph(g.root, nodes, edges, metadata=g.metadata)


def _prune(g, edges):
    """Drops nodes (and their edges) no longer reachable from the root."""
    out = {}
    for edge in edges:
        out.setdefault(edge.source, []).append(edge)
    reachable, stack = {g.root}, [g.root]
    while stack:
        for edge in out.get(stack.pop(), []):
            if edge.target not in reachable:
                reachable.add(edge.target)
                stack.append(edge.target)
    nodes = [n for n in g.nodes.values() if n.id in reachable]
    return _rebuild(g, nodes, [e for e in edges if e.source in reachable])


def _pick(generator, items):
    return items[int(generator.integers(len(items)))]


def _relation_edges(g):
    return [e for e in g.edges if g.nodes[e.target].is_variable]


def delete_edge(g, generator, **kwargs):
    if not g.edges:
        return None
    victim = _pick(generator, g.edges)
    return _prune(g, [e for e in g.edges if e.index != victim.index])


def relabel(g, generator, roles=DEFAULT_ROLES, **kwargs):
    edges = _relation_edges(g)
    if not edges:
        return None
    victim = _pick(generator, edges)
    label = victim.role.lower()[1:]
    inverse = label.endswith("-of") and label not in NON_INVERTIBLE_ROLES
    base = victim.role[:-3] if inverse else victim.role
    choices = [r for r in roles if r.lower() != base.lower()]
    if not choices:
        return None
    role = _pick(generator, choices) + ("-of" if inverse else "")
    edges = [e._replace(role=role) if e.index == victim.index else e for e in g.edges]
    return _rebuild(g, g.nodes.values(), edges)


def swap_args(g, generator, **kwargs):
    candidates = []
    for node_id in g.variables():
        roles = [e.role.lower() for e in g.out_edges(node_id)]
        if ":arg0" in roles and ":arg1" in roles:
            candidates.append(node_id)
    if not candidates:
        return None
    node_id = _pick(generator, candidates)
    swapped = {":arg0": ":arg1", ":arg1": ":arg0"}
    edges = [
        e._replace(role=swapped[e.role.lower()])
        if e.source == node_id and e.role.lower() in swapped
        else e
        for e in g.edges
    ]
    return _rebuild(g, g.nodes.values(), edges)


def toggle_polarity(g, generator, **kwargs):
    """Deletes a random ``:polarity -`` or, when there is none, adds one."""
    negations = [
        e
        for e in g.edges
        if e.role.lower() == ":polarity" and not g.nodes[e.target].is_variable
    ]
    if negations:
        victim = _pick(generator, negations)
        edges = [e for e in g.edges if e.index != victim.index]
        nodes = [n for n in g.nodes.values() if n.id != victim.target]
        return _rebuild(g, nodes, edges)
    source = _pick(generator, g.variables())
    constant_id, k = "#neg", 0
    while constant_id in g.nodes:
        k += 1
        constant_id = "#neg{}".format(k)
    nodes = list(g.nodes.values()) + [Node(constant_id, None, "-")]
    edges = list(g.edges) + [Edge(source, ":polarity", constant_id, None)]
    return _rebuild(g, nodes, edges)


def replace_concept(g, generator, concepts=DEFAULT_CONCEPTS, **kwargs):
    node_id = _pick(generator, g.variables())
    current = g.concept(node_id)
    choices = sorted(set(c for c in concepts if c != current))
    if not choices:
        return None
    concept = _pick(generator, choices)
    nodes = [n._replace(concept=concept) if n.id == node_id else n for n in g.nodes.values()]
    return _rebuild(g, nodes, g.edges)


def delete_wiki(g, generator, **kwargs):
    wikis = [e for e in g.edges if e.role.lower() == ":wiki"]
    if not wikis:
        return None
    victim = _pick(generator, wikis)
    edges = [e for e in g.edges if e.index != victim.index]
    return _prune(g, edges)


OPERATIONS = {
    "delete_edge": delete_edge,
    "relabel": relabel,
    "swap_args": swap_args,
    "toggle_polarity": toggle_polarity,
    "replace_concept": replace_concept,
    "delete_wiki": delete_wiki,
}


def corrupt(gold, ops, seed, operations=None, roles=DEFAULT_ROLES, concepts=DEFAULT_CONCEPTS):
    """
    Applies ops random edits to gold. An edit that does not apply to the
    current graph falls back to concept replacement; `Uncorruptible` is
    raised when that is impossible too.

    Args:
        operations (list of str): names of the edits to draw from
            (default: all of `OPERATIONS`)
        roles: relation labels relabeling draws from
        concepts: concepts replacement draws from
    """
    if ops < 0:
        raise ValueError("Invalid number of edits: {}".format(ops))
    names = sorted(OPERATIONS) if operations is None else list(operations)
    for name in names:
        if name not in OPERATIONS:
            raise ValueError("Unknown corruption operation: {}".format(name))
    generator = numpy_generator(seed, "corrupt")
    g = gold
    for _ in range(ops):
        name = _pick(generator, names)
        result = OPERATIONS[name](g, generator, roles=roles, concepts=concepts)
        if result is None:
            result = replace_concept(g, generator, concepts=concepts)
        if result is None:
            raise Uncorruptible(
                "cannot apply {} to graph {} and no replacement concept exists".format(
                    name, g.id
                )
            )
        g = result
    return g


def _pools(golds):
    roles, concepts = set(DEFAULT_ROLES), set()
    for g in golds:
        concepts.update(g.concept(v) for v in g.variables())
        for edge in g.edges:
            label = edge.role.lower()[1:]
            if g.nodes[edge.target].is_variable and not label.endswith("-of"):
                roles.add(edge.role.lower())
    return tuple(sorted(roles)), tuple(sorted(concepts | set(DEFAULT_CONCEPTS)))


def synthesize_corpus(golds, per_gold, seed, max_ops=6, operations=None):
    """
    Builds per_gold candidate records for every gold graph, each with
    uniform{0..max_ops} edits. Relabeling and concept replacement draw from
    the roles and concepts seen across all golds. Record ids are
    ``<gold id>.<k>``; all candidates of one gold share its sentence id.
    """
    golds = list(golds)
    if per_gold < 1:
        raise ValueError("Invalid number of candidates per gold: {}".format(per_gold))
    roles, concepts = _pools(golds)
    records = []
    for position, gold in enumerate(golds):
        gold_id = gold.id if gold.id is not None else str(position)
        for k in range(per_gold):
            generator = numpy_generator(seed, gold_id, k, "ops")
            ops = int(generator.integers(max_ops + 1))
            candidate = corrupt(
                gold,
                ops,
                derive_seed(seed, gold_id, k),
                operations=operations,
                roles=roles,
                concepts=concepts,
            )
            records.append(
                DatasetRecord(
                    id="{}.{}".format(gold_id, k),
                    sentence_id=gold_id,
                    sentence=gold.metadata.get("snt", ""),
                    candidate=candidate,
                    gold=gold,
                )
            )
    logging.info(
        "Synthesized %d candidates from %d gold graphs (at most %d edits each)"
        % (len(records), len(golds), max_ops)
    )
    return records
