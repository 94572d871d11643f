#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import numpy as np
import torch
from quamr.amr.graph import AmrGraph, Edge, Node


ROLES = (":ARG0", ":ARG1", ":ARG2", ":mod", ":time", ":location")

CONCEPTS = ("want-01", "boy", "girl", "go-02", "believe-01", "city", "and", "house")

GOLD_SEMBANK = """# ::id s1 ::snt The boy wants to go .
(w / want-01
    :ARG0 (b / boy)
    :ARG1 (g / go-02
        :ARG0 b))

# ::id s2 ::snt The girl did not believe the boy .
(b / believe-01
    :polarity -
    :ARG0 (g / girl)
    :ARG1 (b2 / boy))

# ::id s3 ::snt Obama visited New York .
(v / visit-01
    :ARG0 (p / person
        :name (n / name
            :op1 "Obama")
        :wiki "Barack_Obama")
    :ARG1 (c / city
        :name (n2 / name
            :op1 "New"
            :op2 "York")))

# ::id s4 ::snt The house is big .
(b / big
    :domain (h / house))
"""

# (form, lemma, head (1-based, 0 = root), deprel) per sentence id:
_DEPENDENCIES = {
    "s1": [
        ("The", "the", 2, "det"),
        ("boy", "boy", 3, "nsubj"),
        ("wants", "want", 0, "root"),
        ("to", "to", 5, "mark"),
        ("go", "go", 3, "xcomp"),
        (".", ".", 3, "punct"),
    ],
    "s2": [
        ("The", "the", 2, "det"),
        ("girl", "girl", 5, "nsubj"),
        ("did", "do", 5, "aux"),
        ("not", "not", 5, "advmod"),
        ("believe", "believe", 0, "root"),
        ("the", "the", 7, "det"),
        ("boy", "boy", 5, "obj"),
        (".", ".", 5, "punct"),
    ],
    "s3": [
        ("Obama", "Obama", 2, "nsubj"),
        ("visited", "visit", 0, "root"),
        ("New", "New", 4, "compound"),
        ("York", "York", 2, "obj"),
        (".", ".", 2, "punct"),
    ],
    "s4": [
        ("The", "the", 2, "det"),
        ("house", "house", 4, "nsubj"),
        ("is", "be", 4, "cop"),
        ("big", "big", 0, "root"),
        (".", ".", 4, "punct"),
    ],
}


def conllu_text(sentence_ids=None):
    """CoNLL-U text of the small gold corpus."""
    blocks = []
    for sentence_id in sentence_ids or sorted(_DEPENDENCIES):
        tokens = _DEPENDENCIES[sentence_id]
        lines = ["# sent_id = %s" % sentence_id]
        lines.append("# text = %s" % " ".join(t[0] for t in tokens))
        for i, (form, lemma, head, deprel) in enumerate(tokens, 1):
            columns = [str(i), form, lemma, "_", "_", "_", str(head), deprel, "_", "_"]
            lines.append("\t".join(columns))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n\n"


def random_graph(generator, max_variables=6, reentrancy=0.3, constants=0.3, graph_id=None):
    """
    Generates a random connected graph with variables x0..x(n-1) rooted at
    x0. Tree edges go from lower to higher variable indices, re-entrant
    edges too, so the graph is acyclic.
    """
    n = int(generator.integers(1, max_variables + 1))

    def pick(items):
        return items[int(generator.integers(len(items)))]

    nodes = [Node("x%d" % i, pick(CONCEPTS), None) for i in range(n)]
    edges = []
    for i in range(1, n):
        parent = int(generator.integers(i))
        edges.append(Edge("x%d" % parent, pick(ROLES), "x%d" % i, None))
        if i > 1 and generator.random() < reentrancy:
            other = int(generator.integers(i))
            if other != parent:
                edges.append(Edge("x%d" % other, pick(ROLES), "x%d" % i, None))
    for i in range(n):
        if generator.random() < constants:
            constant_id = "#c%d" % i
            nodes.append(Node(constant_id, None, "-"))
            edges.append(Edge("x%d" % i, ":polarity", constant_id, None))
    metadata = {"id": graph_id} if graph_id is not None else {}
    return AmrGraph("x0", nodes, edges, metadata=metadata)


def random_graphs(count, seed=0, **kwargs):
    generator = np.random.default_rng(seed)
    return [random_graph(generator, graph_id="g%d" % k, **kwargs) for k in range(count)]


def get_random_test_tensor(max_value=6, min_value=None, size=(1, 5), is_float=False):
    """Generates random tensor for testing

    Args:
        max_value (int): defines maximum value for int tensor
        min_value (int): defines minimum value for int tensor
        size (tuple): size of tensor
        is_float (bool): determines float (float64) or int tensor

    Returns: torch.tensor
    """
    if min_value is None:
        min_value = -max_value
    if is_float:
        return torch.rand(torch.Size(size), dtype=torch.float64) * (max_value - min_value) + min_value
    return torch.randint(min_value, max_value, torch.Size(size), dtype=torch.int64)
