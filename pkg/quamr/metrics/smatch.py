#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Smatch: triple overlap under the best injective variable mapping.

Variables of each graph are indexed in sorted-name order. Candidate
mappings are improved by best-improvement hill climbing over single moves
(map a candidate variable to an unused gold variable) and swaps (exchange
the gold variables of two candidate variables). Among equal gains the first
operation in enumeration order wins: moves ordered by (candidate, gold)
index, then swaps ordered by candidate index pair.
"""

import collections
import itertools
import logging
from dataclasses import dataclass

from ..amr.graph import extract_triples
from ..common.rng import numpy_generator
from ..common.util import ConfigBase, prf


__all__ = [
    "Alignment",
    "MetricsConfig",
    "TooManyVariables",
    "align_triples",
    "normalize_triples",
    "resolve_restarts",
    "smatch",
    "smatch_bruteforce",
]


@dataclass
class MetricsConfig:
    """
    A configuration object for the Smatch-family metrics.
    """

    # hill-climbing restarts; restart 0 is the concept-greedy start:
    restarts: int = 4

    # lowercase triples before comparison:
    lowercase: bool = True

    # largest variable count smatch_bruteforce accepts on the smaller side:
    bruteforce_limit: int = 8


# Global config
config = MetricsConfig()


def set_config(new_config):
    global config
    config = new_config


class ConfigManager(ConfigBase):
    r"""
    Use this to temporarily change a value in the `smatch.config` object. The
    following sets `config.restarts` to `8` for one computation:

    .. code-block:: python

        with ConfigManager("restarts", 8):
            p, r, f1, alignment = smatch(candidate, gold)
    """

    def __init__(self, *args):
        super().__init__(config, *args)


def resolve_restarts(restarts=None):
    """The given number of restarts, or the configured default for None."""
    return config.restarts if restarts is None else restarts


class TooManyVariables(ValueError):
    pass


class Alignment(object):
    """A partial injective map from candidate to gold variables and its match count."""

    def __init__(self, mapping, matched):
        self.mapping = dict(mapping)
        self.matched = int(matched)
        targets = list(self.mapping.values())
        assert len(targets) == len(set(targets)), "alignment must be injective"

    def render(self, candidate_triples, gold_triples):
        """Renders the alignment as 'cand(concept)-gold(concept)' pairs."""
        cand = {t.source: t.target for t in candidate_triples if t.kind == "instance"}
        gold = {t.source: t.target for t in gold_triples if t.kind == "instance"}
        return " ".join(
            "{}({})-{}({})".format(c, cand.get(c), g, gold.get(g))
            for c, g in sorted(self.mapping.items())
        )

    def __repr__(self):
        return "Alignment(matched={}, mapping={})".format(self.matched, self.mapping)


def _normalize(value):
    value = value.replace('"', "")
    return value.lower() if config.lowercase else value


def normalize_triples(triples):
    """Lowercases labels, concepts and constants and strips quotes."""
    result = []
    for t in triples:
        if t.kind == "relation":
            result.append(t._replace(label=_normalize(t.label)))
        else:
            result.append(t._replace(label=_normalize(t.label), target=_normalize(t.target)))
    return result


def _overlap(first, second):
    if not first or not second:
        return 0
    return sum(min(count, second[key]) for key, count in first.items() if key in second)


class _TripleIndex(object):
    """Triples of one graph grouped by variable index."""

    def __init__(self, triples):
        names = set()
        for t in triples:
            names.add(t.source)
            if t.kind == "relation":
                names.add(t.target)
        self.variables = sorted(names)
        index = {v: i for i, v in enumerate(self.variables)}
        self.index = index
        self.concepts = {}
        self.attributes = collections.defaultdict(collections.Counter)
        self.relations = collections.defaultdict(collections.Counter)
        for t in triples:
            if t.kind == "instance":
                self.concepts[index[t.source]] = t.target
            elif t.kind == "attribute":
                self.attributes[index[t.source]][(t.label, t.target)] += 1
            else:
                self.relations[(index[t.source], index[t.target])][t.label] += 1
        self.num_triples = len(triples)


class _MatchTable(object):
    """
    Match weights between candidate and gold variable pairs: unary weights
    for triples on one variable pair and pairwise weights for relations that
    match when two variable pairs are mapped together.
    """

    def __init__(self, cand, gold):
        self.num_cand = len(cand.variables)
        self.num_gold = len(gold.variables)
        self.unary = [[0] * self.num_gold for _ in range(self.num_cand)]
        for i in range(self.num_cand):
            for j in range(self.num_gold):
                weight = 0
                concept = cand.concepts.get(i)
                if concept is not None and concept == gold.concepts.get(j):
                    weight += 1
                weight += _overlap(cand.attributes.get(i), gold.attributes.get(j))
                weight += _overlap(cand.relations.get((i, i)), gold.relations.get((j, j)))
                self.unary[i][j] = weight

        self.pairs = collections.defaultdict(dict)
        for (i, k), cand_labels in cand.relations.items():
            if i == k:
                continue
            for (j, l), gold_labels in gold.relations.items():
                if j == l:
                    continue
                weight = _overlap(cand_labels, gold_labels)
                if weight:
                    self.pairs[(i, j)][(k, l)] = self.pairs[(i, j)].get((k, l), 0) + weight
                    self.pairs[(k, l)][(i, j)] = self.pairs[(k, l)].get((i, j), 0) + weight

    def node_score(self, i, j, mapping):
        """Triples matched by mapping i to j, given the rest of the mapping."""
        if j < 0:
            return 0
        score = self.unary[i][j]
        for (k, l), weight in self.pairs.get((i, j), {}).items():
            if mapping[k] == l:
                score += weight
        return score

    def pair_weight(self, i, j, k, l):
        if j < 0 or l < 0:
            return 0
        return self.pairs.get((i, j), {}).get((k, l), 0)

    def total(self, mapping):
        unary, pairwise = 0, 0
        for i, j in enumerate(mapping):
            if j < 0:
                continue
            unary += self.unary[i][j]
            for (k, l), weight in self.pairs.get((i, j), {}).items():
                if mapping[k] == l:
                    pairwise += weight
        assert pairwise % 2 == 0, "pairwise weights are stored in both directions"
        return unary + pairwise // 2


def _greedy_mapping(table):
    """Maps each candidate variable to the unused gold variable with the best unary weight."""
    mapping, used = [], set()
    for i in range(table.num_cand):
        best, best_weight = -1, 0
        for j in range(table.num_gold):
            if j not in used and table.unary[i][j] > best_weight:
                best, best_weight = j, table.unary[i][j]
        if best >= 0:
            used.add(best)
        mapping.append(best)
    return mapping


def _random_mapping(table, generator):
    size = max(table.num_cand, table.num_gold)
    permutation = generator.permutation(size)
    return [int(j) if j < table.num_gold else -1 for j in permutation[: table.num_cand]]


def _best_operation(table, mapping):
    best_gain, best_op = 0, None
    used = set(j for j in mapping if j >= 0)
    for i in range(table.num_cand):
        base = table.node_score(i, mapping[i], mapping)
        for j in range(table.num_gold):
            if j in used:
                continue
            gain = table.node_score(i, j, mapping) - base
            if gain > best_gain:
                best_gain, best_op = gain, ("move", i, j)
    for i in range(table.num_cand):
        for k in range(i + 1, table.num_cand):
            ji, jk = mapping[i], mapping[k]
            if ji == jk:
                continue
            before = (
                table.node_score(i, ji, mapping)
                + table.node_score(k, jk, mapping)
                - table.pair_weight(i, ji, k, jk)
            )
            mapping[i], mapping[k] = jk, ji
            after = (
                table.node_score(i, jk, mapping)
                + table.node_score(k, ji, mapping)
                - table.pair_weight(i, jk, k, ji)
            )
            mapping[i], mapping[k] = ji, jk
            if after - before > best_gain:
                best_gain, best_op = after - before, ("swap", i, k)
    return best_gain, best_op


def _hill_climb(table, mapping):
    mapping = list(mapping)
    matched = table.total(mapping)
    while True:
        gain, op = _best_operation(table, mapping)
        if op is None:
            return mapping, matched
        kind, first, second = op
        if kind == "move":
            mapping[first] = second
        else:
            mapping[first], mapping[second] = mapping[second], mapping[first]
        matched += gain
        assert matched == table.total(mapping), "incremental gain diverged from recount"


def align_triples(cand_triples, gold_triples, restarts=None, seed=0, starts=()):
    """
    Finds a variable alignment for two normalized triple lists.

    Args:
        restarts (int): number of hill-climbing starts (default: config.restarts)
        seed (int): seed of the random restarts
        starts (list of dict): extra starting alignments by variable name

    Returns:
        `Alignment` with the best match count over all starts.
    """
    restarts = resolve_restarts(restarts)
    if restarts < 1:
        raise ValueError("Invalid number of restarts: {}".format(restarts))
    cand, gold = _TripleIndex(cand_triples), _TripleIndex(gold_triples)
    table = _MatchTable(cand, gold)

    initial = [_greedy_mapping(table)]
    generator = numpy_generator(seed, "restarts")
    initial.extend(_random_mapping(table, generator) for _ in range(restarts - 1))
    for start in starts:
        initial.append([gold.index.get(start.get(v), -1) for v in cand.variables])

    best_mapping, best_matched = [-1] * table.num_cand, -1
    for mapping in initial:
        mapping, matched = _hill_climb(table, mapping)
        if matched > best_matched:
            best_mapping, best_matched = mapping, matched
    named = {
        cand.variables[i]: gold.variables[j] for i, j in enumerate(best_mapping) if j >= 0
    }
    return Alignment(named, max(best_matched, 0))


def _scores(matched, cand_triples, gold_triples):
    return prf(matched, len(cand_triples), len(gold_triples))


def smatch(candidate, gold, restarts=None, seed=0):
    """
    Smatch precision, recall and F1 of candidate against gold.

    Returns:
        (precision, recall, f1, `Alignment`)
    """
    cand_triples = normalize_triples(extract_triples(candidate))
    gold_triples = normalize_triples(extract_triples(gold))
    alignment = align_triples(cand_triples, gold_triples, restarts=restarts, seed=seed)
    return _scores(alignment.matched, cand_triples, gold_triples) + (alignment,)


def exhaustive_match(cand_triples, gold_triples):
    """Exact best match count by enumerating all injective mappings."""
    cand, gold = _TripleIndex(cand_triples), _TripleIndex(gold_triples)
    table = _MatchTable(cand, gold)
    smaller = min(table.num_cand, table.num_gold)
    if smaller > config.bruteforce_limit:
        raise TooManyVariables(
            "exhaustive alignment needs at most {} variables on the smaller side, "
            "got {}".format(config.bruteforce_limit, smaller)
        )
    if smaller == 0:
        return 0
    best = 0
    if table.num_cand <= table.num_gold:
        for permutation in itertools.permutations(range(table.num_gold), table.num_cand):
            best = max(best, table.total(list(permutation)))
    else:
        for permutation in itertools.permutations(range(table.num_cand), table.num_gold):
            mapping = [-1] * table.num_cand
            for j, i in enumerate(permutation):
                mapping[i] = j
            best = max(best, table.total(mapping))
    logging.debug("Exhaustive alignment matched %d triples" % best)
    return best


def smatch_bruteforce(candidate, gold):
    """
    Exact Smatch by enumerating every injective variable mapping; raises
    `TooManyVariables` when the smaller graph exceeds config.bruteforce_limit
    variables.

    Returns:
        (precision, recall, f1)
    """
    cand_triples = normalize_triples(extract_triples(candidate))
    gold_triples = normalize_triples(extract_triples(gold))
    return _scores(exhaustive_match(cand_triples, gold_triples), cand_triples, gold_triples)
