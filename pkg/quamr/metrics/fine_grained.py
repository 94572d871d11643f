#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Fine-grained AMR evaluation: eleven sub-task scores next to Smatch.

Families scored by alignment (hill climbing on a triple subset):
    Smatch, Unlabeled, NoWSD, Reentrancies, SRL
Families scored as multiset F1 over extracted items:
    Concepts, NamedEnt, Negations, Wikification, IgnoreVars, Frames, NS-frames
"""

import collections
import re

from ..amr.graph import extract_triples
from ..common.rng import derive_seed
from ..common.util import prf
from .quality import CORRECTABLE_FAMILIES, FAMILIES, QualityVector
from .smatch import align_triples, normalize_triples


__all__ = ["feature_flags", "fine_grained", "score_correction", "score_pair"]

SENSE_SUFFIX = re.compile(r"-\d\d+$")
FRAME_PATTERN = re.compile(r"^.+-\d\d+$")
ARG_PATTERN = re.compile(r"^arg\d+$")
OP_PATTERN = re.compile(r"^op(\d+)$")

DUMMY_LABEL = "rel"
TOP_LABEL = "top"


def _bag_scores(cand_items, gold_items):
    cand, gold = collections.Counter(cand_items), collections.Counter(gold_items)
    matched = sum(min(count, gold[item]) for item, count in cand.items())
    return prf(matched, sum(cand.values()), sum(gold.values()))


def _concepts(triples):
    return {t.source: t.target for t in triples if t.kind == "instance"}


def _unlabel(triples):
    result = []
    for t in triples:
        if t.kind == "relation" or (t.kind == "attribute" and t.label != TOP_LABEL):
            t = t._replace(label=DUMMY_LABEL)
        result.append(t)
    return result


def _strip_senses(triples):
    result = []
    for t in triples:
        if t.kind == "instance" or (t.kind == "attribute" and t.label == TOP_LABEL):
            t = t._replace(target=SENSE_SUFFIX.sub("", t.target))
        result.append(t)
    return result


def _with_support(triples, relations):
    """Relation subset plus the instance triples of the variables it touches."""
    touched = set()
    for t in relations:
        touched.update([t.source, t.target])
    return [t for t in triples if t.kind == "instance" and t.source in touched] + relations


def _reentrancy_triples(triples):
    # counted on inverse-normalized triples: a variable with an :arg0-of edge and one
    # other incoming edge is re-entrant here, though its text never repeats it
    relations = [t for t in triples if t.kind == "relation"]
    incoming = collections.Counter(t.target for t in relations)
    roots = {t.source for t in triples if t.kind == "attribute" and t.label == TOP_LABEL}
    reentrant = {
        v for v, count in incoming.items() if count >= 2 or (v in roots and count >= 1)
    }
    return _with_support(triples, [t for t in relations if t.target in reentrant])


def _srl_triples(triples):
    relations = [t for t in triples if t.kind == "relation" and ARG_PATTERN.match(t.label)]
    return _with_support(triples, relations)


def _frames(triples):
    return [c for c in _concepts(triples).values() if FRAME_PATTERN.match(c)]


def _named_entities(triples):
    concepts = _concepts(triples)
    ops = collections.defaultdict(list)
    for t in triples:
        match = OP_PATTERN.match(t.label) if t.kind == "attribute" else None
        if match:
            ops[t.source].append((int(match.group(1)), t.target))
    return [
        (concepts.get(t.source), " ".join(value for _, value in sorted(ops[t.target])))
        for t in triples
        if t.kind == "relation" and t.label == "name" and concepts.get(t.target) == "name"
    ]


def _negations(triples):
    concepts = _concepts(triples)
    return [
        concepts.get(t.source)
        for t in triples
        if t.kind == "attribute" and t.label == "polarity" and t.target == "-"
    ]


def _wikification(triples):
    concepts = _concepts(triples)
    return [
        (concepts.get(t.source), t.target)
        for t in triples
        if t.kind == "attribute" and t.label == "wiki"
    ]


def _variable_free(triples):
    concepts = _concepts(triples)
    items = []
    for t in triples:
        if t.kind == "instance":
            items.append(("instance", t.target))
        elif t.kind == "attribute":
            items.append((concepts.get(t.source), t.label, t.target))
        else:
            items.append((concepts.get(t.source), t.label, concepts.get(t.target)))
    return items


# item extractors of the multiset families:
_ITEMS = {
    "Concepts": lambda triples: list(_concepts(triples).values()),
    "NamedEnt": _named_entities,
    "Negations": _negations,
    "Wikification": _wikification,
    "IgnoreVars": _variable_free,
    "Frames": _frames,
    "NS-frames": lambda triples: [SENSE_SUFFIX.sub("", c) for c in _frames(triples)],
}

_SUBSETS = {
    "Reentrancies": _reentrancy_triples,
    "SRL": _srl_triples,
}


def _triples(graph):
    return normalize_triples(extract_triples(graph))


def _has_feature(family, triples):
    if family in _SUBSETS:
        return any(t.kind == "relation" for t in _SUBSETS[family](triples))
    return len(_ITEMS[family](triples)) > 0


def feature_flags(graph):
    """For each correctable family: whether the graph has the feature at all."""
    triples = _triples(graph)
    return {family: _has_feature(family, triples) for family in CORRECTABLE_FAMILIES}


def _aligned_scores(cand, gold, restarts, seed, family, starts=()):
    alignment = align_triples(
        cand, gold, restarts=restarts, seed=derive_seed(seed, family), starts=starts
    )
    return prf(alignment.matched, len(cand), len(gold)), alignment


def fine_grained(candidate, gold, restarts=None, seed=0):
    """
    Scores candidate against gold on all 12 metric families.

    Unlabeled and NoWSD also start from the Smatch alignment, so their F1
    never falls below Smatch F1. Scores are not corrected for absent
    features; see `score_correction`.

    Returns:
        `QualityVector`
    """
    cand, ref = _triples(candidate), _triples(gold)
    scores = {}
    scores["Smatch"], alignment = _aligned_scores(cand, ref, restarts, seed, "Smatch")
    start = [alignment.mapping]
    scores["Unlabeled"], _ = _aligned_scores(
        _unlabel(cand), _unlabel(ref), restarts, seed, "Unlabeled", start
    )
    scores["NoWSD"], _ = _aligned_scores(
        _strip_senses(cand), _strip_senses(ref), restarts, seed, "NoWSD", start
    )
    for family, subset in _SUBSETS.items():
        scores[family], _ = _aligned_scores(subset(cand), subset(ref), restarts, seed, family)
    for family, items in _ITEMS.items():
        scores[family] = _bag_scores(items(cand), items(ref))
    assert set(scores.keys()) == set(FAMILIES), "every family must be scored"
    return QualityVector.from_scores(scores)


def score_correction(quality, candidate_flags, gold_flags):
    """
    Sets P = R = F1 = 1 for every correctable family that neither graph has.
    Smatch, Unlabeled, NoWSD, Concepts and IgnoreVars are never changed.
    """
    for family in CORRECTABLE_FAMILIES:
        if not candidate_flags[family] and not gold_flags[family]:
            quality = quality.replace(family, (1.0, 1.0, 1.0))
    return quality


def score_pair(candidate, gold, restarts=None, seed=0, correct=True):
    """fine_grained followed by score_correction."""
    quality = fine_grained(candidate, gold, restarts=restarts, seed=seed)
    if correct:
        quality = score_correction(quality, feature_flags(candidate), feature_flags(gold))
    return quality
