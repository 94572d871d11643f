#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Records of (sentence, candidate AMR, optional gold, optional dependency
tree, optional targets), their line-delimited JSON files, target
generation, sentence-level splits and surface debiasing.

A records file holds one JSON object per line::

    {"id": "...", "sentence_id": "...", "snt": "...", "penman": "...",
     "gold_penman": "...", "targets": [36 floats]}

``gold_penman`` and ``targets`` are optional. Gold graphs can also come from
sembank files whose ``# ::id`` equals a record's sentence id, and dependency
trees from a CoNLL-U sidecar keyed by ``# sent_id``.
"""

import collections
import dataclasses
import json
import logging
import multiprocessing
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..amr.graph import (
    AmrGraph,
    parse_penman,
    randomize_surface,
    read_sembank,
    serialize_penman,
)
from ..amr.simplify import SimplifiedAmr, clean_token, simplify
from ..common.rng import derive_seed, numpy_generator
from ..common.serial import IoFailure
from ..dependency import DepTree, read_conllu, render_dep_lines, render_sentence_only
from ..grid import coverage, project
from ..metrics.fine_grained import score_pair
from ..metrics.quality import QualityVector
from ..metrics.smatch import resolve_restarts


__all__ = [
    "DatasetRecord",
    "IdCollision",
    "IngestResult",
    "MissingGold",
    "SplitSpec",
    "attach_trees",
    "debias_surface",
    "generate_targets",
    "ingest",
    "parallel_map",
    "project_records",
    "read_records",
    "render_record",
    "resplit_by_sentence",
    "split_in_order",
    "write_records",
]


class IdCollision(ValueError):
    pass


class MissingGold(ValueError):
    pass


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    sentence_id: str
    sentence: str
    candidate: AmrGraph
    gold: Optional[AmrGraph] = None
    dep: Optional[DepTree] = None
    targets: Optional[QualityVector] = None
    amr_truncated: bool = False
    dep_truncated: bool = False

    @property
    def predict_only(self):
        """True for records that can be rated but not trained or evaluated on."""
        return self.gold is None and self.targets is None


@dataclass
class SplitSpec:
    train: float = 0.8
    dev: float = 0.1
    test: float = 0.1
    seed: int = 0

    def validate(self):
        fractions = (self.train, self.dev, self.test)
        if min(fractions) <= 0.0 or abs(sum(fractions) - 1.0) > 1e-9:
            raise ValueError("Invalid split fractions: {}".format(fractions))
        return self


IngestResult = collections.namedtuple("IngestResult", "records skipped")


def _read_text(path):
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise IoFailure("cannot read {}: {}".format(path, e)) from e


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise IoFailure("cannot write {}: {}".format(path, e)) from e


def parallel_map(function, items, threads=1):
    """
    Ordered map over items, in a process pool when threads > 1. Results do
    not depend on the number of threads as long as function is pure.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with multiprocessing.Pool(processes=threads) as pool:
        return list(pool.imap(function, items, chunksize=max(1, len(items) // (4 * threads))))


def _record_from_json(obj):
    record_id = str(obj["id"])
    gold_text = obj.get("gold_penman")
    targets = obj.get("targets")
    return DatasetRecord(
        id=record_id,
        sentence_id=str(obj.get("sentence_id", record_id)),
        sentence=obj.get("snt", ""),
        candidate=parse_penman(obj["penman"]),
        gold=parse_penman(gold_text) if gold_text else None,
        targets=QualityVector(targets) if targets is not None else None,
    )


def _parse_records(text, source):
    records, skipped, seen = [], 0, set()
    for number, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = _record_from_json(json.loads(line))
        except (ValueError, KeyError, TypeError) as e:
            logging.warning("Skipping record on line %d of %s: %s" % (number, source, e))
            skipped += 1
            continue
        if record.id in seen:
            raise IdCollision("record id {} occurs twice in {}".format(record.id, source))
        seen.add(record.id)
        records.append(record)
    return records, skipped


def read_records(path):
    """Reads a records file; returns (records, number of skipped lines)."""
    return _parse_records(_read_text(path), path)


def _sembank_golds(paths):
    golds, skipped = {}, 0
    for path in paths:
        for entry in read_sembank(_read_text(path)):
            if entry.graph is None:
                skipped += 1
                continue
            if entry.id in golds:
                raise IdCollision("gold graph id {} occurs twice".format(entry.id))
            golds[entry.id] = entry.graph
    return golds, skipped


def _dependency_trees(path):
    trees = {}
    for tree in read_conllu(_read_text(path), strict=False):
        if tree.sentence_id in trees:
            raise IdCollision("sentence id {} occurs twice in {}".format(tree.sentence_id, path))
        trees[tree.sentence_id] = tree
    return trees


def attach_trees(records, conllu_path):
    """Sets the dependency tree of every record from a CoNLL-U sidecar (None when absent)."""
    trees = _dependency_trees(conllu_path)
    return [dataclasses.replace(r, dep=trees.get(r.sentence_id)) for r in records]


def ingest(records_path, sembank_paths=(), conllu_path=None):
    """
    Joins a records file with gold sembanks and a CoNLL-U sidecar.

    Gold graphs given inline in a record win over sembank graphs. Records
    whose gold or dependency tree is missing keep None; malformed entries are
    logged and counted.

    Returns:
        `IngestResult` (records, skipped)
    """
    records, skipped = read_records(records_path)
    golds, bad_golds = _sembank_golds(sembank_paths)
    trees = _dependency_trees(conllu_path) if conllu_path else {}
    joined = []
    for record in records:
        gold = record.gold if record.gold is not None else golds.get(record.sentence_id)
        joined.append(
            dataclasses.replace(record, gold=gold, dep=trees.get(record.sentence_id))
        )
    if bad_golds:
        logging.warning("Skipped %d malformed gold graphs" % bad_golds)
    logging.info(
        "Ingested %d records (%d skipped, %d with gold, %d with dependency trees)"
        % (
            len(joined),
            skipped,
            sum(r.gold is not None for r in joined),
            sum(r.dep is not None for r in joined),
        )
    )
    return IngestResult(joined, skipped + bad_golds)


def write_records(records, path=None):
    """Renders records as JSON lines; writes them to path when given."""
    lines = []
    for record in records:
        obj = collections.OrderedDict(
            [
                ("id", record.id),
                ("sentence_id", record.sentence_id),
                ("snt", record.sentence),
                ("penman", serialize_penman(record.candidate)),
            ]
        )
        if record.gold is not None:
            obj["gold_penman"] = serialize_penman(record.gold)
        if record.targets is not None:
            obj["targets"] = record.targets.to_list()
        lines.append(json.dumps(obj, ensure_ascii=False))
    text = "".join(line + "\n" for line in lines)
    if path is not None:
        _write_text(path, text)
    return text


def _score_job(job):
    candidate, gold, restarts, seed, correct = job
    return score_pair(candidate, gold, restarts=restarts, seed=seed, correct=correct)


def generate_targets(records, restarts=None, seed=0, correct=True, threads=1):
    """
    Sets the targets of every record to the corrected fine-grained scores of
    its candidate against its gold graph. Each pair is scored with a seed
    derived from (seed, record id).
    """
    records = list(records)
    missing = [r.id for r in records if r.gold is None]
    if missing:
        raise MissingGold(
            "{} records have no gold graph, e.g. {}".format(len(missing), missing[0])
        )
    restarts = resolve_restarts(restarts)
    jobs = [(r.candidate, r.gold, restarts, derive_seed(seed, r.id), correct) for r in records]
    scores = parallel_map(_score_job, jobs, threads)
    return [dataclasses.replace(r, targets=q) for r, q in zip(records, scores)]


def _sentence_ids(records):
    return list(collections.OrderedDict((r.sentence_id, None) for r in records).keys())


def _partition_sizes(n, spec):
    """(train, dev, test) sentence counts; with three or more sentences none is empty."""
    num_train = int(round(spec.train * n))
    num_dev = min(int(round(spec.dev * n)), n - num_train)
    sizes = [num_train, num_dev, n - num_train - num_dev]
    if n >= 3:
        for idx in range(3):
            if sizes[idx] == 0:
                sizes[sizes.index(max(sizes))] -= 1
                sizes[idx] = 1
    return tuple(sizes)


def _partition(records, ordered_ids, spec):
    num_train, num_dev, num_test = _partition_sizes(len(ordered_ids), spec)
    for name, size in zip(("train", "dev", "test"), (num_train, num_dev, num_test)):
        if size == 0:
            logging.warning(
                "The %s split is empty: %d sentences cannot fill three partitions"
                % (name, len(ordered_ids))
            )
    assignment = {}
    for position, sentence_id in enumerate(ordered_ids):
        if position < num_train:
            assignment[sentence_id] = 0
        elif position < num_train + num_dev:
            assignment[sentence_id] = 1
        else:
            assignment[sentence_id] = 2
    parts = ([], [], [])
    for record in records:
        parts[assignment[record.sentence_id]].append(record)
    seen = [set(r.sentence_id for r in part) for part in parts]
    assert not (seen[0] & seen[1] or seen[0] & seen[2] or seen[1] & seen[2]), (
        "a sentence must not span partitions"
    )
    return parts


def resplit_by_sentence(records, spec):
    """
    Shuffles the unique sentence ids with spec.seed and assigns them to
    train, dev and test by the fractions of spec; all parses of a sentence
    land in one partition, in their input order.

    Returns:
        (train, dev, test)
    """
    spec.validate()
    records = list(records)
    ids = sorted(_sentence_ids(records))
    permutation = numpy_generator(spec.seed, "split").permutation(len(ids))
    return _partition(records, [ids[i] for i in permutation], spec)


def split_in_order(records, spec):
    """Like `resplit_by_sentence`, but keeps sentences in file order."""
    spec.validate()
    records = list(records)
    return _partition(records, _sentence_ids(records), spec)


def debias_surface(records, seed):
    """Randomizes every candidate's surface order with a per-record seed."""
    return [
        dataclasses.replace(
            r, candidate=randomize_surface(r.candidate, derive_seed(seed, r.id))
        )
        for r in records
    ]


def _sentence_line(sentence):
    tokens = [clean_token(t) for t in sentence.split()]
    return SimplifiedAmr([(0, tokens)] if tokens else [])


def render_record(record, use_dependency=True):
    """
    Simplified (AMR, dependency) lines of a record. Without a dependency
    tree, or with use_dependency False, the dependency side holds the
    sentence tokens on one line.
    """
    amr = simplify(record.candidate)
    if record.dep is None:
        return amr, _sentence_line(record.sentence)
    if use_dependency:
        return amr, render_dep_lines(record.dep)
    return amr, render_sentence_only(record.dep)


def project_records(records, amr_vocab, dep_vocab, rows, cols, out_dims=None, use_dependency=True):
    """
    Projects records onto grids.

    Returns:
        (records with truncation flags, examples) where examples are
        (amr_grid, dep_grid, target) triples; target is None when out_dims
        is None or the record has no targets.
    """
    flagged, examples = [], []
    for record in records:
        amr_lines, dep_lines = render_record(record, use_dependency)
        amr_grid = project(amr_lines, amr_vocab, side="amr", rows=rows, cols=cols)
        dep_grid = project(dep_lines, dep_vocab, side="dep", rows=rows, cols=cols)
        target = None
        if out_dims is not None and record.targets is not None:
            target = np.asarray(record.targets.select(out_dims), dtype=np.float32)
        flagged.append(
            dataclasses.replace(
                record, amr_truncated=amr_grid.truncated, dep_truncated=dep_grid.truncated
            )
        )
        examples.append((amr_grid, dep_grid, target))
    if examples:
        logging.info(
            "Projected %d records: AMR grid coverage %.3f, dependency grid coverage %.3f"
            % (
                len(examples),
                coverage(a for a, _, _ in examples),
                coverage(d for _, d, _ in examples),
            )
        )
    return flagged, examples

