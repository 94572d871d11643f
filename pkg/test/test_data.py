#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import json
import logging
import os
import sys
import tempfile
import unittest

import numpy as np
import scipy.stats
from quamr.amr import (
    extract_triples,
    isomorphic,
    parse_penman,
    read_sembank,
    serialize_penman,
)
from quamr.common.rng import derive_seed
from quamr.data import (
    DatasetRecord,
    IdCollision,
    MissingGold,
    OPERATIONS,
    SplitSpec,
    attach_trees,
    corrupt,
    debias_surface,
    generate_targets,
    ingest,
    project_records,
    read_records,
    render_record,
    resplit_by_sentence,
    split_in_order,
    synthesize_corpus,
    write_records,
)
from quamr.grid import build_vocab
from quamr.metrics import smatch
from test.util import GOLD_SEMBANK, conllu_text, random_graphs


def _golds():
    return [e.graph for e in read_sembank(GOLD_SEMBANK)]


def _records(count_per_sentence=1, sentences=10, seed=0):
    records = []
    for k, g in enumerate(random_graphs(sentences, seed=seed)):
        for j in range(count_per_sentence):
            records.append(
                DatasetRecord(
                    id="%s.%d" % (g.id, j),
                    sentence_id=g.id,
                    sentence="sentence %d" % k,
                    candidate=corrupt(g, j, seed=k),
                    gold=g,
                )
            )
    return records


class TestDataset(unittest.TestCase):
    """
    This class tests record files, ingestion, targets and splits.
    """

    def setUp(self):
        super().setUp()
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()
        super().tearDown()

    def _write(self, name, text):
        path = os.path.join(self.directory.name, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def test_records_round_trip(self):
        records = generate_targets(_records(2, sentences=3))
        path = os.path.join(self.directory.name, "records.jsonl")
        write_records(records, path)
        again, skipped = read_records(path)
        self.assertEqual(skipped, 0)
        self.assertEqual([r.id for r in again], [r.id for r in records])
        for r1, r2 in zip(records, again):
            self.assertTrue(isomorphic(r1.candidate, r2.candidate))
            self.assertTrue(isomorphic(r1.gold, r2.gold))
            self.assertEqual(r1.targets, r2.targets)
            self.assertEqual(r1.sentence_id, r2.sentence_id)
        self.assertEqual(write_records(again), write_records(records))

    def test_ingest(self):
        lines = [
            json.dumps(
                {
                    "id": "r%d" % k,
                    "sentence_id": g.id,
                    "snt": g.metadata["snt"],
                    "penman": serialize_penman(g),
                }
            )
            for k, g in enumerate(_golds())
        ]
        lines.insert(2, '{"id": "broken", "penman": "(a / boy"}')
        lines.append("not json")
        lines.append(json.dumps({"id": "orphan", "sentence_id": "s9", "penman": "(b / boy)"}))
        records_path = self._write("records.jsonl", "\n".join(lines) + "\n")
        sembank_path = self._write("gold.txt", GOLD_SEMBANK)
        conllu_path = self._write("deps.conllu", conllu_text(["s1", "s2", "s4"]))

        records, skipped = ingest(records_path, [sembank_path], conllu_path)
        self.assertEqual(skipped, 2)
        self.assertEqual([r.id for r in records], ["r0", "r1", "r2", "r3", "orphan"])
        self.assertTrue(all(r.gold is not None for r in records[:4]))
        self.assertTrue(records[-1].predict_only)
        self.assertEqual(
            [r.dep is not None for r in records], [True, True, False, True, False]
        )
        self.assertEqual(records[0].dep.sentence_id, "s1")

    def test_id_collision(self):
        line = json.dumps({"id": "x", "penman": "(b / boy)"})
        path = self._write("records.jsonl", line + "\n" + line + "\n")
        with self.assertRaises(IdCollision):
            read_records(path)

    def test_attach_trees(self):
        records = [
            DatasetRecord("a", "s1", "", parse_penman("(b / boy)")),
            DatasetRecord("b", "s7", "", parse_penman("(b / boy)")),
        ]
        attached = attach_trees(records, self._write("deps.conllu", conllu_text()))
        self.assertEqual(attached[0].dep.forms()[1], "boy")
        self.assertIsNone(attached[1].dep)

    def test_generate_targets(self):
        golds = _golds()
        records = [DatasetRecord(g.id, g.id, "", g, gold=g) for g in golds]
        for record in generate_targets(records, seed=1):
            self.assertTrue(np.all(record.targets.values == 1.0))
        with self.assertRaises(MissingGold):
            generate_targets([DatasetRecord("x", "x", "", golds[0])])

    def test_generate_targets_threads(self):
        records = _records(3, sentences=4)
        serial = generate_targets(records, seed=2, threads=1)
        parallel = generate_targets(records, seed=2, threads=2)
        for r1, r2 in zip(serial, parallel):
            self.assertEqual(r1.targets, r2.targets)

    def test_resplit_by_sentence(self):
        records = _records(3, sentences=10)
        spec = SplitSpec(seed=4)
        train, dev, test = resplit_by_sentence(records, spec)
        sentences = [set(r.sentence_id for r in part) for part in (train, dev, test)]
        self.assertEqual([len(s) for s in sentences], [8, 1, 1])
        self.assertEqual(len(train) + len(dev) + len(test), len(records))
        self.assertFalse(sentences[0] & sentences[1] or sentences[0] & sentences[2])
        # parses of one sentence keep their input order:
        self.assertEqual([r.id for r in dev], sorted(r.id for r in dev))
        again = resplit_by_sentence(records, SplitSpec(seed=4))
        self.assertEqual([r.id for r in again[0]], [r.id for r in train])

    def test_split_in_order(self):
        records = _records(2, sentences=10)
        train, dev, test = split_in_order(records, SplitSpec())
        self.assertEqual([r.id for r in train], [r.id for r in records[:16]])
        self.assertEqual([r.sentence_id for r in test], ["g9", "g9"])
        with self.assertRaises(ValueError):
            split_in_order(records, SplitSpec(train=0.9, dev=0.1, test=0.1))
        with self.assertRaises(ValueError):
            split_in_order(records, SplitSpec(train=1.0, dev=0.0, test=0.0))

    def test_small_splits(self):
        """Rounding never leaves a partition empty once there are three sentences."""
        sizes = {3: [1, 1, 1], 4: [2, 1, 1], 6: [4, 1, 1], 20: [16, 2, 2]}
        for sentences, expected in sizes.items():
            records = _records(2, sentences=sentences)
            for parts in (
                resplit_by_sentence(records, SplitSpec(seed=1)),
                split_in_order(records, SplitSpec()),
            ):
                counts = [len(set(r.sentence_id for r in part)) for part in parts]
                self.assertEqual(counts, expected, "%d sentences" % sentences)
                self.assertEqual(sum(len(part) for part in parts), len(records))

        spec = SplitSpec(train=0.1, dev=0.1, test=0.8)
        counts = [len(part) for part in split_in_order(_records(1, sentences=4), spec)]
        self.assertEqual(counts, [1, 1, 2])

        with self.assertLogs(level="WARNING"):
            train, dev, test = split_in_order(_records(1, sentences=2), SplitSpec())
        self.assertEqual([len(train), len(dev), len(test)], [2, 0, 0])

    def test_debias_surface(self):
        records = _records(1, sentences=20)
        debiased = debias_surface(records, seed=3)
        for r1, r2 in zip(records, debiased):
            self.assertEqual(
                sorted(extract_triples(r1.candidate)), sorted(extract_triples(r2.candidate))
            )
        self.assertEqual(
            [serialize_penman(r.candidate) for r in debias_surface(records, seed=3)],
            [serialize_penman(r.candidate) for r in debiased],
        )

    def test_render_record(self):
        g = _golds()[0]
        record = DatasetRecord("r", "s1", "The boy wants to go .", g)
        amr, dep = render_record(record)
        self.assertEqual(amr.lines[0].tokens, ("want-01",))
        self.assertEqual(dep.lines[0].tokens, ("the", "boy", "wants", "to", "go", "."))
        (record,) = attach_trees([record], self._write("deps.conllu", conllu_text()))
        _, dep = render_record(record)
        self.assertEqual(dep.lines[0].tokens, ("wants",))
        _, flat = render_record(record, use_dependency=False)
        self.assertEqual(len(flat), 1)

    def test_project_records(self):
        records = generate_targets(_records(1, sentences=5))
        amr_vocab = build_vocab([render_record(r)[0] for r in records], min_freq=1)
        dep_vocab = build_vocab([render_record(r)[1] for r in records], min_freq=1)
        flagged, examples = project_records(records, amr_vocab, dep_vocab, 2, 15, out_dims=3)
        self.assertEqual(len(examples), 5)
        amr_grid, dep_grid, target = examples[0]
        self.assertEqual(amr_grid.shape, (2, 15))
        self.assertEqual(target.shape, (3,))
        self.assertEqual(target.dtype, np.float32)
        self.assertEqual(
            [r.amr_truncated for r in flagged], [a.truncated for a, _, _ in examples]
        )
        _, unlabeled = project_records(records, amr_vocab, dep_vocab, 2, 15)
        self.assertIsNone(unlabeled[0][2])


class TestCorrupt(unittest.TestCase):
    """
    This class tests synthetic candidate generation.
    """

    def test_no_edits(self):
        for g in _golds():
            self.assertEqual(serialize_penman(corrupt(g, 0, seed=0)), serialize_penman(g))

    def test_parseable(self):
        for idx, gold in enumerate(random_graphs(50, seed=12)):
            candidate = corrupt(gold, 6, seed=idx)
            text = serialize_penman(candidate)
            self.assertTrue(isomorphic(parse_penman(text), candidate))
            self.assertEqual(
                serialize_penman(corrupt(gold, 6, seed=idx)), text, "corruption is not seeded"
            )

    def test_severity(self):
        """More edits mean a lower Smatch F1 against the gold graph."""
        ops, f1 = [], []
        for idx, gold in enumerate(random_graphs(72, seed=21)):
            for k in range(7):
                candidate = corrupt(gold, k, seed=derive_seed(idx, k))
                ops.append(k)
                f1.append(smatch(candidate, gold, seed=idx)[2])
        ops, f1 = np.array(ops), np.array(f1)
        self.assertEqual(len(f1), 504)
        rho = scipy.stats.spearmanr(ops, f1)[0]
        logging.info("Spearman rho of edits and F1: %.3f" % rho)
        self.assertLess(rho, 0.0)

        means = [f1[ops == k].mean() for k in range(7)]
        self.assertEqual(means[0], 1.0)
        for k in range(1, 7):
            self.assertLessEqual(means[k], means[k - 1] + 0.01, "mean F1 rises at %d edits" % k)
        self.assertLess(means[6], means[1])

    def test_operations(self):
        s1, s2, s3, _ = _golds()
        negated = corrupt(s1, 1, seed=0, operations=["toggle_polarity"])
        self.assertIn(":polarity", [e.role for e in negated.edges])
        plain = corrupt(s2, 1, seed=0, operations=["toggle_polarity"])
        self.assertNotIn(":polarity", [e.role for e in plain.edges])
        unlinked = corrupt(s3, 1, seed=0, operations=["delete_wiki"])
        self.assertNotIn(":wiki", [e.role for e in unlinked.edges])
        self.assertEqual(len(unlinked.nodes), len(s3.nodes) - 1)
        swapped = corrupt(s1, 1, seed=0, operations=["swap_args"])
        self.assertIn(("relation", "w", "arg1", "b"), extract_triples(swapped))
        self.assertIn(("relation", "w", "arg0", "g"), extract_triples(swapped))

    def test_fallback(self):
        g = parse_penman("(b / boy)")
        corrupted = corrupt(g, 1, seed=0, operations=["swap_args"])
        self.assertNotEqual(corrupted.concept("b"), "boy")

    def test_errors(self):
        g = _golds()[0]
        with self.assertRaises(ValueError):
            corrupt(g, -1, seed=0)
        with self.assertRaises(ValueError):
            corrupt(g, 1, seed=0, operations=["shuffle"])
        self.assertEqual(
            sorted(OPERATIONS),
            ["delete_edge", "delete_wiki", "relabel", "replace_concept", "swap_args",
             "toggle_polarity"],
        )

    def test_synthesize_corpus(self):
        golds = _golds()
        records = synthesize_corpus(golds, 5, seed=7)
        self.assertEqual(len(records), 20)
        self.assertEqual(records[0].id, "s1.0")
        self.assertEqual(records[-1].sentence_id, "s4")
        self.assertEqual(records[0].sentence, "The boy wants to go .")
        self.assertTrue(all(r.gold is not None for r in records))
        again = synthesize_corpus(golds, 5, seed=7)
        self.assertEqual(write_records(again), write_records(records))
        with self.assertRaises(ValueError):
            synthesize_corpus(golds, 0, seed=7)


# This code only runs when executing the file outside the test harness
if __name__ == "__main__":
    unittest.main(argv=sys.argv[0])
