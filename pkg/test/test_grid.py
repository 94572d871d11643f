#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import os
import sys
import tempfile
import unittest

import numpy as np
from quamr.amr import SimplifiedAmr, parse_penman, simplify
from quamr.common.serial import IoFailure
from quamr.grid import (
    PAD_INDEX,
    TAB_INDEX,
    UNK_INDEX,
    ConfigManager,
    Vocabulary,
    build_vocab,
    coverage,
    project,
    unproject,
)
from test.util import random_graphs


CORPUS = [
    SimplifiedAmr([(0, ["want-01"]), (1, [":arg0", "boy"])]),
    SimplifiedAmr([(0, ["want-01"]), (1, [":arg0", "girl"])]),
    SimplifiedAmr([(0, ["go-02"]), (1, [":arg0", "boy"])]),
]


class TestVocabulary(unittest.TestCase):
    """
    This class tests vocabulary construction and persistence.
    """

    def test_build(self):
        vocab = build_vocab(CORPUS, min_freq=2)
        self.assertEqual(vocab.tokens, ["<pad>", "<unk>", "<tab>", ":arg0", "boy", "want-01"])
        self.assertEqual(vocab.lookup("girl"), UNK_INDEX)
        self.assertEqual(vocab.lookup(":arg0"), 3)
        self.assertNotIn("go-02", vocab)

    def test_min_freq_one(self):
        vocab = build_vocab(CORPUS, min_freq=1)
        self.assertEqual(len(vocab), 3 + 5)
        with self.assertRaises(ValueError):
            build_vocab(CORPUS, min_freq=0)

    def test_text_round_trip(self):
        vocab = build_vocab(CORPUS, min_freq=1)
        again = Vocabulary.from_text(vocab.to_text())
        self.assertEqual(again, vocab)
        self.assertEqual(again.checksum(), vocab.checksum())
        self.assertNotEqual(build_vocab(CORPUS, min_freq=2).checksum(), vocab.checksum())
        with self.assertRaises(ValueError):
            Vocabulary.from_text("tokens\n<pad>\n")

    def test_save_load(self):
        vocab = build_vocab(CORPUS, min_freq=1)
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "vocab.txt")
            vocab.save(path)
            self.assertEqual(Vocabulary.load(path), vocab)
            with self.assertRaises(IoFailure):
                Vocabulary.load(os.path.join(directory, "missing.txt"))


class TestGrid(unittest.TestCase):
    """
    This class tests projection of simplified lines onto token grids.
    """

    def _check(self, result, reference, msg):
        test_passed = np.array_equal(result, reference)
        if not test_passed:
            logging.info(msg)
            logging.info("Result: %s" % result)
            logging.info("Reference: %s" % reference)
        self.assertTrue(test_passed, msg)

    def test_project(self):
        vocab = build_vocab(CORPUS, min_freq=1)
        grid = project(CORPUS[0], vocab, rows=3, cols=4)
        reference = np.array(
            [
                [vocab.lookup("want-01"), PAD_INDEX, PAD_INDEX, PAD_INDEX],
                [TAB_INDEX, vocab.lookup(":arg0"), vocab.lookup("boy"), PAD_INDEX],
                [PAD_INDEX] * 4,
            ]
        )
        self._check(grid.cells, reference, "projection layout")
        self.assertFalse(grid.truncated)
        self.assertEqual(grid.cells.dtype, np.int64)

    def test_default_shape(self):
        vocab = build_vocab(CORPUS, min_freq=1)
        self.assertEqual(project(CORPUS[0], vocab).shape, (45, 15))
        with ConfigManager("rows", 9, "cols", 6):
            self.assertEqual(project(CORPUS[0], vocab).shape, (9, 6))
        self.assertEqual(project(CORPUS[0], vocab).shape, (45, 15))

    def test_truncation(self):
        vocab = build_vocab(CORPUS, min_freq=1)
        lines = SimplifiedAmr([(0, ["a"]), (1, ["b", "c", "d"]), (2, ["e"])])
        grid = project(lines, vocab, rows=2, cols=3)
        self.assertTrue(grid.rows_truncated)
        self.assertTrue(grid.cols_truncated)
        self.assertEqual(grid.cells[1].tolist(), [TAB_INDEX, UNK_INDEX, UNK_INDEX])
        self.assertEqual(coverage([grid, project(CORPUS[0], vocab)]), 0.5)
        self.assertEqual(coverage([]), 1.0)

    def test_unproject(self):
        graphs = random_graphs(40, seed=9, max_variables=5)
        corpus = [simplify(g) for g in graphs]
        vocab = build_vocab(corpus, min_freq=1)
        for lines in corpus:
            grid = project(lines, vocab, rows=60, cols=40)
            self.assertFalse(grid.truncated)
            self.assertEqual(unproject(grid, vocab), lines)

    def test_unknown_tokens(self):
        vocab = build_vocab(CORPUS, min_freq=1)
        lines = simplify(parse_penman("(b / believe-01 :ARG0 (g / girl))"))
        grid = project(lines, vocab)
        self.assertEqual(grid.cells[0, 0], UNK_INDEX)
        self.assertEqual(grid.cells[1, 2], vocab.lookup("girl"))


# This code only runs when executing the file outside the test harness
if __name__ == "__main__":
    unittest.main(argv=sys.argv[0])
