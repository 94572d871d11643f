#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import sys
import timeit
import unittest

import numpy as np
from quamr.amr import parse_penman, randomize_surface, read_sembank, simplify
from quamr.data import corrupt
from quamr.metrics import (
    FAMILIES,
    SCORE_NAMES,
    QualityVector,
    TooManyVariables,
    feature_flags,
    score_correction,
    score_pair,
    smatch,
    smatch_bruteforce,
)
from quamr.metrics.fine_grained import fine_grained
from quamr.metrics.smatch import ConfigManager
from quamr.metrics.quality import target_names
from test.util import GOLD_SEMBANK, random_graph, random_graphs


class TestSmatch(unittest.TestCase):
    """
    This class tests Smatch alignment and scoring.
    """

    def _check(self, result, reference, msg, tolerance=1e-12):
        result, reference = np.asarray(result), np.asarray(reference)
        test_passed = result.shape == reference.shape and np.allclose(
            result, reference, atol=tolerance, rtol=0.0
        )
        if not test_passed:
            logging.info(msg)
            logging.info("Result: %s" % result)
            logging.info("Reference: %s" % reference)
        self.assertTrue(test_passed, msg=msg)

    def test_identical(self):
        for g in random_graphs(30, seed=1):
            precision, recall, f1, alignment = smatch(g, g)
            self._check([precision, recall, f1], [1.0, 1.0, 1.0], "identical graphs")
            self.assertEqual(alignment.mapping, {v: v for v in g.variables()})

    def test_known_pair(self):
        cand = parse_penman("(w / want-01 :ARG0 (b / boy))")
        gold = parse_penman("(w / want-01 :ARG0 (g / girl))")
        precision, recall, f1, alignment = smatch(cand, gold)
        self._check([precision, recall, f1], [0.75, 0.75, 0.75], "one concept differs")
        self.assertEqual(alignment.matched, 3)

    def test_case_and_quotes(self):
        cand = parse_penman('(p / Person :name (n / name :op1 "Obama"))')
        gold = parse_penman("(p / person :name (n / name :op1 Obama))")
        self._check(smatch(cand, gold)[:3], [1.0, 1.0, 1.0], "normalized triples")
        with ConfigManager("lowercase", False):
            self.assertLess(smatch(cand, gold)[2], 1.0)

    def test_oracle(self):
        """Hill climbing never beats, and nearly always equals, exhaustive search."""
        generator = np.random.default_rng(1234)
        start, equal = timeit.default_timer(), 0
        for _ in range(200):
            cand = random_graph(generator, max_variables=6)
            gold = random_graph(generator, max_variables=6)
            f1 = smatch(cand, gold, restarts=4, seed=7)[2]
            exact = smatch_bruteforce(cand, gold)[2]
            self.assertLessEqual(f1, exact + 1e-12)
            equal += abs(f1 - exact) < 1e-12
        logging.info("Hill climbing found the optimum on %d of 200 pairs" % equal)
        self.assertGreaterEqual(equal, 190)
        self.assertLess(timeit.default_timer() - start, 60.0)

    def test_bruteforce_limit(self):
        g = parse_penman("(a / and :op1 (b / boy) :op2 (c / girl))")
        with ConfigManager("bruteforce_limit", 2):
            with self.assertRaises(TooManyVariables):
                smatch_bruteforce(g, g)
        self._check(smatch_bruteforce(g, g), [1.0, 1.0, 1.0], "exhaustive identity")

    def test_surface_invariance(self):
        golds = random_graphs(40, seed=2)
        for idx, gold in enumerate(golds):
            cand = corrupt(gold, 3, seed=idx)
            before = smatch(cand, gold, seed=idx)[:3]
            after = smatch(randomize_surface(cand, idx), gold, seed=idx)[:3]
            self.assertEqual(before, after)

    def test_alignment_render(self):
        cand = parse_penman("(w / want-01 :ARG0 (b / boy))")
        gold = parse_penman("(x / want-01 :ARG0 (y / boy))")
        *_, alignment = smatch(cand, gold)
        from quamr.amr import extract_triples
        from quamr.metrics.smatch import normalize_triples

        text = alignment.render(
            normalize_triples(extract_triples(cand)), normalize_triples(extract_triples(gold))
        )
        self.assertEqual(text, "b(boy)-y(boy) w(want-01)-x(want-01)")

    def test_invalid_restarts(self):
        g = parse_penman("(b / boy)")
        with self.assertRaises(ValueError):
            smatch(g, g, restarts=0)


class TestFineGrained(unittest.TestCase):
    """
    This class tests the eleven sub-task scores and score correction.
    """

    def test_self_scores(self):
        graphs = random_graphs(500, seed=4)
        graphs += [e.graph for e in read_sembank(GOLD_SEMBANK)]
        for idx, g in enumerate(graphs):
            quality = score_pair(randomize_surface(g, idx), g, seed=idx)
            if not np.all(quality.values == 1.0):
                logging.info("Scores: %s" % quality.as_dict())
            self.assertTrue(np.all(quality.values == 1.0))
            self.assertTrue(quality.is_consistent())

    def test_sense_difference(self):
        cand = parse_penman("(w / want-01 :ARG0 (b / boy))")
        gold = parse_penman("(w / want-02 :ARG0 (b / boy))")
        quality = score_pair(cand, gold)
        self.assertEqual(quality["Smatch"].f1, 0.5)
        self.assertEqual(quality["NoWSD"].f1, 1.0)
        self.assertEqual(quality["Frames"].f1, 0.0)
        self.assertEqual(quality["NS-frames"].f1, 1.0)
        self.assertEqual(quality["Concepts"].f1, 0.5)
        self.assertAlmostEqual(quality["SRL"].f1, 2.0 / 3.0)
        self.assertEqual(quality["IgnoreVars"].f1, 0.25)
        for family in ("Negations", "Wikification", "NamedEnt", "Reentrancies"):
            self.assertEqual(quality[family], (1.0, 1.0, 1.0))

    def test_inverse_role_reentrancy(self):
        """An :ARG0-of edge into a variable with another parent makes it re-entrant."""
        gold = parse_penman(
            "(w / want-01 :ARG1 (g / go-02 :ARG0 (b / boy :ARG0-of (s / sing-01))))"
        )
        self.assertFalse([t for t in simplify(gold).tokens() if t.startswith("*")])
        self.assertTrue(feature_flags(gold)["Reentrancies"])
        self.assertEqual(fine_grained(gold, gold)["Reentrancies"], (1.0, 1.0, 1.0))

        cand = parse_penman("(w / want-01 :ARG1 (g / go-02 :ARG0 (b / boy)))")
        self.assertFalse(feature_flags(cand)["Reentrancies"])
        self.assertEqual(fine_grained(cand, gold)["Reentrancies"].recall, 0.0)

    def test_correction(self):
        cand = parse_penman("(b / big :domain (h / house))")
        gold = parse_penman("(b / big :mod (h / house))")
        raw = fine_grained(cand, gold)
        corrected = score_pair(cand, gold)
        for family in ("Negations", "Wikification", "SRL"):
            self.assertEqual(raw[family], (0.0, 0.0, 0.0))
            self.assertEqual(corrected[family], (1.0, 1.0, 1.0))
        self.assertEqual(score_pair(cand, gold, correct=False), raw)
        self.assertEqual(corrected["Smatch"], raw["Smatch"])

    def test_correction_needs_absence_on_both_sides(self):
        cand = parse_penman("(b / believe-01 :polarity -)")
        gold = parse_penman("(b / believe-01)")
        flags = (feature_flags(cand), feature_flags(gold))
        self.assertTrue(flags[0]["Negations"])
        self.assertFalse(flags[1]["Negations"])
        quality = score_correction(fine_grained(cand, gold), *flags)
        self.assertEqual(quality["Negations"], (0.0, 0.0, 0.0))

    def test_named_entities(self):
        entries = read_sembank(GOLD_SEMBANK)
        obama = entries[2].graph
        other = parse_penman(
            '(v / visit-01 :ARG0 (p / person :name (n / name :op1 "Trump") :wiki "Donald_Trump")'
            ' :ARG1 (c / city :name (n2 / name :op1 "New" :op2 "York")))'
        )
        quality = score_pair(other, obama)
        self.assertEqual(quality["NamedEnt"], (0.5, 0.5, 0.5))
        self.assertEqual(quality["Wikification"], (0.0, 0.0, 0.0))

    def test_alignment_families_dominate_smatch(self):
        for idx, gold in enumerate(random_graphs(60, seed=6)):
            quality = score_pair(corrupt(gold, 4, seed=idx), gold, seed=idx)
            self.assertGreaterEqual(quality["Unlabeled"].f1, quality["Smatch"].f1)
            self.assertGreaterEqual(quality["NoWSD"].f1, quality["Smatch"].f1)

    def test_seed_determinism(self):
        golds = random_graphs(10, seed=8)
        for idx, gold in enumerate(golds):
            cand = corrupt(gold, 5, seed=idx)
            self.assertEqual(score_pair(cand, gold, seed=3), score_pair(cand, gold, seed=3))


class TestQualityVector(unittest.TestCase):
    """
    This class tests the 36-score container.
    """

    def test_layout(self):
        self.assertEqual(len(SCORE_NAMES), 36)
        self.assertEqual(SCORE_NAMES[:3], ("smatch_p", "smatch_r", "smatch_f1"))
        self.assertEqual(len(FAMILIES), 12)
        self.assertEqual(target_names(3), SCORE_NAMES[:3])
        self.assertEqual(len(target_names(33)), 33)
        with self.assertRaises(ValueError):
            target_names(5)

    def test_validation(self):
        with self.assertRaises(ValueError):
            QualityVector([0.5] * 35)
        with self.assertRaises(ValueError):
            QualityVector([0.5] * 35 + [1.5])
        vector = QualityVector(np.linspace(0.0, 1.0, 36))
        with self.assertRaises(ValueError):
            vector.values[0] = 0.3

    def test_select(self):
        vector = QualityVector(np.linspace(0.0, 1.0, 36))
        self.assertEqual(vector.select(3).tolist(), vector.values[:3].tolist())
        self.assertEqual(vector.select(33).tolist(), vector.values[3:].tolist())
        self.assertEqual(list(vector.as_dict().keys()), list(SCORE_NAMES))

    def test_from_scores(self):
        scores = {family: (0.5, 1.0, 2.0 / 3.0) for family in FAMILIES}
        vector = QualityVector.from_scores(scores)
        self.assertTrue(vector.is_consistent())
        self.assertFalse(vector.replace("Smatch", (0.5, 0.5, 0.9)).is_consistent())


# This code only runs when executing the file outside the test harness
if __name__ == "__main__":
    unittest.main(argv=sys.argv[0])
