#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import sys
import unittest

import numpy as np
from quamr.amr import read_sembank
from quamr.baseline import FEATURE_NAMES, RidgeBaseline, SingularSystem, featurize, ridge_fit
from quamr.dependency import read_conllu
from sklearn.linear_model import Ridge
from test.util import GOLD_SEMBANK, conllu_text


class TestRidge(unittest.TestCase):
    """
    This class tests the shallow-feature ridge baseline.
    """

    def _check(self, result, reference, msg, tolerance=1e-8):
        result, reference = np.asarray(result), np.asarray(reference)
        test_passed = result.shape == reference.shape and np.allclose(
            result, reference, rtol=tolerance, atol=tolerance
        )
        if not test_passed:
            logging.info(msg)
            logging.info("Result: %s" % result)
            logging.info("Reference: %s" % reference)
        self.assertTrue(test_passed, msg=msg)

    def test_featurize(self):
        graph = read_sembank(GOLD_SEMBANK)[0].graph
        tree = read_conllu(conllu_text(["s1"]))[0]
        features = featurize(graph, tree)
        self.assertEqual(features.shape, (len(FEATURE_NAMES),))
        self.assertEqual(len(FEATURE_NAMES), 19)
        amr = [0.5, 2.0, 3.0, 3.0, 2.0, 1.0]
        dep = [5.0 / 30.0, 10.0 / 6.0, 6.0, 5.0, 1.0, 0.0]
        self._check(features[12:18], amr, "AMR statistics")
        self._check(features[6:12], dep, "dependency statistics")
        self._check(features[:6], np.subtract(amr, dep), "statistic differences")
        self.assertAlmostEqual(features[18], 0.5)

    def test_featurize_without_tree(self):
        graph = read_sembank(GOLD_SEMBANK)[3].graph
        features = featurize(graph, None)
        self._check(features[6:12], np.zeros(6), "missing tree")
        self._check(features[:6], features[12:18], "difference equals AMR statistics")
        self.assertEqual(features[18], 0.0)

    def test_ridge_fit(self):
        generator = np.random.default_rng(0)
        X = generator.normal(size=(60, 4))
        Y = generator.normal(size=(60, 2))
        for lam in (0.01, 1.0, 10.0):
            weights = ridge_fit(X, Y, lam)
            reference = Ridge(alpha=lam, fit_intercept=True).fit(X, Y)
            self._check(weights.coef, reference.coef_.T, "coefficients for lambda %g" % lam)
            self._check(weights.intercept, reference.intercept_, "intercept")
            self._check(weights.predict(X), reference.predict(X), "predictions")

    def test_exact_fit(self):
        generator = np.random.default_rng(1)
        X = generator.normal(size=(30, 3))
        y = X @ np.array([1.0, -2.0, 0.5]) + 3.0
        weights = ridge_fit(X, y, 0.0)
        self._check(weights.coef[:, 0], [1.0, -2.0, 0.5], "least squares coefficients")
        self._check(weights.intercept, [3.0], "least squares intercept")
        # the intercept carries no penalty, so shifting Y shifts only the intercept:
        shifted = ridge_fit(X, y + 2.0, 1.0)
        original = ridge_fit(X, y, 1.0)
        self._check(shifted.coef, original.coef, "shift changed coefficients")
        self._check(shifted.intercept, original.intercept + 2.0, "shift of intercept")

    def test_errors(self):
        X = np.ones((4, 2))
        with self.assertRaises(SingularSystem):
            ridge_fit(X, np.arange(4.0), 0.0)
        with self.assertRaises(ValueError):
            ridge_fit(X, np.arange(3.0), 1.0)
        with self.assertRaises(ValueError):
            ridge_fit(X, np.arange(4.0), -1.0)
        with self.assertRaises(ValueError):
            ridge_fit(np.ones((0, 2)), np.ones(0), 1.0)

    def test_baseline(self):
        generator = np.random.default_rng(2)
        X = generator.normal(size=(80, 5))
        X[:, 4] = 1.0
        Y = np.clip(0.5 + 0.1 * X[:, :3] + 0.01 * generator.normal(size=(80, 3)), 0.0, 1.0)
        baseline = RidgeBaseline(lambdas=(10.0, 0.1, 1.0)).fit(X[:60], Y[:60], X[60:], Y[60:])
        self.assertEqual(baseline.lambdas, (0.1, 1.0, 10.0))
        self.assertIn(baseline.lam, baseline.lambdas)
        pred = baseline.predict(X[60:])
        self.assertEqual(pred.shape, (20, 3))
        self.assertTrue(np.all((pred >= 0.0) & (pred <= 1.0)))
        for idx in range(3):
            self.assertGreater(np.corrcoef(pred[:, idx], Y[60:, idx])[0, 1], 0.9)
        self.assertEqual(RidgeBaseline().fit(X, Y).lam, 1.0)
        with self.assertRaises(AssertionError):
            RidgeBaseline().predict(X)


# This code only runs when executing the file outside the test harness
if __name__ == "__main__":
    unittest.main(argv=sys.argv[0])
