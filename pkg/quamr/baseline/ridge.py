#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Linear baseline over shallow statistics of the candidate AMR and the
sentence's dependency tree.

For a graph with node set V and edge set E the statistics are

    [density, mean degree, |V|, |E|, #arg0 or subject, #arg1 or object]

with density |E| / (|V| (|V| - 1)) (0 for |V| <= 1) and mean degree
2 |E| / |V|. The feature vector is [phi(A) - phi(D); phi(D); phi(A); J]
where J is the Jaccard overlap of dependency lemmas and sense-stripped
concepts.
"""

import logging

import numpy as np

from ..amr.graph import extract_triples
from ..evaluation.stats import DegenerateVariance, pearson
from ..metrics.fine_grained import SENSE_SUFFIX


__all__ = [
    "FEATURE_NAMES",
    "LAMBDAS",
    "RidgeBaseline",
    "RidgeWeights",
    "SingularSystem",
    "featurize",
    "ridge_fit",
]

STATISTICS = ("density", "degree", "nodes", "edges", "arg0_subj", "arg1_obj")

FEATURE_NAMES = tuple(
    ["diff_" + s for s in STATISTICS]
    + ["dep_" + s for s in STATISTICS]
    + ["amr_" + s for s in STATISTICS]
    + ["lemma_concept_jaccard"]
)

SUBJECT_DEPRELS = frozenset(["nsubj", "nsubj:pass", "csubj"])
OBJECT_DEPRELS = frozenset(["obj", "iobj", "ccomp"])

LAMBDAS = (0.01, 0.1, 1.0, 10.0)
DEFAULT_LAMBDA = 1.0


class SingularSystem(ArithmeticError):
    pass


def _statistics(num_nodes, num_edges, num_first, num_second):
    density = num_edges / (num_nodes * (num_nodes - 1)) if num_nodes > 1 else 0.0
    degree = 2.0 * num_edges / num_nodes if num_nodes > 0 else 0.0
    return np.array([density, degree, num_nodes, num_edges, num_first, num_second], dtype=np.float64)


def _amr_statistics(graph):
    labels = [t.label.lower() for t in extract_triples(graph) if t.kind == "relation"]
    return _statistics(len(graph.nodes), len(graph.edges), labels.count("arg0"), labels.count("arg1"))


def _dep_statistics(tree, subject_deprels, object_deprels):
    if tree is None:
        return np.zeros(len(STATISTICS), dtype=np.float64)
    deprels = [t.deprel.lower() for t in tree.tokens if t.head is not None]
    return _statistics(
        len(tree),
        len(deprels),
        sum(d in subject_deprels for d in deprels),
        sum(d in object_deprels for d in deprels),
    )


def _jaccard(graph, tree):
    if tree is None:
        return 0.0
    lemmas = set(lemma.lower() for lemma in tree.lemmas())
    concepts = set(SENSE_SUFFIX.sub("", graph.concept(v)).lower() for v in graph.variables())
    union = lemmas | concepts
    return len(lemmas & concepts) / len(union) if union else 0.0


def featurize(candidate, dep, subject_deprels=SUBJECT_DEPRELS, object_deprels=OBJECT_DEPRELS):
    """
    The 19 features of `FEATURE_NAMES` for a candidate graph and the
    sentence's dependency tree (None gives zero dependency statistics).
    """
    amr = _amr_statistics(candidate)
    dep_stats = _dep_statistics(dep, subject_deprels, object_deprels)
    return np.concatenate([amr - dep_stats, dep_stats, amr, [_jaccard(candidate, dep)]])


class RidgeWeights(object):
    """Coefficients (d x k) and an unpenalized intercept (k)."""

    def __init__(self, coef, intercept):
        self.coef = coef
        self.intercept = intercept

    def predict(self, X):
        return np.asarray(X, dtype=np.float64) @ self.coef + self.intercept


def ridge_fit(X, Y, lam):
    """
    Closed-form ridge regression per target column,
    W = (Xc^T Xc + lam I)^-1 Xc^T Yc on centered data, with the intercept
    recovered from the means so that it carries no penalty.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    if X.ndim != 2 or X.shape[0] != Y.shape[0]:
        raise ValueError("X and Y must have the same number of rows")
    if X.shape[0] == 0:
        raise ValueError("ridge regression needs at least one sample")
    if lam < 0:
        raise ValueError("Invalid regularization strength: {}".format(lam))
    x_mean, y_mean = X.mean(axis=0), Y.mean(axis=0)
    Xc, Yc = X - x_mean, Y - y_mean
    gram = Xc.T @ Xc + lam * np.eye(X.shape[1])
    try:
        coef = np.linalg.solve(gram, Xc.T @ Yc)
    except np.linalg.LinAlgError as e:
        raise SingularSystem("normal equations are singular (lambda={})".format(lam)) from e
    return RidgeWeights(coef, y_mean - x_mean @ coef)


class Standardizer(object):
    """Column mean/std of the training split; constant columns keep std 1."""

    def __init__(self, X):
        X = np.asarray(X, dtype=np.float64)
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.std = np.where(std > 0.0, std, 1.0)

    def __call__(self, X):
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.std


def _mean_pearson(pred, gold):
    values = []
    for idx in range(gold.shape[1]):
        try:
            values.append(pearson(pred[:, idx], gold[:, idx]))
        except DegenerateVariance:
            values.append(0.0)
    return float(np.mean(values))


class RidgeBaseline(object):
    """
    Standardized ridge regression whose strength is picked on the dev split
    (highest mean Pearson rho, smallest lambda on ties). Predictions are
    clipped to [0, 1].
    """

    def __init__(self, lambdas=LAMBDAS):
        self.lambdas = tuple(sorted(lambdas))
        self.lam = None
        self.weights = None
        self.standardizer = None

    def fit(self, X_train, Y_train, X_dev=None, Y_dev=None):
        self.standardizer = Standardizer(X_train)
        X = self.standardizer(X_train)
        if X_dev is None or Y_dev is None:
            self.lam = DEFAULT_LAMBDA
            self.weights = ridge_fit(X, Y_train, self.lam)
            return self
        Y_dev = np.asarray(Y_dev, dtype=np.float64).reshape(len(X_dev), -1)
        best = None
        for lam in self.lambdas:
            weights = ridge_fit(X, Y_train, lam)
            pred = np.clip(weights.predict(self.standardizer(X_dev)), 0.0, 1.0)
            score = _mean_pearson(pred, Y_dev)
            logging.info("Ridge lambda %g: dev mean rho %.4f" % (lam, score))
            if best is None or score > best[0]:
                best = (score, lam, weights)
        _, self.lam, self.weights = best
        logging.info("Ridge selected lambda %g" % self.lam)
        return self

    def predict(self, X):
        assert self.weights is not None, "fit the baseline before predicting"
        return np.clip(self.weights.predict(self.standardizer(X)), 0.0, 1.0)
