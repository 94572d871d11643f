#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Evaluation statistics: correlation, error, five-way quality classes and
significance tests. Normal and Student-t tails come from `scipy.stats`.
"""

import math

import numpy as np
import scipy.stats
from sklearn.metrics import f1_score


__all__ = [
    "CLASS_NAMES",
    "DegenerateInput",
    "DegenerateVariance",
    "LengthMismatch",
    "OutOfRange",
    "bin_five_way",
    "fisher_z_test",
    "macro_f1",
    "paired_t_test",
    "pearson",
    "per_class_f1",
    "quadratic_weighted_kappa",
    "rmse",
]

CLASS_NAMES = ("very bad", "bad", "good", "very good", "excellent")

# left-closed lower bounds of classes 1..4:
CLASS_BOUNDARIES = (0.25, 0.5, 0.75, 0.95)


class DegenerateVariance(ArithmeticError):
    pass


class LengthMismatch(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


def _pair(pred, gold, min_length=1):
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    gold = np.asarray(gold, dtype=np.float64).reshape(-1)
    if pred.size != gold.size:
        raise LengthMismatch("lengths differ: {} vs {}".format(pred.size, gold.size))
    if pred.size < min_length:
        raise LengthMismatch("need at least {} values, got {}".format(min_length, pred.size))
    return pred, gold


def pearson(pred, gold):
    """Sample Pearson correlation; raises `DegenerateVariance` for constant input."""
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    gold = np.asarray(gold, dtype=np.float64).reshape(-1)
    if pred.size != gold.size:
        raise LengthMismatch("lengths differ: {} vs {}".format(pred.size, gold.size))
    if pred.size < 2:
        raise DegenerateVariance("correlation needs at least two values")
    x, y = pred - pred.mean(), gold - gold.mean()
    sxx, syy = np.dot(x, x), np.dot(y, y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVariance("correlation of a constant vector is undefined")
    return float(np.clip(np.dot(x, y) / math.sqrt(sxx * syy), -1.0, 1.0))


def rmse(pred, gold):
    pred, gold = _pair(pred, gold)
    return float(np.sqrt(np.mean((pred - gold) ** 2)))


def bin_five_way(f1):
    """Maps a Smatch F1 in [0, 1] to a class index 0..4 (see `CLASS_NAMES`)."""
    if not 0.0 <= f1 <= 1.0:
        raise OutOfRange("F1 must lie in [0, 1], got {}".format(f1))
    return sum(f1 >= boundary for boundary in CLASS_BOUNDARIES)


def _classes(values, num_classes):
    values = np.asarray(values, dtype=np.int64).reshape(-1)
    if values.size and (values.min() < 0 or values.max() >= num_classes):
        raise OutOfRange("class indices must lie in [0, {})".format(num_classes))
    return values


def quadratic_weighted_kappa(pred, gold, num_classes=5):
    """
    Cohen's kappa with weights (i - j)^2 / (K - 1)^2. When the expected
    disagreement is zero (both sides use one class), kappa is 1.0 for
    identical vectors and 0.0 otherwise.
    """
    pred, gold = _classes(pred, num_classes), _classes(gold, num_classes)
    if pred.size != gold.size:
        raise LengthMismatch("lengths differ: {} vs {}".format(pred.size, gold.size))
    if pred.size == 0:
        raise LengthMismatch("kappa needs at least one item")
    n = pred.size
    observed = np.zeros((num_classes, num_classes), dtype=np.float64)
    np.add.at(observed, (pred, gold), 1.0)
    observed /= n
    expected = np.outer(observed.sum(axis=1), observed.sum(axis=0))
    idx = np.arange(num_classes)
    weights = (idx[:, None] - idx[None, :]) ** 2 / float((num_classes - 1) ** 2)
    denominator = float((weights * expected).sum())
    if denominator == 0.0:
        return 1.0 if np.array_equal(pred, gold) else 0.0
    return 1.0 - float((weights * observed).sum()) / denominator


def _present_labels(pred, gold):
    return sorted(set(pred.tolist()) | set(gold.tolist()))


def macro_f1(pred, gold, num_classes=5):
    """Macro F1 over classes that occur in pred or gold."""
    pred, gold = _classes(pred, num_classes), _classes(gold, num_classes)
    if pred.size != gold.size:
        raise LengthMismatch("lengths differ: {} vs {}".format(pred.size, gold.size))
    if pred.size == 0:
        raise LengthMismatch("macro F1 needs at least one item")
    labels = _present_labels(pred, gold)
    return float(f1_score(gold, pred, labels=labels, average="macro", zero_division=0))


def per_class_f1(pred, gold, num_classes=5):
    """F1 of every class 0..K-1 (0 for classes absent from both sides)."""
    pred, gold = _classes(pred, num_classes), _classes(gold, num_classes)
    scores = f1_score(
        gold, pred, labels=list(range(num_classes)), average=None, zero_division=0
    )
    return [float(s) for s in scores]


def fisher_z_test(r1, n1, r2, n2):
    """
    Two-tailed test for the difference of two independent correlations via
    Fisher's r-to-z transform.

    Returns:
        (z, p)
    """
    for r in (r1, r2):
        if not -1.0 < r < 1.0:
            raise DegenerateInput("correlations must lie in (-1, 1), got {}".format(r))
    for n in (n1, n2):
        if n <= 3:
            raise DegenerateInput("sample sizes must exceed 3, got {}".format(n))
    z = (math.atanh(r1) - math.atanh(r2)) / math.sqrt(1.0 / (n1 - 3) + 1.0 / (n2 - 3))
    return z, float(min(1.0, 2.0 * scipy.stats.norm.sf(abs(z))))


def paired_t_test(a, b):
    """
    Two-tailed paired t-test with n - 1 degrees of freedom.

    Differences with zero variance raise `DegenerateVariance` when their mean
    is zero; otherwise t is +-inf and p is 0.

    Returns:
        (t, p)
    """
    a, b = _pair(a, b)
    if a.size < 2:
        raise DegenerateVariance("paired t-test needs at least two pairs")
    differences = a - b
    mean = float(differences.mean())
    sd = float(differences.std(ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            raise DegenerateVariance("paired differences are all zero")
        return math.copysign(math.inf, mean), 0.0
    t = mean / (sd / math.sqrt(a.size))
    return t, float(min(1.0, 2.0 * scipy.stats.t.sf(abs(t), a.size - 1)))
