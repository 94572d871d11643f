#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import collections

import numpy as np

from ..common.util import f_score


# canonical family order; every family contributes (P, R, F1):
FAMILIES = (
    "Smatch",
    "Unlabeled",
    "NoWSD",
    "Concepts",
    "NamedEnt",
    "Negations",
    "Wikification",
    "IgnoreVars",
    "Frames",
    "NS-frames",
    "Reentrancies",
    "SRL",
)

# families whose scores are set to 1 when neither graph has the feature:
CORRECTABLE_FAMILIES = (
    "NamedEnt",
    "Negations",
    "Wikification",
    "Frames",
    "NS-frames",
    "Reentrancies",
    "SRL",
)

SCORE_NAMES = tuple(
    "{}_{}".format(family.lower(), part) for family in FAMILIES for part in ("p", "r", "f1")
)

Score = collections.namedtuple("Score", "precision recall f1")


def target_names(out_dims):
    """Score names predicted by a model with out_dims outputs (3 or 33)."""
    if out_dims == 3:
        return SCORE_NAMES[:3]
    if out_dims == 33:
        return SCORE_NAMES[3:]
    if out_dims == 36:
        return SCORE_NAMES
    raise ValueError("Invalid number of output dimensions: {}".format(out_dims))


class QualityVector(object):
    """
    Precision, recall and F1 for each of the 12 metric families, held as a
    36-element float64 array in `SCORE_NAMES` order.
    """

    def __init__(self, values):
        values = np.asarray(values, dtype=np.float64).reshape(-1)
        if values.size != len(SCORE_NAMES):
            raise ValueError(
                "QualityVector needs {} values, got {}".format(len(SCORE_NAMES), values.size)
            )
        if not np.all((values >= 0.0) & (values <= 1.0)):
            raise ValueError("QualityVector values must lie in [0, 1]")
        self.values = values
        self.values.setflags(write=False)

    @classmethod
    def from_scores(cls, scores):
        """Builds a vector from a dict family -> (precision, recall, f1)."""
        values = []
        for family in FAMILIES:
            precision, recall, f1 = scores[family]
            values.extend([precision, recall, f1])
        return cls(values)

    def __getitem__(self, family):
        idx = FAMILIES.index(family)
        return Score(*(float(v) for v in self.values[3 * idx : 3 * idx + 3]))

    def replace(self, family, score):
        values = self.values.copy()
        idx = FAMILIES.index(family)
        values[3 * idx : 3 * idx + 3] = score
        return QualityVector(values)

    def select(self, out_dims):
        """The slice of the vector a model with out_dims outputs predicts."""
        if out_dims == 3:
            return self.values[:3].copy()
        if out_dims == 33:
            return self.values[3:].copy()
        return self.values[: len(target_names(out_dims))].copy()

    def is_consistent(self, tolerance=1e-9):
        """True when every F1 equals the harmonic mean of its P and R."""
        for family in FAMILIES:
            score = self[family]
            if abs(score.f1 - f_score(score.precision, score.recall)) > tolerance:
                return False
        return True

    def to_list(self):
        return [float(v) for v in self.values]

    def as_dict(self):
        return collections.OrderedDict(zip(SCORE_NAMES, self.to_list()))

    def __eq__(self, other):
        return isinstance(other, QualityVector) and np.array_equal(self.values, other.values)

    def __repr__(self):
        return "QualityVector({})".format(
            ", ".join("{}={:.4f}".format(f, self[f].f1) for f in FAMILIES)
        )
