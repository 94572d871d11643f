#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import abc
import math


class ConfigBase(abc.ABC):
    """
    Context manager that temporarily overrides fields of a configuration
    dataclass and restores the previous values on exit.

    Example::

        >>> with ConfigManager("restarts", 8):
        ...     smatch(candidate, gold)
    """

    def __init__(self, config, *args):
        self.config = config
        assert len(args) % 2 == 0, "Uneven number of configuration params."
        self.params = args[::2]
        self.values = args[1::2]
        for p in self.params:
            if not hasattr(config, p):
                raise ValueError("Unknown configuration field: {}".format(p))

    def __enter__(self):
        self.old_values = []
        for p, v in zip(self.params, self.values):
            self.old_values.append(getattr(self.config, p))
            setattr(self.config, p, v)

    def __exit__(self, exc_type, exc_value, tb):
        for p, v in zip(self.params, self.old_values):
            setattr(self.config, p, v)
        return exc_type is None


def f_score(precision, recall):
    """Harmonic mean of precision and recall, 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def prf(matched, num_predicted, num_reference):
    """Returns (precision, recall, f1) for a match count and two set sizes."""
    precision = matched / num_predicted if num_predicted > 0 else 0.0
    recall = matched / num_reference if num_reference > 0 else 0.0
    return precision, recall, f_score(precision, recall)


def ceil_div(a, b):
    return int(math.ceil(a / b))
