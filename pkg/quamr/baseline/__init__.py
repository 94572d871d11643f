#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from .ridge import (
    FEATURE_NAMES,
    LAMBDAS,
    RidgeBaseline,
    RidgeWeights,
    SingularSystem,
    featurize,
    ridge_fit,
)


__all__ = [
    "FEATURE_NAMES",
    "LAMBDAS",
    "RidgeBaseline",
    "RidgeWeights",
    "SingularSystem",
    "featurize",
    "ridge_fit",
]
