#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

__version__ = "0.1.0"

import quamr.amr  # noqa: F401
import quamr.metrics  # noqa: F401
import quamr.models  # noqa: F401
import quamr.nn  # noqa: F401
import quamr.optim  # noqa: F401

# other imports:
from . import baseline, data, evaluation, grid
from .amr import AmrGraph, parse_penman, serialize_penman
from .metrics import QualityVector, score_pair, smatch
from .models import ModelConfig, RaterModel


# expose classes and functions in package:
__all__ = [
    "AmrGraph",
    "ModelConfig",
    "QualityVector",
    "RaterModel",
    "amr",
    "baseline",
    "data",
    "evaluation",
    "grid",
    "metrics",
    "models",
    "nn",
    "optim",
    "parse_penman",
    "score_pair",
    "serialize_penman",
    "smatch",
]
