#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from .quality import CORRECTABLE_FAMILIES, FAMILIES, SCORE_NAMES, QualityVector
from .smatch import (
    Alignment,
    ConfigManager,
    MetricsConfig,
    TooManyVariables,
    set_config,
    smatch,
    smatch_bruteforce,
)
from .fine_grained import feature_flags, fine_grained, score_correction, score_pair


__all__ = [
    "Alignment",
    "ConfigManager",
    "CORRECTABLE_FAMILIES",
    "FAMILIES",
    "MetricsConfig",
    "QualityVector",
    "SCORE_NAMES",
    "TooManyVariables",
    "feature_flags",
    "fine_grained",
    "score_correction",
    "score_pair",
    "set_config",
    "smatch",
    "smatch_bruteforce",
]
