#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from .rater import ModelConfig, RaterModel, load_checkpoint, predict, save_checkpoint
from .trainer import EmptySplit, EpochStats, TargetDimensionMismatch, TrainReport, train


__all__ = [
    "EmptySplit",
    "EpochStats",
    "ModelConfig",
    "RaterModel",
    "TargetDimensionMismatch",
    "TrainReport",
    "load_checkpoint",
    "predict",
    "save_checkpoint",
    "train",
]
