#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from . import report, stats
from .report import EvalReport, evaluate, fisher_comparisons, seed_comparison, write_plots
from .stats import (
    CLASS_NAMES,
    DegenerateInput,
    DegenerateVariance,
    LengthMismatch,
    OutOfRange,
    bin_five_way,
    fisher_z_test,
    macro_f1,
    paired_t_test,
    pearson,
    quadratic_weighted_kappa,
    rmse,
)


__all__ = [
    "CLASS_NAMES",
    "DegenerateInput",
    "DegenerateVariance",
    "EvalReport",
    "LengthMismatch",
    "OutOfRange",
    "bin_five_way",
    "evaluate",
    "fisher_comparisons",
    "fisher_z_test",
    "macro_f1",
    "paired_t_test",
    "pearson",
    "quadratic_weighted_kappa",
    "report",
    "rmse",
    "seed_comparison",
    "stats",
    "write_plots",
]
