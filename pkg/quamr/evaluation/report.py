#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import collections
import json
import logging
import os

import numpy as np
import pandas as pd

from ..common.rng import numpy_generator
from ..common.serial import IoFailure
from . import stats


__all__ = [
    "ClassificationRow",
    "EvalReport",
    "Significance",
    "evaluate",
    "fisher_comparisons",
    "seed_comparison",
    "write_plots",
]

CLASSIFICATION_DIM = "smatch_f1"

ClassificationRow = collections.namedtuple(
    "ClassificationRow", "system per_class_f1 macro_f1 kappa"
)

Significance = collections.namedtuple("Significance", "comparison statistic p_value")


def _safe_pearson(pred, gold, name):
    try:
        return stats.pearson(pred, gold)
    except stats.DegenerateVariance:
        logging.warning("Pearson correlation of %s is undefined (constant values)" % name)
        return None


class EvalReport(object):
    """
    Per-dimension correlation and error, five-way classification rows
    (model and baselines) and significance tests.
    """

    def __init__(self, dimensions, classification=(), significance=(), seeds=None):
        self.dimensions = collections.OrderedDict(dimensions)
        self.classification = list(classification)
        self.significance = list(significance)
        self.seeds = seeds
        for name, (rho, error) in self.dimensions.items():
            assert rho is None or -1.0 <= rho <= 1.0, "correlation of %s out of range" % name
            assert error >= 0.0, "RMSE of %s is negative" % name

    def pearson(self, name):
        return self.dimensions[name][0]

    def rmse(self, name):
        return self.dimensions[name][1]

    def dimension_frame(self):
        return pd.DataFrame(
            [
                {"dimension": name, "pearson": rho, "rmse": error}
                for name, (rho, error) in self.dimensions.items()
            ],
            columns=["dimension", "pearson", "rmse"],
        )

    def classification_frame(self):
        rows = []
        for row in self.classification:
            entry = collections.OrderedDict([("system", row.system)])
            entry.update(
                ("f1_" + name.replace(" ", "_"), value)
                for name, value in zip(stats.CLASS_NAMES, row.per_class_f1)
            )
            entry["macro_f1"] = row.macro_f1
            entry["kappa"] = row.kappa
            rows.append(entry)
        return pd.DataFrame(rows)

    def significance_frame(self):
        return pd.DataFrame(
            [s._asdict() for s in self.significance],
            columns=["comparison", "statistic", "p_value"],
        )

    def to_text(self):
        sections = ["== regression ==", self.dimension_frame().to_string(index=False)]
        if self.classification:
            sections += ["== classification ==", self.classification_frame().to_string(index=False)]
        if self.significance:
            sections += ["== significance ==", self.significance_frame().to_string(index=False)]
        if self.seeds:
            sections += ["== seeds ==", pd.DataFrame(self.seeds).to_string(index=False)]
        return "\n".join(sections) + "\n"

    def to_jsonl(self):
        lines = []
        for name, (rho, error) in self.dimensions.items():
            lines.append({"type": "dimension", "name": name, "pearson": rho, "rmse": error})
        for row in self.classification:
            entry = {"type": "classification"}
            entry.update(row._asdict())
            lines.append(entry)
        for s in self.significance:
            entry = {"type": "significance"}
            entry.update(s._asdict())
            lines.append(entry)
        for row in self.seeds or []:
            entry = {"type": "seeds"}
            entry.update(row)
            lines.append(entry)
        return "".join(json.dumps(line, sort_keys=True) + "\n" for line in lines)


def _classification_row(system, pred_classes, gold_classes):
    return ClassificationRow(
        system=system,
        per_class_f1=stats.per_class_f1(pred_classes, gold_classes),
        macro_f1=stats.macro_f1(pred_classes, gold_classes),
        kappa=stats.quadratic_weighted_kappa(pred_classes, gold_classes),
    )


def _bins(values):
    return np.array([stats.bin_five_way(float(np.clip(v, 0.0, 1.0))) for v in values])


def majority_class(gold_classes):
    """Most frequent class; the lowest index wins ties."""
    counts = np.bincount(gold_classes, minlength=len(stats.CLASS_NAMES))
    return int(np.argmax(counts))


def evaluate(pred, gold, names, seed=0, system="model"):
    """
    Builds an `EvalReport` for an (n x d) prediction matrix against gold.
    When names contain Smatch F1, the report also classifies both sides
    into five quality classes and adds majority-class and seeded
    random-class baseline rows.
    """
    pred = np.asarray(pred, dtype=np.float64).reshape(len(pred), -1)
    gold = np.asarray(gold, dtype=np.float64).reshape(len(gold), -1)
    if pred.shape != gold.shape:
        raise stats.LengthMismatch(
            "predictions {} and gold {} differ in shape".format(pred.shape, gold.shape)
        )
    if pred.shape[1] != len(names):
        raise stats.LengthMismatch("expected {} score columns".format(len(names)))
    dimensions = collections.OrderedDict()
    for idx, name in enumerate(names):
        dimensions[name] = (
            _safe_pearson(pred[:, idx], gold[:, idx], name),
            stats.rmse(pred[:, idx], gold[:, idx]),
        )
    classification = []
    if CLASSIFICATION_DIM in names and len(gold) > 0:
        idx = list(names).index(CLASSIFICATION_DIM)
        gold_classes = _bins(gold[:, idx])
        majority = np.full_like(gold_classes, majority_class(gold_classes))
        random = numpy_generator(seed, "random-baseline").integers(
            len(stats.CLASS_NAMES), size=len(gold_classes)
        )
        classification = [
            _classification_row(system, _bins(pred[:, idx]), gold_classes),
            _classification_row("majority", majority, gold_classes),
            _classification_row("random", random, gold_classes),
        ]
    return EvalReport(dimensions, classification)


def fisher_comparisons(pred, other, gold, names):
    """Fisher r-to-z test per dimension between two systems on the same items."""
    n = len(gold)
    pred, other, gold = (
        np.asarray(m, dtype=np.float64).reshape(n, -1) for m in (pred, other, gold)
    )
    results = []
    for idx, name in enumerate(names):
        r1 = _safe_pearson(pred[:, idx], gold[:, idx], name)
        r2 = _safe_pearson(other[:, idx], gold[:, idx], name)
        if r1 is None or r2 is None:
            continue
        try:
            z, p = stats.fisher_z_test(r1, len(gold), r2, len(gold))
        except stats.DegenerateInput as e:
            logging.warning("Skipping Fisher test of %s: %s" % (name, e))
            continue
        results.append(Significance("fisher_z:" + name, z, p))
    return results


def _run_summary(pred, gold, names):
    idx = list(names).index(CLASSIFICATION_DIM) if CLASSIFICATION_DIM in names else 0
    rho = _safe_pearson(pred[:, idx], gold[:, idx], names[idx])
    pred_classes, gold_classes = _bins(pred[:, idx]), _bins(gold[:, idx])
    return {
        "pearson": 0.0 if rho is None else rho,
        "kappa": stats.quadratic_weighted_kappa(pred_classes, gold_classes),
        "macro_f1": stats.macro_f1(pred_classes, gold_classes),
    }


def seed_comparison(runs, other_runs, gold, names):
    """
    Compares two systems trained with several seeds each (paired by seed
    order): mean and std of the first-dimension statistics per system, plus
    paired t-tests of rho, kappa and macro F1.

    Returns:
        (rows, significance entries)
    """
    if len(runs) != len(other_runs):
        raise stats.LengthMismatch("both systems need the same number of seeds")
    gold = np.asarray(gold, dtype=np.float64).reshape(len(gold), -1)
    summaries = {
        "system": [_run_summary(np.asarray(p).reshape(gold.shape), gold, names) for p in runs],
        "other": [_run_summary(np.asarray(p).reshape(gold.shape), gold, names) for p in other_runs],
    }
    rows = []
    for system, runs_summary in summaries.items():
        row = collections.OrderedDict([("system", system), ("seeds", len(runs_summary))])
        for key in ("pearson", "kappa", "macro_f1"):
            values = np.array([s[key] for s in runs_summary])
            row[key + "_mean"] = float(values.mean())
            row[key + "_std"] = float(values.std(ddof=1)) if len(values) > 1 else 0.0
        rows.append(row)
    significance = []
    for key in ("pearson", "kappa", "macro_f1"):
        a = [s[key] for s in summaries["system"]]
        b = [s[key] for s in summaries["other"]]
        try:
            t, p = stats.paired_t_test(a, b)
        except stats.DegenerateVariance as e:
            logging.warning("Skipping paired t-test of %s: %s" % (key, e))
            continue
        significance.append(Significance("paired_t:" + key, t, p))
    return rows, significance


def write_plots(report, pred, gold, names, directory):
    """Writes a score scatter and a per-dimension correlation bar chart as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams.update({"svg.hashsalt": "quamr", "font.family": "DejaVu Sans"})
    import matplotlib.pyplot as plt

    pred = np.asarray(pred, dtype=np.float64).reshape(len(pred), -1)
    gold = np.asarray(gold, dtype=np.float64).reshape(len(gold), -1)
    idx = list(names).index(CLASSIFICATION_DIM) if CLASSIFICATION_DIM in names else 0
    paths = []
    try:
        os.makedirs(directory, exist_ok=True)
        fig, ax = plt.subplots(figsize=(4.5, 4.5), constrained_layout=True)
        ax.scatter(gold[:, idx], pred[:, idx], s=6, alpha=0.5)
        ax.plot([0.0, 1.0], [0.0, 1.0], color="grey", linewidth=0.8)
        ax.set_xlabel("gold " + names[idx])
        ax.set_ylabel("predicted " + names[idx])
        ax.set_xlim(0.0, 1.0)
        ax.set_ylim(0.0, 1.0)
        paths.append(os.path.join(directory, "scatter.svg"))
        fig.savefig(paths[-1], format="svg", metadata={"Date": None})
        plt.close(fig)

        rhos = [report.pearson(name) or 0.0 for name in names]
        fig, ax = plt.subplots(figsize=(max(4.0, 0.3 * len(names)), 3.6), constrained_layout=True)
        ax.bar(range(len(names)), rhos)
        ax.set_xticks(range(len(names)))
        ax.set_xticklabels(names, rotation=90, fontsize=7)
        ax.set_ylabel("Pearson")
        ax.set_ylim(min(0.0, min(rhos)), 1.0)
        ax.grid(True, axis="y", alpha=0.3)
        paths.append(os.path.join(directory, "pearson.svg"))
        fig.savefig(paths[-1], format="svg", metadata={"Date": None})
        plt.close(fig)
    except OSError as e:
        raise IoFailure("cannot write plots to {}: {}".format(directory, e)) from e
    return paths
