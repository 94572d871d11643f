#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import collections
import copy
import logging
import timeit

import numpy as np
import pandas as pd
import torch

from ..common.rng import torch_generator
from ..evaluation.stats import DegenerateVariance, pearson
from ..metrics.quality import target_names
from ..nn import MSELoss
from ..optim import Adam
from .rater import predict, stack_cells


__all__ = ["EmptySplit", "EpochStats", "TargetDimensionMismatch", "TrainReport", "train"]


class EmptySplit(ValueError):
    pass


class TargetDimensionMismatch(ValueError):
    pass


EpochStats = collections.namedtuple(
    "EpochStats", "epoch train_loss dev_pearson dev_mean_pearson seconds"
)


class TrainReport(object):
    """Per-epoch statistics of one training run and the selected epoch."""

    def __init__(self, epochs, selected_epoch):
        self.epochs = list(epochs)
        self.selected_epoch = selected_epoch
        best = max(s.dev_mean_pearson for s in self.epochs)
        assert self.selected.dev_mean_pearson == best, "selected epoch must maximize dev rho"

    @property
    def selected(self):
        return self.epochs[self.selected_epoch - 1]

    @property
    def mean_seconds(self):
        return float(np.mean([s.seconds for s in self.epochs]))

    def to_frame(self):
        rows = []
        for s in self.epochs:
            row = collections.OrderedDict(
                [
                    ("epoch", s.epoch),
                    ("train_loss", s.train_loss),
                    ("dev_mean_pearson", s.dev_mean_pearson),
                    ("seconds", s.seconds),
                ]
            )
            row.update(("dev_pearson_" + k, v) for k, v in s.dev_pearson.items())
            row["selected"] = s.epoch == self.selected_epoch
            rows.append(row)
        return pd.DataFrame(rows)

    def __eq__(self, other):
        return (
            isinstance(other, TrainReport)
            and self.selected_epoch == other.selected_epoch
            and [s[:4] for s in self.epochs] == [s[:4] for s in other.epochs]
        )


def _targets(examples, out_dims):
    rows = []
    for _, _, target in examples:
        target = np.asarray(target, dtype=np.float32).reshape(-1)
        if target.size != out_dims:
            raise TargetDimensionMismatch(
                "target has {} values, model predicts {}".format(target.size, out_dims)
            )
        rows.append(target)
    return torch.from_numpy(np.stack(rows))


def dev_correlations(model, examples, batch_size=64):
    """Pearson rho per predicted dimension on (amr_grid, dep_grid, target) examples."""
    names = target_names(model.config.out_dims)
    predictions = np.stack(predict(model, [(a, d) for a, d, _ in examples], batch_size))
    gold = _targets(examples, model.config.out_dims).double().numpy()
    result = collections.OrderedDict()
    for idx, name in enumerate(names):
        try:
            result[name] = pearson(predictions[:, idx], gold[:, idx])
        except DegenerateVariance:
            logging.warning("Dev correlation of %s is undefined; counting it as 0" % name)
            result[name] = 0.0
    return result


def train(model, train_set, dev_set, epochs=5, lr=0.001, batch_size=64, seed=0, writer=None):
    """
    Trains model on (amr_grid, dep_grid, target) examples with Adam and the
    batch-mean squared error, evaluates dev rho after every epoch and
    restores the parameters of the epoch with the highest mean dev rho
    (earliest on ties).

    Args:
        writer (quamr.nn.tensorboard.SummaryWriter, optional): receives the
            scalars of every epoch

    Returns:
        `TrainReport`
    """
    train_set, dev_set = list(train_set), list(dev_set)
    if not train_set:
        raise EmptySplit("training split is empty")
    if not dev_set:
        raise EmptySplit("development split is empty")
    if epochs < 1:
        raise ValueError("Invalid number of epochs: {}".format(epochs))
    if batch_size < 1:
        raise ValueError("Invalid batch size: {}".format(batch_size))

    out_dims = model.config.out_dims
    targets = _targets(train_set, out_dims)
    _targets(dev_set, out_dims)
    amr = stack_cells([a for a, _, _ in train_set])
    dep = stack_cells([d for _, d, _ in train_set])

    torch.set_num_threads(model.config.torch_threads)
    generator = torch_generator(seed, "shuffle")
    optimizer = Adam(model.parameters(), lr=lr)
    criterion = MSELoss()

    history, best_state, best_epoch = [], None, None
    for epoch in range(1, epochs + 1):
        start = timeit.default_timer()
        model.train()
        order = torch.randperm(len(train_set), generator=generator)
        total, count = 0.0, 0
        for first in range(0, len(train_set), batch_size):
            idx = order[first : first + batch_size]
            loss = criterion(model(amr[idx], dep[idx]), targets[idx])
            loss.backward()
            optimizer.step()
            total += float(loss.item()) * idx.numel()
            count += idx.numel()
        correlations = dev_correlations(model, dev_set, batch_size)
        stats = EpochStats(
            epoch=epoch,
            train_loss=total / count,
            dev_pearson=correlations,
            dev_mean_pearson=float(np.mean(list(correlations.values()))),
            seconds=timeit.default_timer() - start,
        )
        history.append(stats)
        logging.info(
            "Epoch %d: train loss %.6f, dev mean rho %.4f, %.1f s"
            % (epoch, stats.train_loss, stats.dev_mean_pearson, stats.seconds)
        )
        if writer is not None:
            writer.add_epoch(stats)
        if best_epoch is None or stats.dev_mean_pearson > history[best_epoch - 1].dev_mean_pearson:
            best_epoch, best_state = epoch, copy.deepcopy(model.state_dict())

    model.load_state_dict(best_state)
    model.eval()
    report = TrainReport(history, best_epoch)
    logging.info(
        "Selected epoch %d (dev mean rho %.4f, %.2f s per epoch)"
        % (best_epoch, report.selected.dev_mean_pearson, report.mean_seconds)
    )
    return report
