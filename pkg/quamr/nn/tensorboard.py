#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from torch.utils.tensorboard import SummaryWriter as _SummaryWriter


class SummaryWriter(_SummaryWriter):
    """
    Adapts the PyTorch SummaryWriter to write the curves of one training run.
    """

    def add_epoch(self, stats):
        """Writes the scalars of one `EpochStats` at step stats.epoch."""
        self.add_scalar("train/loss", stats.train_loss, stats.epoch)
        self.add_scalar("dev/mean_pearson", stats.dev_mean_pearson, stats.epoch)
        self.add_scalar("time/seconds", stats.seconds, stats.epoch)
        for name, value in stats.dev_pearson.items():
            self.add_scalar("dev/pearson/%s" % name, value, stats.epoch)
