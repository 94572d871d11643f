#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import torch

from . import functional as F


class _Loss(torch.nn.Module):
    """
    Base criterion class.
    """

    def __init__(self, reduction="batchmean"):
        super(_Loss, self).__init__()
        if reduction != "batchmean":
            raise NotImplementedError("reduction %s not supported" % reduction)
        self.reduction = reduction

    def forward(self, *args, **kwargs):
        raise NotImplementedError("forward not implemented")


class MSELoss(_Loss):
    r"""
    Creates a criterion that measures the squared error between a prediction
    :math:`x` and target :math:`y`, summed over output dimensions and averaged
    over the minibatch:

    .. math::
        \ell(x, y) = \frac{1}{N} \sum_{n=1}^{N} \sum_{d} (x_{n,d} - y_{n,d})^2
    """  # noqa: W605

    def forward(self, x, y):
        return F.mse_loss(x, y)
