#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import torch
from torch.optim.optimizer import required

from ..gradients import NonFiniteGradient


class Optimizer(torch.optim.Optimizer):
    r"""Base class of the rater's optimizers.

    A step runs the closure (if any), refuses non-finite gradients before
    touching a parameter, hands every parameter that has a gradient to
    `update`, and finally zeroes all gradients.

    Arguments:
        params (iterable): ordered iterable of :class:`torch.Tensor` s or of
            :class:`dict` s defining parameter groups. Sets are rejected, as
            their order changes between runs.
        defaults: (dict): default values of the optimization options.
    """

    def add_param_group(self, param_group):
        assert isinstance(param_group, dict), "param group must be a dict"
        params = param_group["params"]
        if isinstance(params, set):
            raise TypeError("parameters must come in an ordered collection, not a set")
        params = [params] if isinstance(params, torch.Tensor) else list(params)
        for param in params:
            if not isinstance(param, torch.Tensor):
                raise TypeError("cannot optimize a {}".format(torch.typename(param)))
        param_group["params"] = params

        for name, default in self.defaults.items():
            if default is required and name not in param_group:
                raise ValueError("parameter group lacks required option {}".format(name))
            param_group.setdefault(name, default)
        self.param_groups.append(param_group)

    def _parameters_with_gradients(self):
        for group in self.param_groups:
            for p in group["params"]:
                if p.grad is not None:
                    yield group, p

    def update(self, group, p):
        """Changes p in place from p.grad and the options of its group."""
        raise NotImplementedError("update is not implemented")

    def step(self, closure=None):
        """Performs a single optimization step.

        Arguments:
            closure (callable, optional): reevaluates the model and returns the loss.
        """
        loss = None
        if closure is not None:
            with torch.enable_grad():
                loss = closure()

        for _, p in self._parameters_with_gradients():
            if not torch.isfinite(p.grad).all():
                raise NonFiniteGradient(
                    "refusing {} step on a non-finite gradient".format(type(self).__name__)
                )
        with torch.no_grad():
            for group, p in self._parameters_with_gradients():
                self.update(group, p)
        self.zero_grad()
        return loss

    def zero_grad(self):
        """Zeroes (rather than drops) the gradient of every parameter."""
        for _, p in self._parameters_with_gradients():
            p.grad.detach_()
            p.grad.zero_()
