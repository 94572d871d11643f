#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import torch

from .optimizer import Optimizer


class Adam(Optimizer):
    r"""Implements the bias-corrected Adam rule.
    Args:
        params (iterable): iterable of parameters to optimize or dicts defining
            parameter groups
        lr (float): learning rate (default: 0.001)
        betas (tuple of float): decay rates of the first and second moment
            estimates (default: (0.9, 0.999))
        eps (float): term added to the denominator (default: 1e-8)
    Example:
        >>> optimizer = Adam(model.parameters(), lr=0.001)
        >>> loss_fn(model(amr, dep), target).backward()
        >>> optimizer.step()
    .. note::
        The update of parameter :math:`p` with gradient :math:`g` at step
        :math:`t` is
        .. math::
            \begin{aligned}
                m_t & = \beta_1 m_{t-1} + (1 - \beta_1) g, \\
                v_t & = \beta_2 v_{t-1} + (1 - \beta_2) g^2, \\
                p_t & = p_{t-1} - \text{lr} \cdot
                    \frac{m_t / (1 - \beta_1^t)}{\sqrt{v_t / (1 - \beta_2^t)} + \epsilon}.
            \end{aligned}
        Gradients are zeroed after every step, and a non-finite gradient
        raises `NonFiniteGradient` before any parameter changes.
    """  # noqa: W605

    def __init__(self, params, lr=0.001, betas=(0.9, 0.999), eps=1e-8):
        if not isinstance(lr, (int, float)) or lr < 0.0:
            raise ValueError("Invalid learning rate: {}".format(lr))
        if not 0.0 <= betas[0] < 1.0:
            raise ValueError("Invalid beta parameter at index 0: {}".format(betas[0]))
        if not 0.0 <= betas[1] < 1.0:
            raise ValueError("Invalid beta parameter at index 1: {}".format(betas[1]))
        if not isinstance(eps, (int, float)) or eps <= 0.0:
            raise ValueError("Invalid epsilon value: {}".format(eps))

        defaults = {"lr": lr, "betas": tuple(betas), "eps": eps}
        super(Adam, self).__init__(params, defaults)

    def update(self, group, p):
        beta1, beta2 = group["betas"]
        state = self.state[p]
        if len(state) == 0:
            state["step"] = 0
            state["exp_avg"] = torch.zeros_like(p)
            state["exp_avg_sq"] = torch.zeros_like(p)
        state["step"] += 1

        grad, exp_avg, exp_avg_sq = p.grad, state["exp_avg"], state["exp_avg_sq"]
        exp_avg.mul_(beta1).add_(grad, alpha=1.0 - beta1)
        exp_avg_sq.mul_(beta2).addcmul_(grad, grad, value=1.0 - beta2)

        bias_correction1 = 1.0 - beta1 ** state["step"]
        bias_correction2 = 1.0 - beta2 ** state["step"]
        denom = exp_avg_sq.div(bias_correction2).sqrt_().add_(group["eps"])
        p.addcdiv_(exp_avg, denom, value=-group["lr"] / bias_correction1)
