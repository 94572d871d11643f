#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from . import rng, serial, util


__all__ = ["rng", "serial", "util"]
