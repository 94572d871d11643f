#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.


from . import functional, init
from .loss import MSELoss
from .module import Conv2dSame, Dense, Embedding, GlobalPoolFlatten, MaxPool2d


__all__ = [
    "Conv2dSame",
    "Dense",
    "Embedding",
    "GlobalPoolFlatten",
    "MSELoss",
    "MaxPool2d",
    "functional",
    "init",
]
