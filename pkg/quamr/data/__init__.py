#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from .corrupt import OPERATIONS, Uncorruptible, corrupt, synthesize_corpus
from .dataset import (
    DatasetRecord,
    IdCollision,
    IngestResult,
    MissingGold,
    SplitSpec,
    attach_trees,
    debias_surface,
    generate_targets,
    ingest,
    parallel_map,
    project_records,
    read_records,
    render_record,
    resplit_by_sentence,
    split_in_order,
    write_records,
)


__all__ = [
    "DatasetRecord",
    "IdCollision",
    "IngestResult",
    "MissingGold",
    "OPERATIONS",
    "SplitSpec",
    "Uncorruptible",
    "attach_trees",
    "corrupt",
    "debias_surface",
    "generate_targets",
    "ingest",
    "parallel_map",
    "project_records",
    "read_records",
    "render_record",
    "resplit_by_sentence",
    "split_in_order",
    "synthesize_corpus",
    "write_records",
]
