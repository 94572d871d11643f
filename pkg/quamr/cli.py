#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
"""
Command-line pipeline of quamr.

To Run:
$ quamr score candidates.amr gold.amr -o scores.tsv --alignments align.txt

# Build train / dev / test splits, targets and vocabularies
$ quamr prepare --records parses.jsonl --sembank gold.amr --conllu deps.conllu -o data/

# Or synthesize a corpus by corrupting a gold sembank
$ quamr prepare --corrupt gold.amr --conllu deps.conllu -o data/

# Train, predict and evaluate
$ quamr train --data data/ -o run/ --tensorboard run/tb
$ quamr predict --data data/ --checkpoint run/model.ckpt -o run/test.tsv
$ quamr evaluate --data data/ --predictions run/test.tsv -o run/eval --plots

# Ridge baseline on the same split files
$ quamr baseline --data data/ -o run/ridge.tsv

Dependency trees come from a pre-tokenized, pre-parsed CoNLL-U file (for
instance the output of an off-the-shelf UD parser) whose ``# sent_id`` values
equal the records' sentence ids.

Settings are read from a ``key = value`` file (``--config`` or the
``QUAMR_CONFIG`` environment variable); command-line flags override it.
Exit codes: 0 success, 1 validation failure, 2 I/O or argument error.
"""

import argparse
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from .amr.graph import extract_triples, read_sembank
from .amr.simplify import simplify
from .baseline import RidgeBaseline, featurize
from .common.rng import derive_seed
from .common.serial import IoFailure
from .data import (
    SplitSpec,
    attach_trees,
    debias_surface,
    generate_targets,
    ingest,
    parallel_map,
    project_records,
    render_record,
    resplit_by_sentence,
    split_in_order,
    synthesize_corpus,
    write_records,
)
from .dependency import write_conllu
from .evaluation import evaluate, fisher_comparisons, seed_comparison, write_plots
from .grid import Vocabulary, build_vocab, coverage
from .metrics import SCORE_NAMES, TooManyVariables, score_pair, smatch
from .metrics.quality import target_names
from .metrics.smatch import normalize_triples
from .models import (
    ModelConfig,
    RaterModel,
    load_checkpoint,
    predict,
    save_checkpoint,
    train,
)


CONFIG_ENV = "QUAMR_CONFIG"
SPLITS = ("train", "dev", "test")


class UsageError(Exception):
    """Missing or contradictory command-line input (exit code 2)."""

    pass


@dataclass
class RunConfig:
    """
    Settings of one CLI run. Defaults < config file < command-line flags.
    """

    # paths:
    records: Optional[str] = None
    sembanks: tuple = field(default=(), metadata={"item": str})
    conllu: Optional[str] = None
    corrupt: Optional[str] = None
    data: Optional[str] = None
    vocab: Optional[str] = None
    checkpoint: Optional[str] = None
    output: Optional[str] = None
    tensorboard: Optional[str] = None
    alignments: Optional[str] = None

    # seeds:
    seed: int = 0
    split_seed: int = 0

    # targets and splits:
    restarts: int = 4
    correct: bool = True
    debias_level: int = 2
    train_fraction: float = 0.8
    dev_fraction: float = 0.1
    test_fraction: float = 0.1
    split: str = "test"
    per_gold: int = 20
    max_ops: int = 6

    # grids and model:
    rows: int = 45
    cols: int = 15
    min_freq: int = 5
    share_vocab: bool = False
    out_dims: int = 3
    use_dependency: bool = True
    global_pool: str = "max"
    epochs: int = 5
    lr: float = 0.001
    batch_size: int = 64
    torch_threads: int = 1

    # ridge:
    lambdas: tuple = field(default=(0.01, 0.1, 1.0, 10.0), metadata={"item": float})

    threads: int = 1
    plots: bool = False
    verbose: bool = False

    def validate(self):
        if self.debias_level not in (0, 1, 2):
            raise UsageError("Invalid debias level: {}".format(self.debias_level))
        if self.threads < 1:
            raise UsageError("Invalid number of threads: {}".format(self.threads))
        if self.split not in SPLITS:
            raise UsageError("Invalid split: {}".format(self.split))
        return self

    def split_spec(self):
        return SplitSpec(
            self.train_fraction, self.dev_fraction, self.test_fraction, self.split_seed
        )


def _parse_bool(text):
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError("not a boolean: {}".format(text))


def _convert(f, value):
    if not isinstance(value, str):
        return tuple(value) if isinstance(f.default, tuple) else value
    if isinstance(f.default, bool):
        return _parse_bool(value)
    if isinstance(f.default, tuple):
        item = f.metadata.get("item", str)
        return tuple(item(v.strip()) for v in value.split(",") if v.strip())
    if isinstance(f.default, int):
        return int(value)
    if isinstance(f.default, float):
        return float(value)
    return value


def parse_config_text(text, source="<config>"):
    """Reads ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    names = {f.name for f in dataclasses.fields(RunConfig)}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError("{}:{}: expected key = value".format(source, number))
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in names:
            raise UsageError("{}:{}: unknown setting {}".format(source, number, key))
        values[key] = value
    return values


def load_run_config(path=None, overrides=None):
    """
    Builds a `RunConfig` from defaults, the config file at path (or
    $QUAMR_CONFIG) and overrides, in that order.
    """
    path = path or os.environ.get(CONFIG_ENV)
    values = {}
    if path:
        try:
            with open(path, encoding="utf-8") as f:
                values.update(parse_config_text(f.read(), path))
        except OSError as e:
            raise IoFailure("cannot read config {}: {}".format(path, e)) from e
    values.update(overrides or {})
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    try:
        converted = {k: _convert(fields[k], v) for k, v in values.items()}
    except ValueError as e:
        raise UsageError("bad setting: {}".format(e)) from e
    return RunConfig(**converted).validate()


def _require(cfg, name):
    value = getattr(cfg, name)
    if value is None:
        raise UsageError("--{} is required".format(name.replace("_", "-")))
    return value


def _makedirs(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise IoFailure("cannot create {}: {}".format(path, e)) from e


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise IoFailure("cannot write {}: {}".format(path, e)) from e


def _read_sembank_file(path):
    try:
        with open(path, encoding="utf-8") as f:
            return read_sembank(f.read())
    except OSError as e:
        raise IoFailure("cannot read sembank {}: {}".format(path, e)) from e


def _score_table(ids, rows, names):
    rows = np.asarray(rows, dtype=np.float64).reshape(len(ids), -1)
    frame = pd.DataFrame(rows, columns=names)
    frame.insert(0, "id", list(ids))
    return frame.to_csv(sep="\t", index=False, float_format="%.4f")


def read_predictions(path):
    """Reads a predictions table; returns (ids, (n x d) matrix, column names)."""
    try:
        frame = pd.read_csv(path, sep="\t", dtype={"id": str})
    except OSError as e:
        raise IoFailure("cannot read predictions {}: {}".format(path, e)) from e
    if frame.columns[0] != "id":
        raise ValueError("predictions table {} must start with an id column".format(path))
    names = tuple(frame.columns[1:])
    unknown = [n for n in names if n not in SCORE_NAMES]
    if unknown:
        raise ValueError("unknown score columns in {}: {}".format(path, unknown))
    return list(frame["id"]), frame[list(names)].to_numpy(dtype=np.float64), names


# score


def _score_job(job):
    entry_id, candidate, gold, restarts, seed, correct, with_alignment = job
    try:
        quality = score_pair(candidate, gold, restarts=restarts, seed=seed, correct=correct)
        alignment = None
        if with_alignment:
            # same seed as the Smatch family of score_pair, so the same alignment
            best = smatch(
                candidate, gold, restarts=restarts, seed=derive_seed(seed, "Smatch")
            )[3]
            alignment = best.render(
                normalize_triples(extract_triples(candidate)),
                normalize_triples(extract_triples(gold)),
            )
        return entry_id, quality.to_list(), alignment, None
    except (TooManyVariables, ValueError) as e:
        return entry_id, None, None, str(e)


def cmd_score(args, cfg):
    """Scores aligned candidate and gold sembanks on all 36 metric entries."""
    candidates = _read_sembank_file(args.candidate)
    golds = _read_sembank_file(args.gold)
    if len(candidates) != len(golds):
        raise ValueError(
            "{} candidate graphs but {} gold graphs".format(len(candidates), len(golds))
        )
    jobs, failures = [], 0
    for cand, gold in zip(candidates, golds):
        if cand.graph is None or gold.graph is None:
            logging.error("Cannot score pair %s: malformed graph" % cand.id)
            failures += 1
            continue
        jobs.append(
            (
                cand.id,
                cand.graph,
                gold.graph,
                cfg.restarts,
                derive_seed(cfg.seed, cand.id),
                cfg.correct,
                cfg.alignments is not None,
            )
        )
    ids, rows, alignments = [], [], []
    for entry_id, scores, alignment, error in parallel_map(_score_job, jobs, cfg.threads):
        if error is not None:
            logging.error("Cannot score pair %s: %s" % (entry_id, error))
            failures += 1
            continue
        ids.append(entry_id)
        rows.append(scores)
        alignments.append("{}\t{}\n".format(entry_id, alignment))
    _write(cfg.output, _score_table(ids, rows, list(SCORE_NAMES)))
    if cfg.alignments is not None:
        _write(cfg.alignments, "".join(alignments))
    logging.info("Scored %d pairs, %d failed" % (len(ids), failures))
    return 0


# prepare


def _source_records(cfg):
    if cfg.corrupt is not None:
        golds = [e.graph for e in _read_sembank_file(cfg.corrupt) if e.graph is not None]
        records = synthesize_corpus(golds, cfg.per_gold, cfg.seed, max_ops=cfg.max_ops)
        if cfg.conllu is not None:
            records = attach_trees(records, cfg.conllu)
        return records
    records_path = _require(cfg, "records")
    return ingest(records_path, cfg.sembanks, cfg.conllu).records


def _with_targets(records, cfg):
    scorable = [r for r in records if r.gold is not None]
    scored = generate_targets(
        scorable,
        restarts=cfg.restarts,
        seed=cfg.seed,
        correct=cfg.debias_level >= 1,
        threads=cfg.threads,
    )
    by_id = {r.id: r for r in scored}
    kept = []
    for record in records:
        record = by_id.get(record.id, record)
        if record.targets is None:
            logging.warning("Dropping record %s: no gold graph and no targets" % record.id)
            continue
        kept.append(record)
    return kept


def _vocabularies(train_records, cfg):
    amr_corpus = [simplify(r.candidate) for r in train_records]
    dep_corpus = [render_record(r, cfg.use_dependency)[1] for r in train_records]
    if cfg.share_vocab:
        shared = build_vocab(amr_corpus + dep_corpus, cfg.min_freq)
        return shared, shared
    return build_vocab(amr_corpus, cfg.min_freq), build_vocab(dep_corpus, cfg.min_freq)


def cmd_prepare(args, cfg):
    """Targets, sentence-level splits, surface debiasing and vocabularies."""
    output = _require(cfg, "output")
    records = _source_records(cfg)
    if not records:
        raise UsageError("no usable records in the input")
    records = _with_targets(records, cfg)
    if not records:
        raise UsageError("no record has a gold graph or targets")
    if cfg.debias_level == 0:
        parts = split_in_order(records, cfg.split_spec())
    else:
        parts = resplit_by_sentence(records, cfg.split_spec())
    if cfg.debias_level == 2:
        parts = [debias_surface(part, cfg.seed) for part in parts]

    amr_vocab, dep_vocab = _vocabularies(parts[0], cfg)
    _, examples = project_records(
        parts[0], amr_vocab, dep_vocab, cfg.rows, cfg.cols, use_dependency=cfg.use_dependency
    )
    _makedirs(output)
    for name, part in zip(SPLITS, parts):
        write_records(part, os.path.join(output, name + ".jsonl"))
    amr_vocab.save(os.path.join(output, "vocab.amr.txt"))
    dep_vocab.save(os.path.join(output, "vocab.dep.txt"))
    trees = {r.sentence_id: r.dep for r in records if r.dep is not None}
    if trees:
        _write(
            os.path.join(output, "deps.conllu"),
            write_conllu([trees[k] for k in sorted(trees)]),
        )
    summary = {
        "debias_level": cfg.debias_level,
        "records": len(records),
        "train": len(parts[0]),
        "dev": len(parts[1]),
        "test": len(parts[2]),
        "amr_coverage": coverage(a for a, _, _ in examples),
        "dep_coverage": coverage(d for _, d, _ in examples),
    }
    _write(os.path.join(output, "prepare.json"), json.dumps(summary, sort_keys=True) + "\n")
    logging.info(
        "Wrote %d/%d/%d train/dev/test records to %s"
        % (summary["train"], summary["dev"], summary["test"], output)
    )
    return 0


# train / predict / baseline


def _conllu_path(cfg):
    if cfg.conllu is not None:
        return cfg.conllu
    default = os.path.join(_require(cfg, "data"), "deps.conllu")
    return default if os.path.exists(default) else None


def _load_split(cfg, name):
    path = os.path.join(_require(cfg, "data"), name + ".jsonl")
    return ingest(path, conllu_path=_conllu_path(cfg)).records


def _load_vocabs(cfg):
    directory = cfg.vocab or _require(cfg, "data")
    return (
        Vocabulary.load(os.path.join(directory, "vocab.amr.txt")),
        Vocabulary.load(os.path.join(directory, "vocab.dep.txt")),
    )


def _trainable(records, examples):
    pairs = [(r, e) for r, e in zip(records, examples) if e[2] is not None]
    if len(pairs) < len(records):
        logging.warning("Ignoring %d records without targets" % (len(records) - len(pairs)))
    return [e for _, e in pairs]


def cmd_train(args, cfg):
    """Trains a rater on the prepared train split, selecting on dev."""
    output = _require(cfg, "output")
    amr_vocab, dep_vocab = _load_vocabs(cfg)
    model_config = ModelConfig(
        rows=cfg.rows,
        cols=cfg.cols,
        out_dims=cfg.out_dims,
        use_dependency=cfg.use_dependency,
        share_vocab=cfg.share_vocab,
        global_pool=cfg.global_pool,
        amr_vocab_size=len(amr_vocab),
        dep_vocab_size=len(dep_vocab),
        seed=cfg.seed,
        torch_threads=cfg.torch_threads,
    )
    if cfg.share_vocab and amr_vocab != dep_vocab:
        raise ValueError("share_vocab needs identical AMR and dependency vocabularies")
    model = RaterModel(model_config)

    splits = {}
    for name in ("train", "dev"):
        records = _load_split(cfg, name)
        records, examples = project_records(
            records, amr_vocab, dep_vocab, cfg.rows, cfg.cols, cfg.out_dims, cfg.use_dependency
        )
        splits[name] = _trainable(records, examples)

    writer = None
    if cfg.tensorboard is not None:
        from .nn.tensorboard import SummaryWriter

        writer = SummaryWriter(log_dir=cfg.tensorboard)
    try:
        report = train(
            model,
            splits["train"],
            splits["dev"],
            epochs=cfg.epochs,
            lr=cfg.lr,
            batch_size=cfg.batch_size,
            seed=cfg.seed,
            writer=writer,
        )
    finally:
        if writer is not None:
            writer.close()

    _makedirs(output)
    save_checkpoint(model, os.path.join(output, "model.ckpt"), amr_vocab, dep_vocab)
    frame = report.to_frame()
    _write(
        os.path.join(output, "train_report.tsv"),
        frame.to_csv(sep="\t", index=False, float_format="%.6f"),
    )
    pd.set_option("display.precision", 4)
    print(frame.to_string(index=False))
    return 0


def _records_for_scoring(cfg):
    if cfg.records is not None:
        return ingest(cfg.records, cfg.sembanks, cfg.conllu).records
    return _load_split(cfg, cfg.split)


def cmd_predict(args, cfg):
    """Writes the rater's scores for every record of a split or records file."""
    checkpoint = _require(cfg, "checkpoint")
    amr_vocab, dep_vocab = _load_vocabs(cfg)
    model = load_checkpoint(checkpoint, amr_vocab, dep_vocab)
    mc = model.config
    records = _records_for_scoring(cfg)
    records, examples = project_records(
        records, amr_vocab, dep_vocab, mc.rows, mc.cols, use_dependency=mc.use_dependency
    )
    truncated = sum(r.amr_truncated or r.dep_truncated for r in records)
    if truncated:
        logging.info(
            "%d of %d records were truncated to fit the grid" % (truncated, len(records))
        )
    rows = predict(model, [(a, d) for a, d, _ in examples], cfg.batch_size)
    names = list(target_names(mc.out_dims))
    _write(cfg.output, _score_table([r.id for r in records], rows, names))
    return 0


def _features(records):
    return np.stack([featurize(r.candidate, r.dep) for r in records])


def _ridge_data(records, out_dims):
    records = [r for r in records if r.targets is not None]
    if not records:
        return None, None
    return _features(records), np.stack([r.targets.select(out_dims) for r in records])


def cmd_baseline(args, cfg):
    """Fits the ridge baseline on train (lambda picked on dev) and predicts a split."""
    X_train, Y_train = _ridge_data(_load_split(cfg, "train"), cfg.out_dims)
    X_dev, Y_dev = _ridge_data(_load_split(cfg, "dev"), cfg.out_dims)
    if X_train is None:
        raise ValueError("training split has no records with targets")
    ridge = RidgeBaseline(cfg.lambdas).fit(X_train, Y_train, X_dev, Y_dev)
    records = _records_for_scoring(cfg)
    names = list(target_names(cfg.out_dims))
    rows = ridge.predict(_features(records))
    _write(cfg.output, _score_table([r.id for r in records], rows, names))
    return 0


# evaluate


def _gold_matrix(records, ids, names):
    by_id = {r.id: r for r in records}
    rows = []
    for record_id in ids:
        record = by_id.get(record_id)
        if record is None or record.targets is None:
            raise ValueError("no gold targets for prediction {}".format(record_id))
        scores = record.targets.as_dict()
        rows.append([scores[n] for n in names])
    return np.asarray(rows, dtype=np.float64)


def _aligned_predictions(paths, ids, names):
    matrices = []
    for path in paths:
        other_ids, matrix, other_names = read_predictions(path)
        if tuple(other_names) != tuple(names):
            raise ValueError("{} predicts other dimensions than {}".format(path, paths[0]))
        position = {k: i for i, k in enumerate(other_ids)}
        missing = [k for k in ids if k not in position]
        if missing:
            raise ValueError("{} lacks predictions for {}".format(path, missing[0]))
        matrices.append(matrix[[position[k] for k in ids]])
    return matrices


def cmd_evaluate(args, cfg):
    """
    Correlation, error and classification report of a predictions table.
    Several tables (one per training seed) give a seed-averaged comparison
    against the tables of --compare; one table each gives Fisher z tests.
    """
    ids, first, names = read_predictions(args.predictions[0])
    predictions = [first] + _aligned_predictions(args.predictions[1:], ids, names)
    gold = _gold_matrix(_records_for_scoring(cfg), ids, names)
    report = evaluate(predictions[0], gold, names, seed=cfg.seed)
    if args.compare:
        others = _aligned_predictions(args.compare, ids, names)
        if len(predictions) == 1 and len(others) == 1:
            tests = fisher_comparisons(predictions[0], others[0], gold, names)
            report.significance.extend(tests)
        else:
            rows, significance = seed_comparison(predictions, others, gold, names)
            report.seeds = rows
            report.significance.extend(significance)

    if cfg.output is None:
        sys.stdout.write(report.to_text())
        return 0
    _makedirs(cfg.output)
    _write(os.path.join(cfg.output, "report.txt"), report.to_text())
    _write(os.path.join(cfg.output, "report.jsonl"), report.to_jsonl())
    if cfg.plots:
        write_plots(report, predictions[0], gold, names, cfg.output)
    sys.stdout.write(report.to_text())
    return 0


def cmd_corrupt(args, cfg):
    """Writes a records file of corrupted copies of the gold graphs."""
    golds = [e.graph for e in _read_sembank_file(args.sembank) if e.graph is not None]
    if not golds:
        raise UsageError("no usable gold graphs in {}".format(args.sembank))
    records = synthesize_corpus(golds, cfg.per_gold, cfg.seed, max_ops=cfg.max_ops)
    _write(cfg.output, write_records(records))
    return 0


# argument parsing


def _add(parser, *flags, **kwargs):
    kwargs.setdefault("default", argparse.SUPPRESS)
    parser.add_argument(*flags, **kwargs)


def _common_arguments(parser):
    _add(parser, "--config", help="key = value settings file (default: $%s)" % CONFIG_ENV)
    _add(parser, "--output", "-o", help="output file or directory")
    _add(parser, "--seed", type=int, help="base seed of every random choice")
    _add(parser, "--threads", type=int, help="worker processes for corpus-level work")
    _add(parser, "--verbose", "-v", action="store_true", help="log progress at INFO level")


def _data_arguments(parser):
    _add(parser, "--data", help="directory written by `quamr prepare`")
    _add(parser, "--records", help="records file to score instead of a prepared split")
    _add(parser, "--sembank", dest="sembanks", action="append", help="gold sembank file")
    _add(parser, "--conllu", help="CoNLL-U sidecar keyed by sentence id")
    _add(parser, "--vocab", help="directory of the vocabularies (default: --data)")
    _add(parser, "--split", choices=SPLITS, help="prepared split to score (default: test)")
    _add(parser, "--batch-size", dest="batch_size", type=int, help="batch size")


def _out_dims_argument(parser):
    _add(
        parser,
        "--out-dims",
        dest="out_dims",
        type=int,
        choices=(3, 33),
        help="3: Smatch P/R/F1; 33: the other fine-grained scores",
    )


def get_args(argv=None):
    """Parses command line arguments"""
    parser = argparse.ArgumentParser(prog="quamr", description="AMR quality rating")
    commands = parser.add_subparsers(dest="command", required=True)

    score = commands.add_parser("score", help="score candidate against gold sembanks")
    score.add_argument("candidate", help="candidate sembank")
    score.add_argument("gold", help="gold sembank, aligned with the candidates")
    _common_arguments(score)
    _add(score, "--restarts", type=int, help="hill-climbing starts per alignment")
    _add(
        score,
        "--no-correct",
        dest="correct",
        action="store_false",
        help="keep scores of features absent from both graphs",
    )
    _add(score, "--alignments", help="write the Smatch alignment of every pair here")
    score.set_defaults(func=cmd_score)

    prepare = commands.add_parser("prepare", help="build splits, targets and vocabularies")
    _common_arguments(prepare)
    _add(prepare, "--records", help="records file of candidate parses")
    _add(prepare, "--sembank", dest="sembanks", action="append", help="gold sembank file")
    _add(prepare, "--conllu", help="CoNLL-U sidecar keyed by sentence id")
    _add(prepare, "--corrupt", help="synthesize candidates by corrupting this gold sembank")
    _add(prepare, "--per-gold", dest="per_gold", type=int, help="candidates per gold graph")
    _add(prepare, "--max-ops", dest="max_ops", type=int, help="maximum edits per candidate")
    _add(
        prepare,
        "--debias-level",
        dest="debias_level",
        type=int,
        choices=(0, 1, 2),
        help="0: file order, raw scores; 1: sentence re-split, corrected scores; "
        "2: 1 plus surface randomization (default)",
    )
    _add(prepare, "--split-seed", dest="split_seed", type=int, help="seed of the re-split")
    _add(prepare, "--restarts", type=int, help="hill-climbing starts per alignment")
    _add(prepare, "--min-freq", dest="min_freq", type=int, help="vocabulary frequency cutoff")
    _add(
        prepare,
        "--share-vocab",
        dest="share_vocab",
        action="store_true",
        help="one vocabulary for both sides",
    )
    _add(
        prepare,
        "--no-dep",
        dest="use_dependency",
        action="store_false",
        help="build the dependency vocabulary from sentence-only renderings",
    )
    prepare.set_defaults(func=cmd_prepare)

    train_parser = commands.add_parser("train", help="train a rater")
    _common_arguments(train_parser)
    _data_arguments(train_parser)
    _add(train_parser, "--epochs", type=int, help="training epochs")
    _add(train_parser, "--lr", type=float, help="Adam learning rate")
    _out_dims_argument(train_parser)
    _add(
        train_parser,
        "--no-dep",
        dest="use_dependency",
        action="store_false",
        help="feed the sentence tokens instead of the dependency tree",
    )
    _add(
        train_parser,
        "--share-vocab",
        dest="share_vocab",
        action="store_true",
        help="share one embedding between both sides",
    )
    _add(
        train_parser,
        "--global-pool",
        dest="global_pool",
        choices=("max", "mean"),
        help="pooling of the fused first-layer images",
    )
    _add(train_parser, "--tensorboard", help="write training curves to this directory")
    train_parser.set_defaults(func=cmd_train)

    predict_parser = commands.add_parser("predict", help="rate records with a checkpoint")
    _common_arguments(predict_parser)
    _data_arguments(predict_parser)
    _add(predict_parser, "--checkpoint", help="checkpoint written by `quamr train`")
    predict_parser.set_defaults(func=cmd_predict)

    evaluate_parser = commands.add_parser("evaluate", help="evaluate predictions")
    _common_arguments(evaluate_parser)
    _data_arguments(evaluate_parser)
    evaluate_parser.add_argument(
        "--predictions", nargs="+", required=True, help="predictions table(s), one per seed"
    )
    evaluate_parser.add_argument(
        "--compare", nargs="+", default=[], help="predictions of a second system"
    )
    _add(evaluate_parser, "--plots", action="store_true", help="write SVG plots to --output")
    evaluate_parser.set_defaults(func=cmd_evaluate)

    baseline = commands.add_parser("baseline", help="fit and apply the ridge baseline")
    _common_arguments(baseline)
    _data_arguments(baseline)
    _out_dims_argument(baseline)
    _add(baseline, "--lambdas", help="comma-separated regularization strengths")
    baseline.set_defaults(func=cmd_baseline)

    corrupt_parser = commands.add_parser("corrupt", help="synthesize corrupted candidates")
    corrupt_parser.add_argument("sembank", help="gold sembank")
    _common_arguments(corrupt_parser)
    _add(corrupt_parser, "--per-gold", dest="per_gold", type=int, help="candidates per gold")
    _add(corrupt_parser, "--max-ops", dest="max_ops", type=int, help="maximum edits")
    corrupt_parser.set_defaults(func=cmd_corrupt)

    return parser.parse_args(argv)


def _overrides(args):
    names = {f.name for f in dataclasses.fields(RunConfig)}
    return {k: v for k, v in vars(args).items() if k in names}


def main(argv=None):
    args = get_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        cfg = load_run_config(getattr(args, "config", None), _overrides(args))
        return args.func(args, cfg)
    except (UsageError, OSError) as e:
        logging.error(str(e))
        return 2
    except (ValueError, ArithmeticError, RuntimeError, AssertionError, IndexError) as e:
        logging.error("%s: %s" % (type(e).__name__, e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
