"""ADR-relevant sentence classification over the ADE corpus.

Thin wrapper around the `_adrcnn` extension: corpus loading with
de-duplication, Kim-style text cleaning, classification metrics, F1-optimal
threshold selection, checkpoint scoring, and full cross-validation runs.
"""

import json as _json

from ._adrcnn import (
    IoError,
    ParseError,
    Scorer,
    auroc,
    clean_text,
    confusion,
    embedding_info,
    load_corpus,
    point_metrics,
    select_threshold,
    tokenize,
)
from ._adrcnn import run_experiment as _run_experiment

__all__ = [
    "IoError",
    "ParseError",
    "Scorer",
    "auroc",
    "clean_text",
    "confusion",
    "embedding_info",
    "load_corpus",
    "point_metrics",
    "run_experiment",
    "select_threshold",
    "tokenize",
]


def run_experiment(config):
    """Run a cross-validation experiment.

    `config` is either a dict or a JSON string with the flat layout the
    `adrcnn cv` subcommand consumes (pos_file, neg_file, embedding_path,
    embedding_format, architecture, k, seed, ...).
    """
    if isinstance(config, dict):
        config = _json.dumps(config)
    return _run_experiment(config)
