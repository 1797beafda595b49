"""Brain-connectome graph generation and augmentation.

Graphs are square uint8 NumPy adjacency matrices. Configurations and
generator checkpoints are JSON strings; helpers below accept dicts too.
"""

import json as _json

from ._brainaug import (
    RuntimeFailure,
    ValidationError,
    avg_clustering,
    bandpass_filter,
    baseline_clustering_match,
    baseline_degree_preserving,
    bfs_ordering,
    binarize_fixed,
    binarize_otsu,
    degree_histogram,
    evaluate_scores,
    featurize,
    global_signal_regression,
    graph_to_sequence,
    mmd_degree,
    otsu_threshold,
    pca_embed_2d,
    pearson_matrix,
    read_graph_cohort,
    sample_generator,
    sample_sbm,
    sequence_to_graph,
)
from . import _brainaug


def _as_json(config):
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def train_generator(graphs, config=None, label="unlabeled", seed=0):
    """Train a generator; returns (checkpoint JSON, per-epoch loss)."""
    return _brainaug.train_generator(list(graphs), _as_json(config), label, seed)


def zero_init_loss(graphs, config=None, seed=0):
    return _brainaug.zero_init_loss(list(graphs), _as_json(config), seed)


def run_augmentation_protocol(raw, raw_labels, generated, generated_labels, classifier=None, ratio=0.6, seed=0):
    return _brainaug.run_augmentation_protocol(
        list(raw), list(raw_labels), list(generated), list(generated_labels), _as_json(classifier), ratio, seed
    )


def synth(config, out):
    """Write a synthetic two-population cohort; returns (count, probe accuracy)."""
    return _brainaug.synth(_as_json(config), str(out))


def experiment(config, out):
    """Run the augmentation experiment; returns one dict per (arm, ratio) cell."""
    return _brainaug.experiment(_as_json(config), str(out))


__all__ = [name for name in dir() if not name.startswith("_")]
