"""Training orchestration: the per-epoch schedule, evaluation, the repeat
protocol and the ablation grid.

Each epoch (a) refreshes clustering and the negative index on the
configured schedule, (b) samples two fresh edge-dropped views with seeds
derived from the master seed, (c) computes cross-entropy on the original
graph and the contrastive loss across the views, and (d) applies one plain
SGD step on the combined objective. Runs are deterministic for a fixed
config and seed.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .augment import drop_edges, normalize_adjacency
from .cluster import cluster
from .corpus import Corpus, TokenizeConfig, build_corpus, load_corpus_file, load_labels_file
from .encoder import EncoderParams, backward, classify, encode, init_params, sgd_step
from .errors import ConfigError, NumericError
from .graph import (
    DEFAULT_WINDOW_SIZE,
    TextGraph,
    assemble_features,
    build_graph,
    load_embeddings,
)
from .losses import combine, contrastive_loss, cross_entropy_loss
from .negatives import (
    NegativeIndex,
    build_negative_index,
    dump_negatives,
    false_negative_rate,
    restrict_index,
    vanilla_negative_index,
)

METRICS_COLUMNS = ("epoch", "L_ce", "L_cl", "L", "train_acc", "test_acc", "fn_rate")


@dataclass
class TrainConfig:
    epochs: int = 200
    lr: float = 0.02
    seed: int = 0
    drop_prob: float = 0.2
    tau: float = 0.5
    beta: float = 1.0
    lam: float = 0.7
    self_correct_pct: float = 20.0
    k: int | None = None  # None -> number of classes
    cluster_method: str = "kmeans"
    cluster_refresh: int = 1
    hidden_dim: int = 64
    out_dim: int | None = None  # None -> hidden_dim
    no_correction: bool = False
    no_clustering: bool = False
    no_gcl: bool = False
    contrast_train_only: bool = False

    def validate(self) -> None:
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.lr <= 0:
            raise ConfigError(f"learning rate must be positive, got {self.lr}")
        if not 0.0 <= self.drop_prob <= 1.0:
            raise ConfigError(f"drop probability must be in [0, 1], got {self.drop_prob}")
        if self.tau <= 0:
            raise ConfigError(f"temperature must be positive, got {self.tau}")
        if self.beta < 0:
            raise ConfigError(f"beta must be non-negative, got {self.beta}")
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError(f"lambda must be in [0, 1], got {self.lam}")
        if not 0.0 <= self.self_correct_pct <= 100.0:
            raise ConfigError(
                f"self-correction percentage must be in [0, 100], got {self.self_correct_pct}"
            )
        if self.cluster_method not in ("kmeans", "agglomerative"):
            raise ConfigError(f"unknown cluster method {self.cluster_method!r}")
        if self.cluster_refresh < 1:
            raise ConfigError(f"cluster refresh must be >= 1, got {self.cluster_refresh}")
        if self.hidden_dim < 1:
            raise ConfigError(f"hidden dim must be >= 1, got {self.hidden_dim}")
        if self.k is not None and self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")


@dataclass
class EpochMetrics:
    epoch: int
    ce: float
    cl: float
    loss: float
    train_acc: float
    test_acc: float
    fn_rate: float


@dataclass
class TrainResult:
    metrics: list[EpochMetrics]
    params: EncoderParams
    best_test_acc: float
    best_epoch: int
    seed: int
    last_index: NegativeIndex | None = field(default=None, repr=False)


def derived_seed(master: int, epoch: int, stream: int) -> int:
    """Stable per-(epoch, stream) integer seed derived from the master."""
    return int(np.random.SeedSequence([master, epoch, stream]).generate_state(1)[0])


def accuracy(p: np.ndarray, corpus: Corpus) -> tuple[float, float]:
    """(train accuracy, test accuracy) of argmax predictions; nan when the
    corresponding split is empty."""
    preds = p.argmax(axis=1)

    def _acc(mask):
        if not mask.any():
            return float("nan")
        return float((preds[mask] == corpus.labels[mask]).mean())

    return _acc(corpus.train_mask), _acc(corpus.test_mask)


def _append_metrics(path, rows: list[EpochMetrics]) -> None:
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", encoding="utf-8") as fh:
        if fresh:
            fh.write("\t".join(METRICS_COLUMNS) + "\n")
        for r in rows:
            fh.write(
                f"{r.epoch}\t{r.ce:.10g}\t{r.cl:.10g}\t{r.loss:.10g}\t"
                f"{r.train_acc:.10g}\t{r.test_acc:.10g}\t{r.fn_rate:.10g}\n"
            )


def train(
    graph: TextGraph,
    features: np.ndarray,
    corpus: Corpus,
    config: TrainConfig,
    metrics_path=None,
    negatives_dump_path=None,
) -> TrainResult:
    """Run the full training loop; returns per-epoch metrics and the final
    parameters. Raises NumericError naming the epoch if any loss or update
    turns non-finite."""
    config.validate()
    if corpus.n_classes < 2:
        raise ConfigError(f"training needs at least 2 classes, got {corpus.n_classes}")

    n_word = graph.n_word
    x = np.asarray(features, dtype=np.float64)
    a_norm = normalize_adjacency(graph.adjacency)
    hidden = config.hidden_dim
    out_dim = config.out_dim or hidden
    params = init_params(
        emb_dim=x.shape[1],
        hidden_dim=hidden,
        out_dim=out_dim,
        n_classes=corpus.n_classes,
        lam=config.lam,
        seed=config.seed,
    )

    use_gcl = not config.no_gcl
    beta = 0.0 if config.no_gcl else config.beta
    d_pct = 0.0 if config.no_correction else config.self_correct_pct
    k = config.k or corpus.n_classes

    index: NegativeIndex | None = None
    fn_rate = float("nan")
    metrics: list[EpochMetrics] = []
    best_test = -math.inf
    best_epoch = -1

    for epoch in range(config.epochs):
        z0, trace0 = encode(a_norm, x, params, n_word)

        if use_gcl and (index is None or epoch % config.cluster_refresh == 0):
            if config.no_clustering:
                index = vanilla_negative_index(corpus.n_docs)
            else:
                assignment = cluster(
                    z0.copy(),
                    k,
                    method=config.cluster_method,
                    seed=derived_seed(config.seed, epoch, 2),
                )
                index = build_negative_index(z0.copy(), assignment, d_pct)
            if config.contrast_train_only:
                index = restrict_index(index, corpus.train_mask)
            fn_rate = false_negative_rate(index, corpus.labels)

        p0 = classify(z0)
        ce, dz0 = cross_entropy_loss(p0, corpus.labels, corpus.train_mask)

        if use_gcl:
            views = []
            for stream in (0, 1):
                view = drop_edges(graph, config.drop_prob, derived_seed(config.seed, epoch, stream))
                a_view = normalize_adjacency(view.adjacency)
                views.append(encode(a_view, x, params, n_word))
            (z1, trace1), (z2, trace2) = views
            cl, dz1, dz2 = contrastive_loss(z1, z2, index, config.tau)
        else:
            cl = 0.0

        loss = combine(ce, cl, beta)
        if not math.isfinite(loss):
            raise NumericError(f"non-finite loss at epoch {epoch}: ce={ce}, cl={cl}")

        try:
            grads = backward(trace0, dz0, params)
            if use_gcl:
                grads = grads.scaled_add(backward(trace1, dz1, params), beta)
                grads = grads.scaled_add(backward(trace2, dz2, params), beta)
            sgd_step(params, grads, config.lr)
        except NumericError as exc:
            raise NumericError(f"epoch {epoch}: {exc}") from exc

        z_eval, _ = encode(a_norm, x, params, n_word)
        train_acc, test_acc = accuracy(classify(z_eval), corpus)
        metrics.append(EpochMetrics(epoch, ce, cl, loss, train_acc, test_acc, fn_rate))
        if not math.isnan(test_acc) and test_acc > best_test:
            best_test = test_acc
            best_epoch = epoch

    if metrics_path is not None:
        _append_metrics(metrics_path, metrics)
    if negatives_dump_path is not None and index is not None:
        dump_negatives(negatives_dump_path, index)

    return TrainResult(
        metrics=metrics,
        params=params,
        best_test_acc=best_test if best_epoch >= 0 else float("nan"),
        best_epoch=best_epoch,
        seed=config.seed,
        last_index=index,
    )


def evaluate(params: EncoderParams, graph: TextGraph, features: np.ndarray, corpus: Corpus):
    """Accuracy of a trained model on the train/test splits."""
    a_norm = normalize_adjacency(graph.adjacency)
    z, _ = encode(a_norm, np.asarray(features, dtype=np.float64), params, graph.n_word)
    return accuracy(classify(z), corpus)


def run_repeats(
    graph: TextGraph,
    features: np.ndarray,
    corpus: Corpus,
    config: TrainConfig,
    repeats: int,
) -> list[TrainResult]:
    """Train `repeats` times with consecutive init seeds (the averaged-runs
    protocol); seed i of run r is config.seed + r."""
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    return [
        train(graph, features, corpus, replace(config, seed=config.seed + r))
        for r in range(repeats)
    ]


ABLATION_ROWS = (
    ("full", {}),
    ("w/o correction", {"no_correction": True}),
    ("w/o clustering", {"no_clustering": True}),
    ("w/o GCL", {"no_gcl": True}),
)


def ablate(graph: TextGraph, features: np.ndarray, corpus: Corpus, config: TrainConfig):
    """Run the four-row ablation grid; returns [(row name, TrainResult)]."""
    return [
        (name, train(graph, features, corpus, replace(config, **overrides)))
        for name, overrides in ABLATION_ROWS
    ]


def load_dataset(
    corpus_path,
    labels_path,
    embeddings_path,
    window_size: int = DEFAULT_WINDOW_SIZE,
    min_df: int = 2,
):
    """Load the three input files and build graph + features.

    Returns (corpus, vocab, graph, features)."""
    texts = load_corpus_file(corpus_path)
    labels, train_mask, class_names = load_labels_file(labels_path, len(texts))
    corpus, vocab = build_corpus(
        texts,
        labels=labels,
        train_mask=train_mask,
        n_classes=len(class_names),
        config=TokenizeConfig(min_df=min_df),
        class_names=class_names,
    )
    graph = build_graph(corpus, vocab, window_size=window_size)
    features = assemble_features(graph, load_embeddings(embeddings_path))
    return corpus, vocab, graph, features
