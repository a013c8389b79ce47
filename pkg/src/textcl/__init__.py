"""Semi-supervised text classification with graph contrastive learning and
cluster-refined negative sampling.

The pipeline: build a heterogeneous word/document graph from the corpus
(PMI and TF-IDF edge weights), generate contrastive views by edge dropping,
encode nodes with a two-layer graph convolution fused with pretrained
document embeddings, pseudo-label documents by clustering, refine each
anchor's negative set from the pseudo-labels with a distance-percentile
self-correction, and train under a contrastive + cross-entropy objective.
"""

__version__ = "0.1.0"

from .augment import AugmentedView, drop_edges, normalize_adjacency
from .cluster import ClusterAssignment, agglomerative, cluster, kmeans
from .corpus import Corpus, TokenizeConfig, Vocabulary, build_corpus, tokenize
from .encoder import (
    EncoderParams,
    ForwardTrace,
    Gradients,
    backward,
    classify,
    encode,
    fuse,
    gcn_forward,
    init_params,
    load_checkpoint,
    save_checkpoint,
    sgd_step,
)
from .errors import ConfigError, DataError, NumericError, TextclError
from .graph import (
    TextGraph,
    assemble_features,
    build_graph,
    compute_pmi,
    compute_tfidf,
    dump_graph,
    load_embeddings,
    write_embeddings,
)
from .losses import LossReport, combine, contrastive_loss, cross_entropy_loss, make_report
from .negatives import (
    NegativeIndex,
    build_negative_index,
    distant_set,
    false_negative_rate,
    in_cluster_distances,
    restrict_index,
    vanilla_negative_index,
)
from .synth import SyntheticData, generate_synthetic, write_synthetic
from .train import (
    TrainConfig,
    TrainResult,
    ablate,
    evaluate,
    load_dataset,
    run_repeats,
    train,
)

__all__ = [
    "AugmentedView",
    "ClusterAssignment",
    "ConfigError",
    "Corpus",
    "DataError",
    "EncoderParams",
    "ForwardTrace",
    "Gradients",
    "LossReport",
    "NegativeIndex",
    "NumericError",
    "SyntheticData",
    "TextGraph",
    "TextclError",
    "TokenizeConfig",
    "TrainConfig",
    "TrainResult",
    "Vocabulary",
    "ablate",
    "agglomerative",
    "assemble_features",
    "backward",
    "build_corpus",
    "build_graph",
    "build_negative_index",
    "classify",
    "cluster",
    "combine",
    "compute_pmi",
    "compute_tfidf",
    "contrastive_loss",
    "cross_entropy_loss",
    "distant_set",
    "drop_edges",
    "dump_graph",
    "encode",
    "evaluate",
    "false_negative_rate",
    "fuse",
    "gcn_forward",
    "generate_synthetic",
    "in_cluster_distances",
    "init_params",
    "kmeans",
    "load_checkpoint",
    "load_dataset",
    "load_embeddings",
    "make_report",
    "normalize_adjacency",
    "restrict_index",
    "run_repeats",
    "save_checkpoint",
    "sgd_step",
    "tokenize",
    "train",
    "vanilla_negative_index",
    "write_embeddings",
    "write_synthetic",
]
