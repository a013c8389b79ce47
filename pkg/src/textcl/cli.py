"""Command-line interface.

Subcommands: build-graph, train, evaluate, ablate, synth. Exit codes:
0 success, 1 configuration error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import statistics
import sys

from . import __version__
from .corpus import TokenizeConfig, build_corpus, load_corpus_file, load_labels_file
from .encoder import load_checkpoint, save_checkpoint
from .errors import ConfigError, DataError, NumericError
from .graph import DEFAULT_WINDOW_SIZE, build_graph, dump_graph
from .synth import generate_synthetic, write_synthetic
from .train import TrainConfig, ablate, evaluate, load_dataset, run_repeats, train


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit code 1)."""

    def error(self, message):
        raise ConfigError(message)


def _add_data_flags(p, embeddings=True):
    p.add_argument("--corpus", required=True, help="corpus file, one document per line")
    p.add_argument("--labels", required=True, help="label file (<idx>\\t<class>\\t<train|test>)")
    if embeddings:
        p.add_argument("--embeddings", required=True, help="document embedding file")
    p.add_argument("--window-size", type=int, default=DEFAULT_WINDOW_SIZE)
    p.add_argument("--min-df", type=int, default=2, help="drop words in fewer documents")


def _add_train_flags(p):
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--lr", type=float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--drop-prob", type=float, default=0.2, help="edge drop probability")
    p.add_argument("--tau", type=float, default=0.5, help="contrastive temperature")
    p.add_argument("--beta", type=float, default=1.0, help="contrastive loss weight")
    p.add_argument("--lambda", dest="lam", type=float, default=0.7,
                   help="fusion coefficient between graph and embedding branches")
    p.add_argument("--self-correct-pct", type=float, default=20.0,
                   help="farthest in-cluster percentage re-admitted as negatives")
    p.add_argument("--k", type=int, default=None, help="cluster count (default: #classes)")
    p.add_argument("--cluster-method", choices=("kmeans", "agglomerative"), default="kmeans")
    p.add_argument("--cluster-refresh", type=int, default=1,
                   help="recluster every N epochs")
    p.add_argument("--hidden-dim", type=int, default=64)
    p.add_argument("--no-correction", action="store_true",
                   help="ablation: never re-admit in-cluster negatives")
    p.add_argument("--no-clustering", action="store_true",
                   help="ablation: vanilla all-others negative sets")
    p.add_argument("--no-gcl", action="store_true",
                   help="ablation: supervised objective only")
    p.add_argument("--contrast-train-only", action="store_true",
                   help="restrict contrastive anchors/negatives to training docs")


def _build_config(args) -> TrainConfig:
    return TrainConfig(
        epochs=args.epochs,
        lr=args.lr,
        seed=args.seed,
        drop_prob=args.drop_prob,
        tau=args.tau,
        beta=args.beta,
        lam=args.lam,
        self_correct_pct=args.self_correct_pct,
        k=args.k,
        cluster_method=args.cluster_method,
        cluster_refresh=args.cluster_refresh,
        hidden_dim=args.hidden_dim,
        no_correction=args.no_correction,
        no_clustering=args.no_clustering,
        no_gcl=args.no_gcl,
        contrast_train_only=args.contrast_train_only,
    )


def _cmd_build_graph(args) -> int:
    texts = load_corpus_file(args.corpus)
    labels = train_mask = None
    n_classes = None
    class_names = None
    if args.labels:
        labels, train_mask, class_names = load_labels_file(args.labels, len(texts))
        n_classes = len(class_names)
    corpus, vocab, = build_corpus(
        texts, labels=labels, train_mask=train_mask, n_classes=n_classes,
        config=TokenizeConfig(min_df=args.min_df), class_names=class_names,
    )
    graph = build_graph(corpus, vocab, window_size=args.window_size)
    nnz = graph.adjacency.nnz
    print(f"graph: {graph.n_word} word nodes, {graph.n_doc} doc nodes, "
          f"{(nnz - graph.n_nodes) // 2} undirected edges")
    if args.dump:
        dump_graph(args.dump, graph)
        print(f"wrote {args.dump}")
    return 0


def _cmd_train(args) -> int:
    corpus, _, graph, features = load_dataset(
        args.corpus, args.labels, args.embeddings,
        window_size=args.window_size, min_df=args.min_df,
    )
    config = _build_config(args)
    if args.repeats > 1:
        results = run_repeats(graph, features, corpus, config, args.repeats)
        finals = [r.metrics[-1].test_acc for r in results]
        bests = [r.best_test_acc for r in results]
        print(f"repeats={args.repeats} final test acc "
              f"{statistics.mean(finals):.4f} +- {statistics.pstdev(finals):.4f}; "
              f"best {statistics.mean(bests):.4f} +- {statistics.pstdev(bests):.4f}")
        result = results[0]
    else:
        result = train(
            graph, features, corpus, config,
            metrics_path=args.metrics_out,
            negatives_dump_path=args.dump_negatives,
        )
        last = result.metrics[-1]
        print(f"epoch {last.epoch}: loss {last.loss:.4f} "
              f"train_acc {last.train_acc:.4f} test_acc {last.test_acc:.4f}")
        print(f"best test acc {result.best_test_acc:.4f} at epoch {result.best_epoch}")
    if args.checkpoint_out:
        save_checkpoint(args.checkpoint_out, result.params, config.seed)
        print(f"wrote {args.checkpoint_out}")
    return 0


def _cmd_evaluate(args) -> int:
    corpus, _, graph, features = load_dataset(
        args.corpus, args.labels, args.embeddings,
        window_size=args.window_size, min_df=args.min_df,
    )
    params, _ = load_checkpoint(args.checkpoint)
    if params.emb_dim != features.shape[1]:
        raise DataError(f"checkpoint emb_dim {params.emb_dim} does not match "
                        f"embedding dim {features.shape[1]}")
    if params.n_classes != corpus.n_classes:
        raise DataError(f"checkpoint has {params.n_classes} classes, corpus has "
                        f"{corpus.n_classes}")
    train_acc, test_acc = evaluate(params, graph, features, corpus)
    print(f"train_acc {train_acc:.4f} test_acc {test_acc:.4f}")
    return 0


def _cmd_ablate(args) -> int:
    corpus, _, graph, features = load_dataset(
        args.corpus, args.labels, args.embeddings,
        window_size=args.window_size, min_df=args.min_df,
    )
    config = _build_config(args)
    rows = ablate(graph, features, corpus, config)
    lines = [f"{'config':<16}\t{'best_acc':>8}\t{'final_acc':>9}"]
    for name, result in rows:
        lines.append(
            f"{name:<16}\t{result.best_test_acc:>8.4f}\t{result.metrics[-1].test_acc:>9.4f}"
        )
    report = "\n".join(lines)
    print(report)
    if args.report_out:
        with open(args.report_out, "w", encoding="utf-8") as fh:
            fh.write(report + "\n")
        print(f"wrote {args.report_out}")
    return 0


def _cmd_synth(args) -> int:
    data = generate_synthetic(
        n_docs=args.n_docs,
        n_classes=args.n_classes,
        vocab_per_class=args.vocab_per_class,
        doc_len=args.doc_len,
        label_rate=args.label_rate,
        seed=args.seed,
        emb_dim=args.dim,
        noise=args.noise,
    )
    paths = write_synthetic(data, args.out_dir)
    for name, path in paths.items():
        print(f"wrote {name}: {path}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="textcl", description=__doc__)
    parser.add_argument("--version", action="version", version=f"textcl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build-graph", help="build the text graph and report stats")
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", default=None)
    p.add_argument("--window-size", type=int, default=DEFAULT_WINDOW_SIZE)
    p.add_argument("--min-df", type=int, default=2)
    p.add_argument("--dump", default=None, help="write <i> <j> <weight> triplet lines")
    p.set_defaults(func=_cmd_build_graph)

    p = sub.add_parser("train", help="train the model end to end")
    _add_data_flags(p)
    _add_train_flags(p)
    p.add_argument("--repeats", type=int, default=1,
                   help="average over this many runs with consecutive seeds")
    p.add_argument("--metrics-out", default=None, help="per-epoch metrics TSV")
    p.add_argument("--checkpoint-out", default=None)
    p.add_argument("--dump-negatives", default=None,
                   help="write the final negative index to this path")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a checkpoint")
    _add_data_flags(p)
    p.add_argument("--checkpoint", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("ablate", help="run the 4-row ablation grid")
    _add_data_flags(p)
    _add_train_flags(p)
    p.add_argument("--report-out", default=None)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n-docs", type=int, default=200)
    p.add_argument("--n-classes", type=int, default=2)
    p.add_argument("--vocab-per-class", type=int, default=30)
    p.add_argument("--doc-len", type=int, default=30)
    p.add_argument("--label-rate", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--noise", type=float, default=0.35)
    p.set_defaults(func=_cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
