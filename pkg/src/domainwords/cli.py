"""Command line interface.

Subcommands: synth, rank, eval, overlap, project, vocab. Every command takes
--seed and --out-dir and writes fixed-named artifacts into the output
directory. Exit codes: 0 success, 1 usage or configuration error, 2 data
error, 3 grid finished with failed cells.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .classify import LrConfig
from .corpus import build_corpus, load_corpus, save_corpus
from .embedding import TrainConfig, load_model, save_model, train_skipgram
from .errors import ConfigError, DataError, DomainWordsError
from .experiment import (
    DEFAULT_METHODS,
    DEFAULT_PERCENTAGES,
    GridConfig,
    dump_report,
    report_csv_rows,
    run_grid,
)
from .geometry import class_hyperplane, distance, fit_pca2, apply_pca2, rank_by_distance
from .ranking import load_ranking
from .selectors import overlap, rank_by_selector, rank_random
from .synthbench import SynthConfig, generate, profile_config

RANK_METHODS = ("hyperplane", "hyperplane_longest", "chi2", "mi", "random")


def _parse_percentages(text: str) -> tuple[float, ...]:
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            value = float(piece)
        except ValueError:
            raise ConfigError(f"bad percentage {piece!r}")
        out.append(int(value) if value.is_integer() else value)
    if not out:
        raise ConfigError("empty percentage list")
    return tuple(out)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="master random seed")
    parser.add_argument(
        "--out-dir", default=".", help="directory for output artifacts"
    )


def _add_embedding_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--embedding", help="path to a saved embedding model")
    parser.add_argument(
        "--train", action="store_true", help="train an embedding from the corpus"
    )
    parser.add_argument("--dim", type=int, default=100)
    parser.add_argument("--window", type=int, default=5)
    parser.add_argument("--negatives", type=int, default=5)
    parser.add_argument("--epochs", type=int, default=5)
    parser.add_argument("--initial-lr", type=float, default=0.025)
    parser.add_argument("--subsample", type=float, default=1e-3)


def _train_config(args) -> TrainConfig:
    return TrainConfig(
        dim=args.dim,
        window=args.window,
        negatives=args.negatives,
        epochs=args.epochs,
        initial_lr=args.initial_lr,
        subsample_threshold=args.subsample,
        seed=args.seed,
    )


def _get_model(args, docs, vocab, out_dir: Path):
    """Load or train the embedding for commands that need one."""
    if args.embedding:
        return load_model(args.embedding, vocab)
    if args.train:
        model = train_skipgram(docs, vocab, _train_config(args))
        save_model(model, out_dir / "embedding.bin")
        return model
    raise ConfigError(
        "distance ranking needs an embedding: pass --embedding FILE "
        "or --train (with optional --dim/--window/--negatives/--epochs)"
    )


def cmd_synth(args) -> int:
    if args.profile:
        cfg = profile_config(args.profile, seed=args.seed)
    else:
        cfg = SynthConfig(seed=args.seed)
    overrides = {}
    for name in ("docs_per_class", "doc_len", "class_dict_size",
                 "common_dict_size", "common_per_doc"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if overrides:
        cfg = SynthConfig(**{**asdict(cfg), **overrides})
    docs, manifest = generate(cfg)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_corpus(docs, out_dir / "corpus.jsonl")
    with open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(docs)} documents to {out_dir / 'corpus.jsonl'}")
    return 0


def cmd_vocab(args) -> int:
    raw = load_corpus(args.corpus)
    _, vocab = build_corpus(raw, min_count=args.min_count)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    vocab.save_csv(out_dir / "vocab.csv")
    print(f"wrote {len(vocab)} words to {out_dir / 'vocab.csv'}")
    return 0


def cmd_rank(args) -> int:
    raw = load_corpus(args.corpus)
    docs, vocab = build_corpus(raw, min_count=args.min_count)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.method.startswith("hyperplane"):
        model = _get_model(args, docs, vocab, out_dir)
        _, _, plane = class_hyperplane(model, vocab)
        ranking = rank_by_distance(
            model, plane, vocab, longest=args.method == "hyperplane_longest"
        )
    elif args.method == "random":
        ranking = rank_random(vocab, args.seed)
    else:
        ranking = rank_by_selector(vocab, args.method)
    path = out_dir / f"ranking_{args.method}.csv"
    ranking.save_csv(path)
    print(f"wrote {len(ranking)} ranked words to {path}")
    return 0


_GRID_CONFIG_KEYS = frozenset(
    {"methods", "percentages", "classifiers", "folds", "min_count",
     "seed", "jobs", "embedding", "lr_params"}
)


def cmd_eval(args) -> int:
    raw = load_corpus(args.corpus)
    file_cfg = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise ConfigError(f"{args.config}: grid config must be a JSON object")
        unknown_keys = sorted(set(file_cfg) - _GRID_CONFIG_KEYS)
        if unknown_keys:
            raise ConfigError(
                f"{args.config}: unknown grid config keys {unknown_keys}; "
                f"allowed: {sorted(_GRID_CONFIG_KEYS)}"
            )

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return file_cfg.get(key, default)

    embed_kwargs = dict(file_cfg.get("embedding", {}))
    for key, flag in (
        ("dim", args.dim), ("window", args.window), ("negatives", args.negatives),
        ("epochs", args.epochs), ("initial_lr", args.initial_lr),
        ("subsample_threshold", args.subsample),
    ):
        if flag is not None:
            embed_kwargs[key] = flag
    seed = pick(args.seed, "seed", 0)
    embed_kwargs.setdefault("seed", seed)

    lr_kwargs = dict(file_cfg.get("lr_params", {}))
    methods = tuple(pick(args.methods, "methods", DEFAULT_METHODS))
    unknown = [m for m in methods if m not in RANK_METHODS]
    if unknown:
        raise ConfigError(f"unknown ranking methods {unknown}; choose from {RANK_METHODS}")
    try:
        config = GridConfig(
            methods=methods,
            percentages=tuple(pick(args.percentages, "percentages", DEFAULT_PERCENTAGES)),
            classifiers=tuple(pick(args.classifiers, "classifiers", ("nb", "lr"))),
            seed=seed,
            folds=pick(args.folds, "folds", 10),
            min_count=pick(args.min_count, "min_count", 5),
            embedding=TrainConfig(**embed_kwargs),
            lr_params=LrConfig(**lr_kwargs),
            jobs=pick(args.jobs, "jobs", 1),
        )
    except TypeError as exc:
        raise ConfigError(f"bad grid config: {exc}")
    needs_model = any(m.startswith("hyperplane") for m in config.methods)
    if needs_model and not args.train and not args.embedding:
        raise ConfigError(
            "grid includes a distance method: pass --embedding FILE or --train"
        )
    report = run_grid(raw, config, embedding_path=args.embedding)

    out_dir = Path(args.out_dir if args.out_dir is not None else ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    dump_report(report, out_dir / "report.json")
    rows = report_csv_rows(report)
    with open(out_dir / "results.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("method,elimination_pct,classifier,mean_accuracy,vocab_size,empty_doc_count\n")
        for r in rows:
            fh.write(
                f"{r['method']},{r['elimination_pct']},{r['classifier']},"
                f"{r['mean_accuracy']!r},{r['vocab_size']},{r['empty_doc_count']}\n"
            )
    failed = report["failed_cells"]
    print(
        f"evaluated {len(report['cells'])} cells "
        f"({failed} failed); report in {out_dir / 'report.json'}"
    )
    return 3 if failed else 0


def cmd_overlap(args) -> int:
    rank_x = load_ranking(args.ranking_x)
    rank_y = load_ranking(args.ranking_y)
    percentages = args.percentages or DEFAULT_PERCENTAGES
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "overlap.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("percentage,overlap\n")
        for pct in percentages:
            value = overlap(rank_x, rank_y, 1.0 - pct / 100.0)
            fh.write(f"{pct},{value!r}\n")
    print(f"wrote overlap values for {len(percentages)} percentages to {path}")
    return 0


def cmd_project(args) -> int:
    raw = load_corpus(args.corpus)
    docs, vocab = build_corpus(raw, min_count=args.min_count)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model = _get_model(args, docs, vocab, out_dir)
    cen_a, cen_b, plane = class_hyperplane(model, vocab)
    ranking = rank_by_distance(model, plane, vocab)
    words = ranking.words()
    shortest = words[: args.n_shortest]
    longest = words[len(words) - args.n_longest:]

    fit_words = list(dict.fromkeys(shortest + longest))
    if len(fit_words) < 2:
        raise ConfigError("projection needs at least two distinct words")
    rows_idx = [vocab.id_of(w) for w in fit_words]
    vecs = model.input_vectors[rows_idx].astype(float)
    mean, comps = fit_pca2(vecs)

    user_words = []
    if args.words:
        with open(args.words, "r", encoding="utf-8") as fh:
            user_words = [line.strip() for line in fh if line.strip()]

    path = out_dir / "projection.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("word,pc1,pc2,distance,group\n")

        def emit(word: str, vec, dist: float, group: str) -> None:
            xy = apply_pca2(mean, comps, vec.reshape(1, -1))[0]
            fh.write(f"{word},{float(xy[0])!r},{float(xy[1])!r},{float(dist)!r},{group}\n")

        for w in shortest:
            emit(w, model.embedding_of(w), distance(plane, model.embedding_of(w)), "shortest")
        for w in longest:
            emit(w, model.embedding_of(w), distance(plane, model.embedding_of(w)), "longest")
        for cen in (cen_a, cen_b):
            emit(cen.label, cen.vector, distance(plane, cen.vector), "centroid")
        for w in user_words:
            if w in vocab:
                emit(w, model.embedding_of(w), distance(plane, model.embedding_of(w)), "user")
            else:
                fh.write(f"{w},,,,user_missing\n")
    n_rows = len(shortest) + len(longest) + 2 + len(user_words)
    print(f"wrote {n_rows} projection rows to {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="domainwords",
        description="Rank domain-specific words by embedding hyperplane distance "
        "and evaluate eliminations against frequency baselines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic benchmark corpus")
    p.add_argument("--profile", choices=("desk", "paper"))
    p.add_argument("--docs-per-class", type=int)
    p.add_argument("--doc-len", type=int)
    p.add_argument("--class-dict-size", type=int)
    p.add_argument("--common-dict-size", type=int)
    p.add_argument("--common-per-doc", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("vocab", help="dump the corpus vocabulary as CSV")
    p.add_argument("--corpus", required=True)
    p.add_argument("--min-count", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("rank", help="rank the vocabulary by one method")
    p.add_argument("--corpus", required=True)
    p.add_argument("--method", required=True, choices=RANK_METHODS)
    p.add_argument("--min-count", type=int, default=5)
    _add_embedding_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("eval", help="run the elimination evaluation grid")
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", help="JSON grid config; flags override its fields")
    p.add_argument("--methods", type=lambda s: tuple(s.split(",")))
    p.add_argument("--percentages", type=_parse_percentages)
    p.add_argument("--classifiers", type=lambda s: tuple(s.split(",")))
    p.add_argument("--folds", type=int)
    p.add_argument("--min-count", type=int)
    p.add_argument("--jobs", type=int, help="worker threads; 1 means serial")
    p.add_argument("--embedding", help="path to a saved embedding model")
    p.add_argument("--train", action="store_true")
    p.add_argument("--dim", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--negatives", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--initial-lr", type=float)
    p.add_argument("--subsample", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("overlap", help="survivor overlap between two rankings")
    p.add_argument("--ranking-x", required=True)
    p.add_argument("--ranking-y", required=True)
    p.add_argument("--percentages", type=_parse_percentages)
    _add_common(p)
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("project", help="2-D projection data for extreme words")
    p.add_argument("--corpus", required=True)
    p.add_argument("--min-count", type=int, default=5)
    p.add_argument("--n-shortest", type=int, default=300)
    p.add_argument("--n-longest", type=int, default=300)
    p.add_argument("--words", help="file with extra words to project, one per line")
    _add_embedding_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_project)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainWordsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
