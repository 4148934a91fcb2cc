"""Elimination experiment grid: methods x percentages x classifiers.

For every ranking method and elimination percentage, the survivor vocabulary
is evaluated with each classifier under stratified cross-validation. One
seed governs fold assignment, the random ranking, embedding init and SGD
shuffling, so a grid run is deterministic end to end: two runs with the same
seeds produce byte-identical report JSON apart from wall-clock timing
fields. Timing fields are exactly the keys named ``*_time_s`` and the report
CSV carries no timing columns.
"""

from __future__ import annotations

import json
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .classify import FeatureMatrix, LrConfig, build_features, cross_validate
from .corpus import Document, RawDocument, Vocabulary, build_corpus
from .embedding import EmbeddingModel, TrainConfig, train_skipgram
from .errors import ConfigError
from .geometry import class_hyperplane, rank_by_distance
from .ranking import RankedWordList
from .selectors import overlap, rank_by_selector, rank_random

__all__ = [
    "DEFAULT_PERCENTAGES",
    "DEFAULT_METHODS",
    "GridConfig",
    "run_grid",
    "report_csv_rows",
    "strip_timing",
]

DEFAULT_PERCENTAGES = (0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 99)
DEFAULT_METHODS = ("hyperplane", "hyperplane_longest", "chi2", "mi", "random")
_RANKING_REPEATS = 3


@dataclass(frozen=True)
class GridConfig:
    methods: tuple[str, ...] = DEFAULT_METHODS
    percentages: tuple[float, ...] = DEFAULT_PERCENTAGES
    classifiers: tuple[str, ...] = ("nb", "lr")
    seed: int = 0
    folds: int = 10
    min_count: int = 5
    embedding: TrainConfig = field(default_factory=TrainConfig)
    lr_params: LrConfig = field(default_factory=LrConfig)
    jobs: int = 1

    def __post_init__(self) -> None:
        if not self.methods:
            raise ConfigError("grid needs at least one method")
        if not self.percentages:
            raise ConfigError("grid needs at least one percentage")
        for p in self.percentages:
            if not 0 <= p <= 99:
                raise ConfigError(f"elimination percentage {p} outside [0, 99]")
        if not self.classifiers:
            raise ConfigError("grid needs at least one classifier")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")


def _grid_echo(config: GridConfig) -> dict:
    echo = asdict(config)
    echo["custom_percentages"] = not set(config.percentages).issubset(DEFAULT_PERCENTAGES)
    return echo


def _rank_with_timing(
    method: str,
    vocab: Vocabulary,
    model: EmbeddingModel | None,
    seed: int,
) -> tuple[RankedWordList, float]:
    """Build a ranking, reporting the median wall time of three builds."""
    times = []
    ranking = None
    for _ in range(_RANKING_REPEATS):
        t0 = time.perf_counter()
        if method == "hyperplane" or method == "hyperplane_longest":
            _, _, plane = class_hyperplane(model, vocab)
            ranking = rank_by_distance(
                model, plane, vocab, longest=method == "hyperplane_longest"
            )
        elif method in ("chi2", "mi"):
            ranking = rank_by_selector(vocab, method)
        elif method == "random":
            ranking = rank_random(vocab, seed)
        else:
            raise ConfigError(f"unknown ranking method {method!r}")
        times.append(time.perf_counter() - t0)
    return ranking, statistics.median(times)


def run_grid(
    raw_docs: list[RawDocument],
    config: GridConfig,
    embedding_path=None,
) -> dict:
    """Run the full grid and return the report dictionary.

    A saved embedding may be supplied via ``embedding_path``; otherwise one
    is trained from the corpus when a distance method is in the grid. Cell
    failures are recorded per cell and do not stop the run; the report's
    ``failed_cells`` counts them so callers can exit nonzero.
    """
    needs_model = any(m.startswith("hyperplane") for m in config.methods)
    docs, vocab = build_corpus(raw_docs, min_count=config.min_count)

    embed_time = 0.0
    model = None
    if needs_model:
        if embedding_path is not None:
            from .embedding import load_model

            model = load_model(embedding_path, vocab)
        else:
            t0 = time.perf_counter()
            model = train_skipgram(docs, vocab, config.embedding)
            embed_time = time.perf_counter() - t0

    rankings: dict[str, RankedWordList] = {}
    ranking_times: dict[str, float] = {}
    for method in config.methods:
        rankings[method], ranking_times[method] = _rank_with_timing(
            method, vocab, model, config.seed
        )

    full_features = build_features(docs, vocab.words)
    col_of = {w: j for j, w in enumerate(vocab.words)}

    def run_cell(method: str, pct: float, classifier: str) -> dict:
        survivors = rankings[method].survivors(pct)
        survivor_cols = sorted(col_of[w] for w in survivors)
        cell_words = [vocab.words[j] for j in survivor_cols]
        features = FeatureMatrix(
            doc_ids=full_features.doc_ids,
            labels=full_features.labels,
            words=cell_words,
            counts=full_features.counts[:, survivor_cols],
        )
        result = cross_validate(
            docs,
            cell_words,
            classifier=classifier,
            folds=config.folds,
            seed=config.seed,
            lr_config=config.lr_params,
            features=features,
        )
        cell = {"method": method, "elimination_pct": pct, "vocab_size": len(cell_words)}
        cell.update(result.to_dict())
        return cell

    cell_keys = [
        (m, p, c)
        for m in config.methods
        for p in config.percentages
        for c in config.classifiers
    ]
    cells: list[dict] = []
    failed = 0
    if config.jobs == 1:
        outcomes = []
        for key in cell_keys:
            try:
                outcomes.append(run_cell(*key))
            except Exception as exc:  # cell failures must not stop the run
                outcomes.append(_failed_cell(key, exc))
    else:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(run_cell, *key) for key in cell_keys]
            outcomes = []
            for key, fut in zip(cell_keys, futures):
                try:
                    outcomes.append(fut.result())
                except Exception as exc:
                    outcomes.append(_failed_cell(key, exc))
    for cell in outcomes:
        if "error" in cell:
            failed += 1
        cells.append(cell)

    _check_zero_pct_cells(cells)

    overlap_matrix: dict[str, dict[str, float]] = {}
    for pct in config.percentages:
        if pct >= 100:
            continue
        pairs: dict[str, float] = {}
        for i, m1 in enumerate(config.methods):
            for m2 in config.methods[i + 1:]:
                pairs[f"{m1}|{m2}"] = overlap(
                    rankings[m1], rankings[m2], 1.0 - pct / 100.0
                )
        overlap_matrix[str(pct)] = pairs

    report = {
        "grid": _grid_echo(config),
        "vocab_size": len(vocab),
        "n_documents": len(docs),
        "embedding_train_time_s": embed_time,
        "ranking_time_s": ranking_times,
        "cells": cells,
        "overlap": overlap_matrix,
        "failed_cells": failed,
    }
    return report


def _failed_cell(key: tuple, exc: Exception) -> dict:
    method, pct, classifier = key
    return {
        "method": method,
        "elimination_pct": pct,
        "classifier": classifier,
        "error": f"{type(exc).__name__}: {exc}",
    }


def _check_zero_pct_cells(cells: list[dict]) -> None:
    """At 0% nothing is eliminated, so all methods must agree exactly."""
    by_classifier: dict[str, list] = {}
    for cell in cells:
        if cell.get("elimination_pct") == 0 and "error" not in cell:
            by_classifier.setdefault(cell["classifier"], []).append(cell["folds"])
    for classifier, fold_lists in by_classifier.items():
        for folds in fold_lists[1:]:
            if folds != fold_lists[0]:
                raise RuntimeError(
                    f"0% cells disagree across methods for classifier {classifier}"
                )


def report_csv_rows(report: dict) -> list[dict]:
    """Flat per-cell rows for plotting; deliberately timing-free."""
    rows = []
    for cell in report["cells"]:
        if "error" in cell:
            continue
        rows.append(
            {
                "method": cell["method"],
                "elimination_pct": cell["elimination_pct"],
                "classifier": cell["classifier"],
                "mean_accuracy": cell["mean_accuracy"],
                "vocab_size": cell["vocab_size"],
                "empty_doc_count": cell["empty_doc_count"],
            }
        )
    return rows


def strip_timing(obj):
    """Copy of a report with every ``*_time_s`` field removed, for comparisons."""
    if isinstance(obj, dict):
        return {
            k: strip_timing(v) for k, v in obj.items() if not k.endswith("_time_s")
        }
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def dump_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
