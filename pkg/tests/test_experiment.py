"""Evaluation grid: structure, determinism, failure isolation."""

import json

import pytest

from domainwords.corpus import RawDocument
from domainwords.embedding import TrainConfig
from domainwords.errors import ConfigError
from domainwords.experiment import (
    DEFAULT_METHODS,
    DEFAULT_PERCENTAGES,
    GridConfig,
    dump_report,
    report_csv_rows,
    run_grid,
    strip_timing,
)

MINI_GRID = GridConfig(
    percentages=(0, 50, 99),
    folds=5,
    min_count=1,
    seed=5,
    embedding=TrainConfig(dim=12, window=3, negatives=3, epochs=2, seed=5),
)


@pytest.fixture(scope="module")
def mini_report(mini_bundle):
    return run_grid(mini_bundle.raw, MINI_GRID)


def test_grid_config_validation():
    with pytest.raises(ConfigError):
        GridConfig(percentages=(0, 100))
    with pytest.raises(ConfigError):
        GridConfig(percentages=())
    with pytest.raises(ConfigError):
        GridConfig(methods=())
    with pytest.raises(ConfigError):
        GridConfig(classifiers=())
    with pytest.raises(ConfigError):
        GridConfig(jobs=0)


def test_defaults_match_published_grid():
    assert DEFAULT_PERCENTAGES == (0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 99)
    assert DEFAULT_METHODS == ("hyperplane", "hyperplane_longest", "chi2", "mi", "random")


def test_report_structure(mini_report, mini_bundle):
    report = mini_report
    assert report["vocab_size"] == len(mini_bundle.vocab)
    assert report["n_documents"] == len(mini_bundle.docs)
    assert report["failed_cells"] == 0
    assert len(report["cells"]) == len(MINI_GRID.methods) * 3 * 2
    for cell in report["cells"]:
        assert cell["method"] in MINI_GRID.methods
        assert cell["elimination_pct"] in (0, 50, 99)
        assert cell["classifier"] in ("nb", "lr")
        assert 0.0 <= cell["mean_accuracy"] <= 1.0
        assert cell["n_folds"] == 5
        assert len(cell["folds"]) == 5
    assert report["grid"]["seed"] == 5
    assert report["grid"]["custom_percentages"] is False
    assert report["embedding_train_time_s"] > 0
    assert set(report["ranking_time_s"]) == set(MINI_GRID.methods)


def test_zero_percent_cells_agree_across_methods(mini_report):
    by_classifier = {}
    for cell in mini_report["cells"]:
        if cell["elimination_pct"] == 0:
            by_classifier.setdefault(cell["classifier"], []).append(cell["folds"])
    for fold_lists in by_classifier.values():
        assert len(fold_lists) == len(MINI_GRID.methods)
        assert all(folds == fold_lists[0] for folds in fold_lists)


def test_vocab_shrinks_with_percentage(mini_report):
    sizes = {}
    for cell in mini_report["cells"]:
        sizes.setdefault(cell["elimination_pct"], set()).add(cell["vocab_size"])
    assert len(sizes[0]) == 1 and len(sizes[99]) == 1
    assert max(sizes[99]) < min(sizes[50]) < min(sizes[0])


def test_overlap_matrix(mini_report):
    overlap = mini_report["overlap"]
    assert set(overlap) == {"0", "50", "99"}
    n_methods = len(MINI_GRID.methods)
    expected_pairs = n_methods * (n_methods - 1) // 2
    for pct, pairs in overlap.items():
        assert len(pairs) == expected_pairs
        for value in pairs.values():
            assert 0.0 <= value <= 1.0
    # at 0% elimination everything survives, so every overlap is total
    assert all(v == 1.0 for v in overlap["0"].values())


def test_custom_percentages_flagged(mini_bundle):
    config = GridConfig(
        methods=("chi2",),
        percentages=(0, 33),
        classifiers=("nb",),
        folds=4,
        min_count=1,
    )
    report = run_grid(mini_bundle.raw, config)
    assert report["grid"]["custom_percentages"] is True


def test_csv_rows_are_timing_free(mini_report):
    rows = report_csv_rows(mini_report)
    assert len(rows) == len(mini_report["cells"])
    for row in rows:
        assert set(row) == {
            "method",
            "elimination_pct",
            "classifier",
            "mean_accuracy",
            "vocab_size",
            "empty_doc_count",
        }


def test_strip_timing_removes_all_wall_clock_fields(mini_report):
    stripped = strip_timing(mini_report)

    def walk(obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                assert not k.endswith("_time_s")
                walk(v)
        elif isinstance(obj, list):
            for v in obj:
                walk(v)

    walk(stripped)
    assert "cells" in stripped and "overlap" in stripped


def test_rerun_is_identical_modulo_timing(mini_bundle, mini_report, tmp_path):
    again = run_grid(mini_bundle.raw, MINI_GRID)
    assert strip_timing(again) == strip_timing(mini_report)

    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    dump_report(strip_timing(mini_report), p1)
    dump_report(strip_timing(again), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_parallel_run_matches_serial(mini_bundle, mini_report):
    parallel = run_grid(
        mini_bundle.raw,
        GridConfig(**{**_as_kwargs(MINI_GRID), "jobs": 4}),
    )
    a, b = strip_timing(parallel), strip_timing(mini_report)
    # the grid echo records the worker count, which is the one allowed delta
    assert a["grid"].pop("jobs") == 4 and b["grid"].pop("jobs") == 1
    assert a == b


def _as_kwargs(config: GridConfig) -> dict:
    return {
        "methods": config.methods,
        "percentages": config.percentages,
        "classifiers": config.classifiers,
        "seed": config.seed,
        "folds": config.folds,
        "min_count": config.min_count,
        "embedding": config.embedding,
        "lr_params": config.lr_params,
        "jobs": config.jobs,
    }


def test_cell_failures_are_isolated():
    # one document in class B: cross-validation fails in every cell, but the
    # grid completes and reports the failures
    raw = [RawDocument(id=f"a{i}", text="x y", label="A") for i in range(6)]
    raw.append(RawDocument(id="b0", text="y z", label="B"))
    config = GridConfig(
        methods=("chi2", "random"),
        percentages=(0, 50),
        classifiers=("nb",),
        min_count=1,
    )
    report = run_grid(raw, config)
    assert report["failed_cells"] == 4
    for cell in report["cells"]:
        assert "error" in cell
        assert "DataError" in cell["error"]
    assert report_csv_rows(report) == []


def test_report_json_round_trips(mini_report, tmp_path):
    path = tmp_path / "report.json"
    dump_report(mini_report, path)
    # tuples serialize as arrays, so compare through one normalization pass
    assert json.loads(path.read_text()) == json.loads(json.dumps(mini_report))
