#!/usr/bin/env python3
"""Run the full elimination-method grid on a synthetic benchmark corpus.

Generates the chosen benchmark profile, trains embeddings, ranks the
vocabulary with every method, evaluates all method x percentage x classifier
cells under stratified cross-validation, and writes report.json plus
results.csv into the output directory. Stdout gets a compact accuracy pivot
per classifier.

The desk profile (default) finishes in well under five minutes on one core;
the paper profile is the full-size benchmark and takes hours.
"""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from domainwords.embedding import TrainConfig
from domainwords.experiment import GridConfig, dump_report, report_csv_rows, run_grid
from domainwords.synthbench import generate, profile_config


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--profile", choices=("desk", "paper"), default="desk")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out-dir", type=Path, default=Path("results/desk_grid"))
    return parser.parse_args(argv)


def accuracy_pivot(rows, classifier):
    pcts = sorted({r["elimination_pct"] for r in rows})
    methods = sorted({r["method"] for r in rows})
    cell = {(r["method"], r["elimination_pct"]): r["mean_accuracy"]
            for r in rows if r["classifier"] == classifier}
    width = max(len(m) for m in methods)
    lines = [f"{classifier} accuracy by elimination percentage"]
    lines.append(" " * width + "  " + " ".join(f"{p:>6}" for p in pcts))
    for m in methods:
        vals = " ".join(f"{cell.get((m, p), float('nan')):6.4f}" for p in pcts)
        lines.append(f"{m:<{width}}  {vals}")
    return "\n".join(lines)


def main(argv=None) -> int:
    args = parse_args(argv)
    config = profile_config(args.profile, seed=args.seed)

    t0 = time.perf_counter()
    raw, manifest = generate(config)
    print(f"generated {len(raw)} documents "
          f"({manifest['config']['class_dict_size']} words per class dictionary, "
          f"{manifest['config']['common_dict_size']} planted common words) "
          f"in {time.perf_counter() - t0:.1f}s")

    grid = GridConfig(
        seed=args.seed,
        jobs=args.jobs,
        embedding=TrainConfig(seed=args.seed),
    )
    report = run_grid(raw, grid)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    dump_report(report, args.out_dir / "report.json")
    with open(args.out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")

    rows = report_csv_rows(report)
    with open(args.out_dir / "results.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("method,elimination_pct,classifier,mean_accuracy,vocab_size,empty_doc_count\n")
        for r in rows:
            fh.write(
                f"{r['method']},{r['elimination_pct']},{r['classifier']},"
                f"{r['mean_accuracy']!r},{r['vocab_size']},{r['empty_doc_count']}\n"
            )

    print(f"embedding training: {report['embedding_train_time_s']:.1f}s, "
          f"vocabulary: {report['vocab_size']} words, "
          f"failed cells: {report['failed_cells']}")
    for classifier in report["grid"]["classifiers"]:
        print()
        print(accuracy_pivot(rows, classifier))
    print(f"\nwrote {args.out_dir}/report.json and {args.out_dir}/results.csv")
    return 0 if report["failed_cells"] == 0 else 3


if __name__ == "__main__":
    raise SystemExit(main())
