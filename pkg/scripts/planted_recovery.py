#!/usr/bin/env python3
"""Measure planted-word recovery of the distance ranking across seeds.

For each seed: generate the desk benchmark, train embeddings, rank the
vocabulary by hyperplane distance, and report what fraction of the planted
common words lands in the shortest 15% of the ranking. Prints one line per
seed and a mean at the end.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from domainwords.corpus import build_corpus
from domainwords.embedding import TrainConfig, train_skipgram
from domainwords.geometry import class_hyperplane, rank_by_distance
from domainwords.synthbench import generate, profile_config


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, nargs="+", default=[42, 43, 44])
    parser.add_argument("--top-fraction", type=float, default=0.15)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    fractions = []
    for seed in args.seeds:
        t0 = time.perf_counter()
        raw, manifest = generate(profile_config("desk", seed=seed))
        docs, vocab = build_corpus(raw, min_count=5)
        model = train_skipgram(docs, vocab, TrainConfig(seed=seed))
        _, _, plane = class_hyperplane(model, vocab)
        ranking = rank_by_distance(model, plane, vocab)

        head = set(ranking.words()[: int(args.top_fraction * len(vocab))])
        planted = manifest["common_words"]
        recovered = sum(1 for w in planted if w in head)
        frac = recovered / len(planted)
        fractions.append(frac)
        print(f"seed {seed}: {recovered}/{len(planted)} planted words in the "
              f"shortest {args.top_fraction:.0%} ({time.perf_counter() - t0:.1f}s)")

    print(f"mean recovery over {len(fractions)} seeds: "
          f"{sum(fractions) / len(fractions):.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
