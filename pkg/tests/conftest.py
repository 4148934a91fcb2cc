"""Shared fixtures.

The desk-profile bundle is session scoped because embedding training
dominates suite runtime; its wall times are recorded so the end-to-end
budget assertion can include them. Hypothesis runs derandomized so the
whole suite is reproducible.
"""

from __future__ import annotations

import time
from typing import NamedTuple

import pytest
from hypothesis import settings

from domainwords import corpus, embedding, geometry, synthbench

settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")

DESK_SEED = 42

MINI_CONFIG = synthbench.SynthConfig(
    docs_per_class=60,
    doc_len=40,
    class_dict_size=30,
    common_dict_size=10,
    common_per_doc=5,
    seed=7,
)

MINI_TRAIN = embedding.TrainConfig(dim=16, window=3, negatives=5, epochs=3, seed=3)


class CorpusBundle(NamedTuple):
    raw: list
    manifest: dict
    docs: list
    vocab: corpus.Vocabulary


class DeskBundle(NamedTuple):
    raw: list
    manifest: dict
    docs: list
    vocab: corpus.Vocabulary
    model: embedding.EmbeddingModel
    centroid_a: geometry.ClassCentroid
    centroid_b: geometry.ClassCentroid
    plane: geometry.Hyperplane
    wall_times: dict


@pytest.fixture(scope="session")
def mini_bundle() -> CorpusBundle:
    raw, manifest = synthbench.generate(MINI_CONFIG)
    docs, vocab = corpus.build_corpus(raw, min_count=1)
    return CorpusBundle(raw, manifest, docs, vocab)


@pytest.fixture(scope="session")
def mini_model(mini_bundle) -> embedding.EmbeddingModel:
    return embedding.train_skipgram(mini_bundle.docs, mini_bundle.vocab, MINI_TRAIN)


@pytest.fixture(scope="session")
def desk_bundle() -> DeskBundle:
    wall = {}
    t0 = time.perf_counter()
    raw, manifest = synthbench.generate(
        synthbench.profile_config("desk", seed=DESK_SEED)
    )
    wall["generate"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    docs, vocab = corpus.build_corpus(raw, min_count=5)
    wall["build"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    model = embedding.train_skipgram(
        docs, vocab, embedding.TrainConfig(seed=DESK_SEED)
    )
    wall["train"] = time.perf_counter() - t0

    cen_a, cen_b, plane = geometry.class_hyperplane(model, vocab)
    return DeskBundle(raw, manifest, docs, vocab, model, cen_a, cen_b, plane, wall)
