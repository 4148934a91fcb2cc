"""Synthetic benchmark corpus with planted common words.

Two classes draw their tokens from disjoint dictionaries; a third, shared
dictionary supplies words inserted into every document of both classes. The
shared words are the planted "domain-common" words a good ranking should
surface first. Token strings are plain alphanumerics (wa0001, wb0001, m0001)
so they pass the pipeline tokenizer unchanged.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .corpus import RawDocument
from .errors import ConfigError

__all__ = ["SynthConfig", "PAPER_PROFILE", "DESK_PROFILE", "generate", "profile_config"]


@dataclass(frozen=True)
class SynthConfig:
    docs_per_class: int = 20000
    doc_len: int = 300
    class_dict_size: int = 2000
    common_dict_size: int = 300
    common_per_doc: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("docs_per_class", "doc_len", "class_dict_size", "common_dict_size"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.common_per_doc < 0:
            raise ConfigError(f"common_per_doc must be >= 0, got {self.common_per_doc}")


# Full-scale profile: 40,000 documents, |vocab| = 4300.
PAPER_PROFILE = SynthConfig()
# Small profile for fast end-to-end runs: 2,000 documents, |vocab| = 1100.
DESK_PROFILE = SynthConfig(docs_per_class=1000, class_dict_size=500, common_dict_size=100)

_PROFILES = {"paper": PAPER_PROFILE, "desk": DESK_PROFILE}


def profile_config(name: str, seed: int | None = None) -> SynthConfig:
    if name not in _PROFILES:
        raise ConfigError(f"unknown profile {name!r}; choose from {sorted(_PROFILES)}")
    cfg = _PROFILES[name]
    if seed is not None:
        cfg = SynthConfig(**{**asdict(cfg), "seed": seed})
    return cfg


def _dictionary(prefix: str, size: int) -> list[str]:
    width = len(str(size - 1))
    return [f"{prefix}{i:0{width}d}" for i in range(size)]


def generate(config: SynthConfig) -> tuple[list[RawDocument], dict]:
    """Generate the corpus and its manifest.

    Each document draws doc_len tokens uniformly with replacement from its
    class dictionary, then common_per_doc tokens drawn uniformly from the
    common dictionary are inserted at uniform random positions, giving a
    final length of doc_len + common_per_doc. Every document uses its own
    seed derived from (master seed, document index), so output is identical
    for a given master seed regardless of generation schedule.
    """
    words_a = _dictionary("wa", config.class_dict_size)
    words_b = _dictionary("wb", config.class_dict_size)
    words_m = _dictionary("m", config.common_dict_size)

    docs: list[RawDocument] = []
    n = config.docs_per_class
    id_width = len(str(2 * n - 1))
    for doc_index in range(2 * n):
        label = "A" if doc_index < n else "B"
        class_words = words_a if label == "A" else words_b
        rng = np.random.default_rng((config.seed, doc_index))
        draws = rng.integers(0, config.class_dict_size, config.doc_len)
        tokens = [class_words[i] for i in draws]
        common_draws = rng.integers(0, config.common_dict_size, config.common_per_doc)
        for cid in common_draws:
            pos = int(rng.integers(0, len(tokens) + 1))
            tokens.insert(pos, words_m[cid])
        docs.append(
            RawDocument(
                id=f"{label.lower()}{doc_index:0{id_width}d}",
                text=" ".join(tokens),
                label=label,
            )
        )

    manifest = {
        "config": asdict(config),
        "final_doc_len": config.doc_len + config.common_per_doc,
        "class_a_words": words_a,
        "class_b_words": words_b,
        "common_words": words_m,
    }
    return docs, manifest
