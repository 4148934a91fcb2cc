"""Frequency-based word selectors: chi-square, mutual information, random.

Both statistics are computed on document-level binary occurrence: n11 counts
class-A documents containing the word, n10 class-A documents without it, and
n01/n00 the same for class B; see ContingencyTable. Words are ranked
ascending by score, so the least class-informative words are eliminated
first, mirroring the elimination order of the distance ranking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import Vocabulary
from .errors import ConfigError, DataError
from .ranking import RankedWordList, eliminate_count

__all__ = [
    "ContingencyTable",
    "chi2_score",
    "mi_score",
    "contingency_for",
    "rank_by_selector",
    "rank_random",
    "overlap",
]


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 document-occurrence table for one word.

    n11: class-A documents containing the word
    n10: class-A documents not containing it
    n01: class-B documents containing it
    n00: class-B documents not containing it
    """

    n11: int
    n10: int
    n01: int
    n00: int

    def __post_init__(self) -> None:
        if min(self.n11, self.n10, self.n01, self.n00) < 0:
            raise ConfigError("contingency cells must be non-negative")
        if self.n == 0:
            raise ConfigError("contingency table must have at least one observation")

    @property
    def n(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00


def chi2_score(table: ContingencyTable) -> float:
    """n*(n11*n00 - n10*n01)^2 / product of the four marginals; 0 if any marginal is 0."""
    row_a = table.n11 + table.n10
    row_b = table.n01 + table.n00
    col_present = table.n11 + table.n01
    col_absent = table.n10 + table.n00
    denom = row_a * row_b * col_present * col_absent
    if denom == 0:
        return 0.0
    det = table.n11 * table.n00 - table.n10 * table.n01
    return table.n * det * det / denom


def mi_score(table: ContingencyTable) -> float:
    """Mutual information in bits between occurrence and class, MLE probabilities.

    Terms with a zero joint count contribute 0 (the 0*log(0) convention).
    """
    n = table.n
    row_a = table.n11 + table.n10
    row_b = table.n01 + table.n00
    col_present = table.n11 + table.n01
    col_absent = table.n10 + table.n00
    cells = (
        (table.n11, col_present, row_a),
        (table.n10, col_absent, row_a),
        (table.n01, col_present, row_b),
        (table.n00, col_absent, row_b),
    )
    total = 0.0
    for joint, col, row in cells:
        if joint == 0:
            continue
        total += (joint / n) * math.log2(joint * n / (col * row))
    return total


def contingency_for(vocab: Vocabulary, word: str) -> ContingencyTable:
    label_a, label_b = vocab.class_labels
    n11 = vocab.doc_count(word, label_a)
    n01 = vocab.doc_count(word, label_b)
    return ContingencyTable(
        n11=n11,
        n10=vocab.class_doc_totals[label_a] - n11,
        n01=n01,
        n00=vocab.class_doc_totals[label_b] - n01,
    )


_SCORERS = {"chi2": chi2_score, "mi": mi_score}


def rank_by_selector(vocab: Vocabulary, method: str) -> RankedWordList:
    """Rank the full vocabulary ascending by chi2 or mi, ties lexicographic."""
    if method not in _SCORERS:
        raise ConfigError(f"unknown selector {method!r}; choose from {sorted(_SCORERS)}")
    scorer = _SCORERS[method]
    scored = [(scorer(contingency_for(vocab, w)), w) for w in vocab.words]
    scored.sort()
    return RankedWordList(method=method, entries=[(w, s) for s, w in scored])


def rank_random(vocab: Vocabulary, seed: int) -> RankedWordList:
    """Uniform random permutation of the vocabulary; the key is the score."""
    rng = np.random.default_rng(seed)
    keys = rng.random(len(vocab.words))
    scored = sorted(zip(keys.tolist(), vocab.words))
    return RankedWordList(method="random", entries=[(w, k) for k, w in scored])


def overlap(list_x: RankedWordList, list_y: RankedWordList, keep_fraction: float) -> float:
    """Fraction of shared survivors when both lists keep their last K entries.

    K = n - floor((1 - keep_fraction) * n). Both rankings must cover the same
    vocabulary.
    """
    if not 0.0 < keep_fraction <= 1.0:
        raise ConfigError(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    words_x = list_x.words()
    words_y = list_y.words()
    set_x, set_y = set(words_x), set(words_y)
    if set_x != set_y:
        raise DataError(
            "rankings cover different vocabularies: "
            f"{len(set_x - set_y)} words only in x, {len(set_y - set_x)} only in y"
        )
    n = len(words_x)
    k = n - eliminate_count(n, (1.0 - keep_fraction) * 100.0)
    survivors_x = set(words_x[n - k:])
    survivors_y = set(words_y[n - k:])
    return len(survivors_x & survivors_y) / k
