"""Centroid hyperplane geometry over the embedding space.

The separating hyperplane is built from the two class centroids: its normal
is w = centroid_a - centroid_b and it passes through the midpoint
x0 = (centroid_a + centroid_b) / 2, so the offset is b = -w . x0. The
distance of a word vector x from the plane is |w . x + b| / ||w||. Words are
ranked ascending by that distance: the shortest-distance words are the ones
shared most evenly between the classes and are eliminated first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Vocabulary
from .embedding import EmbeddingModel
from .errors import ConfigError, DataError, DegenerateGeometryError, VocabMismatchError
from .ranking import RankedWordList

__all__ = [
    "ClassCentroid",
    "Hyperplane",
    "compute_centroid",
    "build_hyperplane",
    "class_hyperplane",
    "distance",
    "rank_by_distance",
    "project_2d",
    "fit_pca2",
    "apply_pca2",
]


@dataclass(frozen=True)
class ClassCentroid:
    label: str
    vector: np.ndarray  # float64, shape (dim,)
    n_words: int


@dataclass(frozen=True)
class Hyperplane:
    w: np.ndarray  # normal, float64
    b: float
    x0: np.ndarray  # midpoint the plane passes through

    def __post_init__(self) -> None:
        if not np.any(self.w):
            raise DegenerateGeometryError("hyperplane normal is the zero vector")

    @property
    def w_norm(self) -> float:
        return float(np.linalg.norm(self.w))


def compute_centroid(model: EmbeddingModel, words: list[str], label: str) -> ClassCentroid:
    """Component-wise mean over the input vectors of the given unique words."""
    if not words:
        raise DataError(f"class {label!r} has no words; cannot compute centroid")
    rows = [model.vocab.id_of(w) for w in words]
    vecs = model.input_vectors[rows].astype(np.float64)
    return ClassCentroid(label=label, vector=vecs.mean(axis=0), n_words=len(words))


def build_hyperplane(centroid_a: ClassCentroid, centroid_b: ClassCentroid) -> Hyperplane:
    """Plane orthogonal to the centroid difference through their midpoint.

    Raises DegenerateGeometryError when the centroids coincide.
    """
    w = centroid_a.vector - centroid_b.vector
    if not np.any(w):
        raise DegenerateGeometryError(
            f"centroids of {centroid_a.label!r} and {centroid_b.label!r} coincide"
        )
    x0 = (centroid_a.vector + centroid_b.vector) / 2.0
    b = -float(np.dot(w, x0))
    return Hyperplane(w=w, b=b, x0=x0)


def class_hyperplane(
    model: EmbeddingModel, vocab: Vocabulary
) -> tuple[ClassCentroid, ClassCentroid, Hyperplane]:
    """Centroids over each class's unique words and the plane between them."""
    label_a, label_b = vocab.class_labels
    cen_a = compute_centroid(model, vocab.class_words(label_a), label_a)
    cen_b = compute_centroid(model, vocab.class_words(label_b), label_b)
    return cen_a, cen_b, build_hyperplane(cen_a, cen_b)


def distance(plane: Hyperplane, x: np.ndarray) -> float:
    """|w . x + b| / ||w|| for a query point x."""
    return float(abs(np.dot(plane.w, np.asarray(x, dtype=np.float64)) + plane.b) / plane.w_norm)


def rank_by_distance(
    model: EmbeddingModel, plane: Hyperplane, vocab: Vocabulary, longest: bool = False
) -> RankedWordList:
    """Rank the whole vocabulary by hyperplane distance, ties lexicographic.

    Ascending by default (shortest first); ``longest=True`` reverses the
    direction for the negative-control ranking.
    """
    if model.vocab.vocab_hash != vocab.vocab_hash:
        raise VocabMismatchError("model is bound to a different vocabulary")
    vecs = model.input_vectors.astype(np.float64)
    dists = np.abs(vecs @ plane.w + plane.b) / plane.w_norm
    words = np.array(vocab.words)
    order = np.lexsort((words, -dists if longest else dists))
    entries = [(str(words[i]), float(dists[i])) for i in order]
    return RankedWordList(
        method="hyperplane_longest" if longest else "hyperplane",
        entries=entries,
        direction="descending" if longest else "ascending",
    )


def fit_pca2(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and top-2 principal axes of the rows, signs canonicalized.

    Each component's largest-magnitude coefficient is made positive so the
    projection is deterministic.
    """
    x = np.asarray(matrix, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ConfigError("PCA needs at least two points")
    if x.shape[1] < 2:
        raise ConfigError("PCA needs at least two input dimensions")
    mean = x.mean(axis=0)
    _, _, vt = np.linalg.svd(x - mean, full_matrices=False)
    comps = vt[:2].copy()
    if comps.shape[0] < 2:
        comps = np.vstack([comps, np.zeros((2 - comps.shape[0], x.shape[1]))])
    for i in range(2):
        pivot = np.argmax(np.abs(comps[i]))
        if comps[i, pivot] < 0:
            comps[i] = -comps[i]
    return mean, comps


def apply_pca2(mean: np.ndarray, comps: np.ndarray, points: np.ndarray) -> np.ndarray:
    return (np.asarray(points, dtype=np.float64) - mean) @ comps.T


def project_2d(
    model: EmbeddingModel, plane: Hyperplane, words: list[str]
) -> list[tuple[str, np.ndarray, float]]:
    """2-D PCA coordinates plus plane distance for each selected word.

    The projection is fitted on exactly the given words' input vectors. This
    only emits data; rendering is out of scope.
    """
    if len(words) < 2:
        raise ConfigError("projection needs at least two words")
    rows = [model.vocab.id_of(w) for w in words]
    vecs = model.input_vectors[rows].astype(np.float64)
    mean, comps = fit_pca2(vecs)
    coords = apply_pca2(mean, comps, vecs)
    dists = np.abs(vecs @ plane.w + plane.b) / plane.w_norm
    return [(w, coords[i], float(dists[i])) for i, w in enumerate(words)]
