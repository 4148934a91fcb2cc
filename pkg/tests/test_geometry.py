"""Centroid hyperplane construction, distances, ranking, and 2-D projection."""

import numpy as np
import pytest

from domainwords.corpus import RawDocument, build_corpus
from domainwords.embedding import EmbeddingModel
from domainwords.errors import (
    ConfigError,
    DataError,
    DegenerateGeometryError,
    VocabMismatchError,
)
from domainwords.geometry import (
    ClassCentroid,
    Hyperplane,
    apply_pca2,
    build_hyperplane,
    class_hyperplane,
    compute_centroid,
    distance,
    fit_pca2,
    project_2d,
    rank_by_distance,
)


def _centroid(label, vec):
    return ClassCentroid(label=label, vector=np.asarray(vec, dtype=np.float64), n_words=1)


def test_hand_built_plane():
    plane = build_hyperplane(_centroid("A", [2.0, 0.0]), _centroid("B", [0.0, 0.0]))
    np.testing.assert_allclose(plane.w, [2.0, 0.0])
    np.testing.assert_allclose(plane.x0, [1.0, 0.0])
    assert plane.b == pytest.approx(-2.0)
    assert plane.w_norm == pytest.approx(2.0)
    assert distance(plane, [3.0, 4.0]) == pytest.approx(2.0)
    assert distance(plane, [1.0, -7.0]) == pytest.approx(0.0)
    assert distance(plane, plane.x0) == pytest.approx(0.0, abs=1e-12)


def test_degenerate_centroids_rejected():
    same = _centroid("A", [1.0, 2.0])
    with pytest.raises(DegenerateGeometryError, match="coincide"):
        build_hyperplane(same, _centroid("B", [1.0, 2.0]))
    with pytest.raises(DegenerateGeometryError, match="zero"):
        Hyperplane(w=np.zeros(3), b=0.0, x0=np.zeros(3))


def _random_instance(seed):
    rng = np.random.default_rng(seed)
    k = (2, 10, 100)[seed % 3]
    cen_a = rng.normal(0, 1, k)
    cen_b = rng.normal(0, 1, k)
    points = rng.normal(0, 2, (20, k))
    return cen_a, cen_b, points


@pytest.mark.parametrize("seed", range(100))
def test_plane_invariants_random_instances(seed):
    cen_a, cen_b, points = _random_instance(seed)
    plane = build_hyperplane(_centroid("A", cen_a), _centroid("B", cen_b))

    # the midpoint lies on the plane
    assert abs(np.dot(plane.w, plane.x0) + plane.b) <= 1e-9 * max(1.0, plane.w_norm)

    # both centroids sit at half the centroid gap
    half_gap = plane.w_norm / 2.0
    assert distance(plane, cen_a) == pytest.approx(half_gap, rel=1e-9)
    assert distance(plane, cen_b) == pytest.approx(half_gap, rel=1e-9)

    dists = np.array([distance(plane, p) for p in points])

    # translation moves the plane with the data and keeps distances
    shift = np.full(cen_a.shape, 3.7)
    moved = build_hyperplane(_centroid("A", cen_a + shift), _centroid("B", cen_b + shift))
    moved_dists = np.array([distance(moved, p + shift) for p in points])
    np.testing.assert_allclose(moved_dists, dists, rtol=1e-9, atol=1e-9)

    # uniform scaling scales every distance by the same factor
    scale = 2.5
    scaled = build_hyperplane(_centroid("A", cen_a * scale), _centroid("B", cen_b * scale))
    scaled_dists = np.array([distance(scaled, p * scale) for p in points])
    np.testing.assert_allclose(scaled_dists, dists * scale, rtol=1e-9, atol=1e-9)

    # swapping the class roles flips the normal but not the distances
    swapped = build_hyperplane(_centroid("B", cen_b), _centroid("A", cen_a))
    swapped_dists = np.array([distance(swapped, p) for p in points])
    np.testing.assert_allclose(swapped_dists, dists, rtol=1e-9, atol=1e-9)


def _hand_model():
    raw = [
        RawDocument(id="1", text="aleft bleft cright", label="A"),
        RawDocument(id="2", text="dright aleft bleft cright", label="B"),
    ]
    docs, vocab = build_corpus(raw, min_count=1)
    vectors = {
        "aleft": [-1.0, 0.0],
        "bleft": [-1.0, 3.0],
        "cright": [1.0, 0.0],
        "dright": [3.0, -2.0],
    }
    input_vectors = np.array([vectors[w] for w in vocab.words], dtype=np.float32)
    model = EmbeddingModel(
        vocab=vocab,
        input_vectors=input_vectors,
        output_vectors=np.zeros_like(input_vectors),
    )
    return model, vocab


def test_rank_by_distance_hand_example():
    model, vocab = _hand_model()
    plane = Hyperplane(w=np.array([1.0, 0.0]), b=0.0, x0=np.zeros(2))
    ranking = rank_by_distance(model, plane, vocab)
    # distances: aleft 1, bleft 1, cright 1, dright 3; ties break by word
    assert ranking.words() == ["aleft", "bleft", "cright", "dright"]
    assert [round(s, 6) for _, s in ranking.entries] == [1.0, 1.0, 1.0, 3.0]
    assert ranking.method == "hyperplane"
    assert ranking.direction == "ascending"

    longest = rank_by_distance(model, plane, vocab, longest=True)
    assert longest.words() == ["dright", "aleft", "bleft", "cright"]
    assert longest.method == "hyperplane_longest"
    assert longest.direction == "descending"


def test_rank_by_distance_rejects_foreign_vocab():
    model, _ = _hand_model()
    _, other_vocab = build_corpus(
        [RawDocument(id="1", text="x", label="A"), RawDocument(id="2", text="y", label="B")],
        min_count=1,
    )
    plane = Hyperplane(w=np.array([1.0, 0.0]), b=0.0, x0=np.zeros(2))
    with pytest.raises(VocabMismatchError):
        rank_by_distance(model, plane, other_vocab)


def test_class_hyperplane_on_hand_model():
    model, vocab = _hand_model()
    cen_a, cen_b, plane = class_hyperplane(model, vocab)
    # class A words: aleft, bleft, cright; class B: all four
    np.testing.assert_allclose(cen_a.vector, [(-1 - 1 + 1) / 3, (0 + 3 + 0) / 3])
    np.testing.assert_allclose(cen_b.vector, [0.5, 0.25])
    assert cen_a.n_words == 3
    assert cen_b.n_words == 4
    np.testing.assert_allclose(plane.w, cen_a.vector - cen_b.vector)
    assert abs(np.dot(plane.w, plane.x0) + plane.b) < 1e-12


def test_label_swap_keeps_ranking(mini_bundle, mini_model):
    vocab = mini_bundle.vocab
    _, _, plane = class_hyperplane(mini_model, vocab)
    baseline = rank_by_distance(mini_model, plane, vocab)

    flipped = {"A": "B", "B": "A"}
    swapped_raw = [
        RawDocument(id=d.id, text=d.text, label=flipped[d.label])
        for d in mini_bundle.raw
    ]
    swapped_docs, swapped_vocab = build_corpus(swapped_raw, min_count=1)
    assert swapped_vocab.vocab_hash == vocab.vocab_hash
    swapped_model = EmbeddingModel(
        vocab=swapped_vocab,
        input_vectors=mini_model.input_vectors,
        output_vectors=mini_model.output_vectors,
    )
    _, _, swapped_plane = class_hyperplane(swapped_model, swapped_vocab)
    swapped_ranking = rank_by_distance(swapped_model, swapped_plane, swapped_vocab)

    assert swapped_ranking.words() == baseline.words()
    for (_, s1), (_, s2) in zip(swapped_ranking.entries, baseline.entries):
        assert s1 == pytest.approx(s2, rel=1e-9, abs=1e-12)


def test_compute_centroid_requires_words(mini_model):
    with pytest.raises(DataError, match="no words"):
        compute_centroid(mini_model, [], "A")


def test_pca_recovers_planar_data():
    rng = np.random.default_rng(0)
    flat = rng.normal(0, 2, (40, 2))
    basis, _ = np.linalg.qr(rng.normal(0, 1, (5, 2)))
    points = flat @ basis.T + rng.normal(0, 1, 5)

    mean, comps = fit_pca2(points)
    coords = apply_pca2(mean, comps, points)

    # rank-2 data embeds isometrically: pairwise distances survive
    for i in range(0, 40, 7):
        for j in range(0, 40, 11):
            original = np.linalg.norm(points[i] - points[j])
            projected = np.linalg.norm(coords[i] - coords[j])
            assert projected == pytest.approx(original, rel=1e-9, abs=1e-9)


def test_pca_variance_ordering_and_signs():
    rng = np.random.default_rng(1)
    points = rng.normal(0, 1, (50, 4)) * np.array([5.0, 2.0, 0.5, 0.1])
    mean, comps = fit_pca2(points)
    coords = apply_pca2(mean, comps, points)
    assert coords[:, 0].var() >= coords[:, 1].var()
    # eigen-oracle: projected variances match the top covariance eigenvalues
    cov = np.cov(points - mean, rowvar=False, bias=True)
    eigvals = np.sort(np.linalg.eigvalsh(cov))[::-1]
    np.testing.assert_allclose(
        [coords[:, 0].var(), coords[:, 1].var()], eigvals[:2], rtol=1e-9
    )
    # canonical signs: the dominant coefficient of each axis is positive
    for row in comps:
        assert row[np.argmax(np.abs(row))] > 0
    # determinism
    mean2, comps2 = fit_pca2(points)
    assert np.array_equal(comps, comps2) and np.array_equal(mean, mean2)


def test_pca_validation():
    with pytest.raises(ConfigError, match="two points"):
        fit_pca2(np.zeros((1, 3)))
    with pytest.raises(ConfigError, match="two input dimensions"):
        fit_pca2(np.zeros((5, 1)))


def test_project_2d_emits_distances(mini_bundle, mini_model):
    vocab = mini_bundle.vocab
    _, _, plane = class_hyperplane(mini_model, vocab)
    words = vocab.words[:6]
    rows = project_2d(mini_model, plane, words)
    assert [w for w, _, _ in rows] == words
    for word, coords, dist in rows:
        assert coords.shape == (2,)
        assert dist == pytest.approx(
            distance(plane, mini_model.embedding_of(word)), rel=1e-6
        )
    with pytest.raises(ConfigError, match="two words"):
        project_2d(mini_model, plane, ["m0"])
