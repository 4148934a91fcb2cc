"""Built-in evaluation classifiers and stratified cross-validation.

Features are raw term-frequency counts over the survivor vocabulary. Two
classifiers are provided: multinomial naive Bayes with add-one smoothing and
binary logistic regression trained by seeded stochastic gradient descent
with an L2 penalty. Documents whose every token was eliminated stay in the
evaluation as all-zero rows and are predicted by the training fold's prior
argmax (ties to the lexicographically smaller label). The harness times
training and prediction per fold with a wall clock.

New classifiers can be plugged in by adding a (train, predict) pair to
CLASSIFIERS; train takes (FeatureMatrix, seed, LrConfig | None).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np
from numba import njit

from .corpus import Document
from .errors import ConfigError, DataError, DivergenceError

__all__ = [
    "FeatureMatrix",
    "build_features",
    "NbModel",
    "nb_train",
    "nb_predict",
    "nb_log_joint",
    "LrConfig",
    "LrModel",
    "lr_train",
    "lr_predict",
    "lr_loss",
    "lr_loss_grad",
    "stratified_folds",
    "cross_validate",
    "CvResult",
    "CLASSIFIERS",
]


@dataclass
class FeatureMatrix:
    doc_ids: list[str]
    labels: list[str]
    words: list[str]
    counts: np.ndarray  # float64, shape (n_docs, len(words))

    def __post_init__(self) -> None:
        if self.counts.shape != (len(self.doc_ids), len(self.words)):
            raise ConfigError("feature matrix shape does not match ids/words")


def build_features(docs: list[Document], words: list[str]) -> FeatureMatrix:
    """Raw term counts per document over exactly the given word set."""
    cols = {w: j for j, w in enumerate(words)}
    if len(cols) != len(words):
        raise ConfigError("survivor word list contains duplicates")
    counts = np.zeros((len(docs), len(words)), dtype=np.float64)
    for i, doc in enumerate(docs):
        row = counts[i]
        for tok in doc.tokens:
            j = cols.get(tok)
            if j is not None:
                row[j] += 1.0
    return FeatureMatrix(
        doc_ids=[d.id for d in docs],
        labels=[d.label for d in docs],
        words=list(words),
        counts=counts,
    )


# --------------------------------------------------------------------------
# multinomial naive Bayes

@dataclass
class NbModel:
    classes: tuple[str, str]
    log_priors: np.ndarray  # shape (2,)
    log_likelihoods: np.ndarray  # shape (2, n_words)
    words: list[str]


def nb_train(features: FeatureMatrix) -> NbModel:
    """Add-one smoothed multinomial NB; priors from class document frequencies."""
    classes = tuple(sorted(set(features.labels)))
    if len(classes) != 2:
        raise DataError(f"naive Bayes needs exactly two classes, got {list(classes)}")
    labels = np.asarray(features.labels)
    n_words = len(features.words)
    log_priors = np.empty(2)
    log_likelihoods = np.empty((2, n_words))
    for c, cls in enumerate(classes):
        rows = features.counts[labels == cls]
        log_priors[c] = math.log(rows.shape[0] / len(labels))
        word_counts = rows.sum(axis=0)
        log_likelihoods[c] = np.log(
            (word_counts + 1.0) / (word_counts.sum() + n_words)
        )
    return NbModel(
        classes=(classes[0], classes[1]),
        log_priors=log_priors,
        log_likelihoods=log_likelihoods,
        words=list(features.words),
    )


def nb_log_joint(model: NbModel, counts: np.ndarray) -> np.ndarray:
    """Unnormalized log posterior per class, shape (n_docs, 2)."""
    return model.log_priors + counts @ model.log_likelihoods.T


def nb_predict(model: NbModel, counts: np.ndarray) -> list[str]:
    scores = nb_log_joint(model, counts)
    # argmax takes the first maximum, i.e. ties go to the smaller label
    return [model.classes[i] for i in np.argmax(scores, axis=1)]


# --------------------------------------------------------------------------
# logistic regression by per-sample SGD

@dataclass(frozen=True)
class LrConfig:
    l2: float = 1e-4
    lr: float = 0.05
    epochs: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.l2 < 0:
            raise ConfigError(f"l2 must be >= 0, got {self.l2}")
        if self.lr <= 0:
            raise ConfigError(f"lr must be > 0, got {self.lr}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")


@dataclass
class LrModel:
    classes: tuple[str, str]
    weights: np.ndarray
    bias: float
    words: list[str]


@njit(cache=True, nogil=True)
def _lr_sgd(counts, targets, weights, orders, lr, decay, bias0):
    """Per-sample SGD on the logistic loss; decay is the L2 shrink factor.

    The penalty is applied as multiplicative weight decay truncated at zero,
    which equals the gradient step w -= lr*(l2*w) whenever lr*l2 <= 1 and
    stays stable for arbitrarily large l2.
    """
    n, d = counts.shape
    bias = bias0
    for e in range(orders.shape[0]):
        for ii in range(n):
            i = orders[e, ii]
            z = bias
            for j in range(d):
                z += weights[j] * counts[i, j]
            if z >= 0.0:
                p = 1.0 / (1.0 + math.exp(-z))
            else:
                ez = math.exp(z)
                p = ez / (1.0 + ez)
            g = p - targets[i]
            for j in range(d):
                weights[j] = weights[j] * decay - lr * g * counts[i, j]
            bias -= lr * g
    return bias


def lr_train(features: FeatureMatrix, config: LrConfig = LrConfig()) -> LrModel:
    """Train binary logistic regression on raw counts.

    Rows are processed in a seeded random order each epoch; the initial
    order is canonicalized by document id, so accuracy does not depend on
    the order documents were supplied in.
    """
    classes = tuple(sorted(set(features.labels)))
    if len(classes) != 2:
        raise DataError(f"logistic regression needs exactly two classes, got {list(classes)}")
    canon = np.argsort(np.asarray(features.doc_ids))
    counts = np.ascontiguousarray(features.counts[canon])
    targets = (np.asarray(features.labels)[canon] == classes[1]).astype(np.float64)

    n = counts.shape[0]
    rng = np.random.default_rng(config.seed)
    orders = np.stack([rng.permutation(n) for _ in range(config.epochs)]).astype(np.int64)
    weights = np.zeros(counts.shape[1], dtype=np.float64)
    decay = max(0.0, 1.0 - config.lr * config.l2)
    bias = _lr_sgd(counts, targets, weights, orders, config.lr, decay, 0.0)

    final_loss = lr_loss(counts, targets, weights, bias, config.l2)
    if not (np.isfinite(weights).all() and np.isfinite(bias) and np.isfinite(final_loss)):
        raise DivergenceError(
            "logistic regression diverged (non-finite loss); try a smaller lr"
        )
    return LrModel(
        classes=(classes[0], classes[1]),
        weights=weights,
        bias=float(bias),
        words=list(features.words),
    )


def lr_predict(model: LrModel, counts: np.ndarray) -> list[str]:
    z = counts @ model.weights + model.bias
    # probability >= 0.5 for classes[1] exactly when z >= 0
    return [model.classes[1] if zi >= 0 else model.classes[0] for zi in z]


def lr_loss(counts, targets, weights, bias, l2) -> float:
    """Mean logistic loss plus (l2/2)*||w||^2; the bias is not penalized."""
    z = counts @ weights + bias
    per_sample = np.logaddexp(0.0, z) - targets * z
    return float(per_sample.mean() + 0.5 * l2 * np.dot(weights, weights))


def lr_loss_grad(counts, targets, weights, bias, l2) -> tuple[np.ndarray, float]:
    z = counts @ weights + bias
    p = np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))),
                 np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))
    err = p - targets
    grad_w = counts.T @ err / len(targets) + l2 * weights
    grad_b = float(err.mean())
    return grad_w, grad_b


# --------------------------------------------------------------------------
# cross-validation harness

def _train_nb(features: FeatureMatrix, seed: int, lr_config: LrConfig | None):
    return nb_train(features)


def _train_lr(features: FeatureMatrix, seed: int, lr_config: LrConfig | None):
    cfg = replace(lr_config or LrConfig(), seed=seed)
    return lr_train(features, cfg)


def _predict_nb(model, counts):
    return nb_predict(model, counts)


def _predict_lr(model, counts):
    return lr_predict(model, counts)


CLASSIFIERS = {
    "nb": (_train_nb, _predict_nb),
    "lr": (_train_lr, _predict_lr),
}


@dataclass
class CvResult:
    classifier: str
    n_folds: int
    fold_accuracies: list[float]
    mean_accuracy: float
    train_time_per_fold: list[float]
    predict_time_per_fold: list[float]
    empty_doc_count: int
    requested_folds: int = field(default=10)

    def to_dict(self) -> dict:
        return {
            "classifier": self.classifier,
            "folds": self.fold_accuracies,
            "mean_accuracy": self.mean_accuracy,
            "n_folds": self.n_folds,
            "train_time_s": sum(self.train_time_per_fold),
            "predict_time_s": sum(self.predict_time_per_fold),
            "empty_doc_count": self.empty_doc_count,
        }


def stratified_folds(labels, n_folds: int, seed: int) -> np.ndarray:
    """Fold index per document; class counts per fold differ by at most one."""
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    fold_of = np.empty(len(labels), dtype=np.int64)
    for cls in sorted(set(labels.tolist())):
        idx = rng.permutation(np.flatnonzero(labels == cls))
        fold_of[idx] = np.arange(len(idx)) % n_folds
    return fold_of


def _prior_argmax(train_labels: np.ndarray) -> str:
    classes, counts = np.unique(train_labels, return_counts=True)
    # np.unique sorts, argmax takes the first max: ties to the smaller label
    return str(classes[np.argmax(counts)])


def cross_validate(
    docs: list[Document],
    survivor_words: list[str],
    classifier: str = "nb",
    folds: int = 10,
    seed: int = 0,
    lr_config: LrConfig | None = None,
    features: FeatureMatrix | None = None,
) -> CvResult:
    """Stratified k-fold evaluation over the survivor vocabulary.

    ``features`` may be passed to reuse a precomputed matrix; it must match
    ``docs`` and ``survivor_words``. When a class has fewer documents than
    ``folds`` the fold count is reduced to that class's size (and recorded).
    """
    if classifier not in CLASSIFIERS:
        raise ConfigError(f"unknown classifier {classifier!r}; choose from {sorted(CLASSIFIERS)}")
    if folds < 2:
        raise ConfigError(f"folds must be >= 2, got {folds}")
    if features is None:
        features = build_features(docs, survivor_words)
    train_fn, predict_fn = CLASSIFIERS[classifier]
    labels = np.asarray(features.labels)
    if len(labels) == 0:
        raise DataError("cannot cross-validate an empty corpus")
    class_sizes = [int((labels == c).sum()) for c in sorted(set(labels.tolist()))]
    n_folds = min(folds, min(class_sizes))
    if n_folds < 2:
        raise DataError(
            f"smallest class has {min(class_sizes)} documents; cannot cross-validate"
        )
    fold_of = stratified_folds(labels, n_folds, seed)
    empty_rows = features.counts.sum(axis=1) == 0

    fold_accuracies: list[float] = []
    train_times: list[float] = []
    predict_times: list[float] = []
    for f in range(n_folds):
        test_mask = fold_of == f
        train_mask = ~test_mask
        train_features = FeatureMatrix(
            doc_ids=[features.doc_ids[i] for i in np.flatnonzero(train_mask)],
            labels=[features.labels[i] for i in np.flatnonzero(train_mask)],
            words=features.words,
            counts=features.counts[train_mask],
        )
        t0 = time.perf_counter()
        model = train_fn(train_features, seed, lr_config)
        train_times.append(time.perf_counter() - t0)

        test_counts = features.counts[test_mask]
        t0 = time.perf_counter()
        predicted = np.array(predict_fn(model, test_counts), dtype=object)
        predict_times.append(time.perf_counter() - t0)

        fallback = _prior_argmax(labels[train_mask])
        predicted[empty_rows[test_mask]] = fallback
        fold_accuracies.append(float((predicted == labels[test_mask]).mean()))

    return CvResult(
        classifier=classifier,
        n_folds=n_folds,
        fold_accuracies=fold_accuracies,
        mean_accuracy=float(np.mean(fold_accuracies)),
        train_time_per_fold=train_times,
        predict_time_per_fold=predict_times,
        empty_doc_count=int(empty_rows.sum()),
        requested_folds=folds,
    )
