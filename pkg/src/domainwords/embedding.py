"""Skip-gram embeddings with negative sampling, trained from scratch.

The trainer applies one stochastic gradient step per (center, context) pair
on the objective

    log sigmoid(u_ctx . v_center) + sum_k log sigmoid(-u_neg_k . v_center)

where v are input vectors and u output vectors. Negatives are drawn from the
unigram distribution raised to 3/4. Input vectors start uniform in
[-0.5/dim, 0.5/dim], output vectors at zero. The learning rate decays
linearly over the token schedule (evaluated once per document) from
initial_lr down to a floor of initial_lr/10000. Each epoch visits the
documents in a freshly shuffled, seeded order; without this, corpora stored
as one class block followed by the other would train one class at
systematically higher rates than the other. Training is single threaded
and bit-reproducible for a fixed seed. Downstream geometry uses the input
vectors only.

Model file layout (all integers little-endian):

    bytes 0..7    magic b"DWEMB001"
    bytes 8..11   uint32 dim
    bytes 12..15  uint32 vocab size
    bytes 16..47  sha256 digest of the bound vocabulary
    then          vocab_size*dim float32 input vectors, row-major
    then          vocab_size*dim float32 output vectors, row-major

Row i holds the vectors of the word with vocabulary id i.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numba import njit

from .corpus import Document, Vocabulary
from .errors import (
    ConfigError,
    DataError,
    DivergenceError,
    ModelFormatError,
    VocabMismatchError,
)

__all__ = [
    "TrainConfig",
    "EmbeddingModel",
    "train_skipgram",
    "save_model",
    "load_model",
    "sgns_pair_loss",
    "sgns_pair_grads",
]

_MAGIC = b"DWEMB001"
_LR_FLOOR_FRAC = 1e-4
_NEG_TABLE_SIZE = 1_000_000


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    initial_lr: float = 0.025
    subsample_threshold: float = 1e-3  # 0 disables frequent-word subsampling
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ConfigError(f"dim must be >= 1, got {self.dim}")
        if self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")
        if self.negatives < 0:
            raise ConfigError(f"negatives must be >= 0, got {self.negatives}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.initial_lr <= 0:
            raise ConfigError(f"initial_lr must be > 0, got {self.initial_lr}")
        if self.subsample_threshold < 0:
            raise ConfigError(
                f"subsample_threshold must be >= 0, got {self.subsample_threshold}"
            )


@dataclass
class EmbeddingModel:
    vocab: Vocabulary
    input_vectors: np.ndarray  # float32, shape (|V|, dim)
    output_vectors: np.ndarray
    epoch_mean_loss: list[float] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return int(self.input_vectors.shape[1])

    @property
    def vocab_hash(self) -> str:
        return self.vocab.vocab_hash

    def embedding_of(self, word: str) -> np.ndarray:
        """Input vector of a vocabulary word (a copy)."""
        return self.input_vectors[self.vocab.id_of(word)].copy()


def sgns_pair_loss(
    v_center: np.ndarray, u_context: np.ndarray, u_negatives: np.ndarray
) -> float:
    """Negative-sampling loss of one pair, float64, no clamping."""
    loss = float(np.logaddexp(0.0, -np.dot(u_context, v_center)))
    for u_neg in u_negatives:
        loss += float(np.logaddexp(0.0, np.dot(u_neg, v_center)))
    return loss


def sgns_pair_grads(
    v_center: np.ndarray, u_context: np.ndarray, u_negatives: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of sgns_pair_loss w.r.t. all participating vectors."""
    g_pos = _sigmoid(np.dot(u_context, v_center)) - 1.0
    g_center = g_pos * u_context
    g_context = g_pos * v_center
    g_negs = np.empty_like(u_negatives)
    for k, u_neg in enumerate(u_negatives):
        g_neg = _sigmoid(np.dot(u_neg, v_center))
        g_center = g_center + g_neg * u_neg
        g_negs[k] = g_neg * v_center
    return g_center, g_context, g_negs


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@njit(cache=True)
def _pair_update(in_vecs, out_vecs, center, context, negs, lr, scratch):
    """One SGD step on a pair; negative slots < 0 are skipped.

    Output vectors update with the pre-step center vector and the center
    gradient accumulates pre-step output vectors, matching a simultaneous
    gradient step. Returns the pair loss.
    """
    dim = in_vecs.shape[1]
    for d in range(dim):
        scratch[d] = 0.0
    loss = 0.0

    f = 0.0
    for d in range(dim):
        f += in_vecs[center, d] * out_vecs[context, d]
    sig = 1.0 / (1.0 + math.exp(-f))
    g = sig - 1.0
    if sig < 1e-12:
        sig = 1e-12
    loss -= math.log(sig)
    for d in range(dim):
        scratch[d] += g * out_vecs[context, d]
        out_vecs[context, d] -= lr * g * in_vecs[center, d]

    for k in range(negs.shape[0]):
        neg = negs[k]
        if neg < 0:
            continue
        f = 0.0
        for d in range(dim):
            f += in_vecs[center, d] * out_vecs[neg, d]
        sig = 1.0 / (1.0 + math.exp(-f))
        g = sig
        rest = 1.0 - sig
        if rest < 1e-12:
            rest = 1e-12
        loss -= math.log(rest)
        for d in range(dim):
            scratch[d] += g * out_vecs[neg, d]
            out_vecs[neg, d] -= lr * g * in_vecs[center, d]

    for d in range(dim):
        in_vecs[center, d] -= lr * scratch[d]
    return loss


@njit(cache=True)
def _train_epoch(
    stream,
    offsets,
    doc_order,
    in_vecs,
    out_vecs,
    neg_table,
    keep_ran,
    window,
    n_negatives,
    lr0,
    epoch,
    n_epochs,
    seed,
    subsample_on,
    max_doc_len,
):
    np.random.seed(seed)
    n_tokens = stream.shape[0]
    total_pos = n_epochs * n_tokens
    lr_floor = lr0 * 1e-4
    table_size = neg_table.shape[0]
    sen = np.empty(max_doc_len, dtype=np.int32)
    negs = np.empty(max(n_negatives, 1), dtype=np.int64)
    scratch = np.zeros(in_vecs.shape[1], dtype=np.float64)
    loss_sum = 0.0
    n_pairs = 0
    sched_pos = 0  # raw tokens consumed so far this epoch, in visit order

    for visit in range(doc_order.shape[0]):
        doc_i = doc_order[visit]
        start = offsets[doc_i]
        end = offsets[doc_i + 1]
        if start == end:
            continue
        lr = lr0 * (1.0 - (epoch * n_tokens + sched_pos) / total_pos)
        if lr < lr_floor:
            lr = lr_floor
        sched_pos += end - start

        m = 0
        for i in range(start, end):
            w = stream[i]
            if subsample_on and keep_ran[w] < np.random.random():
                continue
            sen[m] = w
            m += 1

        for i in range(m):
            center = sen[i]
            lo = i - window
            if lo < 0:
                lo = 0
            hi = i + window
            if hi > m - 1:
                hi = m - 1
            for j in range(lo, hi + 1):
                if j == i:
                    continue
                context = sen[j]
                for k in range(n_negatives):
                    t = neg_table[np.random.randint(0, table_size)]
                    negs[k] = -1 if t == context else t
                loss_sum += _pair_update(
                    in_vecs, out_vecs, center, context, negs[:n_negatives], lr, scratch
                )
                n_pairs += 1
    return loss_sum, n_pairs


def _negative_table(total_counts: np.ndarray, size: int = _NEG_TABLE_SIZE) -> np.ndarray:
    weights = total_counts.astype(np.float64) ** 0.75
    cum = np.cumsum(weights / weights.sum())
    quantiles = (np.arange(size) + 0.5) / size
    return np.searchsorted(cum, quantiles).astype(np.int32)


def _keep_thresholds(total_counts: np.ndarray, threshold: float) -> np.ndarray:
    """Per-word keep threshold against a uniform draw, word2vec style."""
    freqs = total_counts / total_counts.sum()
    with np.errstate(divide="ignore"):
        ran = (np.sqrt(freqs / threshold) + 1.0) * (threshold / freqs)
    return ran


def train_skipgram(
    docs: list[Document], vocab: Vocabulary, config: TrainConfig
) -> EmbeddingModel:
    """Train embeddings over the corpus; every document token must be in vocab."""
    if len(vocab) == 0:
        raise DataError("cannot train embeddings on an empty vocabulary")
    ids = vocab.word_ids
    try:
        stream = np.fromiter(
            (ids[t] for d in docs for t in d.tokens), dtype=np.int32
        )
    except KeyError as exc:
        raise DataError(f"document token {exc.args[0]!r} not in vocabulary") from None
    if stream.size == 0:
        raise DataError("corpus has no tokens to train on")
    offsets = np.zeros(len(docs) + 1, dtype=np.int64)
    np.cumsum([len(d.tokens) for d in docs], out=offsets[1:])
    max_doc_len = int(np.max(offsets[1:] - offsets[:-1]))

    rng = np.random.default_rng(config.seed)
    bound = 0.5 / config.dim
    in_vecs = rng.uniform(-bound, bound, (len(vocab), config.dim)).astype(np.float32)
    out_vecs = np.zeros((len(vocab), config.dim), dtype=np.float32)
    neg_table = _negative_table(vocab.total_counts)
    subsample_on = config.subsample_threshold > 0
    if subsample_on:
        keep_ran = _keep_thresholds(vocab.total_counts, config.subsample_threshold)
    else:
        keep_ran = np.ones(len(vocab), dtype=np.float64)

    model = EmbeddingModel(vocab=vocab, input_vectors=in_vecs, output_vectors=out_vecs)
    for epoch in range(config.epochs):
        doc_order = (
            np.random.default_rng((config.seed, epoch))
            .permutation(len(docs))
            .astype(np.int64)
        )
        loss_sum, n_pairs = _train_epoch(
            stream,
            offsets,
            doc_order,
            in_vecs,
            out_vecs,
            neg_table,
            keep_ran,
            config.window,
            config.negatives,
            config.initial_lr,
            epoch,
            config.epochs,
            config.seed * 1_000_003 + epoch + 1,
            subsample_on,
            max_doc_len,
        )
        if not (np.isfinite(in_vecs).all() and np.isfinite(out_vecs).all()):
            raise DivergenceError(
                f"non-finite vector components after epoch {epoch}; "
                "try a smaller initial_lr"
            )
        model.epoch_mean_loss.append(loss_sum / max(n_pairs, 1))
    return model


def save_model(model: EmbeddingModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", model.dim, len(model.vocab)))
        fh.write(bytes.fromhex(model.vocab_hash))
        fh.write(np.ascontiguousarray(model.input_vectors, dtype="<f4").tobytes())
        fh.write(np.ascontiguousarray(model.output_vectors, dtype="<f4").tobytes())


def load_model(path, vocab: Vocabulary) -> EmbeddingModel:
    """Load a model and bind it to ``vocab``; refuses on any mismatch."""
    data = Path(path).read_bytes()
    if len(data) < 48 or data[:8] != _MAGIC:
        raise ModelFormatError(f"{path}: not an embedding model file")
    dim, vocab_size = struct.unpack("<II", data[8:16])
    file_hash = data[16:48].hex()
    expected = 48 + 2 * 4 * vocab_size * dim
    if len(data) != expected:
        raise ModelFormatError(
            f"{path}: expected {expected} bytes for dim={dim}, "
            f"vocab={vocab_size}, found {len(data)}"
        )
    if file_hash != vocab.vocab_hash:
        raise VocabMismatchError(
            f"{path}: model bound to vocabulary {file_hash[:12]}..., "
            f"corpus vocabulary is {vocab.vocab_hash[:12]}..."
        )
    if vocab_size != len(vocab):
        raise VocabMismatchError(
            f"{path}: model has {vocab_size} words, vocabulary has {len(vocab)}"
        )
    n = vocab_size * dim
    in_vecs = (
        np.frombuffer(data, dtype="<f4", count=n, offset=48)
        .reshape(vocab_size, dim)
        .copy()
    )
    out_vecs = (
        np.frombuffer(data, dtype="<f4", count=n, offset=48 + 4 * n)
        .reshape(vocab_size, dim)
        .copy()
    )
    return EmbeddingModel(vocab=vocab, input_vectors=in_vecs, output_vectors=out_vecs)
