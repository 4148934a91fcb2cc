"""Domain-specific stop word extraction via embedding hyperplane distances."""

from .classify import (
    CvResult,
    FeatureMatrix,
    LrConfig,
    build_features,
    cross_validate,
    lr_train,
    nb_train,
)
from .corpus import Document, RawDocument, Vocabulary, build_corpus, load_corpus, tokenize
from .embedding import EmbeddingModel, TrainConfig, load_model, save_model, train_skipgram
from .experiment import GridConfig, run_grid
from .geometry import (
    Hyperplane,
    build_hyperplane,
    class_hyperplane,
    compute_centroid,
    distance,
    project_2d,
    rank_by_distance,
)
from .ranking import RankedWordList, load_ranking
from .selectors import chi2_score, mi_score, overlap, rank_by_selector, rank_random
from .synthbench import DESK_PROFILE, PAPER_PROFILE, SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "CvResult",
    "DESK_PROFILE",
    "Document",
    "EmbeddingModel",
    "FeatureMatrix",
    "GridConfig",
    "Hyperplane",
    "LrConfig",
    "PAPER_PROFILE",
    "RankedWordList",
    "RawDocument",
    "SynthConfig",
    "TrainConfig",
    "Vocabulary",
    "build_corpus",
    "build_features",
    "build_hyperplane",
    "chi2_score",
    "class_hyperplane",
    "compute_centroid",
    "cross_validate",
    "distance",
    "generate",
    "load_corpus",
    "load_model",
    "load_ranking",
    "lr_train",
    "mi_score",
    "nb_train",
    "overlap",
    "project_2d",
    "rank_by_distance",
    "rank_by_selector",
    "rank_random",
    "run_grid",
    "save_model",
    "tokenize",
    "train_skipgram",
]
