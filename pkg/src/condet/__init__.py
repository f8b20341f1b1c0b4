"""Lightweight discourse-connective detection with gradient-boosted trees."""

from .corpus_io import (
    Corpus,
    CorpusFormatError,
    Document,
    Label,
    LabelStats,
    Sentence,
    Token,
    corpus_stats,
    load_corpus,
    write_predictions,
)
from .features import (
    FEATURE_NAMES,
    FEATURE_SCHEMA_VERSION,
    VerbPolicy,
    Vocabulary,
    build_vocabulary,
    extract_features,
    featurize_corpus,
)
from .gbdt import (
    PRESETS,
    ClassWeights,
    GbdtModel,
    Hyperparams,
    compute_class_weights,
    feature_importance,
    predict_labels,
    predict_scores,
    train,
)

__version__ = "0.1.0"
