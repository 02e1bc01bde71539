"""signalmatch: suggest provider-library signal names for free-form
customer signal names."""

from .classifiers import (
    LookupModel,
    METHODS,
    Model,
    NaiveBayesModel,
    RankedPredictions,
    TokenVoteModel,
    deserialize_model,
    load_model,
    predict,
    predict_lookup,
    predict_nb,
    predict_tokvote,
    save_model,
    serialize_model,
    token_vote,
    train_lookup,
    train_model,
    train_nb,
    train_tokvote,
)
from .data import (
    Dataset,
    SignalLibrary,
    SignalPair,
    SynthConfig,
    SyntheticCorpus,
    generate_synthetic,
    load_library,
    load_pairs,
    save_library,
    save_pairs,
    split_by_project,
)
from .evaluate import (
    BenchReport,
    EvalReport,
    benchmark,
    learning_curve,
    run_eval,
    top_k_accuracy,
    weighted_prf,
)
from .preprocess import clean, ngrams, normalize, tokenize
from .rerank import AntonymTable, KeywordSet, rerank

__version__ = "0.1.0"
