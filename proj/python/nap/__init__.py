"""Python access to the neighbor-aware helpfulness predictor."""

from ._nap import (
    ConfigError,
    DataError,
    NumericError,
    conformity_feature,
    context_embedding,
    dataset_summary,
    entropy_feature,
    git_blob_hash,
    polarity_score,
    run_cli,
    synthetic_corpus_jsonl,
    tokenize,
    weighting_parameter_count,
)

__all__ = [
    "ConfigError",
    "DataError",
    "NumericError",
    "conformity_feature",
    "context_embedding",
    "dataset_summary",
    "entropy_feature",
    "git_blob_hash",
    "polarity_score",
    "run_cli",
    "synthetic_corpus_jsonl",
    "tokenize",
    "weighting_parameter_count",
]
