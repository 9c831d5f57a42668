"""Closed-form linear autoencoder recommenders, ZCA whitening and item embeddings."""

from ._core import (
    CapacityError,
    ConfigError,
    DimensionError,
    Error,
    InteractionMatrix,
    NumericalError,
    covariance,
    ease,
    embed_dot,
    embed_ease,
    embed_ridge,
    evaluate,
    load_model,
    ndcg_at_r,
    recall_at_r,
    recommend,
    ridge,
    save_model,
    svd_embed,
    top_n,
    whiten,
    zca_matrix,
    zca_similarity,
)

__version__ = "0.1.0"
