"""Scam-website clustering and cryptocurrency fund-flow forensics."""

from _scamtrace import (  # noqa: F401
    adjusted_rand_index,
    build_clusters,
    cosine_distance_matrix,
    dbscan,
    decompose_email,
    extract_addresses,
    extract_analytics_ids,
    pairwise_f1,
    preprocess,
    run_cli,
    select_eps,
    tfidf_vectors,
)

__all__ = [
    "adjusted_rand_index",
    "build_clusters",
    "cosine_distance_matrix",
    "dbscan",
    "decompose_email",
    "extract_addresses",
    "extract_analytics_ids",
    "pairwise_f1",
    "preprocess",
    "run_cli",
    "select_eps",
    "tfidf_vectors",
]
