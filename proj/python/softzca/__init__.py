"""Soft-ZCA whitening, IsoScore and MRR evaluation for embedding matrices."""

from ._core import (
    Direction,
    EigenDecomposition,
    EvalReport,
    FitStatistics,
    IsoScoreValue,
    Method,
    SoftZcaError,
    WhiteningTransform,
    apply_transform,
    build_transform,
    cosine_similarity_matrix,
    eigendecompose,
    evaluate,
    fit_statistics,
    generate_anisotropic_gaussian,
    generate_paired_corpus,
    isoscore,
    read_npy,
    read_transform,
    reciprocal_ranks,
    sweep,
    write_npy,
    write_transform,
)

__all__ = [
    "Direction",
    "EigenDecomposition",
    "EvalReport",
    "FitStatistics",
    "IsoScoreValue",
    "Method",
    "SoftZcaError",
    "WhiteningTransform",
    "apply_transform",
    "build_transform",
    "cosine_similarity_matrix",
    "eigendecompose",
    "evaluate",
    "fit_statistics",
    "generate_anisotropic_gaussian",
    "generate_paired_corpus",
    "isoscore",
    "read_npy",
    "read_transform",
    "reciprocal_ranks",
    "sweep",
    "write_npy",
    "write_transform",
]
