"""Sparse multicategory support vector machines fitted by linear programming."""

from ._core import (
    CoefModel,
    Dataset,
    DesignKind,
    DimensionError,
    LambdaError,
    PenaltyKind,
    PenaltySpec,
    TuneResult,
    adaptive_penalty,
    basis_size,
    bayes_error,
    design_kind,
    expand_basis,
    fit,
    generate,
    hinge_loss,
    penalty_kind,
    penalty_value,
    relevance,
    screen,
    simulate,
    solve_lp,
    tune,
)

__all__ = [
    "CoefModel",
    "Dataset",
    "DesignKind",
    "DimensionError",
    "LambdaError",
    "PenaltyKind",
    "PenaltySpec",
    "TuneResult",
    "adaptive_penalty",
    "basis_size",
    "bayes_error",
    "design_kind",
    "expand_basis",
    "fit",
    "generate",
    "hinge_loss",
    "penalty_kind",
    "penalty_value",
    "relevance",
    "screen",
    "simulate",
    "solve_lp",
    "tune",
]
