"""Robust linear regression: depth-trimmed least squares with LS/LTS comparators."""

from ._lstreg import (
    AllCandidatesSkippedError,
    ConfigError,
    ContractViolation,
    Dataset,
    DegenerateDesignError,
    DegenerateScaleError,
    LsSolution,
    LstConfig,
    LtsConfig,
    MetricsRow,
    ParseError,
    StudyError,
    TrimmedFit,
    UnsampleableDesignError,
    contaminate,
    default_coverage,
    generate_sample,
    index_set,
    load_csv,
    ls_fit,
    lst_fit,
    lts_fit,
    lts_objective,
    mad,
    median,
    objective_q,
    outlyingness,
    residuals,
    run_study,
    write_csv,
)

__all__ = [
    "AllCandidatesSkippedError",
    "ConfigError",
    "ContractViolation",
    "Dataset",
    "DegenerateDesignError",
    "DegenerateScaleError",
    "LsSolution",
    "LstConfig",
    "LtsConfig",
    "MetricsRow",
    "ParseError",
    "StudyError",
    "TrimmedFit",
    "UnsampleableDesignError",
    "contaminate",
    "default_coverage",
    "generate_sample",
    "index_set",
    "load_csv",
    "ls_fit",
    "lst_fit",
    "lts_fit",
    "lts_objective",
    "mad",
    "median",
    "objective_q",
    "outlyingness",
    "residuals",
    "run_study",
    "write_csv",
]
