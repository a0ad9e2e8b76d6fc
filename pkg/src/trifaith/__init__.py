"""Constraint-based causal search under triangle faithfulness, for linear Gaussian models."""
from .citest import Dataset, TestConfig, margin_test, markov_condition_test, sample_partial_correlation, zero_pcorr_test
from .estimate import EdgeEstimates, Estimate, Kind, edge_estimation, structural_distance
from .graph import (
    Dag,
    ExtendedPattern,
    GraphError,
    PairMark,
    Pattern,
    TripleMark,
    ancestral_closure,
    apply_orientation_rules,
    enumerate_disambiguations,
    extend_to_dag,
    is_d_separated,
    markov_equivalent,
    pattern_of,
)
from .harness import ExperimentConfig, ExperimentReport, run_experiment
from .search import (
    ErrorKind,
    FaithfulnessViolation,
    PopulationDecider,
    SampleDecider,
    SearchResult,
    classify_error,
    csgs,
    sgs,
    vcsgs,
)
from .sem import (
    CovMatrix,
    LinearSem,
    ModelClassParams,
    RandomSemConfig,
    check_k_triangle_faithfulness,
    check_nvv,
    check_ubc,
    implied_covariance,
    partial_correlation,
    population_oracle,
    random_sem,
    regression_coefficients,
    sample,
    standardize,
    verify_coefficient_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "CovMatrix", "Dag", "Dataset", "EdgeEstimates", "ErrorKind", "Estimate", "ExperimentConfig",
    "ExperimentReport", "ExtendedPattern", "FaithfulnessViolation", "GraphError", "Kind", "LinearSem",
    "ModelClassParams", "PairMark", "Pattern", "PopulationDecider", "RandomSemConfig", "SampleDecider",
    "SearchResult", "TestConfig", "TripleMark", "ancestral_closure", "apply_orientation_rules",
    "check_k_triangle_faithfulness", "check_nvv", "check_ubc", "classify_error", "csgs",
    "edge_estimation", "enumerate_disambiguations", "extend_to_dag", "implied_covariance",
    "is_d_separated", "margin_test", "markov_condition_test", "markov_equivalent", "partial_correlation",
    "pattern_of", "population_oracle", "random_sem", "regression_coefficients", "run_experiment",
    "sample", "sample_partial_correlation", "sgs", "standardize", "structural_distance", "vcsgs",
    "verify_coefficient_bounds", "zero_pcorr_test",
]
