"""Stacked-autoencoder anomaly detection for streaming field-current data."""

from ._core import (
    DEFAULT_PERCENTILE,
    RESTING_SENTINEL,
    DataError,
    Detector,
    Model,
    ScenarioSpec,
    StackSpec,
    ThresholdSet,
    UsageError,
    bandwidth_fraction,
    classify,
    correlation_matrix,
    default_spec,
    detect_resting,
    fault_scenario,
    fit_thresholds,
    generate,
    healthy_scenario,
    mse,
    normalize,
    segment,
    train_model,
)

__all__ = [
    "DEFAULT_PERCENTILE",
    "RESTING_SENTINEL",
    "DataError",
    "Detector",
    "Model",
    "ScenarioSpec",
    "StackSpec",
    "ThresholdSet",
    "UsageError",
    "bandwidth_fraction",
    "classify",
    "correlation_matrix",
    "default_spec",
    "detect_resting",
    "fault_scenario",
    "fit_thresholds",
    "generate",
    "healthy_scenario",
    "mse",
    "normalize",
    "segment",
    "train_model",
]
