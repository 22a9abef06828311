"""Experiment configuration module for lvlab."""

from .experiment import (
    MATRIX_CAP,
    STATISTICS,
    W_SCALES,
    ExperimentConfig,
    load_default_experiment,
    load_experiment,
)

__all__ = [
    "MATRIX_CAP",
    "STATISTICS",
    "W_SCALES",
    "ExperimentConfig",
    "load_default_experiment",
    "load_experiment",
]
