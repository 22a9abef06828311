"""Shared pytest fixtures for lvlab tests."""

from pathlib import Path

import numpy as np
import pytest
import yaml

from lvlab.models import ComplexMatrix, IntegerSet
from lvlab.zoo import gen_random


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so every test draws the same numbers."""
    return np.random.default_rng(12345)


@pytest.fixture
def small_gaussian() -> ComplexMatrix:
    """8 x 4 real Gaussian matrix."""
    return gen_random(8, 4, "gaussian", seed=1)


@pytest.fixture
def small_unit_complex() -> ComplexMatrix:
    """10 x 5 matrix of unit-modulus complex entries."""
    return gen_random(10, 5, "unit-complex", seed=2)


@pytest.fixture
def identity_matrix() -> ComplexMatrix:
    """4 x 4 identity."""
    return ComplexMatrix(np.eye(4))


@pytest.fixture
def create_matrix(tmp_path):
    """Factory fixture writing a matrix CSV and returning its path."""

    def _create(M: ComplexMatrix, filename: str = "matrix.csv") -> Path:
        from lvlab.exporters import write_matrix

        return write_matrix(M, tmp_path / filename)

    return _create


@pytest.fixture
def create_set_file(tmp_path):
    """Factory fixture writing a newline-delimited integer set."""

    def _create(values: list[int], filename: str = "set.txt") -> Path:
        from lvlab.exporters import write_integer_set

        return write_integer_set(IntegerSet.from_iterable(values), tmp_path / filename)

    return _create


@pytest.fixture
def create_experiment_file(tmp_path):
    """Factory fixture to create experiment YAML files for testing."""

    def _create(filename: str, config: dict) -> Path:
        filepath = tmp_path / filename
        with open(filepath, "w") as f:
            yaml.dump(config, f)
        return filepath

    return _create


@pytest.fixture
def valid_experiment_config() -> dict:
    """Return a small, fast experiment configuration dict."""
    return {
        "version": "1.0",
        "name": "smoke",
        "description": "Tiny grid for tests",
        "N": 16,
        "alpha_grid": [1.5],
        "sigma_grid": [0.8],
        "epsilon": 0.01,
        "trials": 2,
        "base_seed": 7,
        "statistics": ["opnorm", "offdiag_max"],
    }
