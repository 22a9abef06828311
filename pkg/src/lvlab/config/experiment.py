"""Pydantic models for YAML-based planted experiment configuration."""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, field_validator

from ..certifiers.schatten import MATRIX_FREE_CAP
from ..models import PlantedParams
from ..zoo.ensembles import W_SCALES

logger = logging.getLogger(__name__)

STATISTICS = ("opnorm", "offdiag_max", "schatten_flat_r3", "col_l4")
MATRIX_CAP = 10_000


class ExperimentConfig(BaseModel):
    """Planted-vs-random experiment over an (alpha, sigma) grid."""

    version: str = "1.0"
    name: str = "default"
    description: str = ""
    N: int
    alpha_grid: list[float]
    sigma_grid: list[float]
    epsilon: float = 0.01
    trials: int = 10
    base_seed: int = 0
    statistics: list[str] = list(STATISTICS)
    w_scale: str = "std"

    @field_validator("N")
    @classmethod
    def validate_n(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"N must be >= 2, got {v}")
        return v

    @field_validator("alpha_grid")
    @classmethod
    def validate_alpha_grid(cls, v: list[float]) -> list[float]:
        """Every alpha must lie in (1, 2)."""
        if not v:
            raise ValueError("alpha_grid must be non-empty")
        bad = [a for a in v if not 1 < a < 2]
        if bad:
            raise ValueError(f"alpha values must be in (1, 2), got {bad}")
        return v

    @field_validator("sigma_grid")
    @classmethod
    def validate_sigma_grid(cls, v: list[float]) -> list[float]:
        """Every sigma must lie in (1/2, 1)."""
        if not v:
            raise ValueError("sigma_grid must be non-empty")
        bad = [s for s in v if not 0.5 < s < 1]
        if bad:
            raise ValueError(f"sigma values must be in (1/2, 1), got {bad}")
        return v

    @field_validator("epsilon")
    @classmethod
    def validate_epsilon(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f"epsilon must be > 0, got {v}")
        return v

    @field_validator("trials")
    @classmethod
    def validate_trials(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"trials must be >= 1, got {v}")
        return v

    @field_validator("statistics")
    @classmethod
    def validate_statistics(cls, v: list[str]) -> list[str]:
        unknown = sorted(set(v) - set(STATISTICS))
        if unknown:
            raise ValueError(f"Unknown statistics {unknown}; choose from {list(STATISTICS)}")
        if not v:
            raise ValueError("statistics must be non-empty")
        return v

    @field_validator("w_scale")
    @classmethod
    def validate_w_scale(cls, v: str) -> str:
        if v not in W_SCALES:
            raise ValueError(f"w_scale must be one of {list(W_SCALES)}, got '{v}'")
        return v

    def matrix_count(self) -> int:
        """Matrices generated by a full run (two arms per trial)."""
        return 2 * len(self.alpha_grid) * len(self.sigma_grid) * self.trials

    def cell_sizes(self) -> list[tuple[float, float, int, int]]:
        """(alpha, sigma, T, S) for every grid cell."""
        sizes = []
        for alpha in self.alpha_grid:
            for sigma in self.sigma_grid:
                params = PlantedParams(N=self.N, alpha=alpha, sigma=sigma,
                                       epsilon=self.epsilon, seed=0, w_scale=self.w_scale)
                sizes.append((alpha, sigma, params.T, params.S))
        return sizes

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON dump."""
        canonical = json.dumps(self.model_dump(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _parse(yaml_content: str, source: str) -> ExperimentConfig:
    try:
        raw_data: Any = yaml.safe_load(yaml_content)
    except yaml.YAMLError as e:
        raise ValueError(f"Invalid YAML syntax in {source}: {e}") from e
    if raw_data is None:
        raise ValueError(f"Empty experiment configuration file: {source}")
    if not isinstance(raw_data, dict):
        raise ValueError(f"{source} must hold a mapping of experiment fields")
    config = ExperimentConfig.model_validate(raw_data)
    _check_sweep(config, source)
    return config


def _check_sweep(config: ExperimentConfig, source: str) -> None:
    """Reject sweeps over the matrix cap; warn about cells that will be skipped."""
    count = config.matrix_count()
    if count > MATRIX_CAP:
        raise ValueError(
            f"{source} sweeps {count} matrices, above the cap of {MATRIX_CAP}; "
            "shrink the grids or the trial count"
        )
    for alpha, sigma, T, S in config.cell_sizes():
        if not 1 <= S <= T:
            logger.warning("%s: cell alpha=%g sigma=%g has support S=%d outside [1, T=%d]",
                           source, alpha, sigma, S, T)
        if "schatten_flat_r3" in config.statistics and T > MATRIX_FREE_CAP:
            logger.warning("%s: cell alpha=%g has T=%d rows, schatten_flat_r3 will be skipped",
                           source, alpha, T)


def load_experiment(filepath: Path) -> ExperimentConfig:
    """Load a planted experiment from a YAML file and check its sweep.

    The sweep check rejects grids that would generate more than MATRIX_CAP
    matrices and logs a warning for every cell that the runner will record as
    skipped (degenerate support size, or too many rows for the matrix-free
    Schatten statistic).

    Raises:
        FileNotFoundError: If the file doesn't exist.
        ValueError: If the YAML is invalid, empty, not a mapping, or over the cap.
        ValidationError: If fields fail Pydantic validation.
    """
    return _parse(filepath.read_text(encoding="utf-8"), str(filepath))


def load_default_experiment() -> ExperimentConfig:
    from importlib.resources import files

    resource = files("lvlab.config").joinpath("default_experiment.yaml")
    return _parse(resource.read_text(encoding="utf-8"), "default_experiment.yaml")
