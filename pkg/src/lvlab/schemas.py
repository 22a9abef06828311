"""Pydantic models for persisted JSON records."""

from datetime import datetime
from typing import Any

from pydantic import BaseModel, Field

from . import __version__

SCHEMA_VERSION = 1


class RunManifest(BaseModel):
    """Everything needed to reproduce one CLI run."""

    schema_version: int = Field(default=SCHEMA_VERSION, description="Record schema version")
    command: str = Field(description="Subcommand name")
    parameters: dict[str, Any] = Field(default_factory=dict, description="Full parameter record")
    seeds: dict[str, Any] = Field(default_factory=dict, description="Seeds used by the run")
    threads: int = Field(default=1, description="Worker threads")
    tool_version: str = Field(default=__version__, description="lvlab version")
    inputs: dict[str, str] = Field(default_factory=dict, description="Input files by role")
    outputs: dict[str, str] = Field(default_factory=dict, description="Output files by kind")
    started_at: datetime = Field(description="Run start timestamp")
    wall_time_s: float = Field(default=0.0, description="Wall-clock duration in seconds")

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "schema_version": 1,
                    "command": "exponents",
                    "parameters": {"alpha": 1.2, "sigma": 0.75},
                    "seeds": {"seed": 0},
                    "threads": 1,
                    "tool_version": "0.1.0",
                    "inputs": {},
                    "outputs": {"exponents_json": "lvlab-out/exponents.json"},
                    "started_at": "2026-01-21T12:00:00Z",
                    "wall_time_s": 0.01,
                }
            ]
        }
    }


class ErrorRecord(BaseModel):
    """Machine-readable error printed on stderr."""

    detail: str = Field(description="Human-readable message")
    error_code: str = Field(description="Upper snake case error code")

    model_config = {"extra": "allow"}


class VerdictRecord(BaseModel):
    """Result of one majorant-type inequality check."""

    schema_version: int = Field(default=SCHEMA_VERSION)
    check: str = Field(description="Name of the check")
    lhs: float = Field(description="Left-hand side")
    rhs: float = Field(description="Right-hand side")
    holds: bool = Field(description="lhs <= rhs within the relative slack")
    parameters: dict[str, Any] = Field(default_factory=dict)
