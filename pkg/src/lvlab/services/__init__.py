"""Service layer for lvlab runs."""

from .runs import DENSITY_FAMILIES, FAMILIES, MAJORANT_CHECKS, METHODS, RunService

__all__ = ["DENSITY_FAMILIES", "FAMILIES", "MAJORANT_CHECKS", "METHODS", "RunService"]
