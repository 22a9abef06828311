"""Output writers and readers for lvlab artifacts."""

from .csv import (
    format_complex,
    parse_complex,
    read_integer_set,
    read_matrix,
    write_density_profile,
    write_integer_set,
    write_json,
    write_majorant_profile,
    write_matrix,
    write_spike_report,
    write_ssv_table,
    write_stat_table,
)
from .report import ReportGenerator, planted_report, render_exponent_table

__all__ = [
    "ReportGenerator",
    "format_complex",
    "parse_complex",
    "planted_report",
    "read_integer_set",
    "read_matrix",
    "render_exponent_table",
    "write_density_profile",
    "write_integer_set",
    "write_json",
    "write_majorant_profile",
    "write_matrix",
    "write_spike_report",
    "write_ssv_table",
    "write_stat_table",
]
