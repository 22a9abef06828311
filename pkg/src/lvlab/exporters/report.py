"""Text reports rendered from package templates."""

from pathlib import Path

from jinja2 import Environment, PackageLoader

from ..config import ExperimentConfig
from ..exponents import ExponentTable
from ..planted import StatTable, planted_summary


class ReportGenerator:
    """Render the exponent table and the planted-experiment summary."""

    EXPONENT_LABELS = (
        ("basic (orthogonality)", "basic"),
        ("gm (alpha = 6/5 only)", "gm"),
        ("dhpt (Schatten tensor)", "dhpt"),
        ("montgomery (conjectured, random)", "montgomery"),
        ("montgomery_lq (density form)", "montgomery_lq"),
        ("mmstar threshold (sigma)", "mmstar_threshold"),
        ("low-degree threshold (sigma)", "lowdeg_threshold"),
    )

    def __init__(self) -> None:
        self.env = Environment(
            loader=PackageLoader("lvlab", "templates"),
            autoescape=False,
            keep_trailing_newline=True,
        )

    def exponent_text(self, table: ExponentTable) -> str:
        rows = []
        for label, name in self.EXPONENT_LABELS:
            value = getattr(table, name)
            rows.append((label, "n/a" if value is None else f"{value:.6g}"))
        return self.env.get_template("exponents.txt.j2").render(table=table, rows=rows)

    def planted_markdown(self, table: StatTable, config: ExperimentConfig) -> str:
        return self.env.get_template("planted_report.md.j2").render(
            config=config,
            config_hash=table.config_hash,
            rows=planted_summary(table),
            errors=list(table.errors),
        )

    def write(self, text: str, output_path: Path) -> Path:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(text, encoding="utf-8")
        return output_path


def render_exponent_table(table: ExponentTable) -> str:
    """Aligned text table of every exponent."""
    return ReportGenerator().exponent_text(table)


def planted_report(table: StatTable, config: ExperimentConfig) -> str:
    """Markdown AUC summary per cell and statistic, marked exploratory."""
    return ReportGenerator().planted_markdown(table, config)
