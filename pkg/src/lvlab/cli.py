"""Command-line interface for lvlab."""

import json
import logging
import time
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import typer
import yaml
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table

from . import __version__
from .config import ExperimentConfig, load_default_experiment, load_experiment
from .errors import LVLabError
from .exporters import read_integer_set, read_matrix
from .models import ComplexMatrix
from .schemas import ErrorRecord
from .services import DENSITY_FAMILIES, FAMILIES, MAJORANT_CHECKS, METHODS, RunService
from .zoo.ensembles import DISTRIBUTIONS, W_SCALES

app = typer.Typer(
    name="lvlab",
    help="Numerical laboratory for large value problems of matrices.",
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
DEFAULT_OUT = Path("./lvlab-out")


def version_callback(value: bool) -> None:
    if value:
        console.print(f"[bold cyan]lvlab[/bold cyan] v{__version__}")
        raise typer.Exit()


def _choice(allowed: tuple[str, ...]) -> Callable[[str | None], str | None]:
    """Option callback rejecting names outside ``allowed`` as a usage error."""

    def check(value: str | None) -> str | None:
        if value is not None and value not in allowed:
            raise typer.BadParameter(f"'{value}' is not one of {', '.join(allowed)}")
        return value

    return check


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise typer.BadParameter(f"expected comma-separated numbers, got '{text}'") from None


@app.callback()
def main(
    ctx: typer.Context,
    seed: int = typer.Option(0, "--seed", envvar="LVLAB_SEED", help="Seed for random families."),
    threads: int = typer.Option(1, "--threads", min=1, help="Worker threads."),
    log_level: str = typer.Option(
        "WARNING", "--log-level", callback=_choice(LOG_LEVELS), help="Logging level."
    ),
    version: bool = typer.Option(
        None, "--version", "-v", callback=version_callback, is_eager=True,
        help="Show version and exit.",
    ),
) -> None:
    """lvlab - large value estimates, certificates and constructions."""
    logging.basicConfig(
        level=log_level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )
    ctx.obj = {"seed": seed, "threads": threads}


@contextmanager
def _computation() -> Iterator[None]:
    """Translate domain errors into a JSON record on stderr and exit code 1."""
    try:
        yield
    except LVLabError as e:
        record = ErrorRecord.model_validate(e.to_dict())
        typer.echo(json.dumps(record.model_dump(), sort_keys=True, default=str), err=True)
        raise typer.Exit(1) from e


class _Run:
    """Times a command and writes its manifest next to the outputs."""

    def __init__(self, ctx: typer.Context, command: str, out: Path) -> None:
        self.command = command
        self.seed: int = ctx.obj["seed"]
        self.threads: int = ctx.obj["threads"]
        self.service = RunService(output_dir=out)
        self.started_at = datetime.now(timezone.utc)
        self._start = time.perf_counter()

    def finish(
        self,
        parameters: dict[str, Any],
        outputs: dict[str, Path],
        inputs: dict[str, Path] | None = None,
        seeds: dict[str, Any] | None = None,
    ) -> None:
        manifest = self.service.write_manifest(
            command=self.command,
            parameters=parameters,
            seeds={"seed": self.seed} if seeds is None else seeds,
            threads=self.threads,
            inputs=inputs or {},
            outputs=outputs,
            started_at=self.started_at,
            wall_time_s=time.perf_counter() - self._start,
        )
        for path in [*outputs.values(), manifest]:
            console.print(f"[green]OK[/green] Generated {path.name}")
        console.print(f"\n[bold green]Output:[/bold green] {self.service.output_dir.absolute()}")


def _load_matrix(
    run: _Run, matrix: Path | None, family: str | None, N: int | None, T: int | None
) -> tuple[ComplexMatrix, dict[str, Path]]:
    if matrix is not None:
        return read_matrix(matrix), {"matrix": matrix}
    if family is None or N is None:
        raise typer.BadParameter("give either --matrix or --family with --N")
    M, _ = run.service.build_matrix(family, N, T=T, seed=run.seed)
    return M, {}


def _print_table(title: str, columns: list[str], rows: list[list[Any]]) -> None:
    table = Table(title=title, show_header=True, header_style="bold cyan")
    for i, column in enumerate(columns):
        table.add_column(column, style="dim" if i == 0 else None,
                         justify="left" if i == 0 else "right")
    for row in rows:
        table.add_row(*(f"{v:.6g}" if isinstance(v, float) else str(v) for v in row))
    console.print(table)


@app.command()
def gen(
    ctx: typer.Context,
    family: str = typer.Option(..., "--family", callback=_choice(FAMILIES), help="Matrix family."),
    N: int = typer.Option(..., "--N", help="Degree, or Nfreq for periodic-schrodinger."),
    T: int | None = typer.Option(None, "--T", help="Number of rows."),
    dist: str = typer.Option(
        "gaussian", "--dist", callback=_choice(DISTRIBUTIONS), help="Entry distribution."
    ),
    alpha: float = typer.Option(1.5, "--alpha", help="Planted: T = round(N^alpha)."),
    sigma: float = typer.Option(0.75, "--sigma", help="Large value exponent."),
    epsilon: float = typer.Option(0.01, "--epsilon", help="Planted sparsity slack."),
    w_scale: str = typer.Option(
        "std", "--w-scale", callback=_choice(W_SCALES), help="Planted coordinate scale."
    ),
    interval_start: int | None = typer.Option(None, "--interval-start", help="Fat-AP n_I."),
    out: Path = typer.Option(DEFAULT_OUT, "--out", help="Output directory."),
) -> None:
    """Generate a matrix from the zoo."""
    run = _Run(ctx, "gen", out)
    parameters = {
        "family": family, "N": N, "T": T, "dist": dist, "alpha": alpha, "sigma": sigma,
        "epsilon": epsilon, "w_scale": w_scale, "interval_start": interval_start,
    }
    with _computation():
        outputs = run.service.generate(
            family, N, T=T, seed=run.seed, dist=dist, alpha=alpha, sigma=sigma,
            epsilon=epsilon, w_scale=w_scale, interval_start=interval_start,
        )
    run.finish(parameters, outputs)


@app.command()
def certify(
    ctx: typer.Context,
    matrix: Path | None = typer.Option(
        None, "--matrix", exists=True, dir_okay=False, readable=True, help="Matrix CSV file."
    ),
    family: str | None = typer.Option(
        None, "--family", callback=_choice(FAMILIES), help="Matrix family instead of a file."
    ),
    N: int | None = typer.Option(None, "--N", help="Degree for --family."),
    T: int | None = typer.Option(None, "--T", help="Rows for --family."),
    methods: str = typer.Option(
        ",".join(METHODS), "--methods", help=f"Comma-separated subset of {', '.join(METHODS)}."
    ),
    lambdas: str | None = typer.Option(
        None, "--lambdas", help="Comma-separated thresholds (default N^0.75)."
    ),
    budget: float | None = typer.Option(None, "--budget", help="B^2 (default N)."),
    k: int = typer.Option(2, "--k", help="Tensor power for the power method."),
    r: int = typer.Option(3, "--r", help="Schatten order."),
    out: Path = typer.Option(DEFAULT_OUT, "--out", help="Output directory."),
) -> None:
    """Certify large value bounds for a matrix."""
    names = [m.strip() for m in methods.split(",") if m.strip()]
    for name in names:
        _choice(METHODS)(name)
    run = _Run(ctx, "certify", out)
    with _computation():
        M, inputs = _load_matrix(run, matrix, family, N, T)
        lams = _floats(lambdas) if lambdas else [M.N**0.75]
        b_sq = float(M.N) if budget is None else budget
        outputs, results = run.service.certify(M, names, lams, b_sq, k=k, r=r)

    rows = [
        [res["name"], b["lambda"], b["raw"] if b["raw"] is not None else "inf", b["max_w"],
         b["binding_constraint"]]
        for res in results
        for b in res["bounds"]
    ]
    _print_table("Certificates", ["Method", "lambda", "raw", "max_w", "Binding"], rows)
    parameters = {
        "family": family, "N": N, "T": T, "methods": names, "lambdas": lams,
        "b_budget_sq": b_sq, "k": k, "r": r,
    }
    run.finish(parameters, outputs, inputs=inputs)


@app.command()
def oracle(
    ctx: typer.Context,
    matrix: Path | None = typer.Option(
        None, "--matrix", exists=True, dir_okay=False, readable=True, help="Matrix CSV file."
    ),
    family: str | None = typer.Option(
        None, "--family", callback=_choice(FAMILIES), help="Matrix family instead of a file."
    ),
    N: int | None = typer.Option(None, "--N", help="Degree for --family."),
    T: int | None = typer.Option(None, "--T", help="Rows for --family."),
    s_min: int = typer.Option(1, "--s-min", min=1, help="Smallest subset size."),
    s_max: int = typer.Option(4, "--s-max", min=1, help="Largest subset size."),
    iters: int = typer.Option(2000, "--iters", help="Search budget above the enumeration cap."),
    out: Path = typer.Option(DEFAULT_OUT, "--out", help="Output directory."),
) -> None:
    """Tabulate sparse singular values over a range of subset sizes."""
    if s_max < s_min:
        raise typer.BadParameter("--s-max must be >= --s-min")
    run = _Run(ctx, "oracle", out)
    with _computation():
        M, inputs = _load_matrix(run, matrix, family, N, T)
        outputs, rows = run.service.oracle(
            M, range(s_min, s_max + 1), seed=run.seed, iters=iters, threads=run.threads
        )
    _print_table("Sparse singular values", ["S", "value", "method"],
                 [[S, value, method] for S, value, method, _ in rows])
    parameters = {"family": family, "N": N, "T": T, "s_min": s_min, "s_max": s_max,
                  "iters": iters}
    run.finish(parameters, outputs, inputs=inputs)


@app.command()
def energy(
    ctx: typer.Context,
    set_file: Path = typer.Option(
        ..., "--set", exists=True, dir_okay=False, readable=True,
        help="Newline-delimited integer set.",
    ),
    grid_len: int | None = typer.Option(None, "--grid-len", help="DFT grid length."),
    out: Path = typer.Option(DEFAULT_OUT, "--out", help="Output directory."),
) -> None:
    """Additive energy of an integer set with the DFT cross-check."""
    run = _Run(ctx, "energy", out)
    with _computation():
        outputs, record = run.service.energy(read_integer_set(set_file), grid_len)
    _print_table("Additive energy", ["Quantity", "Value"],
                 [[key, record[key]] for key in ("size", "energy", "energy_dft", "agree")])
    run.finish({"grid_len": record["grid_len"]}, outputs, inputs={"set": set_file})


@app.command()
def density(
    ctx: typer.Context,
    family: str = typer.Option(
        ..., "--family", callback=_choice(DENSITY_FAMILIES), help="dirichlet or ac."
    ),
    N: int = typer.Option(..., "--N", help="Degree."),
    T: int = typer.Option(..., "--T", help="Time range; delta defaults to 1/T."),
    delta: float | None = typer.Option(None, "--delta", help="Smoothing width."),
    kappa: float = typer.Option(6.0, "--kappa", help="Spike window in units of delta."),
    out: Path = typer.Option(DEFAULT_OUT, "--out", help="Output directory."),
) -> None:
    """Difference density profile and spike report."""
    run = _Run(ctx, "density", out)
    with _computation():
        outputs, summary = run.service.density(family, N, T, delta=delta, kappa=kappa)
    _print_table("Spike report", ["Quantity", "Value"],
                 [[key, summary[key]] for key in
                  ("smooth_level", "spike_level", "contrast", "residual_mass")])
    parameters = {"family": family, "N": N, "T": T, "delta": summary["delta"], "kappa": kappa}
    run.finish(parameters, outputs)


@app.command()
def majorant(
    ctx: typer.Context,
    check: str = typer.Option(
        ..., "--check", callback=_choice(MAJORANT_CHECKS), help="Which inequality to test."
    ),
    N: int = typer.Option(16, "--N", help="Number of terms."),
    T: int = typer.Option(256, "--T", help="Time range for sampled points or the profile."),
    s: int = typer.Option(1, "--s", help="Moment exponent."),
    step: float = typer.Option(0.25, "--step", help="Profile grid step or AP step."),
    J: int = typer.Option(4, "--J", help="AP half length."),
    out: Path = typer.Option(DEFAULT_OUT, "--out", help="Output directory."),
) -> None:
    """Run a majorant-principle check on a seeded random polynomial."""
    run = _Run(ctx, "majorant", out)
    with _computation():
        outputs, record = run.service.majorant(
            check, N=N, T=T, s=s, step=step, J=J, seed=run.seed
        )
    if "holds" in record:
        _print_table("Verdict", ["Quantity", "Value"],
                     [[key, record[key]] for key in ("check", "lhs", "rhs", "holds")])
    else:
        _print_table("Majorant profile", ["Quantity", "Value"],
                     [[key, record[key]] for key in ("max_value", "ratio")])
    parameters = {"check": check, "N": N, "T": T, "s": s, "step": step, "J": J}
    run.finish(parameters, outputs)


@app.command()
def planted(
    ctx: typer.Context,
    config_file: Path | None = typer.Option(
        None, "--config", exists=True, dir_okay=False, readable=True,
        help="Experiment YAML (default: bundled configuration).",
    ),
    out: Path = typer.Option(DEFAULT_OUT, "--out", help="Output directory."),
) -> None:
    """Planted-vs-random detection experiment."""
    try:
        config: ExperimentConfig = (
            load_default_experiment() if config_file is None else load_experiment(config_file)
        )
    except (ValueError, ValidationError, yaml.YAMLError) as e:
        record = ErrorRecord(detail=f"Invalid experiment file: {e}", error_code="INVALID_CONFIG")
        typer.echo(record.model_dump_json(), err=True)
        raise typer.Exit(1) from e

    run = _Run(ctx, "planted", out)
    with _computation(), Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        console=err_console,
        transient=True,
    ) as progress:
        task = progress.add_task("Running trials...", total=config.matrix_count())

        def update_progress(current: int, total: int) -> None:
            progress.update(task, completed=current, total=total)

        outputs, summary = run.service.planted(
            config, threads=run.threads, progress=update_progress
        )
    _print_table("Planted experiment", ["Quantity", "Value"],
                 [[key, value] for key, value in summary.items()])
    inputs = {} if config_file is None else {"config": config_file}
    run.finish(config.model_dump(), outputs, inputs=inputs,
               seeds={"base_seed": config.base_seed})


@app.command()
def exponents(
    ctx: typer.Context,
    alpha: float = typer.Option(..., "--alpha", help="T = N^alpha, alpha in (1, 2)."),
    sigma: float = typer.Option(..., "--sigma", help="lambda = N^sigma, sigma in (1/2, 1)."),
    out: Path = typer.Option(DEFAULT_OUT, "--out", help="Output directory."),
) -> None:
    """Closed-form exponent table."""
    run = _Run(ctx, "exponents", out)
    with _computation():
        outputs, record = run.service.exponents(alpha, sigma)
    console.print(outputs["exponents_txt"].read_text(encoding="utf-8"))
    run.finish({"alpha": alpha, "sigma": sigma}, outputs)


if __name__ == "__main__":
    app()
