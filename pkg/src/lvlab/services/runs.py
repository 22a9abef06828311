"""Framework-agnostic orchestration of lvlab runs."""

import logging
import math
from collections.abc import Callable, Sequence
from datetime import datetime
from pathlib import Path
from typing import Any

import numpy as np

from ..certifiers import (
    Certificate,
    cert_mmstar,
    cert_operator,
    cert_power,
    cert_schatten,
    evaluate,
)
from ..config import ExperimentConfig
from ..errors import InvalidParameter
from ..exponents import exponent_table
from ..exporters import (
    ReportGenerator,
    write_density_profile,
    write_json,
    write_majorant_profile,
    write_matrix,
    write_spike_report,
    write_ssv_table,
    write_stat_table,
)
from ..fourier import (
    GRID_CAP,
    additive_energy,
    additive_energy_dft,
    density_profile,
    spike_report,
)
from ..majorant import (
    Verdict,
    ap_energy_bound_check,
    circle_majorant_check,
    diffset_majorant_check,
    dirichlet_diffset_sides,
    dirichlet_majorant_profile,
    symmetric_ap,
)
from ..models import ComplexMatrix, FrequencySet, IntegerSet, RowSubset, TrigPolynomial
from ..oracle import ENUMERATION_CAP, ssv_exact, ssv_search
from ..planted import run_experiment
from ..schemas import RunManifest, VerdictRecord
from ..zoo import (
    gen_ac,
    gen_almost_counterexample,
    gen_dirichlet,
    gen_fat_ap,
    gen_freqset,
    gen_periodic_schrodinger,
    gen_planted,
    gen_random,
)

logger = logging.getLogger(__name__)

FAMILIES = (
    "dirichlet",
    "ac",
    "dft",
    "random",
    "planted",
    "periodic-schrodinger",
    "almost-counterexample",
    "fat-ap",
)
METHODS = ("operator", "power", "power-diag", "mmstar", "schatten")
DENSITY_FAMILIES = ("dirichlet", "ac")
MAJORANT_CHECKS = ("circle", "diffset", "profile", "ap-energy", "dirichlet-diffset")


class RunService:
    """Framework-agnostic run orchestration.

    Each run method computes one kind of artifact, writes it under the output
    directory, and returns a mapping from output kind to path. The CLI is a
    thin layer on top.
    """

    def __init__(self, output_dir: Path) -> None:
        """Initialize the run service.

        Args:
            output_dir: Directory receiving every artifact of the run.
        """
        self.output_dir = output_dir
        output_dir.mkdir(parents=True, exist_ok=True)

    def build_matrix(
        self,
        family: str,
        N: int,
        T: int | None = None,
        seed: int = 0,
        dist: str = "gaussian",
        alpha: float = 1.5,
        sigma: float = 0.75,
        epsilon: float = 0.01,
        w_scale: str = "std",
        interval_start: int | None = None,
    ) -> tuple[ComplexMatrix, dict[str, Any]]:
        """Build a matrix by family name.

        Args:
            family: One of FAMILIES.
            N: Degree (column count for the exponential-sum families).
            T: Row count; required except for planted and periodic-schrodinger.
            seed: Seed for the random families.
            dist: Entry distribution for "random".
            alpha: T = round(N^alpha) for "planted".
            sigma: Large value exponent for "planted" and "almost-counterexample".
            epsilon: Sparsity slack for "planted".
            w_scale: Planted coordinate scale convention.
            interval_start: n_I for "fat-ap" (defaults to N).

        Returns:
            The matrix and a JSON-serializable description of any hidden
            construction data.

        Raises:
            InvalidParameter: If the family is unknown or T is missing.
        """
        if family in ("planted", "periodic-schrodinger"):
            pass
        elif family in FAMILIES:
            if T is None:
                raise InvalidParameter(f"family '{family}' needs T")
        else:
            raise InvalidParameter(f"Unknown family: {family}")

        if family == "dirichlet":
            return gen_dirichlet(N, T), {}  # type: ignore[arg-type]
        elif family == "ac":
            return gen_ac(N, T), {}  # type: ignore[arg-type]
        elif family == "dft":
            return gen_freqset(FrequencySet.dft(N), T, kind="dft"), {}  # type: ignore[arg-type]
        elif family == "random":
            return gen_random(T, N, dist, seed), {}  # type: ignore[arg-type]
        elif family == "planted":
            instance = gen_planted(N, alpha, sigma, epsilon, seed, w_scale)
            info = instance.to_dict()
            info["sparse_vector"] = instance.sparse_vector.tolist()
            info["input_witness"] = instance.input_witness.tolist()
            return instance.matrix, info
        elif family == "periodic-schrodinger":
            return gen_periodic_schrodinger(N), {}
        elif family == "almost-counterexample":
            counterexample = gen_almost_counterexample(N, T, sigma)  # type: ignore[arg-type]
            info = counterexample.to_dict()
            info["coeffs"] = {
                "re": counterexample.coeffs.real.tolist(),
                "im": counterexample.coeffs.imag.tolist(),
            }
            return counterexample.matrix, info
        else:
            start = N if interval_start is None else interval_start
            fat = gen_fat_ap(N, T, start)  # type: ignore[arg-type]
            n = np.arange(start + 1, start + fat.interval_len + 1, dtype=np.float64)
            matrix = gen_freqset(FrequencySet(np.log(n), label="fat-ap"), fat.T, kind="fat_ap")
            info = fat.to_dict()
            info["large_times"] = fat.large_times.tolist()
            info["clustered"] = fat.clustered()
            return matrix, info

    def generate(self, family: str, N: int, **params: Any) -> dict[str, Path]:
        """Write ``matrix.csv`` (and ``instance.json`` for constructions)."""
        matrix, info = self.build_matrix(family, N, **params)
        outputs = {"matrix_csv": write_matrix(matrix, self.output_dir / "matrix.csv")}
        if info:
            outputs["instance_json"] = write_json(info, self.output_dir / "instance.json")
        logger.info("generated %s matrix %dx%d", family, matrix.T, matrix.N)
        return outputs

    def build_certificate(
        self, M: ComplexMatrix, method: str, k: int = 2, r: int = 3
    ) -> Certificate:
        """Factory over METHODS."""
        if method == "operator":
            return cert_operator(M)
        elif method == "power":
            return cert_power(M, k=k)
        elif method == "power-diag":
            return cert_power(M, k=2, diag_corrected=True)
        elif method == "mmstar":
            return cert_mmstar(M)
        elif method == "schatten":
            return cert_schatten(M, r=r)
        else:
            raise InvalidParameter(f"Unknown certification method: {method}")

    def certify(
        self,
        M: ComplexMatrix,
        methods: Sequence[str],
        lambdas: Sequence[float],
        b_budget_sq: float,
        k: int = 2,
        r: int = 3,
    ) -> tuple[dict[str, Path], list[dict[str, Any]]]:
        """Evaluate every method at every threshold; write ``certificates.json``."""
        results = []
        for method in methods:
            cert = self.build_certificate(M, method, k=k, r=r)
            bounds = []
            for lam in lambdas:
                bound = evaluate(cert, lam, b_budget_sq).to_dict()
                bound["lambda"] = lam
                bounds.append(bound)
            results.append({"name": method, "certificate": cert.to_dict(), "bounds": bounds})
        record = {"b_budget_sq": b_budget_sq, "lambdas": list(lambdas), "results": results}
        path = write_json(record, self.output_dir / "certificates.json")
        return {"certificates_json": path}, results

    def oracle(
        self,
        M: ComplexMatrix,
        sizes: Sequence[int],
        seed: int = 0,
        iters: int = 2000,
        threads: int = 1,
    ) -> tuple[dict[str, Path], list[tuple[int, float, str, RowSubset]]]:
        """Sparse singular values per size: exact under the enumeration cap, else searched."""
        rows = []
        for S in sizes:
            if math.comb(M.T, S) <= ENUMERATION_CAP:
                value, subset = ssv_exact(M, S, threads=threads)
                rows.append((S, value, "exact", subset))
            else:
                value, subset = ssv_search(M, S, seed=seed, iters=iters)
                rows.append((S, value, "search", subset))
        return {"ssv_csv": write_ssv_table(rows, self.output_dir / "ssv.csv")}, rows

    def energy(
        self, W: IntegerSet, grid_len: int | None = None
    ) -> tuple[dict[str, Path], dict[str, Any]]:
        """Additive energy by direct count with the DFT cross-check."""
        top = int(W.elements[-1]) if len(W) else 0
        grid = 2 * top + 1 if grid_len is None else grid_len
        direct = additive_energy(W)
        via_dft: int | None = None
        if grid_len is None and grid > GRID_CAP:
            logger.warning("skipping DFT cross-check, grid length %d exceeds %d", grid, GRID_CAP)
        else:
            via_dft = additive_energy_dft(W, grid)
        record = {
            "size": len(W),
            "energy": direct,
            "energy_dft": via_dft,
            "grid_len": grid,
            "agree": None if via_dft is None else direct == via_dft,
        }
        return {"energy_json": write_json(record, self.output_dir / "energy.json")}, record

    def density(
        self, family: str, N: int, T: int, delta: float | None = None, kappa: float = 6.0
    ) -> tuple[dict[str, Path], dict[str, Any]]:
        """Difference density profile and spike report of Phi_Dir or Phi_AC."""
        if family == "dirichlet":
            phi = FrequencySet.dirichlet(N)
        elif family == "ac":
            phi = FrequencySet.almost_counterexample(N)
        else:
            raise InvalidParameter(f"density family must be one of {DENSITY_FAMILIES}")
        delta = 1.0 / T if delta is None else delta
        profile = density_profile(phi, delta)
        report = spike_report(N, T, delta=delta, phi=phi, kappa=kappa)
        summary = report.to_dict()
        summary["family"] = family
        outputs = {
            "density_csv": write_density_profile(profile, self.output_dir / "density.csv"),
            "spikes_csv": write_spike_report(report, self.output_dir / "spikes.csv"),
            "spikes_json": write_json(summary, self.output_dir / "spikes.json"),
        }
        return outputs, summary

    def majorant(
        self,
        check: str,
        N: int = 16,
        T: int = 256,
        s: int = 1,
        tees: Sequence[float] | None = None,
        step: float = 0.25,
        J: int = 4,
        seed: int = 0,
    ) -> tuple[dict[str, Path], dict[str, Any]]:
        """Run one majorant check on a seeded random polynomial; write its verdict."""
        rng = np.random.default_rng(seed)
        if check == "profile":
            profile = dirichlet_majorant_profile(N, T, step)
            outputs = {
                "profile_csv": write_majorant_profile(profile, self.output_dir / "profile.csv"),
                "profile_json": write_json(profile.to_dict(), self.output_dir / "profile.json"),
            }
            return outputs, profile.to_dict()

        phases = np.exp(2j * np.pi * rng.random(N))
        if check == "circle":
            D = TrigPolynomial(
                FrequencySet(2 * np.pi * np.arange(N)), rng.random(N) * phases
            )
            verdict = circle_majorant_check(D, s)
        elif check == "diffset":
            points = rng.uniform(0, T, 8) if tees is None else np.asarray(tees)
            D = TrigPolynomial(FrequencySet.dirichlet(N), rng.random(N) * phases)
            verdict = diffset_majorant_check(D, points, s)
        elif check == "ap-energy":
            D = TrigPolynomial(FrequencySet.dirichlet(N), rng.random(N) * phases)
            verdict = ap_energy_bound_check(D, symmetric_ap(step, J), s)
        elif check == "dirichlet-diffset":
            points = rng.uniform(0, T, 16) if tees is None else np.asarray(tees)
            verdict = dirichlet_diffset_sides(N, points)
        else:
            raise InvalidParameter(f"Unknown majorant check: {check}")
        return self._write_verdict(verdict)

    def _write_verdict(self, verdict: Verdict) -> tuple[dict[str, Path], dict[str, Any]]:
        record = VerdictRecord.model_validate(verdict.to_dict()).model_dump()
        return {"verdict_json": write_json(record, self.output_dir / "verdict.json")}, record

    def planted(
        self,
        config: ExperimentConfig,
        threads: int = 1,
        progress: Callable[[int, int], None] | None = None,
    ) -> tuple[dict[str, Path], dict[str, Any]]:
        """Run the experiment; write the stat table, its sidecar and a markdown report."""
        table = run_experiment(config, threads=threads, progress=progress)
        csv_path, json_path = write_stat_table(table, config, self.output_dir)
        reports = ReportGenerator()
        report_path = reports.write(
            reports.planted_markdown(table, config), self.output_dir / "report.md"
        )
        summary = {
            "records": len(table.records),
            "errors": len(table.errors),
            "config_hash": table.config_hash,
        }
        return {"stats_csv": csv_path, "stats_json": json_path, "report_md": report_path}, summary

    def exponents(self, alpha: float, sigma: float) -> tuple[dict[str, Path], dict[str, Any]]:
        """Write the exponent table as JSON and aligned text."""
        table = exponent_table(alpha, sigma)
        reports = ReportGenerator()
        outputs = {
            "exponents_json": write_json(table.to_dict(), self.output_dir / "exponents.json"),
            "exponents_txt": reports.write(
                reports.exponent_text(table), self.output_dir / "exponents.txt"
            ),
        }
        return outputs, table.to_dict()

    def write_manifest(
        self,
        command: str,
        parameters: dict[str, Any],
        seeds: dict[str, Any],
        threads: int,
        inputs: dict[str, Path],
        outputs: dict[str, Path],
        started_at: datetime,
        wall_time_s: float,
    ) -> Path:
        """Write ``manifest.json`` describing the run."""
        manifest = RunManifest(
            command=command,
            parameters=parameters,
            seeds=seeds,
            threads=threads,
            inputs={k: str(v) for k, v in inputs.items()},
            outputs={k: str(v) for k, v in outputs.items()},
            started_at=started_at,
            wall_time_s=wall_time_s,
        )
        path = self.output_dir / "manifest.json"
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path
