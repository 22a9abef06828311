"""Planted-vs-random detection experiment over an (alpha, sigma) grid."""

import hashlib
import logging
import math
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import rankdata

from .certifiers.schatten import flat_norm
from .config import MATRIX_CAP, STATISTICS, ExperimentConfig
from .errors import CapExceeded, DegenerateSize, InvalidParameter, LVLabError
from .linalg import gram, top_singular_value
from .models import ComplexMatrix, FloatArray, PlantedInstance
from .zoo import gen_planted, gen_random

logger = logging.getLogger(__name__)

ARMS = ("ran", "plant")
LARGE_VALUE_FACTOR = 0.3


def compute_stats(M: ComplexMatrix, which: Iterable[str] = STATISTICS) -> dict[str, float]:
    """Evaluate the requested test statistics on one matrix.

    opnorm is ||M||, offdiag_max the largest off-diagonal modulus of M M*,
    schatten_flat_r3 the flattened remainder norm for r = 3, and col_l4 the
    largest column fourth moment max_n sum_t |M_tn|^4 divided by N.
    """
    stats: dict[str, float] = {}
    for name in which:
        if name == "opnorm":
            stats[name] = top_singular_value(M)
        elif name == "offdiag_max":
            stats[name] = gram(M).offdiag_max()
        elif name == "schatten_flat_r3":
            stats[name] = flat_norm(M, 3)
        elif name == "col_l4":
            stats[name] = float(np.max(np.sum(np.abs(M.data) ** 4, axis=0)) / M.N)
        else:
            raise InvalidParameter(f"Unknown statistic: {name}")
    return stats


def auc(scores_ran: ArrayLike, scores_plant: ArrayLike) -> float:
    """Mann-Whitney AUC: P(plant > ran) + P(tie) / 2, from mid-ranks."""
    ran = np.asarray(scores_ran, dtype=np.float64).reshape(-1)
    plant = np.asarray(scores_plant, dtype=np.float64).reshape(-1)
    if ran.size == 0 or plant.size == 0:
        raise InvalidParameter("both score lists must be non-empty")
    ranks = rankdata(np.concatenate([ran, plant]))
    u_plant = float(np.sum(ranks[ran.size :])) - plant.size * (plant.size + 1) / 2
    return u_plant / (ran.size * plant.size)


def large_value_fraction(instance: PlantedInstance, factor: float = LARGE_VALUE_FACTOR) -> float:
    """Fraction of planted rows j with |(M v)_j| >= factor * N^sigma."""
    values = np.abs(instance.matrix.apply(instance.input_witness))
    threshold = factor * instance.params.N**instance.params.sigma
    rows = instance.support.zero_based()
    return float(np.mean(values[rows] >= threshold))


def derive_seed(base_seed: int, alpha_idx: int, sigma_idx: int, trial: int, arm: str) -> int:
    """64-bit seed from SHA-256 of the cell coordinates."""
    key = f"{base_seed}:{alpha_idx}:{sigma_idx}:{trial}:{arm}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


@dataclass(frozen=True)
class StatRecord:
    alpha: float
    sigma: float
    trial: int
    arm: str
    statistic: str
    value: float


@dataclass(frozen=True)
class StatTable:
    """All statistic values of one experiment run, in grid order."""

    records: tuple[StatRecord, ...]
    seeds: tuple[dict[str, Any], ...]
    config_hash: str
    errors: tuple[dict[str, Any], ...] = field(default=())

    def values(self, alpha: float, sigma: float, statistic: str, arm: str) -> FloatArray:
        picked = [
            r.value
            for r in self.records
            if r.alpha == alpha and r.sigma == sigma and r.statistic == statistic and r.arm == arm
        ]
        return np.asarray(picked, dtype=np.float64)

    def auc(self, alpha: float, sigma: float, statistic: str) -> float:
        return auc(
            self.values(alpha, sigma, statistic, "ran"),
            self.values(alpha, sigma, statistic, "plant"),
        )

    def statistics(self) -> list[str]:
        return list(dict.fromkeys(r.statistic for r in self.records))

    def cells(self) -> list[tuple[float, float]]:
        return list(dict.fromkeys((r.alpha, r.sigma) for r in self.records))


@dataclass(frozen=True)
class _Task:
    alpha_idx: int
    sigma_idx: int
    alpha: float
    sigma: float
    trial: int
    arm: str
    seed: int


def _run_task(config: ExperimentConfig, task: _Task) -> dict[str, float] | LVLabError:
    try:
        if task.arm == "ran":
            T = round(config.N**task.alpha)
            matrix = gen_random(T, config.N, "gaussian", task.seed)
        else:
            matrix = gen_planted(
                config.N, task.alpha, task.sigma, config.epsilon, task.seed, config.w_scale
            ).matrix
        return compute_stats(matrix, config.statistics)
    except (DegenerateSize, CapExceeded) as e:
        return e


def run_experiment(
    config: ExperimentConfig,
    threads: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> StatTable:
    """Generate paired random and planted instances for every cell and trial.

    Seeds are derived per (cell, trial, arm), so the table does not depend on
    ``threads``. A task whose planted sizes are degenerate, or whose
    statistics exceed a solver cap, is recorded in ``errors`` and skipped;
    the other tasks still run.

    Raises:
        CapExceeded: If the run would generate more than MATRIX_CAP matrices.
    """
    count = config.matrix_count()
    if count > MATRIX_CAP:
        raise CapExceeded("planted experiment matrices", count, MATRIX_CAP)

    tasks = [
        _Task(ai, si, alpha, sigma, trial, arm,
              derive_seed(config.base_seed, ai, si, trial, arm))
        for ai, alpha in enumerate(config.alpha_grid)
        for si, sigma in enumerate(config.sigma_grid)
        for trial in range(config.trials)
        for arm in ARMS
    ]
    logger.info("running %d planted-experiment tasks on %d threads", len(tasks), threads)

    records: list[StatRecord] = []
    errors: list[dict[str, Any]] = []
    done = 0
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for task, outcome in zip(tasks, pool.map(lambda t: _run_task(config, t), tasks),
                                 strict=True):
            done += 1
            if progress:
                progress(done, len(tasks))
            if isinstance(outcome, LVLabError):
                logger.warning("cell alpha=%g sigma=%g trial=%d %s skipped: %s",
                               task.alpha, task.sigma, task.trial, task.arm, outcome.message)
                errors.append({"alpha": task.alpha, "sigma": task.sigma, "trial": task.trial,
                               "arm": task.arm, **outcome.to_dict()})
                continue
            for name in config.statistics:
                records.append(StatRecord(task.alpha, task.sigma, task.trial, task.arm,
                                          name, outcome[name]))

    seeds = tuple(
        {"alpha": t.alpha, "sigma": t.sigma, "trial": t.trial, "arm": t.arm, "seed": t.seed}
        for t in tasks
    )
    return StatTable(tuple(records), seeds, config.config_hash(), tuple(errors))


def lowdeg_threshold(alpha: float) -> float:
    """Conjectured detection threshold sigma = 1 - alpha/4."""
    return 1.0 - alpha / 4.0


def planted_summary(table: StatTable) -> list[dict[str, Any]]:
    """AUC per (cell, statistic), with the reference threshold for each cell."""
    rows = []
    for alpha, sigma in table.cells():
        for name in table.statistics():
            ran = table.values(alpha, sigma, name, "ran")
            plant = table.values(alpha, sigma, name, "plant")
            rows.append({
                "alpha": alpha,
                "sigma": sigma,
                "statistic": name,
                "auc": auc(ran, plant) if ran.size and plant.size else math.nan,
                "above_threshold": sigma > lowdeg_threshold(alpha),
            })
    return rows
