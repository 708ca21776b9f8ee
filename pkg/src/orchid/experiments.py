"""Sweep harness: coupling transition, coherence sensitivity, Byzantine
resilience, scalability against analytical baselines, and the summary
table.

Every sweep derives one RNG substream per (point, trial) from the root
seed, regenerates the topology inside each trial, and aggregates in index
order, so results are bit-identical whether trials run serially or on a
process pool.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .consensus import ConsensusOutcome, run_consensus
from .oscillator import run_oscillator
from .params import OrchidParams
from .qss import FidelityCurve, threshold_scan
from .rng import substream

POW_LATENCY_S = 600.0
PBFT_REFERENCE_N = 150
PBFT_REFERENCE_LATENCY_S = 7.5

# substream tags; these are part of the reproducibility contract
_TAG_COUPLING = 1
_TAG_COHERENCE = 2
_TAG_BYZANTINE = 3
_TAG_SCALE = 4
_TAG_TABLE1 = 5
_TAG_QSS = 6


@dataclass(frozen=True)
class SweepPoint:
    axis: float
    mean: float
    std: float
    sem: float
    trials: int


@dataclass(frozen=True)
class SweepResult:
    axis_name: str
    points: tuple[SweepPoint, ...]

    @property
    def axis_values(self) -> np.ndarray:
        return np.array([p.axis for p in self.points])

    @property
    def means(self) -> np.ndarray:
        return np.array([p.mean for p in self.points])

    @property
    def sems(self) -> np.ndarray:
        return np.array([p.sem for p in self.points])


def _aggregate(axis: float, samples: Sequence[float]) -> SweepPoint:
    arr = np.asarray(samples, dtype=float)
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return SweepPoint(
        axis=float(axis),
        mean=float(arr.mean()),
        std=std,
        sem=std / math.sqrt(len(arr)),
        trials=len(arr),
    )


def _final_r_trial(params: OrchidParams, key: tuple[int, ...]) -> float:
    return run_oscillator(params, substream(params.seed, *key)).final_r


def _consensus_trial(params: OrchidParams, key: tuple[int, ...]) -> ConsensusOutcome:
    return run_consensus(params, substream(params.seed, *key))


def _run_tasks(fn, tasks: list[tuple], jobs: int) -> list:
    """Run fn over argument tuples, preserving task order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*tasks)))


def coupling_sweep(
    k_grid: Sequence[float],
    params: OrchidParams,
    trials: int = 5,
    *,
    jobs: int = 1,
) -> SweepResult:
    """Steady-state global r vs coupling strength, oscillator dynamics only."""
    tasks = [
        (params.replace(coupling=float(k)), (_TAG_COUPLING, p, t))
        for p, k in enumerate(k_grid)
        for t in range(trials)
    ]
    finals = _run_tasks(_final_r_trial, tasks, jobs)
    points = [
        _aggregate(k, finals[p * trials : (p + 1) * trials])
        for p, k in enumerate(k_grid)
    ]
    return SweepResult("coupling", tuple(points))


def coherence_sweep(
    c_grid: Sequence[float],
    params: OrchidParams,
    trials: int = 5,
    *,
    jobs: int = 1,
) -> SweepResult:
    """Steady-state global r vs a uniform coherence level assigned to all
    nodes (the per-node uniform draw is pinned to the grid value)."""
    tasks = [
        (params.replace(coherence_min=float(c), coherence_max=float(c)), (_TAG_COHERENCE, p, t))
        for p, c in enumerate(c_grid)
        for t in range(trials)
    ]
    finals = _run_tasks(_final_r_trial, tasks, jobs)
    points = [
        _aggregate(c, finals[p * trials : (p + 1) * trials])
        for p, c in enumerate(c_grid)
    ]
    return SweepResult("coherence", tuple(points))


def crossing_point(xs: Sequence[float], ys: Sequence[float], level: float) -> float | None:
    """Midpoint of the first interval where ys crosses `level` upward."""
    for i in range(len(xs) - 1):
        if ys[i] < level <= ys[i + 1]:
            return (float(xs[i]) + float(xs[i + 1])) / 2.0
    return None


def steepest_interval(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Midpoint of the interval with the largest discrete slope; locates an
    empirical transition on a sweep curve."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    slopes = np.diff(ys) / np.diff(xs)
    i = int(np.argmax(slopes))
    return float((xs[i] + xs[i + 1]) / 2.0)


def byzantine_sweep(
    fractions: Sequence[float],
    params: OrchidParams,
    trials: int = 15,
    *,
    jobs: int = 1,
) -> tuple[SweepResult, SweepResult]:
    """Convergence rate and median convergence time vs Byzantine fraction.

    Returns (rate sweep, time sweep). Rate points carry Bernoulli
    statistics over all trials; time points carry the median simulated
    seconds over converged trials only (their `mean` field holds the
    median, `trials` the converged count).
    """
    if any(f < 0.0 or f > 0.45 for f in fractions):
        raise ValueError("byzantine fractions must lie within [0, 0.45]")
    tasks = [
        (params.replace(byz_fraction=float(f)), (_TAG_BYZANTINE, p, t))
        for p, f in enumerate(fractions)
        for t in range(trials)
    ]
    outcomes = _run_tasks(_consensus_trial, tasks, jobs)
    rate_points = []
    time_points = []
    for p, f in enumerate(fractions):
        batch = outcomes[p * trials : (p + 1) * trials]
        rate_points.append(_aggregate(f, [1.0 if o.converged else 0.0 for o in batch]))
        times = [o.sim_time_s for o in batch if o.converged]
        if times:
            arr = np.asarray(times)
            std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
            time_points.append(
                SweepPoint(float(f), float(np.median(arr)), std,
                           std / math.sqrt(len(arr)), len(arr))
            )
        else:
            time_points.append(SweepPoint(float(f), math.nan, math.nan, math.nan, 0))
    return (
        SweepResult("byz_fraction", tuple(rate_points)),
        SweepResult("byz_fraction", tuple(time_points)),
    )


def pbft_latency_model(n: int) -> float:
    """Quadratic analytical latency model, calibrated so that n=150 maps to
    7.5 seconds."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return PBFT_REFERENCE_LATENCY_S * (n / PBFT_REFERENCE_N) ** 2


@dataclass(frozen=True)
class LatencyComparison:
    """Measured consensus latency vs the analytical baselines."""

    n_values: tuple[int, ...]
    orchid_mean_s: np.ndarray
    orchid_std_s: np.ndarray
    pbft_model_s: np.ndarray
    pow_latency_s: float
    crossover_n: int | None  # smallest n with orchid mean below the PBFT model
    messages_per_round_per_node: np.ndarray
    convergence_rate: np.ndarray


def scalability_sweep(
    n_grid: Sequence[int],
    params: OrchidParams,
    trials: int = 10,
    *,
    byz_fraction: float = 0.10,
    jobs: int = 1,
) -> LatencyComparison:
    """Consensus latency vs network size at a fixed Byzantine fraction,
    with the PBFT quadratic model and the PoW constant for comparison."""
    if any(n < 4 for n in n_grid):
        raise ValueError("every n in the grid must be >= 4")
    tasks = [
        (params.replace(n=int(n), byz_fraction=byz_fraction), (_TAG_SCALE, p, t))
        for p, n in enumerate(n_grid)
        for t in range(trials)
    ]
    outcomes = _run_tasks(_consensus_trial, tasks, jobs)
    means = np.empty(len(n_grid))
    stds = np.empty(len(n_grid))
    msgs = np.empty(len(n_grid))
    rates = np.empty(len(n_grid))
    for p, n in enumerate(n_grid):
        batch = outcomes[p * trials : (p + 1) * trials]
        times = np.asarray([o.sim_time_s for o in batch if o.converged])
        means[p] = times.mean() if len(times) else math.nan
        stds[p] = times.std(ddof=1) if len(times) > 1 else 0.0
        msgs[p] = np.mean([o.message_count / o.rounds_executed / n for o in batch])
        rates[p] = np.mean([1.0 if o.converged else 0.0 for o in batch])
    pbft = np.array([pbft_latency_model(int(n)) for n in n_grid])
    crossover = next(
        (int(n) for p, n in enumerate(n_grid) if means[p] < pbft[p]), None
    )
    return LatencyComparison(
        n_values=tuple(int(n) for n in n_grid),
        orchid_mean_s=means,
        orchid_std_s=stds,
        pbft_model_s=pbft,
        pow_latency_s=POW_LATENCY_S,
        crossover_n=crossover,
        messages_per_round_per_node=msgs,
        convergence_rate=rates,
    )


@dataclass(frozen=True)
class Table1Row:
    byz_fraction: float
    median_time_s: float
    final_r_mean: float
    final_r_std: float
    rate: float


@dataclass(frozen=True)
class Table1Report:
    rows: tuple[Table1Row, ...]
    r_max: float
    c_star: float | None
    trials: int

    def to_text(self) -> str:
        lines = [
            f"{'byz':>6}  {'med. conv.':>10}  {'final r':>16}  {'rate':>6}",
        ]
        for row in self.rows:
            lines.append(
                f"{row.byz_fraction:>6.0%}  {row.median_time_s:>9.2f}s  "
                f"{row.final_r_mean:.3f} +/- {row.final_r_std:.3f}  {row.rate:>6.0%}"
            )
        c_star = "n/a" if self.c_star is None else f"{self.c_star:.3f}"
        lines.append(f"qss threshold c* = {c_star};  r_max = {self.r_max:.3f}")
        return "\n".join(lines)


TABLE1_FRACTIONS = (0.10, 0.25, 0.33, 0.40)


def table1_report(
    params: OrchidParams,
    trials: int = 20,
    *,
    jobs: int = 1,
) -> Table1Report:
    """Summary metrics: consensus at n=30 across four Byzantine fractions,
    peak synchrony of a clean n=25 run, and the secret-sharing threshold."""
    tasks = [
        (params.replace(n=30, byz_fraction=f), (_TAG_TABLE1, p, t))
        for p, f in enumerate(TABLE1_FRACTIONS)
        for t in range(trials)
    ]
    outcomes = _run_tasks(_consensus_trial, tasks, jobs)
    rows = []
    for p, f in enumerate(TABLE1_FRACTIONS):
        batch = outcomes[p * trials : (p + 1) * trials]
        times = [o.sim_time_s for o in batch if o.converged]
        finals = np.asarray([o.final_r for o in batch])
        rows.append(
            Table1Row(
                byz_fraction=f,
                median_time_s=float(np.median(times)) if times else math.nan,
                final_r_mean=float(finals.mean()),
                final_r_std=float(finals.std(ddof=1)) if len(finals) > 1 else 0.0,
                rate=float(np.mean([1.0 if o.converged else 0.0 for o in batch])),
            )
        )
    clean = params.replace(n=25, byz_fraction=0.0)
    r_max = run_oscillator(clean, substream(params.seed, _TAG_TABLE1, 99)).r_max
    curve = qss_threshold_curve(params, trials=60)
    return Table1Report(tuple(rows), r_max, curve.threshold, trials)


def qss_threshold_curve(
    params: OrchidParams,
    trials: int = 60,
    *,
    grid: Sequence[float] | None = None,
    model: str = "floor",
) -> FidelityCurve:
    """Fidelity curve for the configured (k, n) scheme on the default
    0.50..1.00 step 0.01 grid."""
    if grid is None:
        grid = [round(0.50 + 0.01 * i, 2) for i in range(51)]
    return threshold_scan(
        params.qss_k,
        params.qss_n,
        grid,
        trials,
        params.prime,
        substream(params.seed, _TAG_QSS),
        model,  # type: ignore[arg-type]
    )
