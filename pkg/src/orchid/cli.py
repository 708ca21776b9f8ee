"""Command-line front end.

One subcommand per experiment. Every run writes its CSV outputs plus a
JSON manifest recording the full parameter snapshot, the seed and the
output paths; re-running with the same arguments reproduces the CSV bytes
exactly.

Exit codes: 0 success, 1 parameter/validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .consensus import run_consensus
from .csvio import write_csv
from .experiments import (
    byzantine_sweep,
    coherence_sweep,
    coupling_sweep,
    crossing_point,
    pbft_latency_model,
    qss_threshold_curve,
    scalability_sweep,
    steepest_interval,
    table1_report,
)
from .oscillator import run_oscillator
from .params import OrchidParams, apply_overrides, load_params, theoretical_critical_coupling, validate
from .rng import substream

SEED_ENV_VAR = "ORCHID_SEED"

# single-run substream tags (sweeps derive their own inside experiments)
_TAG_OSCILLATE = 10
_TAG_CONSENSUS = 11


@dataclasses.dataclass
class RunManifest:
    command: str
    params_snapshot: dict
    seed: int
    outputs: list[str]
    wall_clock: float
    version: str
    summary: dict

    def write(self, path: Path) -> Path:
        path.write_text(json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n")
        return path


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="root RNG seed (default: $ORCHID_SEED or params)")
    parser.add_argument("--trials", type=int, default=None, help="trials per sweep point")
    parser.add_argument("--n", type=int, default=None, help="node count override")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--config", default=None, help="key=value parameter file")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                        help="override any parameter field (repeatable)")
    parser.add_argument("--format", choices=["csv"], default="csv")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="parallel trial workers (default: machine parallelism)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orchid",
        description="Phase-synchronisation consensus simulator",
    )
    parser.add_argument("--version", action="version", version=f"orchid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("oscillate", "single oscillator run: phase trajectories and r/entropy series"),
        ("sweep-coupling", "steady-state r vs coupling strength"),
        ("sweep-coherence", "steady-state r vs uniform coherence level"),
        ("qss-fidelity", "secret-sharing fidelity vs coherence, with threshold"),
        ("consensus", "single consensus run: series and summary"),
        ("sweep-byzantine", "convergence rate and time vs Byzantine fraction"),
        ("scale", "latency vs network size against PBFT/PoW models"),
        ("table1", "summary table across Byzantine fractions"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name in ("sweep-coupling", "sweep-coherence", "qss-fidelity", "sweep-byzantine"):
            p.add_argument("--grid", default=None, help="comma-separated axis values")
        if name == "scale":
            p.add_argument("--n-grid", default="10,25,50,75,100,125,150",
                           help="comma-separated network sizes")
        if name == "qss-fidelity":
            p.add_argument("--model", choices=["floor", "binomial"], default="floor")
    return parser


def _resolve_params(args: argparse.Namespace) -> OrchidParams:
    params = load_params(args.config) if args.config else OrchidParams()
    overrides = {}
    for item in args.param:
        if "=" not in item:
            raise ValueError(f"--param expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value
    if overrides:
        params = apply_overrides(params, overrides)
    if args.n is not None:
        params = params.replace(n=args.n)
    if args.seed is not None:
        params = params.replace(seed=args.seed)
    elif SEED_ENV_VAR in os.environ:
        params = params.replace(seed=int(os.environ[SEED_ENV_VAR]))
    return validate(params)


def _parse_grid(text: str, cast=float) -> list:
    return [cast(tok) for tok in text.split(",") if tok.strip()]


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")


def _sweep_rows(sweep) -> list[tuple]:
    return [(p.axis, p.mean, p.std, p.sem, p.trials) for p in sweep.points]


_SWEEP_HEADER = ("axis", "mean", "std", "sem", "trials")


def _cmd_oscillate(args, params, out: Path, tag: str) -> tuple[list[Path], dict]:
    run = run_oscillator(params, substream(params.seed, _TAG_OSCILLATE),
                         record_trajectories=True)
    series = write_csv(
        out / f"oscillate_{tag}.csv",
        ("step", "t_seconds", "r", "psi", "entropy"),
        [
            (t, t * params.dt, run.r_series[t], run.psi_series[t], run.entropy_series[t])
            for t in range(len(run.r_series))
        ],
    )
    phases = write_csv(
        out / f"oscillate_{tag}_phases.csv",
        ("step", "t_seconds", "node_id", "phase"),
        [
            (t, t * params.dt, i, run.trajectories[t, i])
            for t in range(run.trajectories.shape[0])
            for i in range(params.n)
        ],
    )
    binding = crossing_point(range(len(run.r_series)), run.r_series, params.binding_threshold)
    summary = {
        "r_max": run.r_max,
        "final_r": run.final_r,
        "first_binding_step": binding,
        "critical_coupling_formula": theoretical_critical_coupling(params.freq_std),
    }
    print(f"r_max={run.r_max:.4f} final_r={run.final_r:.4f} "
          f"K={params.coupling} K_c(formula)={summary['critical_coupling_formula']:.4f}")
    return [series, phases], summary


def _cmd_sweep_coupling(args, params, out: Path, tag: str) -> tuple[list[Path], dict]:
    grid = _parse_grid(args.grid) if args.grid else [0.25 * i for i in range(1, 17)]
    trials = args.trials or 5
    sweep = coupling_sweep(grid, params, trials, jobs=args.jobs)
    path = write_csv(out / f"sweep-coupling_{tag}.csv", _SWEEP_HEADER, _sweep_rows(sweep))
    transition = steepest_interval(sweep.axis_values, sweep.means)
    summary = {
        "transition_coupling": transition,
        "critical_coupling_formula": theoretical_critical_coupling(params.freq_std),
    }
    print(f"transition near K={transition:.3f} "
          f"(formula K_c={summary['critical_coupling_formula']:.3f})")
    return [path], summary


def _cmd_sweep_coherence(args, params, out: Path, tag: str) -> tuple[list[Path], dict]:
    grid = _parse_grid(args.grid) if args.grid else [round(0.1 * i, 1) for i in range(11)]
    trials = args.trials or 5
    sweep = coherence_sweep(grid, params, trials, jobs=args.jobs)
    path = write_csv(out / f"sweep-coherence_{tag}.csv", _SWEEP_HEADER, _sweep_rows(sweep))
    crossing = crossing_point(sweep.axis_values, sweep.means, params.binding_threshold)
    summary = {"threshold_crossing": crossing}
    print(f"r crosses theta_b={params.binding_threshold} near c={crossing}")
    return [path], summary


def _cmd_qss_fidelity(args, params, out: Path, tag: str) -> tuple[list[Path], dict]:
    grid = _parse_grid(args.grid) if args.grid else None
    trials = args.trials or 60
    curve = qss_threshold_curve(params, trials, grid=grid, model=args.model)
    path = write_csv(
        out / f"qss-fidelity_{tag}.csv",
        ("coherence", "fidelity", "sem", "trials", "k", "n", "prime", "model"),
        [
            (curve.coherence[i], curve.fidelity[i], curve.sem[i],
             curve.trials, curve.k, curve.n, curve.prime, curve.model)
            for i in range(len(curve.coherence))
        ],
    )
    summary = {"c_star": curve.threshold}
    print(f"c* = {curve.threshold}")
    return [path], summary


def _cmd_consensus(args, params, out: Path, tag: str) -> tuple[list[Path], dict]:
    outcome = run_consensus(params, substream(params.seed, _TAG_CONSENSUS))
    series = write_csv(
        out / f"consensus_{tag}.csv",
        ("step", "r", "entropy", "committed_fraction", "messages_cumulative"),
        [
            (t, outcome.r_series[t], outcome.entropy_series[t],
             outcome.commit_fraction_series[t], int(outcome.messages_series[t]))
            for t in range(len(outcome.r_series))
        ],
    )
    summary = {
        "converged": outcome.converged,
        "consensus_value": outcome.consensus_value,
        "steps_to_converge": outcome.steps_to_converge,
        "sim_time_s": outcome.sim_time_s,
        "message_count": outcome.message_count,
        "final_r": outcome.final_r,
        "qss_ok": outcome.qss_ok,
    }
    summary_path = out / f"consensus_{tag}_summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"converged={outcome.converged} value={outcome.consensus_value} "
          f"time={outcome.sim_time_s}s final_r={outcome.final_r:.3f} qss_ok={outcome.qss_ok}")
    return [series, summary_path], summary


def _cmd_sweep_byzantine(args, params, out: Path, tag: str) -> tuple[list[Path], dict]:
    grid = _parse_grid(args.grid) if args.grid else [0.0, 0.1, 0.2, 0.3, 0.4]
    trials = args.trials or 15
    rates, times = byzantine_sweep(grid, params, trials, jobs=args.jobs)
    rate_path = write_csv(out / f"sweep-byzantine_rate_{tag}.csv", _SWEEP_HEADER, _sweep_rows(rates))
    time_path = write_csv(out / f"sweep-byzantine_time_{tag}.csv", _SWEEP_HEADER, _sweep_rows(times))
    summary = {"rates": {str(p.axis): p.mean for p in rates.points}}
    print("rates: " + ", ".join(f"{p.axis:.0%}={p.mean:.2f}" for p in rates.points))
    return [rate_path, time_path], summary


def _cmd_scale(args, params, out: Path, tag: str) -> tuple[list[Path], dict]:
    n_grid = _parse_grid(args.n_grid, int)
    trials = args.trials or 10
    comparison = scalability_sweep(n_grid, params, trials, jobs=args.jobs)
    path = write_csv(
        out / f"scale_{tag}.csv",
        ("n", "orchid_mean_s", "orchid_std_s", "pbft_model_s", "pow_s"),
        [
            (comparison.n_values[i], comparison.orchid_mean_s[i],
             comparison.orchid_std_s[i], comparison.pbft_model_s[i],
             comparison.pow_latency_s)
            for i in range(len(comparison.n_values))
        ],
    )
    summary = {
        "crossover_n": comparison.crossover_n,
        "messages_per_round_per_node": comparison.messages_per_round_per_node.tolist(),
    }
    print(f"crossover_n={comparison.crossover_n} "
          f"messages/round/n={comparison.messages_per_round_per_node[0]:.2f}")
    return [path], summary


def _cmd_table1(args, params, out: Path, tag: str) -> tuple[list[Path], dict]:
    trials = args.trials or 20
    report = table1_report(params, trials, jobs=args.jobs)
    path = write_csv(
        out / f"table1_{tag}.csv",
        ("byz_fraction", "median_conv_s", "final_r_mean", "final_r_std", "rate"),
        [
            (r.byz_fraction, r.median_time_s, r.final_r_mean, r.final_r_std, r.rate)
            for r in report.rows
        ],
    )
    summary = {"r_max": report.r_max, "c_star": report.c_star}
    print(report.to_text())
    return [path], summary


_COMMANDS = {
    "oscillate": _cmd_oscillate,
    "sweep-coupling": _cmd_sweep_coupling,
    "sweep-coherence": _cmd_sweep_coherence,
    "qss-fidelity": _cmd_qss_fidelity,
    "consensus": _cmd_consensus,
    "sweep-byzantine": _cmd_sweep_byzantine,
    "scale": _cmd_scale,
    "table1": _cmd_table1,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        params = _resolve_params(args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        tag = _timestamp()
        outputs, summary = _COMMANDS[args.command](args, params, out, tag)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    manifest = RunManifest(
        command=args.command,
        params_snapshot=params.to_dict(),
        seed=params.seed,
        outputs=[str(p) for p in outputs],
        wall_clock=time.perf_counter() - started,
        version=f"orchid-{__version__}",
        summary=summary,
    )
    manifest_path = manifest.write(out / f"{args.command}_{tag}_manifest.json")
    print(f"manifest: {manifest_path}")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
