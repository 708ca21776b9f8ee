"""Kuramoto phase dynamics with coherence-scaled decoherence noise.

Each node i carries a phase phi_i, a natural frequency deviation omega_i
and a coherence level c_i. One synchronous step advances every phase by

    phi_i <- wrap(phi_i + dt * (omega_i + K * r_i * sin(psi_i - phi_i) + eta_i))

where (r_i, psi_i) is the local mean field over the node and its
neighbours, computed entirely from the pre-step phases, and
eta_i ~ N(0, ((1 - c_i) * noise_std)^2) is drawn fresh per node per step.
The noise term sits inside the dt bracket, i.e. the update is the literal
discrete rule, not an SDE discretisation.

The global order parameter r = |mean(exp(i*phi))| measures synchrony
(1 = locked, ~0 = incoherent) and the binding entropy is the Shannon
entropy of the phase histogram; the two move in opposition as the network
binds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import OrchidParams
from .topology import Topology, generate_watts_strogatz

TWO_PI = 2.0 * math.pi


@dataclass
class PhaseState:
    """Per-node oscillator state. Arrays are aligned by node index."""

    phases: np.ndarray       # phi_i in [0, 2*pi)
    frequencies: np.ndarray  # omega_i, rad/s
    coherences: np.ndarray   # c_i in [0, 1]

    @property
    def n(self) -> int:
        return len(self.phases)

    def copy(self) -> "PhaseState":
        return PhaseState(
            self.phases.copy(), self.frequencies.copy(), self.coherences.copy()
        )


@dataclass(frozen=True)
class MeanField:
    magnitude: float  # r in [0, 1]
    angle: float      # psi in [0, 2*pi)


def wrap_phases(phi: np.ndarray) -> np.ndarray:
    """Wrap angles into [0, 2*pi). Guards the float edge case where the
    modulo of a tiny negative rounds up to exactly 2*pi."""
    out = np.mod(phi, TWO_PI)
    out[out >= TWO_PI] = 0.0
    return out


def init_phase_state(params: OrchidParams, rng: np.random.Generator) -> PhaseState:
    """Draw the initial state: phases uniform on [0, 2*pi), frequencies
    zero-mean normal with std freq_std, coherences uniform on the
    configured range. Draw order is fixed (phases, frequencies,
    coherences) so streams stay reproducible."""
    phases = rng.uniform(0.0, TWO_PI, params.n)
    frequencies = rng.normal(0.0, params.freq_std, params.n)
    coherences = rng.uniform(params.coherence_min, params.coherence_max, params.n)
    return PhaseState(phases, frequencies, coherences)


def _neighbor_phasor_sums(phases: np.ndarray, topology: Topology) -> np.ndarray:
    """Sum of exp(i*phi_j) over each node's neighbours."""
    cos = np.cos(phases)
    sin = np.sin(phases)
    re = np.bincount(topology.flat_src, weights=cos[topology.flat_dst], minlength=topology.n)
    im = np.bincount(topology.flat_src, weights=sin[topology.flat_dst], minlength=topology.n)
    return re + 1j * im


def local_mean_fields(state: PhaseState, topology: Topology) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised local mean field for every node.

    Returns (r, psi) arrays where r_i * exp(i*psi_i) is the phasor mean
    over node i and its neighbours (the node itself is included).
    """
    z_self = np.exp(1j * state.phases)
    z = (z_self + _neighbor_phasor_sums(state.phases, topology)) / (topology.degrees + 1)
    return np.abs(z), wrap_phases(np.angle(z))


def local_mean_field(state: PhaseState, topology: Topology, i: int) -> MeanField:
    """Local mean field of a single node (see local_mean_fields)."""
    if not 0 <= i < state.n:
        raise IndexError(f"node index {i} out of range for n={state.n}")
    idx = list(topology.neighbors(i)) + [i]
    z = np.mean(np.exp(1j * state.phases[idx]))
    return MeanField(float(abs(z)), float(wrap_phases(np.array([np.angle(z)]))[0]))


def global_order_parameter(state: PhaseState) -> MeanField:
    """Global order parameter r*exp(i*psi) = mean over all nodes of exp(i*phi)."""
    if state.n == 0:
        raise ValueError("empty phase state")
    z = np.mean(np.exp(1j * state.phases))
    return MeanField(float(abs(z)), float(wrap_phases(np.array([np.angle(z)]))[0]))


def phase_step(
    state: PhaseState,
    topology: Topology,
    params: OrchidParams,
    rng: np.random.Generator,
) -> PhaseState:
    """One synchronous update of every phase.

    All local fields are evaluated on the pre-step phases, so the result is
    independent of any per-node evaluation order. Returns a new state; the
    input is untouched.
    """
    r, psi = local_mean_fields(state, topology)
    eta = (1.0 - state.coherences) * params.noise_std * rng.standard_normal(state.n)
    drift = state.frequencies + params.coupling * r * np.sin(psi - state.phases) + eta
    phases = wrap_phases(state.phases + params.dt * drift)
    return PhaseState(phases, state.frequencies, state.coherences)


def binding_entropy(state: PhaseState, bins: int) -> float:
    """Shannon entropy (nats) of the phase histogram over equal-width bins
    on [0, 2*pi). Ranges from 0 (all phases in one bin) to ln(bins)."""
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    counts, _ = np.histogram(state.phases, bins=bins, range=(0.0, TWO_PI))
    p = counts[counts > 0] / state.n
    return float(-np.sum(p * np.log(p)))


@dataclass
class OscillatorRun:
    """Time series of an oscillator-only run (no consensus machinery).

    Series have step_count + 1 entries; index 0 is the initial state.
    """

    r_series: np.ndarray
    psi_series: np.ndarray
    entropy_series: np.ndarray
    final_state: PhaseState
    trajectories: np.ndarray | None = None  # (steps+1, n) phases if recorded

    @property
    def r_max(self) -> float:
        return float(self.r_series.max())

    @property
    def final_r(self) -> float:
        return float(self.r_series[-1])


def run_oscillator(
    params: OrchidParams,
    rng: np.random.Generator,
    *,
    topology: Topology | None = None,
    steps: int | None = None,
    record_trajectories: bool = False,
) -> OscillatorRun:
    """Run the phase dynamics for a fixed number of steps and record the
    global order parameter, mean-field angle and binding entropy.

    A topology is generated from the stream unless one is supplied.
    """
    if topology is None:
        topology = generate_watts_strogatz(
            params.n, params.mean_degree, params.rewire_prob, rng
        )
    if steps is None:
        steps = params.step_budget
    state = init_phase_state(params, rng)
    r_series = np.empty(steps + 1)
    psi_series = np.empty(steps + 1)
    entropy_series = np.empty(steps + 1)
    traj = np.empty((steps + 1, params.n)) if record_trajectories else None

    def record(t: int, s: PhaseState) -> None:
        mf = global_order_parameter(s)
        r_series[t] = mf.magnitude
        psi_series[t] = mf.angle
        entropy_series[t] = binding_entropy(s, params.entropy_bins)
        if traj is not None:
            traj[t] = s.phases

    record(0, state)
    for t in range(1, steps + 1):
        state = phase_step(state, topology, params, rng)
        record(t, state)
    return OscillatorRun(r_series, psi_series, entropy_series, state, traj)
