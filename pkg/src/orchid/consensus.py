"""ORCHID consensus: phase-gated commitment over synchronous beacon rounds.

Every round, every node (honest, Byzantine, committed or not) beacons its
id, proposal value, phase and coherence to all neighbours; Byzantine nodes
redraw their proposal uniformly from {0..100} first. Phases then advance
one synchronous Kuramoto step. An uncommitted node whose local order
parameter has reached the binding threshold commits: honest nodes take the
majority value over the beacons they just received plus their own, deal
secret shares of a hash of that value to their neighbours, and keep
oscillating and beaconing so late binders do not lose the mean-field
signal. Byzantine nodes gate on the same threshold but commit to their own
current random value.

Convergence means every honest node committed to one identical value
within the step budget.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .oscillator import (
    PhaseState,
    binding_entropy,
    global_order_parameter,
    init_phase_state,
    local_mean_fields,
    phase_step,
)
from .params import OrchidParams
from .qss import Share, apply_decoherence, reconstruct, split_secret
from .topology import Topology, generate_watts_strogatz

VALUE_RANGE = 101  # proposal values live in {0..100}
DEFAULT_HONEST_VALUE = 42

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def hash_value(value: int, prime: int) -> int:
    """FNV-1a 64-bit fold of the value's decimal text, reduced mod prime."""
    h = _FNV_OFFSET
    for byte in str(int(value)).encode("ascii"):
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h % prime


def majority(values: Iterable[int]) -> int:
    """Most frequent value; ties break to the smallest value."""
    counts = Counter(values)
    if not counts:
        raise ValueError("majority of an empty collection")
    return max(counts.items(), key=lambda item: (item[1], -item[0]))[0]


@dataclass(frozen=True)
class Beacon:
    """One per-round broadcast message."""

    sender: int
    value: int
    phase: float
    coherence: float


@dataclass(frozen=True)
class NodeState:
    """Read-only snapshot of one node, assembled from the world arrays."""

    id: int
    value: int
    phase: float
    frequency: float
    coherence: float
    byzantine: bool
    committed: bool
    committed_value: int | None
    commit_step: int | None


@dataclass
class ConsensusWorld:
    """Mutable simulation state for one run."""

    state: PhaseState
    values: np.ndarray          # current proposal per node
    byzantine: np.ndarray       # bool mask
    committed: np.ndarray       # bool mask
    committed_values: np.ndarray  # -1 until committed
    commit_steps: np.ndarray      # -1 until committed
    entropy_bins: int = 36
    step: int = 0
    message_count: int = 0
    dealt_shares: dict[int, list[tuple[int, Share]]] = field(default_factory=dict)
    r_series: list[float] = field(default_factory=list)
    entropy_series: list[float] = field(default_factory=list)
    commit_fraction_series: list[float] = field(default_factory=list)
    messages_series: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.state.n

    def node(self, i: int) -> NodeState:
        committed = bool(self.committed[i])
        return NodeState(
            id=i,
            value=int(self.values[i]),
            phase=float(self.state.phases[i]),
            frequency=float(self.state.frequencies[i]),
            coherence=float(self.state.coherences[i]),
            byzantine=bool(self.byzantine[i]),
            committed=committed,
            committed_value=int(self.committed_values[i]) if committed else None,
            commit_step=int(self.commit_steps[i]) if committed else None,
        )

    def honest(self) -> np.ndarray:
        return ~self.byzantine

    def all_honest_committed(self) -> bool:
        return bool(self.committed[self.honest()].all())

    def _record(self) -> None:
        self.r_series.append(global_order_parameter(self.state).magnitude)
        self.entropy_series.append(binding_entropy(self.state, self.entropy_bins))
        self.commit_fraction_series.append(float(self.committed.mean()))
        self.messages_series.append(self.message_count)


def init_world(
    params: OrchidParams,
    topology: Topology,
    rng: np.random.Generator,
    honest_value: int = DEFAULT_HONEST_VALUE,
    split_honest: bool = False,
) -> ConsensusWorld:
    """Initial world: fresh phase state, Byzantine set drawn uniformly,
    honest nodes sharing one proposal (or split uniformly when requested).
    """
    state = init_phase_state(params, rng)
    n = params.n
    byzantine = np.zeros(n, dtype=bool)
    n_byz = params.byzantine_count()
    if n_byz:
        byzantine[rng.choice(n, size=n_byz, replace=False)] = True
    if split_honest:
        values = rng.integers(0, VALUE_RANGE, size=n)
    else:
        values = np.full(n, honest_value, dtype=np.int64)
    if n_byz:
        values[byzantine] = rng.integers(0, VALUE_RANGE, size=n_byz)
    world = ConsensusWorld(
        state=state,
        values=np.asarray(values, dtype=np.int64),
        byzantine=byzantine,
        committed=np.zeros(n, dtype=bool),
        committed_values=np.full(n, -1, dtype=np.int64),
        commit_steps=np.full(n, -1, dtype=np.int64),
        entropy_bins=params.entropy_bins,
    )
    world._record()  # step-0 row
    return world


def consensus_round(
    world: ConsensusWorld,
    params: OrchidParams,
    topology: Topology,
    rng: np.random.Generator,
) -> ConsensusWorld:
    """Advance the world by one synchronous round.

    Beacon emission, mean-field evaluation and the commit gate all use the
    round's pre-step phases; the phase update happens in between, so a
    node's commit decision reflects exactly what it saw in its mailbox.
    """
    world.step += 1
    n_byz = int(world.byzantine.sum())
    if n_byz:
        world.values[world.byzantine] = rng.integers(0, VALUE_RANGE, size=n_byz)
    # every node beacons to all neighbours, committed ones included
    world.message_count += int(topology.degrees.sum())

    pre_state = world.state
    r_local, _ = local_mean_fields(pre_state, topology)
    gate = r_local >= params.binding_threshold
    if params.entropy_gate is not None:
        gate &= binding_entropy(pre_state, params.entropy_bins) < params.entropy_gate

    world.state = phase_step(pre_state, topology, params, rng)

    for i in np.nonzero(gate & ~world.committed)[0]:
        i = int(i)
        world.committed[i] = True
        world.commit_steps[i] = world.step
        if world.byzantine[i]:
            world.committed_values[i] = world.values[i]
            continue
        beacons = [
            Beacon(j, int(world.values[j]), float(pre_state.phases[j]),
                   float(pre_state.coherences[j]))
            for j in topology.neighbors(i)
        ]
        chosen = majority([b.value for b in beacons] + [int(world.values[i])])
        world.committed_values[i] = chosen
        # deal shares of the committed value's hash, one per neighbour
        shares = split_secret(
            hash_value(chosen, params.prime), params.qss_k, params.qss_n, params.prime, rng
        )
        receivers = topology.neighbors(i)[: params.qss_n]
        world.dealt_shares[i] = list(zip(receivers, shares[: len(receivers)]))

    world._record()
    return world


@dataclass
class ConsensusOutcome:
    """Result of one full consensus run."""

    converged: bool
    consensus_value: int | None
    steps_to_converge: int | None  # max commit step over honest nodes
    message_count: int
    rounds_executed: int
    final_r: float
    qss_ok: bool | None  # None when the check could not be evaluated
    dt: float
    r_series: np.ndarray
    entropy_series: np.ndarray
    commit_fraction_series: np.ndarray
    messages_series: np.ndarray

    @property
    def sim_time_s(self) -> float | None:
        """Simulated wall-clock convergence time, steps * dt."""
        return None if self.steps_to_converge is None else self.steps_to_converge * self.dt


def _check_qss(
    world: ConsensusWorld,
    params: OrchidParams,
    consensus_value: int | None,
    rng: np.random.Generator,
) -> bool | None:
    """Post-run share check for the first committed honest dealer.

    Each distributed share is passed through the decoherence channel at
    its receiver's coherence; the check asks whether every k-subset of the
    perturbed shares still reconstructs the hash of the consensus value.
    Reported as None when no dealer exists, fewer than k shares were dealt,
    or no consensus value is defined.
    """
    if consensus_value is None or not world.dealt_shares:
        return None
    dealer = min(world.dealt_shares, key=lambda i: (world.commit_steps[i], i))
    dealt = world.dealt_shares[dealer]
    if len(dealt) < params.qss_k:
        return None
    expected = hash_value(consensus_value, params.prime)
    perturbed = [
        apply_decoherence(share, float(world.state.coherences[recv]), params.prime, rng)
        for recv, share in dealt
    ]
    return all(
        reconstruct(list(subset), params.qss_k, params.prime) == expected
        for subset in combinations(perturbed, params.qss_k)
    )


def run_consensus(
    params: OrchidParams,
    rng: np.random.Generator,
    *,
    honest_value: int = DEFAULT_HONEST_VALUE,
    split_honest: bool = False,
) -> ConsensusOutcome:
    """Run rounds until every honest node has committed or the budget is
    spent. The topology is generated from the stream, so one generator
    fully determines the run."""
    topology = generate_watts_strogatz(
        params.n, params.mean_degree, params.rewire_prob, rng
    )
    world = init_world(params, topology, rng, honest_value, split_honest)
    for _ in range(params.step_budget):
        consensus_round(world, params, topology, rng)
        if world.all_honest_committed():
            break

    honest = world.honest()
    all_committed = world.all_honest_committed()
    honest_values = set(world.committed_values[honest].tolist()) if all_committed else set()
    converged = all_committed and len(honest_values) == 1
    consensus_value = honest_values.pop() if converged else None
    steps = int(world.commit_steps[honest].max()) if all_committed else None
    return ConsensusOutcome(
        converged=converged,
        consensus_value=consensus_value,
        steps_to_converge=steps,
        message_count=world.message_count,
        rounds_executed=world.step,
        final_r=world.r_series[-1],
        qss_ok=_check_qss(world, params, consensus_value, rng),
        dt=params.dt,
        r_series=np.array(world.r_series),
        entropy_series=np.array(world.entropy_series),
        commit_fraction_series=np.array(world.commit_fraction_series),
        messages_series=np.array(world.messages_series, dtype=np.int64),
    )
