"""ORCHID: a deterministic, seedable simulator for phase-synchronisation
consensus with coherence-weighted secret sharing.

The library is organised around six pieces: parameters, the small-world
topology, the Kuramoto oscillator layer, the secret-sharing layer, the
consensus state machine, and the experiment harness. Everything is driven
by numpy Generators derived from a single root seed, so any result can be
reproduced bit-for-bit.
"""

from .consensus import (
    Beacon,
    ConsensusOutcome,
    ConsensusWorld,
    NodeState,
    consensus_round,
    hash_value,
    init_world,
    majority,
    run_consensus,
)
from .experiments import (
    LatencyComparison,
    SweepPoint,
    SweepResult,
    Table1Report,
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
from .oscillator import (
    MeanField,
    OscillatorRun,
    PhaseState,
    binding_entropy,
    global_order_parameter,
    init_phase_state,
    local_mean_field,
    local_mean_fields,
    phase_step,
    run_oscillator,
    wrap_phases,
)
from .params import (
    OrchidParams,
    apply_overrides,
    load_params,
    theoretical_critical_coupling,
    validate,
)
from .qss import (
    FidelityCurve,
    SecretPolynomial,
    Share,
    apply_decoherence,
    fidelity_estimate,
    reconstruct,
    split_secret,
    threshold_scan,
)
from .rng import substream
from .topology import Topology, from_edge_list_text, generate_watts_strogatz

__version__ = "0.1.0"

__all__ = [
    "Beacon",
    "ConsensusOutcome",
    "ConsensusWorld",
    "FidelityCurve",
    "LatencyComparison",
    "MeanField",
    "NodeState",
    "OrchidParams",
    "OscillatorRun",
    "PhaseState",
    "SecretPolynomial",
    "Share",
    "SweepPoint",
    "SweepResult",
    "Table1Report",
    "Topology",
    "apply_decoherence",
    "apply_overrides",
    "binding_entropy",
    "byzantine_sweep",
    "coherence_sweep",
    "consensus_round",
    "coupling_sweep",
    "crossing_point",
    "fidelity_estimate",
    "from_edge_list_text",
    "generate_watts_strogatz",
    "global_order_parameter",
    "hash_value",
    "init_phase_state",
    "init_world",
    "load_params",
    "local_mean_field",
    "local_mean_fields",
    "majority",
    "pbft_latency_model",
    "phase_step",
    "qss_threshold_curve",
    "reconstruct",
    "run_consensus",
    "run_oscillator",
    "scalability_sweep",
    "split_secret",
    "steepest_interval",
    "substream",
    "table1_report",
    "theoretical_critical_coupling",
    "threshold_scan",
    "validate",
    "wrap_phases",
]
