"""Protocol configuration: every ORCHID constant in one immutable record.

OrchidParams is validated once and then shared read-only; all simulation
code receives it by reference and never mutates it.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class OrchidParams:
    """All protocol constants. See validate() for the invariants."""

    n: int = 30                      # node count
    mean_degree: int = 6             # target mean degree, even
    rewire_prob: float = 0.3         # Watts-Strogatz rewiring probability
    coupling: float = 3.0            # K, rad/s
    dt: float = 0.05                 # integration step, s
    binding_threshold: float = 0.75  # theta_b, local order parameter gate
    freq_std: float = 0.5            # sigma_omega, rad/s
    noise_std: float = 1.0           # sigma_eta, base decoherence noise, rad/s
    coherence_min: float = 0.7
    coherence_max: float = 1.0
    byz_fraction: float = 0.0        # fraction of Byzantine nodes
    step_budget: int = 600           # max simulation steps
    entropy_bins: int = 36           # histogram bins for phase entropy
    entropy_gate: float | None = None  # theta_H; commit also needs H < theta_H
    qss_k: int = 5                   # secret-sharing threshold
    qss_n: int = 10                  # secret-sharing share count
    prime: int = 2**31 - 1           # field modulus
    seed: int = 0                    # root RNG seed

    def replace(self, **changes) -> "OrchidParams":
        return dataclasses.replace(self, **changes)

    def byzantine_count(self) -> int:
        return int(self.byz_fraction * self.n)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit integers."""
    if m < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % p == 0:
            return m == p
    d = m - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def validate(params: OrchidParams) -> OrchidParams:
    """Check every invariant; return params unchanged or raise ValueError.

    The error message names the first violated invariant, in the order the
    checks appear below. Idempotent by construction.
    """
    p = params
    if p.n < 2:
        raise ValueError(f"n must be >= 2, got {p.n}")
    if p.mean_degree % 2 != 0:
        raise ValueError(f"mean_degree must be even, got {p.mean_degree}")
    if not 0 < p.mean_degree < p.n:
        raise ValueError(
            f"mean_degree must satisfy 0 < mean_degree < n, got {p.mean_degree} (n={p.n})"
        )
    if not 0.0 <= p.rewire_prob <= 1.0:
        raise ValueError(f"rewire_prob must be in [0, 1], got {p.rewire_prob}")
    if not 0.0 < p.binding_threshold <= 1.0:
        raise ValueError(f"binding_threshold must be in (0, 1], got {p.binding_threshold}")
    if p.dt <= 0.0:
        raise ValueError(f"dt must be > 0, got {p.dt}")
    if p.freq_std < 0.0:
        raise ValueError(f"freq_std must be >= 0, got {p.freq_std}")
    if p.noise_std < 0.0:
        raise ValueError(f"noise_std must be >= 0, got {p.noise_std}")
    if not 0.0 <= p.coherence_min <= p.coherence_max <= 1.0:
        raise ValueError(
            "coherence bounds must satisfy 0 <= coherence_min <= coherence_max <= 1, "
            f"got [{p.coherence_min}, {p.coherence_max}]"
        )
    if not 0.0 <= p.byz_fraction < 0.5:
        raise ValueError(f"byz_fraction must be in [0, 0.5), got {p.byz_fraction}")
    if p.n - p.byzantine_count() <= p.byzantine_count():
        raise ValueError(
            f"byz_fraction {p.byz_fraction} leaves no honest strict majority at n={p.n}"
        )
    if p.step_budget < 1:
        raise ValueError(f"step_budget must be >= 1, got {p.step_budget}")
    if p.entropy_bins < 2:
        raise ValueError(f"entropy_bins must be >= 2, got {p.entropy_bins}")
    if p.entropy_gate is not None and p.entropy_gate <= 0.0:
        raise ValueError(f"entropy_gate must be > 0 when set, got {p.entropy_gate}")
    if not 1 <= p.qss_k <= p.qss_n:
        raise ValueError(f"qss thresholds must satisfy 1 <= k <= n, got k={p.qss_k} n={p.qss_n}")
    if not _is_prime(p.prime):
        raise ValueError(f"prime must be prime, got {p.prime}")
    if p.prime <= p.qss_n:
        raise ValueError(f"prime must exceed qss_n, got prime={p.prime} qss_n={p.qss_n}")
    if not 0 <= p.seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {p.seed}")
    return p


def theoretical_critical_coupling(freq_std: float) -> float:
    """Critical coupling 2/(pi*g(0)) for a zero-mean normal frequency density.

    g(0) = 1/(freq_std*sqrt(2*pi)), so the result is 2*freq_std*sqrt(2*pi)/pi.
    Linear in freq_std.
    """
    if freq_std <= 0.0:
        raise ValueError(f"freq_std must be > 0, got {freq_std}")
    return 2.0 * freq_std * math.sqrt(2.0 * math.pi) / math.pi


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(OrchidParams)}


def _parse_field(name: str, text: str):
    """Parse one key=value string into the field's declared type."""
    if name not in _FIELD_TYPES:
        raise ValueError(f"unknown parameter {name!r}")
    text = text.strip()
    ftype = _FIELD_TYPES[name]
    if name == "entropy_gate":
        if text.lower() in ("none", ""):
            return None
        return float(text)
    if ftype == "int":
        return int(text)
    if ftype == "float":
        return float(text)
    raise ValueError(f"cannot parse parameter {name!r}")  # pragma: no cover


def apply_overrides(params: OrchidParams, overrides: dict[str, str]) -> OrchidParams:
    """Apply string-valued overrides (CLI --param or file entries)."""
    parsed = {k: _parse_field(k, v) for k, v in overrides.items()}
    return params.replace(**parsed)


def load_params(path: str | Path, base: OrchidParams | None = None) -> OrchidParams:
    """Load parameters from a flat key=value text file.

    One assignment per line; blank lines and '#' comments are ignored.
    Values use the same syntax as CLI --param overrides.
    """
    base = base if base is not None else OrchidParams()
    overrides: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        overrides[key.strip()] = value
    return apply_overrides(base, overrides)
