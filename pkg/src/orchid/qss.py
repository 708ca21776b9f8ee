"""Coherence-weighted (k, n) Shamir secret sharing over a prime field.

The dealer encodes a secret as the constant term of a random degree-(k-1)
polynomial and hands out evaluations at x = 1..n. Transmission decoherence
perturbs a share by XOR-flipping bits of its y value: at coherence c, the
flip count is floor((1-c)^2 * B) where B = floor(log2(max(y, 1))) is the
index of the highest bit. Below a coherence threshold the flip count
becomes nonzero, reconstruction sees corrupted points and the recovered
secret is garbage; above it shares pass through untouched and recovery is
exact. With a 31-bit modulus that threshold sits near c = 1 - 1/sqrt(30),
about 0.82.

A per-bit binomial channel ("binomial" model) is available for
sensitivity analysis; it smears the transition instead of stepping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

FlipModel = Literal["floor", "binomial"]


@dataclass(frozen=True)
class Share:
    x: int  # share index, 1 <= x < prime
    y: int  # polynomial evaluation, possibly perturbed, 0 <= y < prime


@dataclass(frozen=True)
class SecretPolynomial:
    """Dealer polynomial; coefficients[0] is the secret."""

    coefficients: tuple[int, ...]
    prime: int

    def evaluate(self, x: int) -> int:
        y = 0
        for a in reversed(self.coefficients):
            y = (y * x + a) % self.prime
        return y


def split_secret(
    secret: int, k: int, n: int, prime: int, rng: np.random.Generator
) -> list[Share]:
    """Deal n shares of `secret` with reconstruction threshold k.

    The non-constant coefficients are uniform field elements.
    """
    if not 0 <= secret < prime:
        raise ValueError(f"secret must be in [0, prime), got {secret}")
    if not 1 <= k <= n < prime:
        raise ValueError(f"need 1 <= k <= n < prime, got k={k} n={n} prime={prime}")
    coeffs = (secret,) + tuple(int(rng.integers(0, prime)) for _ in range(k - 1))
    poly = SecretPolynomial(coeffs, prime)
    return [Share(x, poly.evaluate(x)) for x in range(1, n + 1)]


def reconstruct(shares: Sequence[Share], k: int, prime: int) -> int:
    """Lagrange interpolation at x = 0 over the first k shares by ascending x.

    Requires at least k shares with pairwise-distinct x values.
    """
    if len(shares) < k:
        raise ValueError(f"need at least {k} shares, got {len(shares)}")
    xs = [s.x for s in shares]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate share x values")
    points = sorted(shares, key=lambda s: s.x)[:k]
    secret = 0
    for j, sj in enumerate(points):
        num = 1
        den = 1
        for m, sm in enumerate(points):
            if m == j:
                continue
            num = num * (-sm.x) % prime
            den = den * (sj.x - sm.x) % prime
        secret = (secret + sj.y * num * pow(den, -1, prime)) % prime
    return secret


def _bit_span(y: int) -> int:
    """Index of the highest bit of y, i.e. floor(log2(max(y, 1)))."""
    return max(y, 1).bit_length() - 1


def apply_decoherence(
    share: Share,
    coherence: float,
    prime: int,
    rng: np.random.Generator,
    model: FlipModel = "floor",
) -> Share:
    """Pass a share through the decoherence channel at the given coherence.

    floor model: exactly floor((1-c)^2 * B) distinct bit positions in
    [0, B] are flipped, B being the highest bit index of y. binomial
    model: each of the B+1 positions flips independently with probability
    min(1, (1-c)^2). The result is reduced mod prime so it stays a field
    element. c = 1 always returns the share unchanged.
    """
    y = share.y
    span = _bit_span(y)
    if model == "floor":
        b = math.floor((1.0 - coherence) ** 2 * span)
        if b == 0:
            return share
        positions = rng.choice(span + 1, size=b, replace=False)
        for pos in positions:
            y ^= 1 << int(pos)
    elif model == "binomial":
        p_flip = min(1.0, (1.0 - coherence) ** 2)
        if p_flip > 0.0:
            flips = rng.random(span + 1) < p_flip
            for pos in np.nonzero(flips)[0]:
                y ^= 1 << int(pos)
        if y == share.y:
            return share
    else:
        raise ValueError(f"unknown flip model {model!r}")
    return Share(share.x, y % prime)


def fidelity_estimate(
    k: int,
    n: int,
    coherence: float,
    trials: int,
    prime: int,
    rng: np.random.Generator,
    model: FlipModel = "floor",
) -> float:
    """Monte Carlo estimate of Pr[reconstructed secret == secret].

    Each trial deals a uniform random secret, perturbs every share at the
    given coherence, then reconstructs from k shares chosen uniformly
    without replacement.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    hits = 0
    for _ in range(trials):
        secret = int(rng.integers(0, prime))
        shares = [
            apply_decoherence(s, coherence, prime, rng, model)
            for s in split_secret(secret, k, n, prime, rng)
        ]
        chosen = [shares[i] for i in rng.choice(n, size=k, replace=False)]
        if reconstruct(chosen, k, prime) == secret:
            hits += 1
    return hits / trials


@dataclass(frozen=True)
class FidelityCurve:
    """Fidelity vs coherence, with the detected 0.5-crossing threshold."""

    coherence: np.ndarray
    fidelity: np.ndarray
    sem: np.ndarray
    trials: int
    k: int
    n: int
    prime: int
    model: str
    threshold: float | None  # c*; None when the curve never crosses 0.5 upward


def threshold_scan(
    k: int,
    n: int,
    coherence_grid: Sequence[float],
    trials: int,
    prime: int,
    rng: np.random.Generator,
    model: FlipModel = "floor",
) -> FidelityCurve:
    """Estimate fidelity on an ascending coherence grid and locate c*.

    c* is the midpoint of the first grid interval where fidelity crosses
    0.5 upward; None if there is no such crossing.
    """
    grid = np.asarray(coherence_grid, dtype=float)
    if np.any(np.diff(grid) <= 0) or grid.min() < 0.0 or grid.max() > 1.0:
        raise ValueError("coherence grid must be strictly ascending within [0, 1]")
    fidelities = np.empty(len(grid))
    sems = np.empty(len(grid))
    for idx, c in enumerate(grid):
        outcomes = np.empty(trials)
        for t in range(trials):
            outcomes[t] = fidelity_estimate(k, n, float(c), 1, prime, rng, model)
        fidelities[idx] = outcomes.mean()
        sems[idx] = outcomes.std(ddof=1) / math.sqrt(trials) if trials > 1 else 0.0
    threshold = None
    for idx in range(len(grid) - 1):
        if fidelities[idx] < 0.5 <= fidelities[idx + 1]:
            threshold = float((grid[idx] + grid[idx + 1]) / 2.0)
            break
    return FidelityCurve(grid, fidelities, sems, trials, k, n, prime, model, threshold)
