import math
from itertools import combinations

import numpy as np
import pytest
from scipy import stats

from orchid import (
    SecretPolynomial,
    Share,
    apply_decoherence,
    fidelity_estimate,
    reconstruct,
    split_secret,
    substream,
    threshold_scan,
)

MERSENNE_31 = 2**31 - 1


def test_constant_polynomial_gives_identical_shares():
    shares = split_secret(9, 1, 6, 13, substream(0, 0))
    assert [s.y for s in shares] == [9] * 6


def test_hand_evaluated_polynomial_and_reconstruction():
    # p(x) = 5 + 3x mod 13: p(1)=8, p(2)=11, p(3)=1
    poly = SecretPolynomial((5, 3), 13)
    assert [poly.evaluate(x) for x in (1, 2, 3)] == [8, 11, 1]
    assert reconstruct([Share(1, 8), Share(2, 11)], 2, 13) == 5
    assert reconstruct([Share(2, 11), Share(3, 1)], 2, 13) == 5


def test_reconstruct_single_share_threshold_one():
    assert reconstruct([Share(3, 7)], 1, 13) == 7


def test_reconstruct_uses_first_k_by_ascending_x():
    # with k=2, adding a third share must not change the result
    base = reconstruct([Share(1, 8), Share(2, 11)], 2, 13)
    assert reconstruct([Share(3, 1), Share(1, 8), Share(2, 11)], 2, 13) == base


def test_reconstruct_input_validation():
    with pytest.raises(ValueError, match="duplicate"):
        reconstruct([Share(1, 8), Share(1, 9)], 2, 13)
    with pytest.raises(ValueError, match="at least"):
        reconstruct([Share(1, 8)], 2, 13)


def test_split_input_validation():
    rng = substream(0, 0)
    with pytest.raises(ValueError):
        split_secret(13, 2, 3, 13, rng)  # secret outside field
    with pytest.raises(ValueError):
        split_secret(5, 4, 3, 13, rng)  # k > n


def test_bit_flip_breaks_reconstruction():
    # flipping bit 0 of share (1, 8) makes the interpolant miss the secret
    assert reconstruct([Share(1, 8 ^ 1), Share(2, 11)], 2, 13) != 5


@pytest.mark.parametrize("prime", [13, 257, MERSENNE_31])
@pytest.mark.parametrize("k,n", [(1, 3), (2, 5), (3, 6), (5, 8), (8, 8)])
def test_round_trip_every_subset(prime, k, n):
    """Brute-force oracle: every k-subset of shares reconstructs exactly."""
    rng = substream(42, prime % 1000, k, n)
    for _ in range(20):
        secret = int(rng.integers(0, prime))
        shares = split_secret(secret, k, n, prime, rng)
        for subset in combinations(shares, k):
            assert reconstruct(list(subset), k, prime) == secret


def test_share_values_are_marginally_uniform():
    # chi-square over the 13 field values, 1e4 samples
    rng = substream(7, 0)
    samples = []
    while len(samples) < 10_000:
        samples.extend(s.y for s in split_secret(int(rng.integers(0, 13)), 2, 2, 13, rng))
    counts = np.bincount(np.array(samples[:10_000]), minlength=13)
    assert stats.chisquare(counts).pvalue > 1e-3


# ---------------------------------------------------------------- decoherence


def test_full_coherence_is_identity():
    share = Share(4, 123456789)
    out = apply_decoherence(share, 1.0, MERSENNE_31, substream(0, 0))
    assert out == share


def test_flip_count_floor_zero_leaves_share_alone():
    # B = 30 for y = 2^30, so b = floor(0.01 * 30) = 0 at c = 0.9
    share = Share(1, 2**30)
    out = apply_decoherence(share, 0.9, MERSENNE_31, substream(0, 0))
    assert out == share


def test_flip_count_floor_two_always_perturbs():
    # b = floor(0.09 * 30) = 2 at c = 0.7: two distinct XOR flips cannot cancel
    rng = substream(3, 0)
    for _ in range(100):
        y = int(rng.integers(2**30, MERSENNE_31))
        out = apply_decoherence(Share(1, y), 0.7, MERSENNE_31, rng)
        assert out.y != y
        assert 0 <= out.y < MERSENNE_31


def test_binomial_model_identity_and_full_flip():
    share = Share(2, 0b1011)
    assert apply_decoherence(share, 1.0, MERSENNE_31, substream(0, 0), "binomial") == share
    # at c=0 every bit position 0..3 flips with probability 1: 0b1011 -> 0b0100
    out = apply_decoherence(share, 0.0, MERSENNE_31, substream(0, 0), "binomial")
    assert out.y == 0b0100


def test_unknown_model_rejected():
    with pytest.raises(ValueError):
        apply_decoherence(Share(1, 5), 0.5, 13, substream(0, 0), "gaussian")


# ---------------------------------------------------------------- fidelity


def test_fidelity_is_exactly_one_at_full_coherence():
    assert fidelity_estimate(5, 10, 1.0, 30, MERSENNE_31, substream(1, 0)) == 1.0


def test_fidelity_band_edges():
    rng = substream(2, 0)
    assert fidelity_estimate(5, 10, 0.90, 60, MERSENNE_31, rng) >= 0.95
    assert fidelity_estimate(5, 10, 0.60, 60, MERSENNE_31, rng) <= 0.05


def test_threshold_scan_detects_the_transition():
    grid = [round(0.50 + 0.01 * i, 2) for i in range(51)]
    curve = threshold_scan(5, 10, grid, 60, MERSENNE_31, substream(4, 0))
    assert curve.threshold is not None
    assert 0.78 <= curve.threshold <= 0.86
    assert curve.fidelity[0] <= 0.05 and curve.fidelity[-1] == 1.0


def test_threshold_scan_monotone_with_one_point_slack():
    grid = [round(0.50 + 0.02 * i, 2) for i in range(26)]
    curve = threshold_scan(5, 10, grid, 40, MERSENNE_31, substream(5, 0))
    fid = curve.fidelity
    assert all(fid[i + 2] >= fid[i] - 1e-9 for i in range(len(fid) - 2))


def test_threshold_absent_when_curve_never_crosses():
    grid = [round(0.95 + 0.01 * i, 2) for i in range(6)]
    curve = threshold_scan(5, 10, grid, 20, MERSENNE_31, substream(6, 0))
    assert curve.threshold is None


def test_threshold_is_nondecreasing_in_k():
    grid = [round(0.70 + 0.01 * i, 2) for i in range(31)]
    thresholds = []
    for k in range(3, 8):
        curve = threshold_scan(k, 10, grid, 40, MERSENNE_31, substream(8, k))
        assert curve.threshold is not None
        thresholds.append(curve.threshold)
    assert all(b >= a for a, b in zip(thresholds, thresholds[1:]))


def test_threshold_scan_rejects_bad_grid():
    with pytest.raises(ValueError):
        threshold_scan(5, 10, [0.9, 0.8], 10, MERSENNE_31, substream(0, 0))


def test_scan_is_deterministic():
    grid = [0.6, 0.8, 1.0]
    a = threshold_scan(5, 10, grid, 10, MERSENNE_31, substream(9, 0))
    b = threshold_scan(5, 10, grid, 10, MERSENNE_31, substream(9, 0))
    assert np.array_equal(a.fidelity, b.fidelity)
    assert a.threshold == b.threshold
