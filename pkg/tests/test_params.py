import math

import pytest

from orchid import OrchidParams, apply_overrides, load_params, theoretical_critical_coupling, validate


def test_defaults_are_valid():
    p = OrchidParams()
    assert validate(p) is p


def test_validate_is_idempotent():
    p = validate(OrchidParams(n=25, byz_fraction=0.2))
    assert validate(p) is p


@pytest.mark.parametrize(
    "changes, fragment",
    [
        (dict(n=1), "n must be"),
        (dict(mean_degree=7), "mean_degree must be even"),
        (dict(mean_degree=30), "mean_degree"),
        (dict(rewire_prob=1.5), "rewire_prob"),
        (dict(binding_threshold=0.0), "binding_threshold"),
        (dict(binding_threshold=1.2), "binding_threshold"),
        (dict(dt=0.0), "dt"),
        (dict(freq_std=-1.0), "freq_std"),
        (dict(noise_std=-0.1), "noise_std"),
        (dict(coherence_min=0.9, coherence_max=0.8), "coherence"),
        (dict(coherence_max=1.1), "coherence"),
        (dict(byz_fraction=0.5), "byz_fraction"),
        (dict(step_budget=0), "step_budget"),
        (dict(entropy_bins=1), "entropy_bins"),
        (dict(entropy_gate=0.0), "entropy_gate"),
        (dict(qss_k=11), "qss"),
        (dict(qss_k=0), "qss"),
        (dict(prime=15), "prime must be prime"),
        (dict(prime=7), "prime must exceed qss_n"),
        (dict(seed=-1), "seed"),
    ],
)
def test_validate_names_the_violated_invariant(changes, fragment):
    with pytest.raises(ValueError, match=fragment):
        validate(OrchidParams(**changes))


def test_byzantine_count_majority_boundary():
    # floor(0.45 * 20) = 9 byzantine, 11 honest: still a strict majority
    p = validate(OrchidParams(n=20, byz_fraction=0.45))
    assert p.byzantine_count() == 9
    # the range bound keeps floor(f*n) below n/2 for every n
    assert validate(OrchidParams(n=3, byz_fraction=0.49)).byzantine_count() == 1


def test_critical_coupling_values():
    # 2 * sigma * sqrt(2*pi) / pi, evaluated by hand
    assert theoretical_critical_coupling(0.5) == pytest.approx(0.7978845608, abs=1e-9)
    assert theoretical_critical_coupling(1.0) == pytest.approx(1.5957691216, abs=1e-9)


def test_critical_coupling_is_linear():
    k1 = theoretical_critical_coupling(0.3)
    k2 = theoretical_critical_coupling(1.7)
    assert k2 / k1 == pytest.approx(1.7 / 0.3, rel=1e-12)


def test_critical_coupling_vanishes_in_the_small_spread_limit():
    assert theoretical_critical_coupling(1e-12) < 1e-11


def test_critical_coupling_rejects_nonpositive():
    with pytest.raises(ValueError):
        theoretical_critical_coupling(0.0)
    with pytest.raises(ValueError):
        theoretical_critical_coupling(-0.5)


def test_load_params_round_trip(tmp_path):
    path = tmp_path / "run.params"
    path.write_text(
        "# experiment configuration\n"
        "n = 40\n"
        "coupling = 2.5\n"
        "entropy_gate = 1.25\n"
        "seed = 99  # root stream\n"
        "\n"
    )
    p = load_params(path)
    assert p.n == 40
    assert p.coupling == 2.5
    assert p.entropy_gate == 1.25
    assert p.seed == 99
    # untouched fields keep their defaults
    assert p.mean_degree == OrchidParams().mean_degree


def test_load_params_rejects_garbage(tmp_path):
    path = tmp_path / "bad.params"
    path.write_text("coupling 2.5\n")
    with pytest.raises(ValueError, match="key=value"):
        load_params(path)


def test_apply_overrides_parses_types():
    p = apply_overrides(OrchidParams(), {"n": "50", "dt": "0.01", "entropy_gate": "none"})
    assert p.n == 50 and p.dt == 0.01 and p.entropy_gate is None


def test_apply_overrides_rejects_unknown_key():
    with pytest.raises(ValueError, match="unknown parameter"):
        apply_overrides(OrchidParams(), {"bogus": "1"})


def test_entropy_gate_optional_and_off_by_default():
    assert OrchidParams().entropy_gate is None
    p = validate(OrchidParams(entropy_gate=math.log(36)))
    assert p.entropy_gate == pytest.approx(math.log(36))
