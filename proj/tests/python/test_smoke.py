import math

import pytest

import qsv


def test_strategy_constants():
    strategy = qsv.build_strategy(3)
    assert strategy.d == 3
    assert abs(strategy.lambda2 - 0.25) <= 1e-9
    assert abs(strategy.delta_eps_coeff - 0.75) <= 1e-9
    assert strategy.probabilities == pytest.approx([0.25] * 4)


def test_mub_shape_and_unbiasedness():
    mubs = qsv.build_mub(3)
    assert mubs.d == 3
    bases = mubs.bases
    assert len(bases) == 4
    u = bases[1][0]
    w = bases[2][0]
    overlap = abs(sum(a.conjugate() * b for a, b in zip(u, w))) ** 2
    assert overlap == pytest.approx(1.0 / 3.0, abs=1e-10)


def test_min_copies_and_confidence():
    assert qsv.min_copies(0.08, 0.05, 0.25) == 50
    delta = qsv.confidence_delta_rate(1190, 0.9563, 0.08, 0.25)
    assert 0.040 <= delta <= 0.050
    eps = qsv.solve_epsilon_rate(1190, 0.9563, 0.05, 0.25)
    assert eps == pytest.approx(0.08, abs=0.002)
    assert qsv.asymptotic_epsilon(0.9568, 0.25) == pytest.approx(0.0576, abs=1e-12)


def test_device_and_simulation_determinism():
    strategy = qsv.build_strategy(3)
    device = qsv.build_device(3, [1, 1, 1], qsv.NoiseChannel.white(0.9352))
    assert device.fidelity == pytest.approx(0.9424, abs=1e-12)
    assert qsv.pass_probability(device, strategy) == pytest.approx(0.9568, abs=1e-12)

    a = qsv.run_copies(device, strategy, 500, seed=42, trial=0)
    b = qsv.run_copies(device, strategy, 500, seed=42, trial=0)
    assert a.cumulative_passes == b.cumulative_passes
    assert a.copies() == 500
    rate = a.passes_at(500) / 500.0
    assert 0.85 <= rate <= 1.0


def test_analysis_curve_matches_closed_form():
    strategy = qsv.build_strategy(3)
    ideal = qsv.build_device(3, [1, 1, 1], qsv.NoiseChannel.none())
    ledger = qsv.run_copies(ideal, strategy, 200, seed=1)
    curve = qsv.analyze_ledger(ledger, 0.08, 0.05, strategy.lambda2)
    for point in curve[::25]:
        assert point.m == point.n
        expected = (4.0 / 3.0) * (1.0 - 0.05 ** (1.0 / point.n))
        assert point.epsilon == pytest.approx(expected, rel=1e-6)


def test_fit_scaling_power_law():
    points = [(n, 2.0 / n) for n in range(10, 2000, 37)]
    fit = qsv.fit_scaling(points, 1, 10000)
    assert fit.slope == pytest.approx(-1.0, abs=1e-9)
    assert qsv.slope_sigma_excess(-0.5497, 0.0002, -0.5) == pytest.approx(248.5, abs=1e-9)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(qsv.QsvError):
        qsv.build_mub(4)
    with pytest.raises(qsv.QsvError):
        qsv.kl_divergence(1.5, 0.5)
