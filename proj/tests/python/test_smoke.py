import math

import pytest

import chainlab


def test_bessel_reference_values():
    assert chainlab.bessel_j(0, 1.0) == pytest.approx(0.7651976865579665514, abs=1e-14)
    assert chainlab.bessel_j(5, 12.3) == pytest.approx(-0.008405035965524805019, abs=1e-14)
    assert chainlab.bessel_j(-3, 400.0) == pytest.approx(-0.009609849140972761494, abs=1e-14)


def test_bessel_row_matches_single_values():
    row = chainlab.bessel_row(10, 7.5)
    assert len(row) == 11
    for n, v in enumerate(row):
        assert v == pytest.approx(chainlab.bessel_j(n, 7.5), abs=1e-15)


def test_evolve_delta_gives_kernel():
    q = chainlab.evolve(chainlab.LatticeWindow.delta(), omega1=1.0, t=1.0, window=(-2, 2))
    assert q.offset == -2
    assert q.values[2] == pytest.approx(chainlab.bessel_j(0, 2.0), abs=1e-14)
    assert q.values[1] == pytest.approx(q.values[3], abs=1e-15)


def test_evolve_rejects_nonfinite_time():
    with pytest.raises(ValueError):
        chainlab.evolve(chainlab.LatticeWindow.delta(), t=math.nan)


def test_gamma_and_envelope():
    assert chainlab.gamma() == pytest.approx(3.591121476668622, abs=1e-12)
    assert chainlab.upper_envelope(1.0, 100.0, 1.0) == pytest.approx(28.799707000893208, abs=1e-10)


def test_verlet_agrees_with_propagator():
    q0 = chainlab.LatticeWindow(-2, [0.1, -0.5, 1.0, 0.3, 0.2])
    exact = chainlab.evolve(q0, omega1=1.0, t=2.0, window=(-4, 4))
    approx = chainlab.verlet(q0, 1.0, 2.0, 2.5e-4, 256, (-4, 4))
    for a, b in zip(exact.values, approx.values):
        assert a == pytest.approx(b, abs=1e-6)


def test_report_shape():
    rep = chainlab.gaussian_sup(n_samples=500)
    assert rep["report_version"] == chainlab.REPORT_VERSION
    assert rep["metrics"]["bound"] == pytest.approx(0.6915907199966465, abs=1e-12)
    assert isinstance(rep["passed"], bool)


def test_suite_single_criterion():
    rep = chainlab.run_suite(only=["c01_bessel_accuracy"])
    assert rep["passed"] is True


def test_adversarial_is_reproducible():
    a = chainlab.adversarial_growth(1000.0)
    b = chainlab.adversarial_growth(1000.0)
    assert a == b
    assert a["metrics"]["ratio_main_term"] == pytest.approx(1.0, abs=1e-2)
