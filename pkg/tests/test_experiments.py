import numpy as np
import pytest

from rtsl.experiments import (
    HALF_LOG_2,
    DecayReport,
    WeylVector,
    decay_rate_fit,
    engineered_sequence,
    localization_report,
    spectrum_histogram,
    tree_decay_check,
    weyl_residual,
    weyl_residual_bound,
)
from rtsl.jacobi import TruncatedJacobi, tridiag_eigenvalues
from rtsl.randomness import BranchingDistribution, sample_sequence
from rtsl.tree import build_tree


UNIFORM23 = BranchingDistribution.uniform((2, 3))


def test_engineered_sequence_plants_run():
    seq = engineered_sequence(UNIFORM23, 3, 10, 5, 40, 7)
    assert np.all(seq.values[10:15] == 3)
    base = sample_sequence(UNIFORM23, 40, 7)
    mask = np.ones(40, dtype=bool)
    mask[10:15] = False
    assert np.array_equal(seq.values[mask], base.values[mask])


def test_engineered_sequence_validation():
    with pytest.raises(ValueError):
        engineered_sequence(UNIFORM23, 5, 0, 3, 20, 0)
    with pytest.raises(ValueError):
        engineered_sequence(UNIFORM23, 2, 15, 10, 20, 0)


def test_weyl_vector_window_and_norm():
    wv = WeylVector.build(4, 16, 0.7)
    assert wv.values.shape == (16,)
    assert np.linalg.norm(wv.values) == pytest.approx(1.0)
    ratios = wv.values[1:] / wv.values[:-1]
    np.testing.assert_allclose(ratios, np.exp(1j * 0.7), atol=1e-12)
    with pytest.raises(ValueError):
        WeylVector.build(-1, 16, 0.7)
    with pytest.raises(ValueError):
        WeylVector.build(4, 0, 0.7)


def test_weyl_residual_within_bound_constant_sequence():
    for E in (0.0, 1.0, 2.0 * np.sqrt(3.0)):
        for R in (16, 64, 256):
            omega = np.full(8 + R + 1, 3.0)
            res = weyl_residual(omega, E, 8, R, d_mu=3)
            assert res <= weyl_residual_bound(E, R, 3) + 1e-12


def test_weyl_residual_shrinks_with_run_length():
    omega = np.full(4 + 4096 + 1, 3.0)
    small = weyl_residual(omega, 1.0, 4, 4096, d_mu=3)
    large = weyl_residual(omega[: 4 + 64 + 1], 1.0, 4, 64, d_mu=3)
    assert small < large


def test_weyl_residual_validation():
    omega = np.full(40, 3.0)
    with pytest.raises(ValueError):
        weyl_residual(omega, 4.0, 0, 16, d_mu=3)  # |E| > 2 sqrt(3)
    with pytest.raises(ValueError):
        weyl_residual(omega, 1.0, 0, 64, d_mu=3)  # sequence too short
    with pytest.raises(ValueError):
        weyl_residual(omega, 1.0, -1, 16, d_mu=3)


def test_weyl_default_edge_from_sequence():
    omega = np.full(30, 2.0)
    # default d_mu = max value = 2; E = 3 exceeds 2 sqrt(2)
    with pytest.raises(ValueError):
        weyl_residual(omega, 3.0, 0, 16)
    assert weyl_residual(omega, 1.0, 0, 16) > 0


def test_spectrum_histogram_counts_and_extremes():
    rep = spectrum_histogram(UNIFORM23, 400, 3, 32)
    assert int(np.sum(rep["counts"])) == 400
    assert rep["bin_edges"].shape == (33,)
    band = 2.0 * np.sqrt(3.0)
    assert rep["band_edge"] == pytest.approx(band)
    assert -band <= rep["min_eigenvalue"] < rep["max_eigenvalue"] <= band
    assert 0.0 <= rep["empty_bin_fraction"] <= 1.0


def test_spectrum_histogram_matches_bisection_route():
    # LAPACK full-spectrum route vs the in-house Sturm bisection
    rep = spectrum_histogram(UNIFORM23, 300, 5, 16)
    seq = sample_sequence(UNIFORM23, 301, 5)
    T = TruncatedJacobi.from_sequence(seq, 300, start=1)
    evs = tridiag_eigenvalues(T)
    assert rep["min_eigenvalue"] == pytest.approx(float(evs[0]), abs=1e-8)
    assert rep["max_eigenvalue"] == pytest.approx(float(evs[-1]), abs=1e-8)


def test_spectrum_histogram_validation():
    with pytest.raises(ValueError):
        spectrum_histogram(UNIFORM23, 0, 1, 8)
    with pytest.raises(ValueError):
        spectrum_histogram(UNIFORM23, 50001, 1, 8)


def test_decay_fit_pure_exponential():
    u = np.exp(-0.3 * np.arange(60))
    fit = decay_rate_fit(u)
    assert fit.rate == pytest.approx(0.3, abs=1e-12)
    assert fit.residual < 1e-12
    assert fit.window == (0, 59)


def test_decay_fit_ignores_pre_peak_plateau():
    j = np.arange(80)
    u = np.minimum(1.0, np.exp(-0.25 * (j - 20.0)))
    fit = decay_rate_fit(u)
    assert fit.rate == pytest.approx(0.25, abs=1e-9)
    assert fit.window[0] == 20


def test_decay_fit_validation():
    with pytest.raises(ValueError):
        decay_rate_fit(np.zeros(30))
    with pytest.raises(ValueError):
        decay_rate_fit(np.ones(30))  # no amplitude variation
    with pytest.raises(ValueError):
        decay_rate_fit(np.exp(-np.arange(5.0)))  # too short
    with pytest.raises(ValueError):
        decay_rate_fit(np.ones((4, 4)))


def test_decay_report_ratio_guards():
    rep = DecayReport(rate=0.3, window=(0, 10), residual=0.0, eigenvalue=1.0, reference=0.0)
    assert not np.isfinite(rep.ratio) or rep.ratio == 0.0


def test_localization_report_fields():
    reports = localization_report(UNIFORM23, 400, 1, (0.9, 1.1))
    assert reports, "window should contain eigenvalues at n=400"
    for rep in reports:
        assert 0.9 <= rep.eigenvalue <= 1.1
        assert np.isfinite(rep.rate)
        assert rep.reference > 0


def test_localization_report_validation():
    with pytest.raises(ValueError):
        localization_report(UNIFORM23, 400, 1, (1.1, 0.9))
    with pytest.raises(ValueError):
        localization_report(UNIFORM23, 400, 1, (-0.05, 0.05))  # straddles zero
    with pytest.raises(ValueError):
        localization_report(UNIFORM23, 400, 1, (10.0, 11.0))  # outside band


def test_tree_decay_exact_half_log_two_lift():
    # all-2 branching with a pure exponential: every generation adds
    # exactly (1/2) log 2 to the decay rate
    t = build_tree([2] * 35, 35)
    u = np.exp(-0.3 * np.arange(36))
    rep = tree_decay_check(t, 0, 1, u, L_ref=0.3)
    assert rep["passed"]
    assert rep["tree_rate"] - rep["half_line_rate"] == pytest.approx(HALF_LOG_2, abs=1e-9)
    assert rep["bound"] == pytest.approx(0.3 + HALF_LOG_2 - 0.05)


def test_tree_decay_requires_depth():
    t = build_tree([2] * 10, 10)
    with pytest.raises(ValueError):
        tree_decay_check(t, 0, 1, np.exp(-np.arange(11.0)), L_ref=1.0)


def test_tree_decay_reports_fit_failure():
    t = build_tree([2] * 30, 30)
    rep = tree_decay_check(t, 0, 1, np.ones(31), L_ref=0.1)
    assert "error" in rep
    assert not rep["passed"]


def test_half_log_two_constant():
    assert HALF_LOG_2 == pytest.approx(0.5 * np.log(2.0))
