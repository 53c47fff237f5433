"""Smoke tests for the mhrev extension module."""

import math

import numpy as np
import pytest

import mhrev

Q_A = np.array([[-2.0, 2.0], [1.0, -1.0]])
HALF = np.array([0.5, 0.5])


def test_build_m1_m2():
    m1 = mhrev.build_m1(Q_A, HALF)
    m2 = mhrev.build_m2(Q_A, HALF)
    assert np.allclose(m1, [[-1, 1], [1, -1]])
    assert np.allclose(m2, [[-2, 2], [2, -2]])
    assert mhrev.is_reversible(m1, HALF, 1e-12)
    assert mhrev.peskun_dominates(m2, m1)


def test_stationary_and_reversal():
    pi = mhrev.stationary_distribution(Q_A)
    assert np.allclose(pi, [1 / 3, 2 / 3])
    rev = mhrev.time_reversal(Q_A, HALF)
    assert np.allclose(rev, [[-1, 1], [2, -2]])
    qbar = mhrev.additive_reversiblization(Q_A, HALF)
    assert np.allclose(qbar, [[-1.5, 1.5], [1.5, -1.5]])


def test_projection_distances():
    m1 = mhrev.build_m1(Q_A, HALF)
    assert mhrev.l1_distance(Q_A, m1, HALF) == pytest.approx(0.5)
    assert mhrev.distance_to_reversible(Q_A, HALF) == pytest.approx(0.5)


def test_spectral_gap_and_relaxation():
    m1 = mhrev.build_m1(Q_A, HALF)
    m2 = mhrev.build_m2(Q_A, HALF)
    assert mhrev.spectral_gap(m1, HALF) == pytest.approx(2.0)
    assert mhrev.spectral_gap(m2, HALF) == pytest.approx(4.0)
    assert mhrev.relaxation_time(m2, HALF) == pytest.approx(0.25)
    values, vectors = mhrev.reversible_spectrum(m1, HALF)
    assert np.allclose(values, [0.0, 2.0])
    assert vectors.shape == (2, 2)


def test_hitting_and_capacity():
    m1 = mhrev.build_m1(Q_A, HALF)
    m2 = mhrev.build_m2(Q_A, HALF)
    assert mhrev.expected_hitting_times(m1, [1])[0] == pytest.approx(1.0)
    assert mhrev.hitting_laplace(m2, [1], 1.0)[0] == pytest.approx(2 / 3)
    assert mhrev.capacity(m1, HALF, [0], [1]) == pytest.approx(0.5)
    assert mhrev.commute_time(m2, 0, 1) == pytest.approx(1.0)
    assert mhrev.average_hitting_time(m1, HALF) == pytest.approx(0.5)


def test_mixing_and_separation():
    m1 = mhrev.build_m1(Q_A, HALF)
    assert mhrev.tv_mixing_time(m1, HALF, 0.25) == pytest.approx(math.log(2) / 2, abs=1e-7)
    assert mhrev.separation_distance(m1, HALF, 0, math.log(2) / 2) == pytest.approx(0.5, abs=1e-9)
    p = mhrev.transition_semigroup(m1, math.log(2) / 2)
    assert np.allclose(p, [[0.75, 0.25], [0.25, 0.75]])


def test_variance_and_rate_function():
    m1 = mhrev.build_m1(Q_A, HALF)
    m2 = mhrev.build_m2(Q_A, HALF)
    f = np.array([1.0, -1.0])
    assert mhrev.asymptotic_variance(m1, HALF, f) == pytest.approx(1.0)
    assert mhrev.asymptotic_variance(m2, HALF, f) == pytest.approx(0.5)
    nu = np.array([0.9, 0.1])
    closed = mhrev.rate_function_reversible(m1, HALF, nu)
    variational = mhrev.rate_function_variational(m1, nu)
    assert variational == pytest.approx(closed, abs=1e-8)


def test_bd_sst():
    q3 = np.array([[-1.0, 1.0, 0.0], [2.0, -3.0, 1.0], [0.0, 3.0, -3.0]])
    uniform = np.full(3, 1 / 3)
    m1 = mhrev.build_m1(q3, uniform)
    rates = mhrev.bd_sst_rates(m1, uniform)
    assert np.allclose(rates, [1.0, 3.0])
    assert mhrev.sst_mean(rates) == pytest.approx(4 / 3)
    assert mhrev.sst_laplace(rates, 1.0) == pytest.approx(0.375)


def test_mis_example():
    p = np.full(3, 1 / 3)
    mu = np.array([0.5, 1 / 3, 1 / 6])
    spectrum = mhrev.mis_spectrum(p, mu)
    assert np.allclose(spectrum["gamma"], [1 / 3, 1 / 6])
    assert np.allclose(spectrum["beta"], [-1 / 6, -1.0])
    assert np.allclose(spectrum["m2_eigenvalues"], [-7 / 6, -2.0])
    check = mhrev.mis_cross_validate(p, mu)
    assert check["max_eigenvalue_gap"] <= 1e-10
    assert check["max_residual"] <= 1e-10


def test_errors_raise_value_error():
    with pytest.raises(ValueError):
        mhrev.stationary_distribution(np.array([[-1.0, 2.0], [1.0, -1.0]]))
    with pytest.raises(ValueError):
        mhrev.build_m1(Q_A, np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        mhrev.commute_time(Q_A, 1, 1)
