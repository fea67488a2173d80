"""Unit tests for the flux integrator and the measurable-signal regressor."""

import math

import numpy as np
import pytest

from maglev_sensorless import _core
from maglev_sensorless.drem import flux_estimate
from maglev_sensorless.harness import Scenario, run
from maglev_sensorless.regressor import (
    PeboState,
    RegressorPipeline,
    RegressorSample,
    SwapSignals,
    omega,
    pebo_step,
    regression_residual,
)

M, K, G, R, MU = 0.0844, 1.0, 9.81, 2.52, 10.0


# -- flux integrator ----------------------------------------------------------

def test_pebo_integrates_the_voltage_balance():
    st = PeboState(psi=0.2)
    st = pebo_step(st, i=0.5, u=2.0, R=R, dt=0.1)
    assert st.psi == pytest.approx(0.2 + (2.0 - R * 0.5) * 0.1, rel=1e-14)


def test_pebo_input_validation():
    with pytest.raises(ValueError):
        pebo_step(PeboState(), math.nan, 0.0, R, 1e-3)
    with pytest.raises(ValueError):
        pebo_step(PeboState(), 0.0, 0.0, R, -1.0)


def test_flux_error_equals_estimate_error():
    # lambda = psi + eta and lambda_hat = psi + eta_hat share psi, so
    # e_lambda = eta_hat - eta identically
    psi, eta, eta_hat = 0.77, 0.01, 1e-4
    lam = psi + eta
    assert flux_estimate(psi, eta_hat) - lam == pytest.approx(eta_hat - eta, abs=1e-16)


# -- regression bookkeeping ---------------------------------------------------

def test_omega_monomials():
    assert np.allclose(omega(2.0), [2.0, 4.0, 8.0, 16.0, 32.0])
    assert not omega(0.0).any()


def test_regression_residual_is_linear_in_z():
    s = RegressorSample(z=1.0, phi=np.ones(5), z0=0.0, phi0=np.zeros(5))
    eta = 0.1
    assert regression_residual(s, eta) == pytest.approx(1.0 - omega(eta).sum())


def test_swap_signal_bank_seeds_the_decay_corrector():
    bank = SwapSignals(i0=0.3, mu=MU)
    assert bank.states[_core.B_DEC] == pytest.approx(MU * 0.3)
    with pytest.raises(ValueError):
        SwapSignals(states=np.zeros(3))


# -- derivative-filter exactness ---------------------------------------------

def _w_of_cos(t, mu):
    # mu/(p+mu) applied to cos(t) from zero state
    return mu * (mu * math.cos(t) + math.sin(t)) / (1 + mu * mu) \
        - mu * mu * math.exp(-mu * t) / (1 + mu * mu)


def _w_of_sin(t, mu):
    # mu/(p+mu) applied to sin(t) from zero state
    return mu * (mu * math.sin(t) - math.cos(t) + math.exp(-mu * t)) / (1 + mu * mu)


@pytest.mark.parametrize("cur,dcur_filtered", [
    (math.sin, _w_of_cos),                       # i(0) = 0
    (math.cos, lambda t, mu: -_w_of_sin(t, mu)), # i(0) = 1: corrector must act
])
def test_filtered_current_derivative_is_exact(cur, dcur_filtered):
    # om1 must equal the low-pass of di/dt including the analytic
    # initial-condition correction, with no numerical differentiation
    pipe = RegressorPipeline(M, K, G, R, mu=MU, i0=cur(0.0))
    dt, T = 1e-4, 1.0
    n = round(T / dt)
    for _ in range(n):
        pipe.step(cur, 0.0, 0.0, dt)
    pipe.sample(cur, 0.0, 0.0)
    assert pipe.diagnostics["om1"] == pytest.approx(dcur_filtered(T, MU), abs=1e-9)


# -- end-to-end identity ------------------------------------------------------

def _closed_loop(eta, duration=4.0, **kw):
    return run(Scenario(reference="sin", mode="sensorless", eta=eta,
                        duration=duration, **kw))


def test_raw_polynomial_identity_holds_along_true_trajectories():
    # z0 = sum_d phi0_d eta^d + g6 * eta^6 exactly (up to integration error)
    res = _closed_loop(eta=0.01)
    assert res.status == 0
    t = res.col("t")
    z0 = res.col("z0")
    phi0 = np.column_stack([res.col(f"phi0_{d}") for d in range(1, 6)])
    g6 = res.col("g6")
    resid = z0 - phi0 @ omega(0.01) - g6 * 0.01 ** 6
    scale = max(1.0, np.abs(z0).max())
    # the unresolved startup layer leaves a ~1e-6 residual that washes out of
    # the filter bank at the mu = 10 pole
    assert np.abs(resid[t > 1.0]).max() / scale < 1e-9
    assert np.abs(resid[t > 3.0]).max() / scale < 5e-11


def test_eta_sixth_coefficient_settles_to_one():
    res = _closed_loop(eta=0.01)
    g6 = res.col("g6")
    t = res.col("t")
    # W-chain DC gain is 1; after the transient g6 -> 1
    assert abs(g6[t > 3.0] - 1.0).max() < 1e-3


def test_zero_offset_trajectory_gives_vanishing_z():
    # eta = 0 (psi(0) = lambda(0)): Omega(0) = 0 so z itself must decay to the
    # transient floor
    lam_eq = math.sqrt(2.0 * K * M * G)
    res = run(Scenario(reference="sin", mode="sensorless", eta=0.0, psi0=lam_eq,
                       duration=4.0))
    assert res.status == 0
    t = res.col("t")
    z = res.col("z")
    assert np.abs(z[t > 1.0]).max() < 1e-6


def test_filtered_identity_matches_between_modes():
    # the regression is built from (i, u, psi) only; it cannot know whether
    # the controller used true or estimated state
    for mode in ("full-state", "sensorless"):
        res = run(Scenario(reference="sin", mode=mode, eta=0.02, duration=4.0))
        assert res.status == 0
        t = res.col("t")
        z = res.col("z")
        phi = np.column_stack([res.col(f"phi{d}") for d in range(1, 6)])
        crit = np.abs(z - phi @ omega(0.02)) / np.maximum(1.0, np.abs(z))
        assert crit[t > 1.0].max() < 1e-6


def test_pipeline_consumes_only_measurable_signals():
    import inspect
    sig = inspect.signature(RegressorPipeline.step)
    assert list(sig.parameters) == ["self", "i", "u", "psi", "dt"]
