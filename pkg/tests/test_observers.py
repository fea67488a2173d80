"""Unit tests for the speed and position observers.

The convergence oracles are independent of the observer integrators: the
speed-observer error obeys d(delta_v)/dt = -gamma_v * lam^2 * delta_v when the
flux input is exact, so log|delta_v| must fall by gamma_v * integral(lam^2);
the position-observer error obeys a forced version of the same ODE, checked
against its variation-of-constants solution evaluated by quadrature.
"""

import math

import numpy as np
import pytest

from maglev_sensorless.controller import ControlInput, FlcGains, flc
from maglev_sensorless.observers import (
    PositionObserverState,
    SpeedObserverState,
    chi_deriv,
    position_step,
    speed_step,
    yhat_deriv,
)
from maglev_sensorless.plant import PlantParams, PlantState, equilibrium, output_current, plant_rhs
from maglev_sensorless.signals import ReferenceState

PRM = PlantParams()


def test_gain_validation():
    with pytest.raises(ValueError):
        SpeedObserverState(gamma_v=0.0)
    with pytest.raises(ValueError):
        PositionObserverState(gamma_Y=-1.0)


def test_v_hat_identity():
    st = SpeedObserverState(chi=3.0, gamma_v=100.0)
    assert st.v_hat(i=0.2, lam_hat=1.1, k=1.0) == pytest.approx(
        3.0 - 100.0 * 1.0 * 0.2 * 1.1, rel=1e-15)


def test_deriv_formulas():
    # spot-check against the written-out expressions
    chi, lam, i, lam_dot, gv = 0.7, 1.2, 0.3, -0.4, 100.0
    v_hat = chi - gv * PRM.k * i * lam
    expect = ((lam * lam / (2.0 * PRM.k) - PRM.m * PRM.g) / PRM.m
              - gv * lam * lam * v_hat + 2.0 * gv * PRM.k * i * lam_dot)
    assert chi_deriv(chi, lam, i, lam_dot, gv, PRM.m, PRM.k, PRM.g) == pytest.approx(expect)
    Yh, vh, gy = -0.2, 0.5, 100.0
    expect = -gy * lam * lam * Yh + gy * (PRM.c * lam - PRM.k * i) * lam + vh
    assert yhat_deriv(Yh, lam, vh, i, gy, PRM.k, PRM.c) == pytest.approx(expect)


def test_nonfinite_inputs_rejected():
    with pytest.raises(ValueError):
        speed_step(SpeedObserverState(), math.nan, 0.0, 0.0, PRM.m, PRM.k, PRM.g, 1e-4)
    with pytest.raises(ValueError):
        position_step(PositionObserverState(), 1.0, math.inf, 0.0, PRM.k, PRM.c, 1e-4)
    with pytest.raises(ValueError):
        speed_step(SpeedObserverState(), 1.0, 0.0, 0.0, PRM.m, PRM.k, PRM.g, 0.0)


def _closed_loop_trajectory(T=0.05, dt=1e-5):
    """Plant under the full-state law from a perturbed IC; returns the sampled
    (lam, i, lam_dot, v, Y) arrays."""
    gains = FlcGains()
    eq, _ = equilibrium(0.0, PRM)
    s = PlantState(Y=-0.05, p=PRM.m * 0.3, lam=eq.lam)
    ref = ReferenceState.settled(0.0)
    out = []
    n = round(T / dt)
    for _ in range(n + 1):
        u, _ = flc(ControlInput(lam=s.lam, Y=s.Y, v=s.velocity(PRM),
                                ref=(ref.Y_star, 0.0, 0.0, 0.0)), gains, PRM)
        i = output_current(s, PRM)
        out.append((s.lam, i, -PRM.R * i + u, s.velocity(PRM), s.Y))
        # RK4 on the plant with u held
        def rhs(st):
            return plant_rhs(st, u, PRM)
        k1 = rhs(s)
        k2 = rhs(PlantState(s.Y + 0.5 * dt * k1.Y, s.p + 0.5 * dt * k1.p, s.lam + 0.5 * dt * k1.lam))
        k3 = rhs(PlantState(s.Y + 0.5 * dt * k2.Y, s.p + 0.5 * dt * k2.p, s.lam + 0.5 * dt * k2.lam))
        k4 = rhs(PlantState(s.Y + dt * k3.Y, s.p + dt * k3.p, s.lam + dt * k3.lam))
        s = PlantState(
            s.Y + dt / 6 * (k1.Y + 2 * k2.Y + 2 * k3.Y + k4.Y),
            s.p + dt / 6 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p),
            s.lam + dt / 6 * (k1.lam + 2 * k2.lam + 2 * k3.lam + k4.lam),
        )
    return np.array(out)


def test_speed_observer_error_decays_at_the_flux_weighted_rate():
    # short window: past ~3 decades of decay the O(dt) input-holding bias
    # dominates the end error and the pure-decay oracle no longer applies
    dt = 5e-6
    traj = _closed_loop_trajectory(T=0.02, dt=dt)
    lam, i, lam_dot, v, _ = traj.T
    st = SpeedObserverState(chi=0.0 + 100.0 * PRM.k * i[0] * lam[0], gamma_v=100.0)  # v_hat(0) = 0
    errs = [st.v_hat(i[0], lam[0], PRM.k) - v[0]]
    for n in range(len(lam) - 1):
        st = speed_step(st, lam[n], i[n], lam_dot[n], PRM.m, PRM.k, PRM.g, dt)
        errs.append(st.v_hat(i[n + 1], lam[n + 1], PRM.k) - v[n + 1])
    errs = np.array(errs)
    # oracle: log-decay equals gamma_v * integral of lam^2 (trapezoid)
    decay = 100.0 * np.trapezoid(lam ** 2, dx=dt)
    measured = math.log(abs(errs[0]) / abs(errs[-1]))
    assert measured == pytest.approx(decay, rel=1e-2)


def test_position_observer_matches_variation_of_constants():
    dt = 5e-6
    traj = _closed_loop_trajectory(T=0.02, dt=dt)
    lam, i, _, v, Y = traj.T
    # feed the exact velocity so the forcing term is zero: pure decay
    st = PositionObserverState(Y_hat=0.0, gamma_Y=100.0)
    for n in range(len(lam) - 1):
        st = position_step(st, lam[n], v[n], i[n], PRM.k, PRM.c, dt)
    # oracle: delta_Y(T) = delta_Y(0) * exp(-gamma_Y * int lam^2); the observer
    # sees the exact (lam, i, v) so e_Y = Y_hat - Y obeys the homogeneous ODE
    e0 = 0.0 - Y[0]
    G = 100.0 * np.trapezoid(lam ** 2, dx=dt)
    expect = e0 * math.exp(-G)
    got = st.Y_hat - Y[-1]
    assert got == pytest.approx(expect, rel=5e-3)


def test_position_observer_converges_with_estimated_speed():
    # with v_hat from the speed observer the forcing decays too; end error is
    # driven to numerical floor
    dt = 1e-5
    traj = _closed_loop_trajectory(T=0.08, dt=dt)
    lam, i, lam_dot, v, Y = traj.T
    sp = SpeedObserverState(chi=0.0 + 100.0 * PRM.k * i[0] * lam[0], gamma_v=100.0)
    po = PositionObserverState(Y_hat=0.0, gamma_Y=100.0)
    for n in range(len(lam) - 1):
        vh = sp.v_hat(i[n], lam[n], PRM.k)
        po = position_step(po, lam[n], vh, i[n], PRM.k, PRM.c, dt)
        sp = speed_step(sp, lam[n], i[n], lam_dot[n], PRM.m, PRM.k, PRM.g, dt)
    assert abs(po.Y_hat - Y[-1]) < 1e-5
