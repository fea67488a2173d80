"""Nonlinear speed and position observers driven by the reconstructed flux.

Both observers consume only measurable quantities: the flux estimate
lambda_hat, the current i, and the measurable flux derivative
d(lambda)/dt = -R*i + u.  Neither differentiates a signal numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass
class SpeedObserverState:
    """chi is the internal state; v_hat = chi - gamma_v * k * i * lambda_hat
    holds by construction at every instant."""

    chi: float = 0.0
    gamma_v: float = 100.0

    def __post_init__(self) -> None:
        if not self.gamma_v > 0.0:
            raise ValueError("gamma_v must be > 0")

    def v_hat(self, i: float, lam_hat: float, k: float) -> float:
        return self.chi - self.gamma_v * k * i * lam_hat


@dataclass
class PositionObserverState:
    Y_hat: float = 0.0
    gamma_Y: float = 100.0

    def __post_init__(self) -> None:
        if not self.gamma_Y > 0.0:
            raise ValueError("gamma_Y must be > 0")


def _check_finite(*vals: float) -> None:
    for v in vals:
        if not math.isfinite(v):
            raise ValueError(f"non-finite observer input: {v!r}")


def chi_deriv(chi: float, lam_hat: float, i: float, lam_dot: float,
              gamma_v: float, m: float, k: float, g: float) -> float:
    v_hat = chi - gamma_v * k * i * lam_hat
    return (
        (lam_hat * lam_hat / (2.0 * k) - m * g) / m
        - gamma_v * lam_hat * lam_hat * v_hat
        + 2.0 * gamma_v * k * i * lam_dot
    )


def speed_step(st: SpeedObserverState, lam_hat: float, i: float, lam_dot: float,
               m: float, k: float, g: float, dt: float) -> SpeedObserverState:
    """Advance the speed observer by dt (inputs held constant)."""
    if not dt > 0.0:
        raise ValueError("dt must be > 0")
    _check_finite(lam_hat, i, lam_dot)
    gv = st.gamma_v
    c = st.chi
    k1 = chi_deriv(c, lam_hat, i, lam_dot, gv, m, k, g)
    k2 = chi_deriv(c + 0.5 * dt * k1, lam_hat, i, lam_dot, gv, m, k, g)
    k3 = chi_deriv(c + 0.5 * dt * k2, lam_hat, i, lam_dot, gv, m, k, g)
    k4 = chi_deriv(c + dt * k3, lam_hat, i, lam_dot, gv, m, k, g)
    return SpeedObserverState(chi=c + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4), gamma_v=gv)


def yhat_deriv(Y_hat: float, lam_hat: float, v_hat: float, i: float,
               gamma_Y: float, k: float, c: float) -> float:
    return (
        -gamma_Y * lam_hat * lam_hat * Y_hat
        + gamma_Y * (c * lam_hat - k * i) * lam_hat
        + v_hat
    )


def position_step(st: PositionObserverState, lam_hat: float, v_hat: float, i: float,
                  k: float, c: float, dt: float) -> PositionObserverState:
    """Advance the position observer by dt (inputs held constant)."""
    if not dt > 0.0:
        raise ValueError("dt must be > 0")
    _check_finite(lam_hat, v_hat, i)
    gy = st.gamma_Y
    y = st.Y_hat
    k1 = yhat_deriv(y, lam_hat, v_hat, i, gy, k, c)
    k2 = yhat_deriv(y + 0.5 * dt * k1, lam_hat, v_hat, i, gy, k, c)
    k3 = yhat_deriv(y + 0.5 * dt * k2, lam_hat, v_hat, i, gy, k, c)
    k4 = yhat_deriv(y + dt * k3, lam_hat, v_hat, i, gy, k, c)
    return PositionObserverState(Y_hat=y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4), gamma_Y=gy)
