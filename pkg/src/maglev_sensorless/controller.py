"""Feedback-linearizing position controller.

The full-state law assigns the linear tracking-error dynamics
e''' + k2 e'' + k1 e' + k0 e = 0; the sensorless variant substitutes the
observer outputs in a certainty-equivalent way.  Division by the flux is
regularized continuously near zero so the voltage stays finite and does not
chatter when the demanded acceleration is momentarily infeasible.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _core
from .plant import PlantParams


@dataclass(frozen=True)
class FlcGains:
    """Coefficients of the target error polynomial s^3 + k2 s^2 + k1 s + k0.

    Construction enforces the Routh conditions for the cubic to be Hurwitz:
    k2 > 0, k0 > 0, k1*k2 > k0.
    """

    k0: float = 1000.0
    k1: float = 300.0
    k2: float = 30.0

    def __post_init__(self) -> None:
        if not (self.k2 > 0.0 and self.k0 > 0.0 and self.k1 * self.k2 > self.k0):
            raise ValueError(
                f"gains ({self.k0}, {self.k1}, {self.k2}) do not satisfy the "
                "Routh conditions k2>0, k0>0, k1*k2>k0"
            )


@dataclass
class ControlInput:
    """State values fed to the law (true or estimated) plus the reference
    position and its first three derivatives."""

    lam: float
    Y: float
    v: float
    ref: tuple[float, float, float, float]  # (Y*, dY*, d2Y*, d3Y*)


def flc(inp: ControlInput, gains: FlcGains, prm: PlantParams,
        eps_lambda: float = 1e-2) -> tuple[float, bool]:
    """Feedback-linearizing voltage; returns (u, clamped).

    `clamped` reports that |flux| was below eps_lambda, where the division
    is continuously regularized (1/lam -> lam/max(lam^2, eps^2)).
    """
    ystar, dystar, d2ystar, d3ystar = inp.ref
    u, clamped, _ = _core.flc_voltage(
        inp.lam, inp.Y, inp.v, ystar, dystar, d2ystar, d3ystar,
        prm.m, prm.k, prm.R, prm.c, prm.g,
        gains.k0, gains.k1, gains.k2, eps_lambda,
    )
    return u, bool(clamped)


def sensorless_control(lam_hat: float, Y_hat: float, v_hat: float,
                       ref: tuple[float, float, float, float],
                       gains: FlcGains, prm: PlantParams,
                       eps_lambda: float = 1e-2) -> tuple[float, bool]:
    """Certainty-equivalent law: `flc` evaluated on the observer outputs."""
    return flc(ControlInput(lam=lam_hat, Y=Y_hat, v=v_hat, ref=ref), gains, prm, eps_lambda)
