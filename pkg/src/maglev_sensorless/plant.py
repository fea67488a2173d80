"""Ground-truth dynamics of the levitated ball.

State is col(Y, p, lambda): ball position, momentum, flux linkage.  The coil
current i = (c - Y) * lambda / k is the only mechanical/magnetic output the
rest of the stack is allowed to measure (together with the input voltage).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PlantParams:
    """Physical constants.  All strictly positive."""

    m: float = 0.0844   # ball mass [kg]
    k: float = 1.0      # inductance constant [H*m]
    R: float = 2.52     # coil resistance [Ohm]
    c: float = 0.005    # geometric offset [m]
    g: float = 9.81     # gravitational acceleration [m/s^2]

    def __post_init__(self) -> None:
        for name in ("m", "k", "R", "c", "g"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"plant parameter {name} must be > 0, got {getattr(self, name)}")


@dataclass
class PlantState:
    """True state col(Y, p, lambda)."""

    Y: float      # position [m]
    p: float      # momentum [kg*m/s]
    lam: float    # flux linkage [Wb]

    def velocity(self, prm: PlantParams) -> float:
        return self.p / prm.m


def output_current(s: PlantState, prm: PlantParams) -> float:
    """Coil current i = (c - Y) * lambda / k."""
    return (prm.c - s.Y) * s.lam / prm.k


def plant_rhs(s: PlantState, u: float, prm: PlantParams) -> PlantState:
    """Time derivative of the state for input voltage u.

    dY = p/m, dp = lambda^2/(2k) - m*g, dlambda = -R*i + u.
    Pure function; no domain restriction is enforced (Y >= c is flagged by the
    harness, not rejected here).
    """
    i = output_current(s, prm)
    return PlantState(
        Y=s.p / prm.m,
        p=s.lam * s.lam / (2.0 * prm.k) - prm.m * prm.g,
        lam=-prm.R * i + u,
    )


def equilibrium(Y_star: float, prm: PlantParams) -> tuple[PlantState, float]:
    """Equilibrium state (Y*, 0, +sqrt(2kmg)) and the voltage that holds it.

    The positive flux branch is used throughout.  The steady voltage cancels
    the resistive drop: u* = R * (c - Y*) * lambda* / k.
    """
    lam_star = math.sqrt(2.0 * prm.k * prm.m * prm.g)
    u_star = prm.R * (prm.c - Y_star) * lam_star / prm.k
    return PlantState(Y=Y_star, p=0.0, lam=lam_star), u_star
