"""Flux integrator and the measurable-signal regressor pipeline.

The pipeline turns the measured current ``i``, the input voltage ``u`` and
the integrated flux proxy ``psi`` into a nonlinear regression

    z = phi . (eta, eta^2, eta^3, eta^4, eta^5)

for the unknown constant flux offset ``eta = lambda(0) - psi(0)``.  No plant
state ever enters: ``step`` accepts only (i, u, psi).

Construction outline (all filters zero-initialized, one shared clock):

* ``om1`` is the derivative-filtered current ``mu*p/(p+mu)[i]`` corrected by
  the analytic decay ``mu*i(0)*exp(-mu*t)`` so that it equals the low-pass of
  di/dt exactly, which makes every identity below exact rather than
  transient-polluted.
* ``r1 = W[i*(u-R*i)] - psi*om1 + (1/(p+mu))[(u-R*i)*om1]`` and
  ``r2 = W[k*m*r1]`` are measurable companions of the filtered mechanical
  power balance.
* The square of the flux is carried as a degree-2 polynomial in eta with
  measurable coefficients ``(psi^2, 2*psi, 1)``; low-pass chains act on it
  coefficient-wise, products convolve coefficients, and one degree-6
  polynomial identity in eta is assembled whose value is identically zero
  along exact trajectories.  Its coefficients are the raw regressor
  ``(z0, phi0)``; the final ``rho*p/(p+rho)`` output filter removes the
  constant eta^6 term and yields ``(z, phi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .signals import NonFiniteSignalError


@dataclass
class PeboState:
    """Open-loop flux integrator state: d(psi)/dt = -R*i + u."""

    psi: float = 0.0


def pebo_step(st: PeboState, i: float, u: float, R: float, dt: float) -> PeboState:
    """Advance the flux integrator by dt with (i, u) held constant."""
    if not dt > 0.0:
        raise ValueError("dt must be > 0")
    if not (math.isfinite(i) and math.isfinite(u)):
        raise NonFiniteSignalError("pebo", i if not math.isfinite(i) else u)
    return PeboState(psi=st.psi + (-R * i + u) * dt)


@dataclass
class RegressorSample:
    """One output sample: filtered pair (z, phi) plus the raw (z0, phi0)."""

    z: float
    phi: np.ndarray     # 5-vector, regressor of (eta, .., eta^5)
    z0: float
    phi0: np.ndarray
    g6: float = 1.0     # time-varying coefficient of the eta^6 term (-> 1)


def omega(eta: float) -> np.ndarray:
    """Monomial vector col(eta, eta^2, eta^3, eta^4, eta^5)."""
    return np.array([eta ** d for d in range(1, 6)])


def regression_residual(sample: RegressorSample, eta: float) -> float:
    """z - phi . Omega(eta); diagnostic oracle only."""
    return sample.z - float(sample.phi @ omega(eta))


@dataclass
class SwapSignals:
    """Measurable swapping-lemma signal bank (flat filter-state vector).

    `states` follows the core layout; `i0` is the recorded initial current
    that seeds the derivative-filter correction state.
    """

    i0: float = 0.0
    mu: float = 10.0
    rho: float = 0.01
    states: np.ndarray = field(default_factory=lambda: np.zeros(_core.NBANK))

    def __post_init__(self) -> None:
        self.states = np.asarray(self.states, dtype=float)
        if len(self.states) != _core.NBANK:
            raise ValueError(f"bank state vector must have {_core.NBANK} entries")
        self.states[_core.B_DEC] = self.mu * self.i0


class RegressorPipeline:
    """Stand-alone pipeline over the shared filter-bank kernel.

    Consumes only the measurable triple (i, u, psi); the plant parameters
    (m, k, g) and R enter as known constants.  Inputs may be floats (held
    constant over a step) or callables of time (evaluated at the integration
    stage points).
    """

    def __init__(self, m: float, k: float, g: float, R: float,
                 mu: float = 10.0, rho: float = 0.01, i0: float = 0.0):
        self.m = m
        self.k = k
        self.g = g
        self.R = R
        self.mu = mu
        self.rho = rho
        self.t = 0.0
        self.bank = np.zeros(_core.NBANK)
        self.bank[_core.B_DEC] = mu * i0
        self._aux = np.zeros(_core.NBAUX)

    def _derivs(self, b: np.ndarray, t: float, i, u, psi) -> np.ndarray:
        yv = i(t) if callable(i) else i
        uv = u(t) if callable(u) else u
        pv = psi(t) if callable(psi) else psi
        if not (math.isfinite(yv) and math.isfinite(uv) and math.isfinite(pv)):
            raise NonFiniteSignalError("regressor-bank input", float("nan"))
        db = np.empty(_core.NBANK)
        _core.bank_eval(b, yv, uv - self.R * yv, pv, self.m, self.k, self.g,
                        self.mu, self.rho, db, self._aux)
        return db

    def step(self, i, u, psi, dt: float) -> RegressorSample:
        """Advance one step and return the current output sample."""
        if not dt > 0.0:
            raise ValueError("dt must be > 0")
        b = self.bank
        t = self.t
        k1 = self._derivs(b, t, i, u, psi)
        k2 = self._derivs(b + 0.5 * dt * k1, t + 0.5 * dt, i, u, psi)
        k3 = self._derivs(b + 0.5 * dt * k2, t + 0.5 * dt, i, u, psi)
        k4 = self._derivs(b + dt * k3, t + dt, i, u, psi)
        self.bank = b + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        self.t = t + dt
        return self.sample(i, u, psi)

    def sample(self, i, u, psi) -> RegressorSample:
        """Output sample at the current time without advancing."""
        self._derivs(self.bank, self.t, i, u, psi)
        a = self._aux
        out = RegressorSample(
            z=a[_core.BAUX_Z],
            phi=a[_core.BAUX_PHI:_core.BAUX_PHI + 5].copy(),
            z0=a[_core.BAUX_Z0],
            phi0=a[_core.BAUX_PHI0:_core.BAUX_PHI0 + 5].copy(),
            g6=a[_core.BAUX_G6],
        )
        if not (math.isfinite(out.z) and np.all(np.isfinite(out.phi))):
            raise NonFiniteSignalError("regressor-output", out.z)
        return out

    @property
    def diagnostics(self) -> dict:
        """om1/om2/r1/r2 from the most recent evaluation."""
        a = self._aux
        return {
            "om1": a[_core.BAUX_OM1],
            "om2": a[_core.BAUX_OM2],
            "r1": a[_core.BAUX_R1],
            "r2": a[_core.BAUX_R2],
        }
