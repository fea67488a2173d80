"""Regressor extension and determinant mixing.

Four stable first-order filters produce filtered copies of the scalar pair
(z, phi); stacking the current sample on top of the four copies gives a 5x5
extended regressor Phi and a 5-vector Zvec with Zvec = Phi * Omega(eta) along
exact trajectories.  Multiplying by the first row of the adjugate decouples
the first monomial: Ycal = eta * Delta with Delta = det(Phi), so a scalar
gradient search estimates eta directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _core
from .regressor import RegressorSample, omega

DEFAULT_POLES = (1.0, 2.0, 5.0, 10.0)


def adjugate(a: np.ndarray) -> np.ndarray:
    """Adjugate (transposed cofactor matrix) by explicit cofactor expansion.

    Exact for singular input; satisfies adj(A) @ A = det(A) * I.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("adjugate requires a square matrix")
    adj = np.empty((n, n))
    rows = np.arange(n)
    for r in range(n):
        for c in range(n):
            minor = a[np.ix_(rows != r, rows != c)]
            adj[c, r] = (-1.0) ** (r + c) * np.linalg.det(minor)
    return adj


def mix_matrix(Phi: np.ndarray, Zvec: np.ndarray) -> tuple[float, float]:
    """(Delta, Ycal) = (det(Phi), e1^T adj(Phi) Zvec) for a 5x5 Phi."""
    Phi = np.ascontiguousarray(Phi, dtype=float)
    Zvec = np.ascontiguousarray(Zvec, dtype=float)
    if Phi.shape != (5, 5) or Zvec.shape != (5,):
        raise ValueError("mix expects a 5x5 matrix and a 5-vector")
    return _core.mix_first_row(Phi, Zvec)


@dataclass
class DremState:
    """Filter bank, estimate and excitation bookkeeping for one run."""

    gamma: float = 1.0
    kappa: tuple = DEFAULT_POLES      # filter gains kappa_j
    nu: tuple = DEFAULT_POLES         # filter poles nu_j
    input_scale: float = 200.0        # scale applied to (z, phi) at mixing
    eta_hat: float = 1e-4
    excitation_integral: float = 0.0
    filters: np.ndarray = field(default_factory=lambda: np.zeros(24))

    def __post_init__(self) -> None:
        if not self.gamma > 0.0:
            raise ValueError("adaptation gain gamma must be > 0")
        if len(self.kappa) != 4 or len(self.nu) != 4:
            raise ValueError("exactly four filter parameter pairs are required")
        if any(not v > 0 for v in self.kappa) or any(not v > 0 for v in self.nu):
            raise ValueError("filter gains and poles must be > 0")
        self.filters = np.asarray(self.filters, dtype=float)

    # -- assembly -----------------------------------------------------------
    def assemble(self, sample: RegressorSample) -> tuple[np.ndarray, np.ndarray]:
        """Extended regressor Phi (row 0 = current phi, rows 1-4 = filtered
        copies) and the stacked vector Zvec."""
        s = self.input_scale
        Phi = np.empty((5, 5))
        Zvec = np.empty(5)
        Phi[0, :] = s * sample.phi
        Zvec[0] = s * sample.z
        f = self.filters.reshape(6, 4)  # channel-major: z, phi1..phi5
        Zvec[1:] = s * f[0]
        for ch in range(5):
            Phi[1:, ch] = s * f[1 + ch]
        return Phi, Zvec

    def mix(self, sample: RegressorSample) -> tuple[float, float]:
        """(Delta, Ycal) for the current sample; Delta = 0 is a valid output."""
        Phi, Zvec = self.assemble(sample)
        return mix_matrix(Phi, Zvec)


def _drem_derivs(st: DremState, filters: np.ndarray,
                 z: float, phi: np.ndarray) -> tuple[np.ndarray, float]:
    df = np.empty(24)
    f = filters
    for j in range(4):
        df[j] = st.kappa[j] * z - st.nu[j] * f[j]
        for ch in range(5):
            idx = (ch + 1) * 4 + j
            df[idx] = st.kappa[j] * phi[ch] - st.nu[j] * f[idx]
    s = st.input_scale
    Phi = np.empty((5, 5))
    Zvec = np.empty(5)
    Phi[0, :] = s * phi
    Zvec[0] = s * z
    for j in range(4):
        Zvec[1 + j] = s * f[j]
        for ch in range(5):
            Phi[1 + j, ch] = s * f[(ch + 1) * 4 + j]
    delta, _ = _core.mix_first_row(Phi, Zvec)
    return df, delta * delta


def extend_and_update(st: DremState, sample: RegressorSample, dt: float) -> DremState:
    """Advance the filter bank, the gradient estimate and the excitation
    integral by one step (sample held constant over the step).

    The filter bank and excitation integral advance with the classical
    4th-order scheme; eta_hat uses the exact exponential update of its
    linear scalar ODE, which stays stable through excitation spikes where
    gamma*Delta^2*dt would exceed any explicit scheme's stability bound.
    """
    if not dt > 0.0:
        raise ValueError("dt must be > 0")
    if not np.all(np.isfinite(sample.phi)) or not np.isfinite(sample.z):
        raise ValueError("non-finite regressor sample")
    z, phi = sample.z, sample.phi
    f = st.filters
    delta, ycal = st.mix(sample)
    df1, dx1 = _drem_derivs(st, f, z, phi)
    df2, dx2 = _drem_derivs(st, f + 0.5 * dt * df1, z, phi)
    df3, dx3 = _drem_derivs(st, f + 0.5 * dt * df2, z, phi)
    df4, dx4 = _drem_derivs(st, f + dt * df3, z, phi)
    st.filters = f + dt / 6.0 * (df1 + 2.0 * df2 + 2.0 * df3 + df4)
    st.eta_hat = _core.eta_hat_update(st.eta_hat, delta, ycal, st.gamma, dt)
    st.excitation_integral += dt / 6.0 * (dx1 + 2.0 * dx2 + 2.0 * dx3 + dx4)
    return st


def flux_estimate(psi: float, eta_hat: float) -> float:
    """Reconstructed flux: lambda_hat = psi + eta_hat."""
    return psi + eta_hat
