"""First-order filter primitives, the polynomial-in-eta signal algebra, and
the reference-trajectory prefilter.

All filters here are stable first-order sections advanced with the same
classical 4th-order fixed-step scheme as the global simulator (input held
constant over a step when only a sample is available).  Three kinds exist:

  lowpass     mu/(p+mu)     unit DC gain
  lag         1/(p+mu)      DC gain 1/mu
  derivative  rho*p/(p+rho) realized as rho*(input - lag_state); no numerical
                            differentiation anywhere

`EtaPolySignal` represents a signal of the form sum_d coeff[d] * eta^d with
time-varying measurable coefficients and a fixed unknown constant eta.  Linear
filters act coefficient-wise on such signals; products convolve coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Degree bound of the polynomial algebra: the raw regression is degree 6.
MAX_DEGREE = 6

LOWPASS = "lowpass"
LAG = "lag"
DERIVATIVE = "derivative"

_KINDS = (LOWPASS, LAG, DERIVATIVE)


class NonFiniteSignalError(ValueError):
    """A filter node received or produced a non-finite value."""

    def __init__(self, node: str, value: float):
        super().__init__(f"non-finite signal at filter node {node!r}: {value!r}")
        self.node = node


@dataclass
class FilterNode:
    """Single first-order filter section with one internal state."""

    pole: float
    kind: str = LOWPASS
    gain: float = 1.0
    state: float = 0.0
    name: str = ""

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown filter kind {self.kind!r}")
        if not self.pole > 0.0:
            raise ValueError(f"filter pole must be > 0, got {self.pole}")

    def _state_deriv(self, state: float, inp: float) -> float:
        if self.kind == LOWPASS:
            return self.pole * (inp - state)
        if self.kind == LAG:
            return inp - self.pole * state
        # derivative: internal state is the lowpass of the input
        return self.pole * (inp - state)

    def output(self, inp: float) -> float:
        if self.kind == DERIVATIVE:
            return self.gain * self.pole * (inp - self.state)
        return self.gain * self.state

    def step(self, inp: float, dt: float) -> float:
        """Advance by dt with the input held constant; return the new output."""
        if not dt > 0.0:
            raise ValueError("dt must be > 0")
        if not math.isfinite(inp):
            raise NonFiniteSignalError(self.name or f"{self.kind}(pole={self.pole})", inp)
        s = self.state
        k1 = self._state_deriv(s, inp)
        k2 = self._state_deriv(s + 0.5 * dt * k1, inp)
        k3 = self._state_deriv(s + 0.5 * dt * k2, inp)
        k4 = self._state_deriv(s + dt * k3, inp)
        self.state = s + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return self.output(inp)


def filter_step(node: FilterNode, inp: float, dt: float) -> float:
    """Functional alias for `FilterNode.step`."""
    return node.step(inp, dt)


@dataclass
class EtaPolySignal:
    """Signal equal to sum_d coeffs[d] * eta^d for an unknown constant eta."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.ndim != 1 or len(self.coeffs) > MAX_DEGREE + 1:
            raise ValueError(f"coefficient vector must be 1-D with degree <= {MAX_DEGREE}")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, eta: float) -> float:
        # Horner, highest degree first
        acc = 0.0
        for c in self.coeffs[::-1]:
            acc = acc * eta + c
        return acc

    def __add__(self, other: "EtaPolySignal") -> "EtaPolySignal":
        n = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros(n)
        out[: len(self.coeffs)] += self.coeffs
        out[: len(other.coeffs)] += other.coeffs
        return EtaPolySignal(out)

    def scale(self, a: float) -> "EtaPolySignal":
        return EtaPolySignal(a * self.coeffs)

    def shift(self, by: int = 1) -> "EtaPolySignal":
        """Multiply by eta**by."""
        if self.degree + by > MAX_DEGREE:
            raise ValueError("degree overflow in eta-polynomial shift")
        return EtaPolySignal(np.concatenate([np.zeros(by), self.coeffs]))


def poly_mul(a: EtaPolySignal, b: EtaPolySignal) -> EtaPolySignal:
    """Product of two eta-polynomial signals (coefficient convolution)."""
    if a.degree + b.degree > MAX_DEGREE:
        raise ValueError(
            f"degree overflow: {a.degree} + {b.degree} > {MAX_DEGREE}"
        )
    return EtaPolySignal(np.convolve(a.coeffs, b.coeffs))


class PolyFilter:
    """A linear filter applied coefficient-wise to an `EtaPolySignal`.

    Because eta is constant, W[sum c_d eta^d] = sum W[c_d] eta^d; each
    coefficient gets its own filter node with zero initial state.
    """

    def __init__(self, pole: float, n_coeffs: int, kind: str = LOWPASS, name: str = ""):
        self.nodes = [
            FilterNode(pole=pole, kind=kind, name=f"{name}[{d}]") for d in range(n_coeffs)
        ]

    def step(self, poly: EtaPolySignal, dt: float) -> EtaPolySignal:
        if len(poly.coeffs) != len(self.nodes):
            raise ValueError("coefficient count does not match filter bank width")
        return EtaPolySignal(
            np.array([n.step(c, dt) for n, c in zip(self.nodes, poly.coeffs)])
        )

    def output(self, poly: EtaPolySignal) -> EtaPolySignal:
        return EtaPolySignal(
            np.array([n.output(c) for n, c in zip(self.nodes, poly.coeffs)])
        )


@dataclass
class ReferenceState:
    """4th-order unit-DC prefilter cascade (nu/(p+nu))^4 and its read-outs.

    Y* and its first three derivatives are exact linear combinations of the
    cascade states, never numerical differences.
    """

    s1: float = 0.0
    s2: float = 0.0
    s3: float = 0.0
    s4: float = 0.0
    Y_star: float = 0.0
    dY_star: float = 0.0
    d2Y_star: float = 0.0
    d3Y_star: float = 0.0

    @staticmethod
    def settled(value: float) -> "ReferenceState":
        """Cascade pre-settled at a constant reference (all derivatives zero)."""
        return ReferenceState(s1=value, s2=value, s3=value, s4=value, Y_star=value)


def _ref_derivs(s: np.ndarray, raw: float, nu: float) -> np.ndarray:
    return nu * np.array([raw - s[0], s[0] - s[1], s[1] - s[2], s[2] - s[3]])


def reference_readout(s1: float, s2: float, s3: float, s4: float, nu: float) -> tuple[float, float, float, float]:
    """(Y*, dY*, d2Y*, d3Y*) from the cascade states."""
    return (
        s4,
        nu * (s3 - s4),
        nu * nu * (s2 - 2.0 * s3 + s4),
        nu ** 3 * (s1 - 3.0 * s2 + 3.0 * s3 - s4),
    )


def reference_step(ref: ReferenceState, raw: float, dt: float, nu: float) -> ReferenceState:
    """Advance the prefilter by dt with the raw reference held constant."""
    if not nu > 0.0:
        raise ValueError("prefilter rate nu must be > 0")
    s = np.array([ref.s1, ref.s2, ref.s3, ref.s4])
    k1 = _ref_derivs(s, raw, nu)
    k2 = _ref_derivs(s + 0.5 * dt * k1, raw, nu)
    k3 = _ref_derivs(s + 0.5 * dt * k2, raw, nu)
    k4 = _ref_derivs(s + dt * k3, raw, nu)
    s = s + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    y, dy, d2y, d3y = reference_readout(s[0], s[1], s[2], s[3], nu)
    return ReferenceState(s[0], s[1], s[2], s[3], y, dy, d2y, d3y)


def sinusoid_profile(t: float) -> float:
    """Raw sum-of-sinusoids position command."""
    return math.sin(t) + math.sin(2.0 * t) + 0.5 * math.sin(3.7 * t + math.pi / 3.0)


def steps_profile(t: float) -> float:
    """Raw piecewise-constant position command: 0 / 2 / 0 / 3 switching at 1, 3, 5 s."""
    if t < 1.0:
        return 0.0
    if t < 3.0:
        return 2.0
    if t < 5.0:
        return 0.0
    return 3.0
