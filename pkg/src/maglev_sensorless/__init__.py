"""Sensorless control stack for the magnetically levitated ball.

Subsystems: ground-truth plant dynamics, first-order filter / polynomial
signal algebra, the flux-integrator regressor pipeline, the determinant-mixing
gradient estimator, nonlinear speed/position observers, a feedback-linearizing
position controller, and a deterministic fixed-step simulation harness.
"""

from .plant import PlantParams, PlantState, plant_rhs, output_current, equilibrium
from .controller import FlcGains, ControlInput, flc, sensorless_control
from .harness import Scenario, RunResult, RunMetrics, run, sweep, write_csv, write_metrics_csv

__all__ = [
    "PlantParams",
    "PlantState",
    "plant_rhs",
    "output_current",
    "equilibrium",
    "FlcGains",
    "ControlInput",
    "flc",
    "sensorless_control",
    "Scenario",
    "RunResult",
    "RunMetrics",
    "run",
    "sweep",
    "write_csv",
    "write_metrics_csv",
]
