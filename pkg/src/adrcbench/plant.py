"""Single degree-of-freedom mechanical plant and total-disturbance ground truth.

The plant follows J(q) qdd + h(q, qd) + h_m(q, qd) + tau_star(t) = tau, where
h aggregates unmodeled dynamics, h_m is the modeled part, and tau_star is an
external disturbance schedule owned by the model. The benchmark plant is the
double-lag system 1/(s+1)^2 written in this mechanical form (J = 1,
h = 2 qd + q, h_m = 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable


@dataclass(frozen=True)
class PlantModel:
    """Inertia/dynamics callbacks plus the true external disturbance schedule."""

    inertia: Callable[[float], float]
    unmodeled: Callable[[float, float], float]
    modeled: Callable[[float, float], float]
    disturbance: Callable[[float], float]


@dataclass
class PlantState:
    q: float = 0.0
    dq: float = 0.0


def _zero_modeled_estimate(q: float, dq_hat: float) -> float:
    return 0.0


@dataclass(frozen=True)
class ModelEstimate:
    """Controller-side model: inertia estimate and modeled-dynamics estimate.

    ``modeled_hat`` receives (q, dq_hat) where dq_hat is the rate reconstructed
    from estimates; it defaults to zero, matching the benchmark scenarios.
    """

    j_hat: float = 1.0
    modeled_hat: Callable[[float, float], float] = field(default=_zero_modeled_estimate)

    def __post_init__(self):
        if not self.j_hat > 0.0:
            raise ValueError("j_hat must be positive")


def plant_derivative(model: PlantModel, state: PlantState, tau: float, t: float) -> tuple[float, float]:
    """State derivative (dq, ddq) under applied torque tau at time t."""
    j = model.inertia(state.q)
    if not j > 0.0:
        raise ValueError(f"inertia must be positive, got J({state.q}) = {j}")
    ddq = (
        tau
        - model.unmodeled(state.q, state.dq)
        - model.modeled(state.q, state.dq)
        - model.disturbance(t)
    ) / j
    return state.dq, ddq


def total_disturbance_truth(
    model: PlantModel,
    est: ModelEstimate,
    state: PlantState,
    tau: float,
    qdd_desired: float,
    t: float,
) -> float:
    """Ground-truth lumped disturbance f, using privileged access to the plant.

    f = qdd_d - (tau - h_m - h - tau_star)/J + (tau - h_m_hat)/J_hat. When the
    model estimate is exact the applied torque cancels out. The modeled-dynamics
    estimate is evaluated at the true rate here; the shipped scenarios use
    h_m_hat = 0, where the distinction is moot.
    """
    j = model.inertia(state.q)
    if not j > 0.0:
        raise ValueError(f"inertia must be positive, got J({state.q}) = {j}")
    true_part = (
        tau
        - model.modeled(state.q, state.dq)
        - model.unmodeled(state.q, state.dq)
        - model.disturbance(t)
    ) / j
    est_part = (tau - est.modeled_hat(state.q, state.dq)) / est.j_hat
    return qdd_desired - true_part + est_part


def zero_disturbance(t: float) -> float:
    return 0.0


def sinusoidal_disturbance(amplitude: float, angular_rate: float, start_time: float) -> Callable[[float], float]:
    """Schedule amplitude*sin(angular_rate*t), switched on at start_time."""
    import math

    def schedule(t: float) -> float:
        return amplitude * math.sin(angular_rate * t) if t >= start_time else 0.0

    return schedule


def constant_disturbance(level: float, start_time: float = 0.0) -> Callable[[float], float]:
    """Constant torque disturbance switched on at start_time."""

    def schedule(t: float) -> float:
        return level if t >= start_time else 0.0

    return schedule


def preset_double_lag(disturbance: Callable[[float], float] | None = None) -> PlantModel:
    """Benchmark plant 1/(s+1)^2 in mechanical form: J = 1, h = 2 qd + q, h_m = 0."""
    return PlantModel(
        inertia=lambda q: 1.0,
        unmodeled=lambda q, dq: 2.0 * dq + q,
        modeled=lambda q, dq: 0.0,
        disturbance=disturbance if disturbance is not None else zero_disturbance,
    )
