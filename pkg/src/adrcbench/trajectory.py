"""Reference trajectory generators: filtered step and slow sinusoid.

The filtered step passes a delayed step through five identical first-order
lags (time constant 0.5 s each), so position, velocity and acceleration are
exact linear combinations of the cascade states. Note the filtered step is C4
at the step instant, not smoother: five integrations of a jump.
"""

from __future__ import annotations

import math

import numpy as np

_LAG_RATE = 2.0  # 1 / (0.5 s time constant)


class FilteredStepGen:
    """Step of given amplitude at step_time, smoothed by 1/(0.5 s + 1)^5."""

    n_states = 5

    def __init__(self, step_time: float, amplitude: float = 1.0):
        self.step_time = step_time
        self.amplitude = amplitude
        self.states = np.zeros(5)
        self.time = 0.0

    def initial_state(self) -> np.ndarray:
        return np.zeros(5)

    def input_at(self, t: float) -> float:
        return self.amplitude if t >= self.step_time else 0.0

    def derivative(self, states: np.ndarray, t: float) -> np.ndarray:
        u = self.input_at(t)
        x = states
        return _LAG_RATE * np.array(
            [u - x[0], x[0] - x[1], x[1] - x[2], x[2] - x[3], x[3] - x[4]]
        )

    def outputs(self, states: np.ndarray, t: float) -> tuple[float, float, float]:
        x = states
        q_d = x[4]
        dq_d = _LAG_RATE * (x[3] - x[4])
        ddq_d = _LAG_RATE * _LAG_RATE * (x[2] - 2.0 * x[3] + x[4])
        return float(q_d), float(dq_d), float(ddq_d)


class SinusoidGen:
    """Stateless sinusoid amplitude*sin(angular_rate*t) with analytic derivatives."""

    n_states = 0

    def __init__(self, amplitude: float, angular_rate: float):
        if amplitude < 0.0:
            raise ValueError("amplitude must be nonnegative")
        self.amplitude = amplitude
        self.angular_rate = angular_rate

    def initial_state(self) -> np.ndarray:
        return np.zeros(0)

    def derivative(self, states: np.ndarray, t: float) -> np.ndarray:
        return np.zeros(0)

    def outputs(self, states: np.ndarray, t: float) -> tuple[float, float, float]:
        a, w = self.amplitude, self.angular_rate
        return a * math.sin(w * t), a * w * math.cos(w * t), -a * w * w * math.sin(w * t)


def traj_sample(gen, t: float, dt: float) -> tuple[float, float, float]:
    """Sample (q_d, dq_d, ddq_d) at t; the filtered generator then advances by dt.

    The filtered generator is stateful and meant to be marched sequentially
    with the same fixed step as the simulation; the sinusoid is evaluated
    analytically and ignores dt.
    """
    if gen.n_states == 0:
        return gen.outputs(gen.initial_state(), t)
    if not dt > 0.0:
        raise ValueError("dt must be positive for the filtered generator")
    out = gen.outputs(gen.states, t)
    k1 = gen.derivative(gen.states, t)
    k2 = gen.derivative(gen.states + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = gen.derivative(gen.states + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = gen.derivative(gen.states + dt * k3, t + dt)
    gen.states = gen.states + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    gen.time = t + dt
    return out
