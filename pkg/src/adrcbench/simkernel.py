"""Deterministic fixed-step simulation of the coupled tracking loop.

One classical 4th-order Runge-Kutta integrator advances the concatenated
state [trajectory filter | plant (q, dq) | observer] on a uniform grid.
Measurement noise is drawn once per step from a seeded Gaussian stream and
held constant across the four stages, so identical configurations (seed
included) reproduce bitwise-identical records.

The three quality criteria are time integrals over the full horizon,
evaluated by trapezoidal quadrature on the logged grid:

    J_e = integral |e| dt,   J_u = integral tau^2 dt,   J_f = integral |f - f_hat| dt.

These match the benchmark tables this package reproduces (the tables report
raw integrals; no 1/T normalization is applied).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .control import ControllerParams, control_law, effective_input
from .observers import AmObserver, LuenbergerEso, observer_tag
from .plant import ModelEstimate, PlantModel, PlantState, total_disturbance_truth
from .trajectory import FilteredStepGen, SinusoidGen

DIVERGENCE_LIMIT = 1e12
OMEGA_DT_LIMIT = 2.0  # RK4 real-axis stability bound is ~2.78; keep margin
CSV_HEADER = "t,q,q_d,e,y,e_hat,edot_hat,f_hat,f_true,tau"


class ConfigError(ValueError):
    """Invalid scenario configuration."""


@dataclass
class ScenarioConfig:
    """Complete description of one simulation run."""

    plant: PlantModel
    trajectory: FilteredStepGen | SinusoidGen
    observer: LuenbergerEso | AmObserver
    estimate: ModelEstimate = field(default_factory=ModelEstimate)
    controller: ControllerParams = field(default_factory=lambda: ControllerParams(4.0, 4.0, 1.0))
    sigma_w: float = 0.0  # measurement noise variance
    t_sim: float = 20.0
    dt: float = 1e-3
    seed: int = 0
    initial_state: PlantState | None = None  # default: match the trajectory at t = 0

    def validate(self) -> None:
        if not self.dt > 0.0:
            raise ConfigError("sim.dt must be positive")
        if self.t_sim < self.dt:
            raise ConfigError("sim.t_sim must be at least one step")
        if self.sigma_w < 0.0:
            raise ConfigError("noise.variance must be nonnegative")
        margin = self.observer.omega_o * self.dt
        if margin > OMEGA_DT_LIMIT:
            raise ConfigError(
                f"omega_o*dt = {margin:.3g} exceeds the fixed-step stability margin "
                f"{OMEGA_DT_LIMIT}; reduce dt or omega_o"
            )


@dataclass
class RunRecord:
    """Uniformly sampled signal log plus the integral criteria."""

    t: np.ndarray
    q: np.ndarray
    q_d: np.ndarray
    e: np.ndarray
    y: np.ndarray
    e_hat: np.ndarray
    edot_hat: np.ndarray
    f_hat: np.ndarray
    f_true: np.ndarray
    tau: np.ndarray
    j_e: float = math.nan
    j_u: float = math.nan
    j_f: float = math.nan
    diverged: bool = False


def noise_stream(seed: int, sigma_w: float, count: int) -> np.ndarray:
    """Reproducible Gaussian samples of variance sigma_w (exact zeros when 0)."""
    if sigma_w < 0.0:
        raise ConfigError("noise variance must be nonnegative")
    if sigma_w == 0.0:
        return np.zeros(count)
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, math.sqrt(sigma_w), count)


def criteria(t: np.ndarray, e: np.ndarray, tau: np.ndarray, f_err: np.ndarray) -> tuple[float, float, float]:
    """Trapezoidal (J_e, J_u, J_f) over the sampled horizon."""
    t = np.asarray(t, dtype=float)
    if t.size < 2:
        raise ValueError("criteria need at least two samples")
    j_e = float(np.trapezoid(np.abs(e), t))
    j_u = float(np.trapezoid(np.asarray(tau) ** 2, t))
    j_f = float(np.trapezoid(np.abs(f_err), t))
    return j_e, j_u, j_f


def run_scenario(cfg: ScenarioConfig) -> RunRecord:
    """Integrate one scenario and log every signal on the step grid."""
    cfg.validate()
    dt = cfg.dt
    steps = int(round(cfg.t_sim / dt))
    n_samples = steps + 1

    traj = cfg.trajectory
    nf = traj.n_states
    obs = cfg.observer
    est = cfg.estimate
    ctl = cfg.controller
    model = cfg.plant

    f_mat, g_y, g_u = obs.linear_realization()
    est_idx = (0, 1, 3) if isinstance(obs, AmObserver) else (0, 1, 2)
    i0, i1, i2 = est_idx

    inertia = model.inertia
    unmodeled = model.unmodeled
    modeled = model.modeled
    disturbance = model.disturbance
    modeled_hat = est.modeled_hat
    j_hat = est.j_hat
    k_p, k_d, t_on = ctl.k_p, ctl.k_d, ctl.t_on
    amp = getattr(traj, "amplitude", 0.0)
    t_step = getattr(traj, "step_time", math.inf)

    def signals(t: float, s: np.ndarray, w: float):
        """Algebraic loop closure at one instant; shared by stages and logging."""
        if nf:
            x2, x3, x4 = s[2], s[3], s[4]
            q_d = x4
            dq_d = 2.0 * (x3 - x4)
            ddq_d = 4.0 * (x2 - 2.0 * x3 + x4)
        else:
            q_d, dq_d, ddq_d = traj.outputs(s[:0], t)
        q = s[nf]
        dq = s[nf + 1]
        xo = s[nf + 2 :]
        e = q_d - q
        y = e + w
        e_hat = xo[i0]
        de_hat = xo[i1]
        f_hat = xo[i2]
        dq_hat = dq_d - de_hat
        hm_hat = modeled_hat(q, dq_hat)
        if t < t_on:
            tau = 0.0
        else:
            tau = hm_hat + j_hat * (f_hat + k_p * e_hat + k_d * de_hat)
        u_eff = (tau - hm_hat) / j_hat
        return q_d, dq_d, ddq_d, q, dq, e, y, e_hat, de_hat, f_hat, tau, u_eff

    def dynamics(t: float, s: np.ndarray, w: float) -> np.ndarray:
        _, _, _, q, dq, _, y, _, _, _, tau, u_eff = signals(t, s, w)
        ds = np.empty_like(s)
        if nf:
            u_in = amp if t >= t_step else 0.0
            ds[0] = 2.0 * (u_in - s[0])
            ds[1] = 2.0 * (s[0] - s[1])
            ds[2] = 2.0 * (s[1] - s[2])
            ds[3] = 2.0 * (s[2] - s[3])
            ds[4] = 2.0 * (s[3] - s[4])
        ds[nf] = dq
        ds[nf + 1] = (tau - unmodeled(q, dq) - modeled(q, dq) - disturbance(t)) / inertia(q)
        ds[nf + 2 :] = f_mat @ s[nf + 2 :] + g_y * y + g_u * u_eff
        return ds

    # initial state
    traj_state0 = traj.initial_state()
    if cfg.initial_state is None:
        q_d0, dq_d0, _ = traj.outputs(traj_state0, 0.0)
        q0, dq0 = q_d0, dq_d0
    else:
        q0, dq0 = cfg.initial_state.q, cfg.initial_state.dq
    state = np.concatenate([traj_state0, [q0, dq0], obs.state])

    noise = noise_stream(cfg.seed, cfg.sigma_w, n_samples)

    cols = {name: np.empty(n_samples) for name in
            ("t", "q", "q_d", "e", "y", "e_hat", "edot_hat", "f_hat", "f_true", "tau")}
    diverged = False
    last = n_samples - 1

    half = 0.5 * dt
    sixth = dt / 6.0
    k = 0
    while True:
        t = k * dt
        w = noise[k]
        q_d, dq_d, ddq_d, q, dq, e, y, e_hat, de_hat, f_hat, tau, _ = signals(t, state, w)
        cols["t"][k] = t
        cols["q"][k] = q
        cols["q_d"][k] = q_d
        cols["e"][k] = e
        cols["y"][k] = y
        cols["e_hat"][k] = e_hat
        cols["edot_hat"][k] = de_hat
        cols["f_hat"][k] = f_hat
        cols["f_true"][k] = total_disturbance_truth(model, est, PlantState(q, dq), tau, ddq_d, t)
        cols["tau"][k] = tau
        if k == steps:
            break
        k1 = dynamics(t, state, w)
        k2 = dynamics(t + half, state + half * k1, w)
        k3 = dynamics(t + half, state + half * k2, w)
        k4 = dynamics(t + dt, state + dt * k3, w)
        state = state + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        k += 1
        if not bool(np.all(np.abs(state) < DIVERGENCE_LIMIT)):
            diverged = True
            last = k - 1
            break

    sl = slice(0, last + 1)
    record = RunRecord(**{name: arr[sl].copy() for name, arr in cols.items()}, diverged=diverged)
    if not diverged:
        record.j_e, record.j_u, record.j_f = criteria(
            record.t, record.e, record.tau, record.f_true - record.f_hat
        )
    return record


def run_batch(cfgs: list[ScenarioConfig]) -> list[RunRecord]:
    """Run independent configurations; each owns its own seeded noise stream.

    Runs share no state, so callers may execute them concurrently; results are
    returned in input order regardless of execution order.
    """
    return [run_scenario(cfg) for cfg in cfgs]


def write_csv(record: RunRecord, path) -> None:
    """Serialize the signal log; floats use repr-exact formatting."""
    names = CSV_HEADER.split(",")
    arrays = [getattr(record, "q_d" if n == "q_d" else n) for n in names]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for i in range(record.t.size):
            fh.write(",".join(f"{col[i]:.17g}" for col in arrays) + "\n")


def read_csv(path) -> RunRecord:
    """Load a signal log written by write_csv and recompute the criteria."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    names = CSV_HEADER.split(",")
    kwargs = {name: data[:, i].copy() for i, name in enumerate(names)}
    record = RunRecord(**kwargs)
    record.j_e, record.j_u, record.j_f = criteria(
        record.t, record.e, record.tau, record.f_true - record.f_hat
    )
    return record


def write_summary(path, record: RunRecord, cfg: ScenarioConfig) -> None:
    """Sidecar key-value block with the criteria and run identity."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"observer = {observer_tag(cfg.observer)}\n")
        fh.write(f"omega_o = {cfg.observer.omega_o:.17g}\n")
        fh.write(f"seed = {cfg.seed}\n")
        fh.write(f"diverged = {record.diverged}\n")
        fh.write(f"J_e = {record.j_e:.17g}\n")
        fh.write(f"J_u = {record.j_u:.17g}\n")
        fh.write(f"J_f = {record.j_f:.17g}\n")
