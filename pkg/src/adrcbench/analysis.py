"""Numeric verification of error envelopes, bandwidth tuning, and spectra.

The observer and control error norms obey decay-plus-offset envelopes of the
ISS type, with constants assembled from a Lyapunov solution: the observation
error of the 3rd-order Luenberger design satisfies

    ||x_err(t)|| <= c1 ||x_err(0)|| exp(-gamma t)
                    + (2 ||P|| / (nu omega_o)) sup|df/dt|
                    + (2 omega_o^2 ||P|| / nu) sup|w|,

with H P + P H^T + omega_o I = 0, c1 = sqrt(lam_max/lam_min) and
gamma = omega_o (1 - nu)/(2 lam_max). The combined control error has the
analogous envelope driven by sup||x_err|| through the gain row [0, k_d, 1].
These are theorems for the 3rd-order Luenberger structure; a pointwise
violation on logged data indicates an implementation bug, which is exactly
what :func:`bound_check` hunts for.

``tune_omega`` reproduces the benchmark gain selection rule: pick the
observer bandwidth that hits a target tracking cost J_e, by bisection on
log10(omega_o).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import smallmat
from .observers import EsoStructure, LuenbergerEso, STANDARD3, luenberger_gains, structure_matrices
from .simkernel import RunRecord, ScenarioConfig, run_scenario


class BracketError(RuntimeError):
    """Tuning bracket does not enclose the target criterion value."""


@dataclass(frozen=True)
class IssBoundParams:
    """Lyapunov solution and derived constants of one error envelope."""

    p_matrix: np.ndarray
    lam_min: float
    lam_max: float
    p_norm: float
    nu: float
    gamma: float
    c1: float
    k_norm: float | None = None
    rho: float | None = None


class IssBound:
    """Evaluable decay-plus-offset envelope with its constants exposed."""

    def __init__(self, params: IssBoundParams, init_norm: float, terms: dict[str, float]):
        self.params = params
        self.init_norm = init_norm
        self.terms = dict(terms)
        self.offset = float(sum(terms.values()))

    def __call__(self, t) -> np.ndarray | float:
        decay = self.params.c1 * self.init_norm * np.exp(-self.params.gamma * np.asarray(t, dtype=float))
        return decay + self.offset


def iss_observer_bound(
    omega_o: float,
    nu: float = 0.5,
    sup_fdot: float = 0.0,
    sup_w: float = 0.0,
    init_norm: float = 0.0,
    structure: EsoStructure | None = None,
) -> IssBound:
    """Observation-error envelope for the 3rd-order Luenberger observer."""
    if not 0.0 < nu < 1.0:
        raise ValueError("nu must lie in (0, 1)")
    if structure is None:
        structure = EsoStructure.standard3()
    if structure.variant != STANDARD3:
        raise ValueError("the observation-error envelope is derived for the standard 3rd-order structure only")
    a, _, c, _ = structure_matrices(structure)
    gains = luenberger_gains(3, omega_o)
    h = a - np.outer(gains, c[0])
    p = smallmat.solve_lyapunov(h, omega_o * np.eye(3))
    lam_min, lam_max = smallmat.eig_extremes(p)
    p_norm = smallmat.operator_norm(p)
    params = IssBoundParams(
        p_matrix=p,
        lam_min=lam_min,
        lam_max=lam_max,
        p_norm=p_norm,
        nu=nu,
        gamma=omega_o * (1.0 - nu) / (2.0 * lam_max),
        c1=math.sqrt(lam_max / lam_min),
    )
    terms = {
        "fdot": 2.0 * p_norm * sup_fdot / (nu * omega_o),
        "noise": 2.0 * omega_o**2 * p_norm * sup_w / nu,
    }
    return IssBound(params, init_norm, terms)


def iss_control_bound(
    k_p: float,
    k_d: float,
    rho: float = 1.0,
    nu: float = 0.5,
    sup_obs_err: float = 0.0,
    init_norm: float = 0.0,
) -> IssBound:
    """Combined control-error envelope driven by the observation error norm."""
    if not 0.0 < nu < 1.0:
        raise ValueError("nu must lie in (0, 1)")
    if not rho > 0.0:
        raise ValueError("rho must be positive")
    h = np.array([[0.0, 1.0], [-k_p, -k_d]])
    p = smallmat.solve_lyapunov(h, rho * np.eye(2))
    lam_min, lam_max = smallmat.eig_extremes(p)
    p_norm = smallmat.operator_norm(p)
    k_row = np.array([[0.0, k_d, 1.0]])
    k_norm = smallmat.operator_norm(k_row)
    params = IssBoundParams(
        p_matrix=p,
        lam_min=lam_min,
        lam_max=lam_max,
        p_norm=p_norm,
        nu=nu,
        gamma=rho * (1.0 - nu) / (2.0 * lam_max),
        c1=math.sqrt(lam_max / lam_min),
        k_norm=k_norm,
        rho=rho,
    )
    terms = {"obs": 2.0 * p_norm * k_norm * sup_obs_err / (nu * rho)}
    return IssBound(params, init_norm, terms)


def five_point_derivative(x: np.ndarray, dt: float) -> np.ndarray:
    """Fourth-order finite-difference derivative on a uniform grid.

    Central 5-point stencil in the interior, one-sided 5-point stencils at the
    edges; needs at least 5 samples.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 5:
        raise ValueError("need at least 5 samples for the 5-point stencil")
    d = np.empty(n)
    d[2:-2] = (x[:-4] - 8.0 * x[1:-3] + 8.0 * x[3:-1] - x[4:]) / (12.0 * dt)
    fwd = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * dt)
    semi = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / (12.0 * dt)
    d[0] = fwd @ x[:5]
    d[1] = semi @ x[:5]
    d[-1] = -(fwd @ x[-1:-6:-1])
    d[-2] = -(semi @ x[-1:-6:-1])
    return d


@dataclass
class BoundReport:
    """Pointwise comparison of the observation-error norm against its envelope."""

    passed: bool
    min_margin: float  # min over samples of bound - actual; >= 0 means PASS
    t: np.ndarray
    actual: np.ndarray
    bound: np.ndarray
    sup_fdot: float
    sup_w: float


def bound_check(record: RunRecord, omega_o: float, nu: float = 0.5) -> BoundReport:
    """Verify the observation-error envelope on a logged 3rd-order Luenberger run.

    The true error rate is reconstructed from the logged tracking error with
    the 5-point stencil (it is not part of the log schema), and the
    perturbation suprema are measured from the privileged f_true and noise
    logs. PASS means actual <= bound at every sample.
    """
    if not 0.0 < nu < 1.0:
        raise ValueError("nu must lie in (0, 1)")
    t = record.t
    if t.size < 5:
        raise ValueError("record too short for the bound check")
    dt = float(t[1] - t[0])
    e_dot = five_point_derivative(record.e, dt)
    f_dot = five_point_derivative(record.f_true, dt)
    w = record.y - record.e
    err = np.stack([
        record.e - record.e_hat,
        e_dot - record.edot_hat,
        record.f_true - record.f_hat,
    ])
    actual = np.sqrt(np.sum(err * err, axis=0))
    sup_fdot = float(np.abs(f_dot).max())
    sup_w = float(np.abs(w).max())
    envelope = iss_observer_bound(
        omega_o, nu=nu, sup_fdot=sup_fdot, sup_w=sup_w, init_norm=float(actual[0])
    )
    bound = envelope(t)
    margin = bound - actual
    return BoundReport(
        passed=bool(np.all(actual <= bound)),
        min_margin=float(margin.min()),
        t=t,
        actual=actual,
        bound=bound,
        sup_fdot=sup_fdot,
        sup_w=sup_w,
    )


@dataclass
class TuneResult:
    omega_o: float
    j_e: float
    evaluations: int
    converged: bool


def tune_omega(
    target_j_e: float,
    make_config: Callable[[float], ScenarioConfig],
    bracket: tuple[float, float],
    tol: float = 0.01,
    max_iter: int = 40,
    max_expand: int = 6,
) -> TuneResult:
    """Find omega_o giving J_e = target by bisection on log10(omega_o).

    J_e decreases with omega_o in the useful region, so the bracket must
    satisfy J_e(lo) > target > J_e(hi); it is expanded geometrically up to
    max_expand times per side if it does not. Noise scenarios keep their
    configured seed throughout, making the search deterministic.
    """
    if not target_j_e > 0.0:
        raise ValueError("target J_e must be positive")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0.0 < lo < hi:
        raise ValueError("bracket must satisfy 0 < lo < hi")
    evals = 0

    def j_of(omega: float) -> float:
        nonlocal evals
        evals += 1
        rec = run_scenario(make_config(omega))
        if rec.diverged:
            raise BracketError(f"run diverged at omega_o = {omega:g}")
        return rec.j_e

    j_lo = j_of(lo)
    if abs(j_lo - target_j_e) <= tol * target_j_e:
        return TuneResult(lo, j_lo, evals, True)
    j_hi = j_of(hi)
    if abs(j_hi - target_j_e) <= tol * target_j_e:
        return TuneResult(hi, j_hi, evals, True)

    for _ in range(max_expand):
        if j_lo > target_j_e:
            break
        lo /= 4.0
        j_lo = j_of(lo)
    for _ in range(max_expand):
        if j_hi < target_j_e:
            break
        hi *= 4.0
        try:
            j_hi = j_of(hi)
        except Exception as exc:  # stability guard or divergence ends expansion
            raise BracketError(
                f"bracket expansion failed at omega_o = {hi:g}: {exc}; "
                f"achieved J_e range [{j_hi:g}, {j_lo:g}]"
            ) from exc
    if not (j_lo > target_j_e > j_hi):
        raise BracketError(
            f"target J_e = {target_j_e:g} not bracketed: "
            f"J_e({lo:g}) = {j_lo:g}, J_e({hi:g}) = {j_hi:g}"
        )

    log_lo, log_hi = math.log10(lo), math.log10(hi)
    omega = lo
    j_mid = j_lo
    for _ in range(max_iter):
        log_mid = 0.5 * (log_lo + log_hi)
        omega = 10.0**log_mid
        j_mid = j_of(omega)
        if abs(j_mid - target_j_e) <= tol * target_j_e:
            return TuneResult(omega, j_mid, evals, True)
        if j_mid > target_j_e:
            log_lo = log_mid
        else:
            log_hi = log_mid
    return TuneResult(omega, j_mid, evals, False)


def error_spectrum(e: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Hann-windowed magnitude periodogram of the mean-removed signal.

    Returns (omega [rad/s], magnitude) over the one-sided frequency grid.
    """
    x = np.asarray(e, dtype=float)
    if x.size < 16:
        raise ValueError("need at least 16 samples for a spectrum")
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    x = x - x.mean()
    window = np.hanning(x.size)
    magnitude = np.abs(np.fft.rfft(window * x))
    omega = 2.0 * math.pi * np.fft.rfftfreq(x.size, dt)
    return omega, magnitude


def dominant_peak(
    omega: np.ndarray, magnitude: np.ndarray, min_omega: float = 0.0
) -> tuple[float, float]:
    """Largest spectral bin at or above min_omega.

    min_omega excludes the drift band around DC (commanded-motion and
    closed-loop wander content), which is not a resonance peak.
    """
    omega = np.asarray(omega, dtype=float)
    magnitude = np.asarray(magnitude, dtype=float)
    mask = omega >= min_omega
    if not np.any(mask):
        raise ValueError("min_omega excludes every bin")
    idx = np.flatnonzero(mask)
    k = idx[np.argmax(magnitude[idx])]
    return float(omega[k]), float(magnitude[k])
