"""Disturbance-rejecting trajectory tracking control law.

The controller cancels the estimated total disturbance and closes a PD loop
on the estimated error: tau = h_m_hat + J_hat*(f_hat + k_p e_hat + k_d de_hat).
Only observer estimates feed the law (a causal controller has nothing else),
and the output is gated to zero before t_on to ride out the observer
transient without exciting the plant.
"""

from __future__ import annotations

from dataclasses import dataclass

from .plant import ModelEstimate


@dataclass(frozen=True)
class ControllerParams:
    k_p: float
    k_d: float
    t_on: float = 0.0

    def __post_init__(self):
        if not (self.k_p > 0.0 and self.k_d > 0.0):
            raise ValueError("k_p and k_d must be positive")
        if self.t_on < 0.0:
            raise ValueError("t_on must be nonnegative")


def control_law(
    params: ControllerParams,
    est: ModelEstimate,
    q: float,
    estimates: tuple[float, float, float],
    t: float,
    dq_desired: float = 0.0,
) -> float:
    """Applied torque at time t from the estimate triple (e_hat, de_hat, f_hat).

    The modeled-dynamics estimate is evaluated at the reconstructed rate
    dq_hat = dq_desired - de_hat. Returns exactly 0 while t < t_on.
    """
    if t < params.t_on:
        return 0.0
    e_hat, de_hat, f_hat = estimates
    dq_hat = dq_desired - de_hat
    hm_hat = est.modeled_hat(q, dq_hat)
    return hm_hat + est.j_hat * (f_hat + params.k_p * e_hat + params.k_d * de_hat)


def effective_input(est: ModelEstimate, q: float, dq_hat: float, tau: float) -> float:
    """Normalized observer input u_eff = (tau - h_m_hat)/J_hat.

    Shares the model-estimate evaluation with the control law so observer and
    controller always see the same quantities.
    """
    return (tau - est.modeled_hat(q, dq_hat)) / est.j_hat


def closed_loop_residual(
    e: float,
    de: float,
    f_err: float,
    de_err: float,
    params: ControllerParams,
) -> float:
    """Predicted error acceleration of the perturbed closed loop.

    dde = -k_p e - k_d de + f_err + k_d de_err, where f_err = f - f_hat and
    de_err = de - de_hat. Diagnostic cross-check that logged signals satisfy
    the closed-loop error dynamics.
    """
    return -params.k_p * e - params.k_d * de + f_err + params.k_d * de_err
