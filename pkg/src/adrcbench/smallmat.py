"""Dense linear algebra for small matrices (orders 1..8).

Everything in this package works with state dimensions of at most 8, so the
routines here favour determinism and simplicity over asymptotic efficiency:
symmetric eigenvalues come from cyclic Jacobi sweeps, the continuous-time
Lyapunov equation is solved through its n^2 x n^2 vectorization, and the
Hurwitz test runs Routh's tabulation on Faddeev-LeVerrier characteristic
polynomial coefficients.

All functions are pure and accept anything ``np.asarray`` understands.
"""

from __future__ import annotations

import numpy as np

MAX_ORDER = 8
SYM_RTOL = 1e-12


class LyapunovError(RuntimeError):
    """Raised when the Lyapunov solve fails (singular system or indefinite result)."""


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {m.shape}")
    rows, cols = m.shape
    if not (1 <= rows <= MAX_ORDER and 1 <= cols <= MAX_ORDER):
        raise ValueError(f"{name} must have 1..{MAX_ORDER} rows and columns, got {m.shape}")
    return m


def _as_square(a, name: str = "matrix") -> np.ndarray:
    m = _as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got {m.shape}")
    return m


def as_symmetric(a, name: str = "matrix") -> np.ndarray:
    """Validate symmetry to relative tolerance 1e-12 and return the array."""
    m = _as_square(a, name)
    scale = max(np.abs(m).max(), 1.0)
    if np.abs(m - m.T).max() > SYM_RTOL * scale:
        raise ValueError(f"{name} is not symmetric within relative tolerance {SYM_RTOL}")
    return m


def mat_apply(a, x) -> np.ndarray:
    """Matrix-vector product with explicit dimension checking."""
    m = _as_matrix(a)
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.shape[0] != m.shape[1]:
        raise ValueError(f"vector length {v.shape} does not match matrix columns {m.shape[1]}")
    return m @ v


def _jacobi_eigvals(s: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = s.copy()
    n = a.shape[0]
    if n == 1:
        return a[0, :1].copy()
    scale = np.sqrt(np.sum(a * a))
    if scale == 0.0:
        return np.zeros(n)
    for _ in range(60):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - sn * rq
                a[q, :] = sn * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - sn * cq
                a[:, q] = sn * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return np.sort(np.diag(a))


def eig_extremes(s) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a symmetric matrix."""
    m = as_symmetric(s)
    vals = _jacobi_eigvals(m)
    return float(vals[0]), float(vals[-1])


def operator_norm(a) -> float:
    """Induced 2-norm (largest singular value), valid for rectangular inputs."""
    m = _as_matrix(a)
    gram = m.T @ m
    gram = 0.5 * (gram + gram.T)
    vals = _jacobi_eigvals(gram)
    return float(np.sqrt(max(vals[-1], 0.0)))


def char_poly_coeffs(a) -> np.ndarray:
    """Monic characteristic polynomial coefficients [1, c1, ..., cn].

    Faddeev-LeVerrier recursion; exact for integer-valued matrices whose
    intermediate traces stay below 2**53.
    """
    m = _as_square(a)
    n = m.shape[0]
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    work = np.eye(n)
    for k in range(1, n + 1):
        work = m @ work
        ck = -np.trace(work) / k
        coeffs[k] = ck
        work = work + ck * np.eye(n)
    return coeffs


def is_hurwitz(a) -> bool:
    """Routh-Hurwitz test: True iff every eigenvalue has a strictly negative real part.

    Marginal cases (zero Routh pivot) are reported as not Hurwitz.
    """
    coeffs = char_poly_coeffs(a)
    n = len(coeffs) - 1
    if n == 0:
        return False
    if np.any(coeffs <= 0.0):
        return False
    rows = [coeffs[0::2].copy(), coeffs[1::2].copy()]
    width = len(rows[0])
    rows[1] = np.pad(rows[1], (0, width - len(rows[1])))
    for _ in range(n - 1):
        top, mid = rows[-2], rows[-1]
        if mid[0] == 0.0:
            return False
        nxt = np.zeros(width)
        for j in range(width - 1):
            nxt[j] = (mid[0] * top[j + 1] - top[0] * mid[j + 1]) / mid[0]
        rows.append(nxt)
    first_col = np.array([r[0] for r in rows])
    return bool(np.all(first_col[: n + 1] > 0.0))


def solve_lyapunov(h, q) -> np.ndarray:
    """Solve H P + P H^T + Q = 0 for symmetric positive definite P.

    H must be Hurwitz and Q symmetric positive definite; the solve goes through
    the Kronecker vectorization (at most 64 x 64) with partial-pivot LU. The
    result is symmetrized as (P + P^T)/2 to suppress round-off drift.
    """
    hm = _as_square(h, "H")
    qm = as_symmetric(q, "Q")
    if hm.shape != qm.shape:
        raise ValueError(f"H and Q orders differ: {hm.shape} vs {qm.shape}")
    if not is_hurwitz(hm):
        raise LyapunovError("H is not Hurwitz: Lyapunov solve has no positive definite solution")
    n = hm.shape[0]
    eye = np.eye(n)
    system = np.kron(hm, eye) + np.kron(eye, hm)
    try:
        vec = np.linalg.solve(system, -qm.reshape(-1))
    except np.linalg.LinAlgError as exc:
        raise LyapunovError(f"singular Lyapunov system: {exc}") from exc
    p = vec.reshape(n, n)
    p = 0.5 * (p + p.T)
    lam_min, _ = eig_extremes(p)
    if lam_min <= 0.0:
        raise LyapunovError(f"Lyapunov solution is not positive definite (lambda_min = {lam_min:g})")
    return p


def lyapunov_residual(h, p, q) -> float:
    """Operator norm of H P + P H^T + Q; diagnostic for solver accuracy."""
    hm = _as_square(h, "H")
    return operator_norm(hm @ p + p @ hm.T + q)
