"""The graph Swift-Hohenberg system: right-hand side, Jacobian, gradient-flow
time stepping, Newton steady states, and linear stability.

The system is du/dt = -(L - kappa I)^2 u + eps u + r u*u - b u*u*u, the
gradient flow of E(u) = u' (L-kappa)^2 u / 2 - eps |u|^2 / 2
- r sum u^3 / 3 + b sum u^4 / 4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class SHParams:
    """Parameters of the graph Swift-Hohenberg equation."""

    kappa: float
    epsilon: float
    r: float
    b: float

    def __post_init__(self):
        if self.b <= 0:
            raise ValueError("b must be positive")
        if self.kappa >= 0:
            raise ValueError("kappa must be negative")

    def with_epsilon(self, epsilon: float) -> "SHParams":
        return SHParams(kappa=self.kappa, epsilon=epsilon, r=self.r, b=self.b)


def shifted_operator(L: np.ndarray, kappa: float) -> np.ndarray:
    """-(L - kappa I)^2, the linear part of the right-hand side at eps = 0."""
    N = L.shape[0]
    S = L - kappa * np.eye(N)
    return -(S @ S)


def rhs(u: np.ndarray, p: SHParams, L: np.ndarray, linear: np.ndarray | None = None) -> np.ndarray:
    """Right-hand side; ``linear`` may carry a precomputed -(L-kappa)^2."""
    u = np.asarray(u, dtype=float)
    if u.shape[0] != L.shape[0]:
        raise ValueError("state and Laplacian dimensions disagree")
    A = shifted_operator(L, p.kappa) if linear is None else linear
    return A @ u + p.epsilon * u + p.r * u * u - p.b * u * u * u


def jacobian(u: np.ndarray, p: SHParams, L: np.ndarray, linear: np.ndarray | None = None) -> np.ndarray:
    """-(L-kappa)^2 + diag(eps + 2 r u - 3 b u^2); symmetric."""
    u = np.asarray(u, dtype=float)
    if u.shape[0] != L.shape[0]:
        raise ValueError("state and Laplacian dimensions disagree")
    A = shifted_operator(L, p.kappa) if linear is None else linear
    J = A.copy()
    J[np.diag_indices_from(J)] += p.epsilon + 2.0 * p.r * u - 3.0 * p.b * u * u
    return J


def energy(u: np.ndarray, p: SHParams, L: np.ndarray) -> float:
    """Lyapunov functional; non-increasing along trajectories."""
    N = L.shape[0]
    S = (L - p.kappa * np.eye(N)) @ u
    return float(
        0.5 * (S @ S)
        - 0.5 * p.epsilon * (u @ u)
        - p.r / 3.0 * np.sum(u**3)
        + p.b / 4.0 * np.sum(u**4)
    )


class StiffnessError(RuntimeError):
    """Step size underflowed while enforcing energy descent."""


def integrate(
    u0: np.ndarray,
    p: SHParams,
    L: np.ndarray,
    t_end: float,
    tol: float = 1e-8,
    n_samples: int = 20,
    h0: float = 1e-3,
    h_min: float = 1e-14,
):
    """Semi-implicit gradient-flow integration up to t_end.

    The linear part -(L-kappa)^2 + eps I is treated implicitly with a dense
    LU factorization reused while the step size is unchanged; the nonlinearity
    is explicit.  A step is accepted only if the energy does not increase
    (within ``tol`` relative slack), otherwise the step is halved.

    Returns (times, states) with ``n_samples`` snapshots including t_end.
    """
    u = np.asarray(u0, dtype=float).copy()
    N = L.shape[0]
    A = shifted_operator(L, p.kappa) + p.epsilon * np.eye(N)

    h = h0
    lu = scipy.linalg.lu_factor(np.eye(N) - h * A)
    t = 0.0
    sample_times = np.linspace(0.0, t_end, n_samples + 1)[1:]
    times = [0.0]
    states = [u.copy()]
    next_sample = 0
    E = energy(u, p, L)
    grow_streak = 0

    while t < t_end - 1e-15:
        h_eff = min(h, t_end - t)
        if h_eff != h:
            lu_step = scipy.linalg.lu_factor(np.eye(N) - h_eff * A)
        else:
            lu_step = lu
        g = p.r * u * u - p.b * u * u * u
        u_new = scipy.linalg.lu_solve(lu_step, u + h_eff * g)
        E_new = energy(u_new, p, L)
        if E_new <= E + tol * max(1.0, abs(E)):
            t += h_eff
            u = u_new
            E = E_new
            grow_streak += 1
            if grow_streak >= 5 and h < 1.0:
                h *= 2.0
                lu = scipy.linalg.lu_factor(np.eye(N) - h * A)
                grow_streak = 0
            while next_sample < len(sample_times) and t >= sample_times[next_sample] - 1e-15:
                times.append(t)
                states.append(u.copy())
                next_sample += 1
        else:
            h *= 0.5
            grow_streak = 0
            if h < h_min:
                raise StiffnessError(f"step size underflow at t = {t}")
            lu = scipy.linalg.lu_factor(np.eye(N) - h * A)

    if len(times) == 1 or times[-1] < t_end - 1e-15:
        times.append(t)
        states.append(u.copy())
    return np.array(times), np.array(states)


def newton_steady(
    u_guess: np.ndarray,
    p: SHParams,
    L: np.ndarray,
    tol: float | None = None,
    max_iter: int = 50,
):
    """Damped Newton for rhs(u) = 0.

    Returns (u, converged, residual_norm).  Default tolerance scales with
    sqrt(N) for fixed per-node accuracy.
    """
    u = np.asarray(u_guess, dtype=float).copy()
    N = L.shape[0]
    if tol is None:
        tol = 1e-10 * np.sqrt(N)
    linear = shifted_operator(L, p.kappa)
    res = rhs(u, p, L, linear)
    rnorm = np.linalg.norm(res)
    for _ in range(max_iter):
        if rnorm <= tol:
            return u, True, float(rnorm)
        J = jacobian(u, p, L, linear)
        try:
            step = np.linalg.solve(J, -res)
        except np.linalg.LinAlgError:
            return u, False, float(rnorm)
        lam = 1.0
        for _ in range(30):
            u_try = u + lam * step
            res_try = rhs(u_try, p, L, linear)
            rnorm_try = np.linalg.norm(res_try)
            if rnorm_try < rnorm:
                break
            lam *= 0.5
        else:
            return u, False, float(rnorm)
        u, res, rnorm = u_try, res_try, rnorm_try
    return u, rnorm <= tol, float(rnorm)


def stability(u_star: np.ndarray, p: SHParams, L: np.ndarray, n_leading: int = 5):
    """Leading Jacobian eigenvalues and a stable flag.

    Stable iff the largest eigenvalue is below -1e-8 * scale, with the scale
    set by the first nonzero linearization eigenvalue (growing like N^2).
    """
    J = jacobian(u_star, p, L)
    eigs = np.linalg.eigvalsh(J)[::-1]
    lam = np.linalg.eigvalsh(L)
    ell = np.sort(-((lam - p.kappa) ** 2))[::-1]
    scale = max(1.0, abs(ell[1]) if len(ell) > 1 else 1.0)
    stable = bool(eigs[0] <= -1e-8 * scale)
    return eigs[:n_leading], stable
