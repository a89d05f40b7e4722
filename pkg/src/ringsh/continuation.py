"""Pseudo-arclength continuation of Swift-Hohenberg steady states in epsilon:
branch switching off the trivial state, fold detection, and empirical
normal-form coefficient fits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ringsh.dynamics import SHParams, jacobian, newton_steady, rhs, shifted_operator


@dataclass(frozen=True)
class BranchPointCandidate:
    epsilon: float
    multiplicity: int
    mode_eigenvalue: float  # Laplacian eigenvalue whose shifted mode crosses zero


@dataclass(frozen=True)
class FoldEvent:
    epsilon: float
    amplitude: float
    index: int  # branch point index just before the tangent reversal


@dataclass
class BranchPoint:
    epsilon: float
    u: np.ndarray
    amplitude: float
    supnorm: float
    stable: bool
    tangent_eps: float


@dataclass
class Branch:
    """Ordered solution curve with detected fold events."""

    points: list = field(default_factory=list)
    folds: list = field(default_factory=list)
    terminated: str = ""

    @property
    def epsilons(self):
        return np.array([pt.epsilon for pt in self.points])

    @property
    def amplitudes(self):
        return np.array([pt.amplitude for pt in self.points])


@dataclass(frozen=True)
class ContinuationControls:
    ds0: float = 1e-3
    ds_min: float = 1e-9
    ds_max: float = 0.1
    max_steps: int = 2000
    newton_max_iter: int = 10
    newton_tol: float | None = None
    amplitude_cap: float = 10.0
    eps_range: tuple = (-1.0, 1.0)

    def as_dict(self) -> dict:
        return {
            "ds0": self.ds0,
            "ds_min": self.ds_min,
            "ds_max": self.ds_max,
            "max_steps": self.max_steps,
            "newton_max_iter": self.newton_max_iter,
            "newton_tol": self.newton_tol,
            "amplitude_cap": self.amplitude_cap,
            "eps_range": list(self.eps_range),
        }


def trivial_branch_scan(p: SHParams, L: np.ndarray, eps_lo: float, eps_hi: float, tie_tol: float = 1e-8):
    """Branch points of the trivial state: eps = (lambda_k - kappa)^2 within range.

    The linearization at 0 has eigenvalues -(lambda_k - kappa)^2 + eps, so each
    distinct value of (lambda_k - kappa)^2 inside [eps_lo, eps_hi] is a crossing;
    multiplicity counts the Laplacian eigenvalues tied within ``tie_tol``.
    """
    lam = np.linalg.eigvalsh(L)
    crossings = (lam - p.kappa) ** 2
    order = np.argsort(crossings)
    candidates = []
    i = 0
    while i < len(order):
        eps_c = crossings[order[i]]
        j = i
        while j + 1 < len(order) and crossings[order[j + 1]] - eps_c <= tie_tol * max(1.0, eps_c):
            j += 1
        if eps_lo <= eps_c <= eps_hi:
            candidates.append(
                BranchPointCandidate(
                    epsilon=float(eps_c),
                    multiplicity=j - i + 1,
                    mode_eigenvalue=float(lam[order[i]]),
                )
            )
        i = j + 1
    return candidates


def _stability_scale(L: np.ndarray, kappa: float) -> float:
    """Natural spectral scale: first nonzero linearization eigenvalue magnitude."""
    lam = np.linalg.eigvalsh(L)
    ell = np.sort(-((lam - kappa) ** 2))[::-1]
    return max(1.0, abs(ell[1]) if len(ell) > 1 else 1.0)


def _amplitude(u, v_crit, basis):
    """Signed amplitude of u along the critical mode.

    With a degenerate critical pair the steady states come in a continuous
    family of phase rotations, and the corrector is free to drift along that
    family; the scalar <v_crit, u> then under-measures the amplitude.  Given
    an orthonormal basis of the critical eigenspace, the projection norm is
    invariant under the drift, signed by the v_crit component.
    """
    w = float(v_crit @ u)
    if basis is None:
        return w
    return float(np.copysign(np.linalg.norm(basis.T @ u), w if w != 0.0 else 1.0))


def _make_point(u, eps, p, L, linear, v_crit, tangent_eps, scale, basis=None):
    J = jacobian(u, p.with_epsilon(eps), L, linear)
    stable = bool(np.linalg.eigvalsh(J)[-1] <= -1e-8 * scale)
    return BranchPoint(
        epsilon=float(eps),
        u=u.copy(),
        amplitude=_amplitude(u, v_crit, basis),
        supnorm=float(np.abs(u).max()),
        stable=stable,
        tangent_eps=float(tangent_eps),
    )


def switch_branch(
    eps_bp: float,
    v_crit: np.ndarray,
    h0: float,
    p: SHParams,
    L: np.ndarray,
    controls: ContinuationControls = ContinuationControls(),
):
    """First nontrivial point near a branch point.

    Predicts u = h0 * v_crit and corrects with Newton on the bordered system
    {rhs(u; eps) = 0, <v_crit, u> = h0}, solving for (u, eps).  Both signs of
    h0 are attempted; returns (u, eps) or None if neither corrects.
    """
    N = L.shape[0]
    linear = shifted_operator(L, p.kappa)
    tol = controls.newton_tol if controls.newton_tol is not None else 1e-10 * np.sqrt(N)
    for sign in (1.0, -1.0):
        amp = sign * h0
        u = amp * v_crit
        eps = eps_bp
        ok = False
        for _ in range(25):
            p_eps = p.with_epsilon(eps)
            res = rhs(u, p_eps, L, linear)
            con = v_crit @ u - amp
            if np.linalg.norm(res) <= tol and abs(con) <= tol:
                ok = True
                break
            J = jacobian(u, p_eps, L, linear)
            big = np.zeros((N + 1, N + 1))
            big[:N, :N] = J
            big[:N, N] = u  # d rhs / d eps
            big[N, :N] = v_crit
            delta = _bordered_solve(big, -np.concatenate([res, [con]]))
            if delta is None:
                break
            u = u + delta[:N]
            eps = eps + delta[N]
        if ok and np.linalg.norm(u) > 0.1 * abs(h0):
            return u, float(eps)
    return None


def continue_branch(
    u0: np.ndarray,
    eps0: float,
    direction: float,
    p: SHParams,
    L: np.ndarray,
    v_crit: np.ndarray,
    controls: ContinuationControls = ContinuationControls(),
    amplitude_basis: np.ndarray = None,
):
    """Pseudo-arclength continuation from a converged start point.

    Secant predictor plus Newton corrector on the bordered system
    {rhs(u; eps) = 0, tangent . (x - x_pred) = 0}.  The step halves on
    corrector failure and grows by 1.3 after three successes.  Folds are
    recorded where the tangent's epsilon component changes sign.

    When the critical mode is degenerate, pass the orthonormal eigenspace
    basis (columns) as amplitude_basis so recorded amplitudes stay phase
    invariant; see _amplitude.
    """
    N = L.shape[0]
    linear = shifted_operator(L, p.kappa)
    tol = controls.newton_tol if controls.newton_tol is not None else 1e-10 * np.sqrt(N)

    u, converged, _ = newton_steady(u0, p.with_epsilon(eps0), L, tol=tol)
    if not converged:
        raise RuntimeError("continuation start point does not satisfy the residual tolerance")

    branch = Branch()
    scale = _stability_scale(L, p.kappa)

    # Initial tangent from the bordered Jacobian nullspace direction.
    tan_u, tan_e = _nullspace_tangent(u, eps0, p, L, linear, v_crit, direction)
    branch.points.append(_make_point(u, eps0, p, L, linear, v_crit, tan_e, scale, amplitude_basis))

    ds = controls.ds0
    successes = 0
    eps = eps0
    for _ in range(controls.max_steps):
        accepted = False
        while not accepted:
            u_pred = u + ds * tan_u
            eps_pred = eps + ds * tan_e
            sol = _correct(u_pred, eps_pred, tan_u, tan_e, p, L, linear, tol, controls.newton_max_iter)
            if sol is None:
                ds *= 0.5
                successes = 0
                if ds < controls.ds_min:
                    branch.terminated = "corrector divergence"
                    return branch
            else:
                accepted = True
        u_new, eps_new = sol
        # Secant tangent for the next prediction.
        du = u_new - u
        de = eps_new - eps
        nrm = np.sqrt(du @ du + de * de)
        tan_u_new, tan_e_new = du / nrm, de / nrm
        if tan_e * tan_e_new < 0:
            amp_new = _amplitude(u_new, v_crit, amplitude_basis)
            branch.folds.append(
                FoldEvent(
                    epsilon=_fold_epsilon(branch.points, eps_new, amp_new),
                    amplitude=amp_new,
                    index=len(branch.points) - 1,
                )
            )
        u, eps, tan_u, tan_e = u_new, eps_new, tan_u_new, tan_e_new
        branch.points.append(_make_point(u, eps, p, L, linear, v_crit, tan_e, scale, amplitude_basis))
        successes += 1
        if successes >= 3:
            ds = min(ds * 1.3, controls.ds_max)
            successes = 0
        if np.abs(u).max() > controls.amplitude_cap:
            branch.terminated = "amplitude cap"
            return branch
        if not controls.eps_range[0] <= eps <= controls.eps_range[1]:
            branch.terminated = "epsilon range exit"
            return branch
    branch.terminated = "step budget"
    return branch


def _nullspace_tangent(u, eps, p, L, linear, v_crit, direction):
    """Tangent of the solution curve at (u, eps), oriented by ``direction``."""
    N = L.shape[0]
    J = jacobian(u, p.with_epsilon(eps), L, linear)
    big = np.zeros((N + 1, N + 1))
    big[:N, :N] = J
    big[:N, N] = u
    big[N, N] = 1.0  # anchor: prefer unit epsilon component
    rhs_vec = np.zeros(N + 1)
    rhs_vec[N] = 1.0
    # Exact solve on purpose: the branch direction sits in a nearly-null
    # singular space that a truncated solve would discard, and the huge
    # resulting component is precisely the tangent we are after.
    try:
        t = np.linalg.solve(big, rhs_vec)
    except np.linalg.LinAlgError:
        t = np.zeros(N + 1)
        t[N] = 1.0
    if not np.all(np.isfinite(t)) or np.linalg.norm(t) == 0:
        t = np.zeros(N + 1)
        t[N] = 1.0
    nrm = np.linalg.norm(t)
    t /= nrm
    if direction * t[N] < 0 and t[N] != 0:
        t = -t
    elif t[N] == 0 and direction * (v_crit @ t[:N]) < 0:
        t = -t
    return t[:N], float(t[N])


def _correct(u_pred, eps_pred, tan_u, tan_e, p, L, linear, tol, max_iter):
    N = L.shape[0]
    u, eps = u_pred.copy(), eps_pred
    for _ in range(max_iter):
        p_eps = p.with_epsilon(eps)
        res = rhs(u, p_eps, L, linear)
        con = tan_u @ (u - u_pred) + tan_e * (eps - eps_pred)
        if np.linalg.norm(res) <= tol and abs(con) <= tol:
            return u, float(eps)
        J = jacobian(u, p_eps, L, linear)
        big = np.zeros((N + 1, N + 1))
        big[:N, :N] = J
        big[:N, N] = u
        big[N, :N] = tan_u
        big[N, N] = tan_e
        delta = _bordered_solve(big, -np.concatenate([res, [con]]))
        if delta is None or not np.all(np.isfinite(delta)):
            return None
        u = u + delta[:N]
        eps = eps + delta[N]
    return None


def _bordered_solve(big, rhs_vec):
    """Min-norm solve of the bordered system.

    Circulant graphs carry a numerically free phase direction, so the system
    can be arbitrarily ill conditioned; a truncated-SVD least-squares solve
    keeps Newton on the well-conditioned complement and leaves the phase
    untouched.
    """
    try:
        delta, _, _, _ = np.linalg.lstsq(big, rhs_vec, rcond=1e-10)
    except np.linalg.LinAlgError:
        return None
    return delta


def _fold_epsilon(points, eps_new, amp_new):
    """Fold location: vertex of a parabola eps(amplitude) through the last two
    accepted points and the new one; falls back to the bracketing sample."""
    samples = [(pt.amplitude, pt.epsilon) for pt in points[-2:]] + [(amp_new, eps_new)]
    if len(samples) == 3:
        w = np.array([s[0] for s in samples])
        e = np.array([s[1] for s in samples])
        if len(np.unique(w)) == 3:
            c2, c1, c0 = np.polyfit(w, e, 2)
            if c2 != 0.0:
                w_star = -c1 / (2.0 * c2)
                if min(w) <= w_star <= max(w):
                    return float(c0 + c1 * w_star + c2 * w_star**2)
    return float(points[-1].epsilon)


@dataclass(frozen=True)
class NormalFormFit:
    """Empirical quadratic/cubic coefficients of eps w + a2 w^2 + a3 w^3 = 0."""

    a2: float
    a3: float
    residual: float
    exponent: float  # slope of log|amplitude| vs log|eps - eps_bp|
    n_points: int


def fit_normal_form(
    branch: Branch,
    eps_bp: float,
    amplitude_cap: float = 0.1,
    amplitude_floor: float = 1e-7,
) -> NormalFormFit:
    """Fit eps - eps_bp = -a2 w - a3 w^2 through small-amplitude branch points.

    On the nontrivial branch the steady-state relation eps w + a2 w^2 + a3 w^3
    = 0 divides by w, so a least-squares fit in (w, w^2) recovers (a2, a3).
    The amplitude exponent comes from a log-log regression on the same points.
    """
    w = branch.amplitudes
    eps = branch.epsilons - eps_bp
    mask = (np.abs(w) >= amplitude_floor) & (np.abs(w) <= amplitude_cap)
    if mask.sum() < 8:
        raise ValueError(f"need at least 8 small-amplitude points, have {int(mask.sum())}")
    w_f = w[mask]
    eps_f = eps[mask]
    A = np.column_stack([-w_f, -w_f**2])
    coef, _, _, _ = np.linalg.lstsq(A, eps_f, rcond=None)
    a2, a3 = float(coef[0]), float(coef[1])
    resid = float(np.linalg.norm(A @ coef - eps_f))

    # Exponent from the side of the branch point with more usable samples.
    pos = mask & (eps > 0)
    neg = mask & (eps < 0)
    side = pos if pos.sum() >= neg.sum() else neg
    if side.sum() >= 3:
        slope = np.polyfit(np.log(np.abs(eps[side])), np.log(np.abs(w[side])), 1)[0]
    else:
        slope = float("nan")
    return NormalFormFit(a2=a2, a3=a3, residual=resid, exponent=float(slope), n_points=int(mask.sum()))
