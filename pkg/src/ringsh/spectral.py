"""Symmetric eigendecomposition and the spectral verification machinery:
eigenvalue matching against kernel targets, Weyl gaps, operator-norm
concentration reports, Fourier-mode alignment, and Procrustes residuals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ringsh.graphon import GraphonModel, GraphonSpectrum
from ringsh.sampler import deterministic_graph, random_graph

_SYM_TOL = 1e-12
_CONCENTRATION_C = 1.0 / 40.0  # explicit constant from the exponential tail bound


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues sorted descending with aligned orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns follow the eigenvalue order

    @property
    def N(self) -> int:
        return len(self.eigenvalues)


def _fix_signs(V: np.ndarray) -> np.ndarray:
    """Make the first significant component of each column positive."""
    V = V.copy()
    for j in range(V.shape[1]):
        col = V[:, j]
        thresh = 1e-6 * np.linalg.norm(col)
        idx = np.flatnonzero(np.abs(col) > thresh)
        if idx.size and col[idx[0]] < 0:
            V[:, j] = -col
    return V


def eig_sym(L: np.ndarray) -> SpectralData:
    """Full symmetric eigendecomposition, eigenvalues descending."""
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, np.abs(L).max())
    if np.abs(L - L.T).max() > _SYM_TOL * scale:
        raise ValueError("matrix is not symmetric")
    vals, vecs = np.linalg.eigh(0.5 * (L + L.T))
    order = np.argsort(vals)[::-1]
    return SpectralData(eigenvalues=vals[order], eigenvectors=_fix_signs(vecs[:, order]))


def opnorm(M: np.ndarray) -> float:
    """Spectral norm of a symmetric matrix (largest absolute eigenvalue)."""
    M = np.asarray(M, dtype=float)
    scale = max(1.0, np.abs(M).max())
    if np.abs(M - M.T).max() > _SYM_TOL * scale:
        raise ValueError("matrix is not symmetric")
    return float(np.abs(np.linalg.eigvalsh(0.5 * (M + M.T))).max())


def weyl_gap(spec_a: SpectralData, spec_b: SpectralData) -> float:
    """Largest gap between same-index eigenvalues of two matrices."""
    if spec_a.N != spec_b.N:
        raise ValueError("spectra have different dimensions")
    return float(np.abs(spec_a.eigenvalues - spec_b.eigenvalues).max())


@dataclass(frozen=True)
class MatchBudget:
    """Target eigenvalue and matching radii for locating kernel eigenvalues
    inside a finite graph's (normalized) spectrum."""

    mu: float
    delta: float
    delta0: float
    gamma: float
    m: int = 2

    def __post_init__(self):
        if not 0.0 < self.delta < self.delta0:
            raise ValueError("need 0 < delta < delta0")
        if not 0.0 < self.gamma < 0.5:
            raise ValueError("gamma must lie in (0, 1/2)")
        if self.m < 1:
            raise ValueError("m must be at least 1")

    def davis_kahan_bound(self, N: int) -> float:
        return float(np.sqrt(8.0 * self.m) / ((self.delta0 - self.delta) * N ** (0.5 - self.gamma)))


def estimate_delta0(spectrum: GraphonSpectrum, mu: float) -> float:
    """Half the distance from mu to the nearest distinct spectrum element,
    including the accumulation point."""
    candidates = [lam for _, lam, _ in spectrum.entries if abs(lam - mu) > 1e-12]
    candidates.append(spectrum.accumulation_point)
    gap = min(abs(lam - mu) for lam in candidates)
    return 0.5 * gap


def budget_for_mode(
    spectrum: GraphonSpectrum,
    k_star: int,
    gamma: float = 0.1,
    delta: float | None = None,
) -> MatchBudget:
    """Budget targeting graphon mode k_star; delta defaults to delta0 / 2."""
    mu = spectrum.eigenvalue(k_star)
    delta0 = estimate_delta0(spectrum, mu)
    if delta is None:
        delta = 0.5 * delta0
    return MatchBudget(mu=mu, delta=delta, delta0=delta0, gamma=gamma, m=1 if k_star == 0 else 2)


def match_eigenvalues(spec: SpectralData, budget: MatchBudget, N: int) -> list:
    """Indices k with |lambda_k / N - mu| < delta (strict)."""
    hits = np.flatnonzero(np.abs(spec.eigenvalues / N - budget.mu) < budget.delta)
    return [int(k) for k in hits]


def fourier_basis(N: int, k: int) -> np.ndarray:
    """Normalized discrete Fourier vector with components exp(2 pi i k j / N) / sqrt(N)."""
    j = np.arange(N)
    return np.exp(2j * np.pi * k * j / N) / np.sqrt(N)


def quad_self_interaction(v: np.ndarray) -> float:
    """Self-interaction v . (v * v) of a unit vector under componentwise product."""
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"vector must be unit norm, got {nrm}")
    return float(v @ (v * v))


def procrustes_residual(V_hat: np.ndarray, V: np.ndarray) -> float:
    """min over orthogonal O of ||V_hat @ O - V||_F, via the SVD of V_hat^T V."""
    M = V_hat.T @ V
    U, _, Wt = np.linalg.svd(M)
    O = U @ Wt
    return float(np.linalg.norm(V_hat @ O - V))


@dataclass(frozen=True)
class AlignmentReport:
    """Fourier alignment of a matched eigenvector block, plus the Procrustes
    residual against a reference block and the subspace perturbation bound."""

    matched: tuple
    a: tuple  # complex projection coefficients onto the +k* Fourier mode
    residual: float  # worst per-vector remainder after removing the +-k* projection
    procrustes: float
    davis_kahan_bound: float
    beta: float

    @property
    def omega(self) -> float:
        """Phase of the leading mode, from a_1 ~ exp(-2 pi i Omega) / sqrt(2)."""
        return float((-np.angle(self.a[0]) / (2.0 * np.pi)) % 1.0)


def align_to_fourier(
    spec: SpectralData,
    matched: list,
    k_star: int,
    budget: MatchBudget,
    reference: np.ndarray | None = None,
) -> AlignmentReport:
    """Project matched eigenvectors onto the +-k_star Fourier pair.

    ``reference`` is the matched eigenvector block of the comparison graph
    (typically the deterministic one); when omitted the Procrustes residual
    is reported as 0.
    """
    if not matched:
        raise ValueError("matched index set is empty")
    N = spec.N
    omega_p = fourier_basis(N, k_star)
    omega_m = fourier_basis(N, -k_star)
    coeffs = []
    worst = 0.0
    for idx in matched:
        v = spec.eigenvectors[:, idx].astype(complex)
        a = complex(np.vdot(omega_p, v))
        resid = v - a * omega_p - np.conj(a) * omega_m
        worst = max(worst, float(np.linalg.norm(resid)))
        coeffs.append(a)
    V_hat = spec.eigenvectors[:, matched]
    proc = 0.0 if reference is None else procrustes_residual(V_hat, reference)
    v1 = spec.eigenvectors[:, matched[0]]
    beta = float(np.sqrt(N) * (v1 @ (v1 * v1)))
    return AlignmentReport(
        matched=tuple(matched),
        a=tuple(coeffs),
        residual=worst,
        procrustes=proc,
        davis_kahan_bound=budget.davis_kahan_bound(N),
        beta=beta,
    )


@dataclass(frozen=True)
class ConcentrationReport:
    """Per-trial operator-norm ratios and the theoretical failure bound."""

    N: int
    gamma: float
    ratios: tuple
    bound: float  # probability bound 2 N exp(-C N^(2 gamma))


def concentration_report(
    model: GraphonModel, N: int, gamma: float, trials: int, seed: int
) -> ConcentrationReport:
    """Ratios ||L_r - L_d|| / N^(1/2 + gamma) over seeded trials.

    Trial t uses seed ``seed + t`` so trials are independent and the whole
    report is reproducible from (model, N, gamma, trials, seed).
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    L_d = deterministic_graph(model, N).laplacian
    denom = N ** (0.5 + gamma)
    ratios = []
    for t in range(trials):
        L_r = random_graph(model, N, seed + t).laplacian
        ratios.append(opnorm(L_r - L_d) / denom)
    bound = 2.0 * N * np.exp(-_CONCENTRATION_C * N ** (2.0 * gamma))
    return ConcentrationReport(N=N, gamma=gamma, ratios=tuple(ratios), bound=float(bound))
