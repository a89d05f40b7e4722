"""Closed-form center-manifold predictions: pitchfork and resonance normal
forms on the kernel side, and the transcritical/fold structure inherited by a
finite random graph realization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ringsh.graphon import GraphonSpectrum
from ringsh.spectral import AlignmentReport, SpectralData


@dataclass(frozen=True)
class ShiftedSpectrum:
    """Linearization eigenvalues -(lambda_k - kappa)^2 for a chosen shift."""

    kappa: float
    entries: np.ndarray


def shifted_spectrum(lambdas, kappa: float) -> ShiftedSpectrum:
    lam = np.asarray(lambdas, dtype=float)
    return ShiftedSpectrum(kappa=float(kappa), entries=-((lam - kappa) ** 2))


@dataclass(frozen=True)
class GraphonPrediction:
    """Pitchfork normal form for an isolated kernel mode k_star."""

    k_star: int
    kappa: float
    ell0: float
    ell2k: float
    Gamma: float
    supercritical: bool

    def amplitude(self, epsilon: float) -> float:
        """Leading-order amplitude 2 sqrt(eps / Gamma) of the bifurcating state."""
        val = epsilon / self.Gamma
        if val < 0:
            raise ValueError("amplitude law applies on the existence side only")
        return 2.0 * np.sqrt(val)

    def profile(self, x, epsilon: float, phi: float = 0.0):
        x = np.asarray(x, dtype=float)
        return self.amplitude(epsilon) / 2.0 * 2.0 * np.cos(2.0 * np.pi * self.k_star * (x - phi))


def pitchfork(spectrum: GraphonSpectrum, k_star: int, r: float, b: float) -> GraphonPrediction:
    """Cubic coefficient 3b + 4r^2/ell_0 + 2r^2/ell_2k* with kappa = lambda_k*."""
    kappa = spectrum.eigenvalue(k_star)
    lam0 = spectrum.eigenvalue(0)
    lam2 = spectrum.eigenvalue(2 * k_star)
    ell0 = -((lam0 - kappa) ** 2)
    ell2k = -((lam2 - kappa) ** 2)
    if ell0 == 0.0 or ell2k == 0.0:
        raise ValueError("degenerate shift: kappa coincides with lambda_0 or lambda_2k*")
    Gamma = 3.0 * b + 4.0 * r**2 / ell0 + 2.0 * r**2 / ell2k
    return GraphonPrediction(
        k_star=k_star, kappa=float(kappa), ell0=float(ell0), ell2k=float(ell2k),
        Gamma=float(Gamma), supercritical=bool(Gamma > 0),
    )


@dataclass(frozen=True)
class ResonancePrediction:
    """2:1 resonance branch: first harmonic +-sqrt(2) eps/r, second -eps/r."""

    k1: int
    k2: int
    sign: int
    epsilon: float
    r: float
    phi: float

    @property
    def amplitudes(self):
        return (self.sign * np.sqrt(2.0) * self.epsilon / self.r, -self.epsilon / self.r)

    def profile(self, x):
        x = np.asarray(x, dtype=float)
        a1, a2 = self.amplitudes
        return a1 * np.cos(2.0 * np.pi * self.k1 * (x - self.phi)) + a2 * np.cos(
            2.0 * np.pi * self.k2 * (x - self.phi)
        )


def resonance(k1: int, r: float, epsilon: float, phi: float = 0.0, sign: int = 1) -> ResonancePrediction:
    if r == 0.0:
        raise ValueError("resonance expansion requires r != 0")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return ResonancePrediction(k1=k1, k2=2 * k1, sign=sign, epsilon=epsilon, r=r, phi=phi)


@dataclass(frozen=True)
class RandomPrediction:
    """Transcritical structure of a random realization near the critical mode.

    All quantities refer to the truncated normal form
    eps z + r beta z^2 - Gamma_r z^3 = 0; the fold sits at
    eps_SN = -beta^2 r^2 / (4 Gamma_r).
    """

    k_star: int
    kappa: float
    beta: float
    r: float
    b: float
    l_N: float
    l3: float
    Gamma_r: float
    epsilon_SN: float
    Omega: float

    def z1(self, epsilon: float):
        """Roots z1-, z1+ of the truncated normal form at this epsilon."""
        disc = self.beta**2 * self.r**2 + 4.0 * self.Gamma_r * epsilon
        if disc < 0:
            return None
        root = np.sqrt(disc)
        base = self.beta * self.r / (2.0 * self.Gamma_r)
        return (base - root / (2.0 * self.Gamma_r), base + root / (2.0 * self.Gamma_r))

    def z_star(self, epsilon: float):
        pair = self.z1(epsilon)
        if pair is None:
            return None
        return pair[0] if self.beta * self.r > 0 else pair[1]

    def profile(self, N: int, epsilon: float):
        z = self.z_star(epsilon)
        if z is None:
            raise ValueError("no bifurcating solution at this epsilon")
        j = np.arange(1, N + 1)
        # Sampling-grid convention j/N; the free phase Omega absorbs the offset.
        return np.sqrt(2.0) * z * np.cos(2.0 * np.pi * self.k_star * (j / N - self.Omega))


def random_prediction(
    spec: SpectralData,
    alignment: AlignmentReport,
    k_star: int,
    r: float,
    b: float,
    graphon_spec: GraphonSpectrum,
) -> RandomPrediction:
    """Evaluate Gamma_r = 3b/2 + 2r^2/l_N + r^2/l_3 on a random realization.

    kappa is the matched top eigenvalue; l_N = -kappa^2 comes from the constant
    mode; l_3 uses the member of the 2k* cluster closest to N times the kernel
    eigenvalue lambda_2k*.
    """
    if not alignment.matched:
        raise ValueError("alignment carries no matched indices")
    N = spec.N
    kappa = float(spec.eigenvalues[alignment.matched[0]])
    target = N * graphon_spec.eigenvalue(2 * k_star)
    spacing = abs(target - N * graphon_spec.eigenvalue(k_star))
    window = 0.5 * max(spacing, abs(target) * 0.1)
    cluster = np.flatnonzero(np.abs(spec.eigenvalues - target) < window)
    if cluster.size == 0:
        raise ValueError("2k* eigenvalue cluster not found within the match window")
    lam3 = float(spec.eigenvalues[cluster[np.argmin(np.abs(spec.eigenvalues[cluster] - target))]])
    l_N = -(kappa**2)
    l3 = -((lam3 - kappa) ** 2)
    Gamma_r = 1.5 * b + 2.0 * r**2 / l_N + r**2 / l3
    beta = alignment.beta
    epsilon_SN = -(beta**2) * r**2 / (4.0 * Gamma_r)
    return RandomPrediction(
        k_star=k_star, kappa=kappa, beta=beta, r=r, b=b,
        l_N=l_N, l3=l3, Gamma_r=float(Gamma_r),
        epsilon_SN=float(epsilon_SN), Omega=alignment.omega,
    )


def rescaled_cubic_matches_graphon(
    Gamma_r_graph: float,
    graphon_spec: GraphonSpectrum,
    k_star: int,
    r: float,
    b: float,
    N: int,
) -> tuple:
    """Consistency of the graph cubic coefficient with the kernel pitchfork one.

    Under eps = eps~ N^2, r = r~ N^2, b = b~ N^2 and z1 = sqrt(2) z1~, the graph
    normal form's cubic coefficient 2 Gamma_r / N^2 (in the rescaled variables)
    must equal 3 b~ + 4 r~^2/ell_0 + 2 r~^2/ell_2k* when the graph eigenvalues
    are replaced by N times the kernel ones.  Returns (graph side, kernel side).
    """
    pred = pitchfork(graphon_spec, k_star, r / N**2, b / N**2)
    return 2.0 * Gamma_r_graph / N**2, pred.Gamma
