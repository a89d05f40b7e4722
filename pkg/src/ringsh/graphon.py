"""Kernel models on [0,1]^2 and their exact Laplacian spectra.

A ring kernel W(x,y) = R(|x-y|) with 1-periodic R has constant degree and an
explicit spectrum: eigenvalue c_k - c_0 for every Fourier coefficient c_k of
R, with the zero mode isolated and all nonzero modes doubled.  The bipartite
kernel is the one non-ring model supported; its four-point spectrum is
hard-coded from the block structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_VALIDATION_GRID = 1024


class NotARingGraphonError(TypeError):
    """Raised when a ring-only operation receives a non-ring model."""


@dataclass(frozen=True)
class FourierRing:
    """Ring kernel given by a truncated cosine series.

    ``coeffs[k]`` is the Fourier coefficient c_k for k = 0..K; negative modes
    are implied by symmetry, so the kernel value at offset d is
    c_0 + 2 * sum_k c_k cos(2 pi k d).
    """

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("at least c_0 required")
        d = np.arange(_VALIDATION_GRID) / _VALIDATION_GRID
        vals = self.profile(d)
        if vals.min() < -1e-12 or vals.max() > 1 + 1e-12:
            raise ValueError(
                f"coefficients produce kernel values outside [0,1]: "
                f"range [{vals.min():.6g}, {vals.max():.6g}]"
            )

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def profile(self, d):
        d = np.asarray(d, dtype=float)
        out = np.full_like(d, self.coeffs[0])
        for k in range(1, len(self.coeffs)):
            out = out + 2.0 * self.coeffs[k] * np.cos(2.0 * np.pi * k * d)
        return out


@dataclass(frozen=True)
class SmallWorld:
    """Watts-Strogatz kernel: p within ring distance alpha, q beyond."""

    p: float
    q: float
    alpha: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.q <= 1.0):
            raise ValueError("p, q must be probabilities")
        if not (0.0 < self.alpha <= 0.5):
            raise ValueError("alpha must lie in (0, 1/2]")


@dataclass(frozen=True)
class ErdosRenyi:
    """Constant kernel: every pair connected with probability p."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be a probability")


@dataclass(frozen=True)
class Bipartite:
    """Two-block kernel: weight p across the split at alpha, 0 within blocks."""

    p: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ValueError("p must lie in (0,1]")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0,1)")


RING_VARIANTS = (FourierRing, SmallWorld, ErdosRenyi)
GraphonModel = FourierRing | SmallWorld | ErdosRenyi | Bipartite


def is_ring(model) -> bool:
    return isinstance(model, RING_VARIANTS)


def _require_ring(model):
    if not is_ring(model):
        raise NotARingGraphonError(f"{type(model).__name__} is not a ring graphon")


def ring_distance(x, y):
    """Distance on the unit circle: min(|x-y|, 1-|x-y|)."""
    d = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    return np.minimum(d, 1.0 - d)


def evaluate(model: GraphonModel, x, y):
    """Kernel value W(x, y); symmetric, in [0,1].  Accepts array arguments."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(model, ErdosRenyi):
        out = np.full(np.broadcast(x, y).shape, model.p)
    elif isinstance(model, SmallWorld):
        # Ring distance, not raw |x-y| mod 1: the closed-form spectrum below
        # assumes the symmetric band of half-width alpha.  The tolerance keeps
        # grid points that sit exactly on the band edge inside the band
        # regardless of rounding in x - y, so sampled matrices stay circulant.
        out = np.where(ring_distance(x, y) <= model.alpha + 1e-12, model.p, model.q)
    elif isinstance(model, FourierRing):
        out = np.clip(model.profile(np.abs(x - y)), 0.0, 1.0)
    elif isinstance(model, Bipartite):
        lo = np.minimum(x, y)
        hi = np.maximum(x, y)
        out = np.where((lo <= model.alpha) & (hi > model.alpha), model.p, 0.0)
    else:
        raise TypeError(f"unknown model {type(model).__name__}")
    if out.ndim == 0:
        return float(out)
    return out


def degree(model: GraphonModel, x):
    """Integral of the kernel over the second argument; constant for ring models."""
    x = np.asarray(x, dtype=float)
    if isinstance(model, ErdosRenyi):
        out = np.full(x.shape, model.p)
    elif isinstance(model, SmallWorld):
        c0 = 2.0 * model.alpha * model.p + (1.0 - 2.0 * model.alpha) * model.q
        out = np.full(x.shape, c0)
    elif isinstance(model, FourierRing):
        out = np.full(x.shape, model.coeffs[0])
    elif isinstance(model, Bipartite):
        out = np.where(x <= model.alpha, model.p * (1.0 - model.alpha), model.p * model.alpha)
    else:
        raise TypeError(f"unknown model {type(model).__name__}")
    if out.ndim == 0:
        return float(out)
    return out


def fourier_coefficients(model: GraphonModel, K: int):
    """Coefficients c_0..c_K of the ring kernel's cosine series."""
    _require_ring(model)
    if K < 0:
        raise ValueError("K must be nonnegative")
    c = np.zeros(K + 1)
    if isinstance(model, ErdosRenyi):
        c[0] = model.p
    elif isinstance(model, SmallWorld):
        c[0] = 2.0 * model.alpha * model.p + (1.0 - 2.0 * model.alpha) * model.q
        k = np.arange(1, K + 1)
        c[1:] = (model.p - model.q) / (np.pi * k) * np.sin(2.0 * np.pi * k * model.alpha)
    else:  # FourierRing
        stored = model.coeffs[: K + 1]
        c[: len(stored)] = stored
    return c


@dataclass(frozen=True)
class GraphonSpectrum:
    """Exact spectrum of a ring kernel's Laplacian, modes 0..K."""

    entries: tuple  # of (k, eigenvalue, multiplicity)
    accumulation_point: float

    @property
    def eigenvalues(self):
        return np.array([lam for _, lam, _ in self.entries])

    def eigenvalue(self, k: int) -> float:
        return self.entries[k][1]


def graphon_spectrum(model: GraphonModel, K: int = 64) -> GraphonSpectrum:
    """Spectrum lambda_k = c_k - c_0 for k = 0..K; accumulation point -c_0."""
    c = fourier_coefficients(model, K)
    entries = tuple((k, float(c[k] - c[0]), 1 if k == 0 else 2) for k in range(K + 1))
    return GraphonSpectrum(entries=entries, accumulation_point=float(-c[0]))


@dataclass(frozen=True)
class BipartiteSpectrum:
    """Four-point spectrum of the two-block kernel's Laplacian.

    ``isolated`` marks the one-dimensional eigenvalues (0 and -p); the two
    middle values carry infinite-dimensional eigenspaces.  ``step_levels``
    describes the eigenfunction of -p at C = 1: (1-alpha) on [0, alpha) and
    -alpha on (alpha, 1].
    """

    p: float
    alpha: float
    eigenvalues: tuple = field(init=False)
    isolated: tuple = field(init=False)
    step_levels: tuple = field(init=False)

    def __post_init__(self):
        p, a = self.p, self.alpha
        object.__setattr__(self, "eigenvalues", (0.0, -p * a, -p * (1.0 - a), -p))
        object.__setattr__(self, "isolated", (True, False, False, True))
        object.__setattr__(self, "step_levels", (1.0 - a, -a))


def bipartite_spectrum(p: float, alpha: float) -> BipartiteSpectrum:
    """Spectrum {0, -p*alpha, -p*(1-alpha), -p} of the bipartite kernel Laplacian."""
    return BipartiteSpectrum(p=p, alpha=alpha)


def model_from_dict(spec: dict) -> GraphonModel:
    """Build a model from a tagged dict, e.g. {"variant": "small_world", "p": ...}."""
    spec = dict(spec)
    try:
        variant = spec.pop("variant")
    except KeyError:
        raise ValueError("graphon spec needs a 'variant' key") from None
    table = {
        "fourier_ring": FourierRing,
        "small_world": SmallWorld,
        "erdos_renyi": ErdosRenyi,
        "bipartite": Bipartite,
    }
    if variant not in table:
        raise ValueError(f"unknown graphon variant {variant!r}")
    try:
        return table[variant](**spec)
    except TypeError as exc:
        raise ValueError(f"bad fields for variant {variant!r}: {exc}") from None


def model_to_dict(model: GraphonModel) -> dict:
    if isinstance(model, FourierRing):
        return {"variant": "fourier_ring", "coeffs": list(model.coeffs)}
    if isinstance(model, SmallWorld):
        return {"variant": "small_world", "p": model.p, "q": model.q, "alpha": model.alpha}
    if isinstance(model, ErdosRenyi):
        return {"variant": "erdos_renyi", "p": model.p}
    if isinstance(model, Bipartite):
        return {"variant": "bipartite", "p": model.p, "alpha": model.alpha}
    raise TypeError(f"unknown model {type(model).__name__}")


def resonance_model() -> FourierRing:
    """The 2:1 resonance kernel 1/2 + cos(2 pi d)/4 + cos(4 pi d)/4."""
    return FourierRing(coeffs=(0.5, 0.125, 0.125))
