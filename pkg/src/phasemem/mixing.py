"""Mixing observables: weight profiles, LDOS, spreading width, participation, spacings.

Everything here reads off the squared overlap matrix W_ik = |<Psi_i|phi_k>|^2
between the register basis (rows) and the exact eigenbasis (columns). A
column of W against register energies is the mixing profile of one
eigenstate; a row against the eigenvalues is the strength function (local
density of states) of one register state. Because the eigenvector matrix is
orthogonal, W is doubly stochastic: both readings are normalized
distributions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eig import Spectrum
from .model import RegisterBasis

GAUSSIAN_EQUIVALENT = "gaussian-equivalent"
HISTOGRAM_FWHM = "histogram-fwhm"

# FWHM of a unit-variance Gaussian
_FWHM_SIGMA = 2.0 * np.sqrt(2.0 * np.log(2.0))


@dataclass(frozen=True)
class MixingProfile:
    """Weights of one eigenstate over all register states, against E_i."""

    eigenstate: int
    eigenvalue: float
    energies: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class StrengthFunction:
    """Weights of one register state over all eigenstates, against lambda_k."""

    register_state: int
    register_energy: float
    energies: np.ndarray  # eigenvalues, the abscissa of the LDOS
    weights: np.ndarray


@dataclass(frozen=True)
class WidthEstimate:
    gamma: float
    method: str
    centroid: float


@dataclass(frozen=True)
class SpacingStats:
    mean_ratio: float
    n_ratios: int
    n_zero_gaps: int


def mixing_weights(spectrum: Spectrum, basis: RegisterBasis, k: int) -> MixingProfile:
    """Profile W_i = |<Psi_i|phi_k>|^2 of eigenstate k over register energies."""
    if not 0 <= k < spectrum.dim:
        raise IndexError(f"eigenstate index {k} out of range [0, {spectrum.dim})")
    weights = spectrum.eigenvectors[:, k] ** 2
    weights.flags.writeable = False
    return MixingProfile(
        eigenstate=k,
        eigenvalue=float(spectrum.eigenvalues[k]),
        energies=basis.energies,
        weights=weights,
    )


def ldos(spectrum: Spectrum, basis: RegisterBasis, i: int) -> StrengthFunction:
    """Strength function of register state i over the exact eigenvalues."""
    if not 0 <= i < spectrum.dim:
        raise IndexError(f"register index {i} out of range [0, {spectrum.dim})")
    weights = spectrum.eigenvectors[i, :] ** 2
    weights.flags.writeable = False
    return StrengthFunction(
        register_state=i,
        register_energy=float(basis.energies[i]),
        energies=spectrum.eigenvalues,
        weights=weights,
    )


def _moments(energies: np.ndarray, weights: np.ndarray) -> tuple[float, float]:
    m1 = float(weights @ energies)
    var = float(weights @ (energies * energies)) - m1 * m1
    return m1, max(var, 0.0)


def _histogram_fwhm(energies: np.ndarray, weights: np.ndarray,
                    bins: int = 101, kernel_bins: float = 2.0) -> float:
    """FWHM of a Gaussian-smoothed weighted energy histogram.

    The histogram spans centroid +- 5 sigma (second-moment sigma), so the
    resolution floor scales with the profile itself; half-maximum crossings
    are located by linear interpolation.
    """
    m1, var = _moments(energies, weights)
    sigma = np.sqrt(var)
    if sigma == 0.0:
        return 0.0
    lo, hi = m1 - 5.0 * sigma, m1 + 5.0 * sigma
    hist, edges = np.histogram(energies, bins=bins, range=(lo, hi), weights=weights)
    # clipped tail mass is irrelevant to the peak region
    width = edges[1] - edges[0]
    half_span = int(np.ceil(4.0 * kernel_bins))
    x = np.arange(-half_span, half_span + 1)
    kernel = np.exp(-0.5 * (x / kernel_bins) ** 2)
    kernel /= kernel.sum()
    smooth = np.convolve(hist, kernel, mode="same")
    peak = smooth.argmax()
    top = smooth[peak]
    if top <= 0.0:
        return 0.0
    half = top / 2.0
    centers = edges[:-1] + width / 2.0

    def cross(idx_range) -> float:
        prev = peak
        for i in idx_range:
            if smooth[i] < half:
                # interpolate between i and prev
                f = (half - smooth[i]) / (smooth[prev] - smooth[i])
                return centers[i] + f * (centers[prev] - centers[i])
            prev = i
        return centers[idx_range[-1]] if len(idx_range) else centers[peak]

    left = cross(range(peak - 1, -1, -1))
    right = cross(range(peak + 1, len(smooth)))
    return float(right - left)


def spreading_width(profile: MixingProfile | StrengthFunction,
                    method: str = GAUSSIAN_EQUIVALENT) -> WidthEstimate:
    """Energy width of a normalized weight profile.

    ``gaussian-equivalent`` converts the second moment to a full width at
    half maximum, 2*sqrt(2 ln 2) * sigma; ``histogram-fwhm`` measures the
    FWHM of a smoothed weight histogram directly. A single-point profile has
    width 0.
    """
    energies, weights = profile.energies, profile.weights
    if method == GAUSSIAN_EQUIVALENT:
        m1, var = _moments(energies, weights)
        return WidthEstimate(gamma=_FWHM_SIGMA * np.sqrt(var), method=method, centroid=m1)
    if method == HISTOGRAM_FWHM:
        m1, _ = _moments(energies, weights)
        return WidthEstimate(gamma=_histogram_fwhm(energies, weights), method=method, centroid=m1)
    raise ValueError(f"unknown width method {method!r}")


def participation_ratio(profile: MixingProfile | StrengthFunction) -> float:
    """Effective number of basis states in a normalized profile, 1 / sum W_i^2."""
    return float(1.0 / np.sum(profile.weights**2))


def spacing_ratio_stats(eigenvalues: np.ndarray) -> SpacingStats:
    """Mean consecutive-gap ratio <r> = <min(s_k, s_k+1)/max(s_k, s_k+1)>.

    Zero gaps (exact degeneracies) would pin ratios at 0, so they are
    excluded and counted. Needs at least 3 levels.
    """
    lam = np.sort(np.asarray(eigenvalues, dtype=float))
    if len(lam) < 3:
        raise ValueError(f"need at least 3 eigenvalues for spacing ratios (got {len(lam)})")
    gaps = np.diff(lam)
    zero = gaps == 0.0
    n_zero = int(zero.sum())
    gaps = gaps[~zero]
    if len(gaps) < 2:
        raise ValueError("fewer than 2 nonzero gaps; spacing ratios undefined")
    r = np.minimum(gaps[1:], gaps[:-1]) / np.maximum(gaps[1:], gaps[:-1])
    return SpacingStats(mean_ratio=float(r.mean()), n_ratios=len(r), n_zero_gaps=n_zero)


def window_indices(dim: int, window: float) -> tuple[int, int]:
    """Index range [k0, k1) of the central ``window`` fraction of the spectrum."""
    if not 0.0 < window <= 1.0:
        raise ValueError(f"window fraction must be in (0, 1] (got {window})")
    k0 = int(round(dim * (0.5 - window / 2.0)))
    k1 = max(k0 + 1, int(round(dim * (0.5 + window / 2.0))))
    return k0, min(k1, dim)


def bulk_mixing_stats(spectrum: Spectrum, basis: RegisterBasis, window: float = 0.25,
                      method: str = GAUSSIAN_EQUIVALENT):
    """Per-eigenstate widths and participation ratios over the central window.

    Vectorized over the window: returns (indices, gammas, prs, spacing stats
    of the window eigenvalues).
    """
    k0, k1 = window_indices(spectrum.dim, window)
    weights = spectrum.eigenvectors[:, k0:k1] ** 2
    energies = basis.energies
    if method == GAUSSIAN_EQUIVALENT:
        m1 = energies @ weights
        var = np.clip((energies * energies) @ weights - m1 * m1, 0.0, None)
        gammas = _FWHM_SIGMA * np.sqrt(var)
    else:
        gammas = np.array([
            spreading_width(
                MixingProfile(k0 + c, float(spectrum.eigenvalues[k0 + c]), energies, weights[:, c]),
                method=method,
            ).gamma
            for c in range(weights.shape[1])
        ])
    prs = 1.0 / np.sum(weights**2, axis=0)
    spacing = spacing_ratio_stats(spectrum.eigenvalues[k0:k1])
    return np.arange(k0, k1), gammas, prs, spacing
