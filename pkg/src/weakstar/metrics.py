"""Distances and seminorms for measures and grid functions.

The central object is the kernel norm: embed a measure through a decay
kernel, then take a grid L^p norm of the embedded function.  Because the
embedding damps high frequencies at a known rate, this norm metrizes
weak-star convergence whenever beta > q/p', with p' the conjugate
exponent.  A high-pass variant keeps only what lies beyond a dyadic band,
which is the part of the error a band-limited reconstruction cannot see.

Also provided: the circle discrepancy of a zero-mass measure (sup of the
signed cumulative), the same quantity reconstructed from the spectrum as
a cross-check, a truncated-triangle seminorm matching the classical
band-weighted comparison of measures, and a smooth-projection proxy for
best trigonometric approximation errors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    BandCoverageError,
    DimensionError,
    ParameterError,
    ResolutionError,
    SlowDecayError,
)
from .filters import lowpass_h
from .grids import TWO_PI, Grid, GridFunction, fold_synthesize
from .measures import Measure, fourier_coefficients, total_variation
from .spectral import KernelSpec, SpectralVector


@dataclass(frozen=True)
class NormRequest:
    """Which kernel norm to take: exponent, kernel, full or high-pass."""

    p: float
    kernel: KernelSpec
    variant: str = "full"
    highpass_level: int = None

    def __post_init__(self):
        if not (self.p >= 1):
            raise ParameterError(f"p must be in [1, inf], got {self.p}")
        if self.variant not in ("full", "highpass"):
            raise ParameterError(f"unknown norm variant {self.variant!r}")
        if self.variant == "highpass" and self.highpass_level is None:
            raise ParameterError("high-pass variant needs a level")

    @property
    def p_conjugate(self) -> float:
        if self.p == 1:
            return np.inf
        if self.p == np.inf:
            return 1.0
        return self.p / (self.p - 1.0)


def truncation_bar(kernel: KernelSpec, tv: float) -> float:
    """Reported bound on what series truncation can cost a kernel norm.

    The kernel's tail estimate controls the discarded sup norm per unit of
    total variation, and mu* has total mass one, so the same number bounds
    every grid L^p norm.  It is a worst-case figure; see
    :mod:`weakstar.spectral` for why measured truncation errors are far
    smaller.
    """
    return kernel.tail_tolerance * tv


def _kernel_norm(
    v: SpectralVector,
    p: float,
    kernel: KernelSpec,
    grid: Grid,
    highpass_level: int = None,
) -> float:
    system = v.system
    if kernel.q != system.q:
        raise ParameterError(
            f"kernel built for q={kernel.q}, system has q={system.q}"
        )
    if kernel.beta <= system.q and not kernel.empirical_tail:
        raise SlowDecayError(
            f"beta={kernel.beta} <= q={system.q} requires the empirical policy"
        )
    lam_cap = kernel.lambda_truncation
    if system.lambda_max + 1e-9 < lam_cap:
        raise BandCoverageError(
            f"system enumerates eigenvalues only to {system.lambda_max:g}, "
            f"kernel truncation is {lam_cap:g}"
        )
    if v.lambda_cut + 1e-9 < lam_cap:
        raise BandCoverageError(
            f"norm needs the spectrum up to {lam_cap:g}, vector is only "
            f"valid below {v.lambda_cut:g}"
        )
    n_pts = system.point_band(lam_cap, inclusive=True)
    lam = system.point_lambdas[:n_pts]
    weights = np.asarray(kernel.mask_values(lam))
    w0 = float(np.asarray(kernel.mask_values(0.0)))
    if highpass_level is not None:
        scale = 2.0**highpass_level
        weights = weights * (1.0 - lowpass_h(lam / scale))
        w0 *= 1.0 - lowpass_h(0.0)
    c0, c = system.pack_complex(v.coefficients[: 1 + 2 * n_pts])
    vals = fold_synthesize(system.point_freqs[:n_pts], weights * c, w0 * c0, grid)
    return GridFunction(grid, vals).lp_norm(p)


def g_norm(mu_spectral: SpectralVector, req: NormRequest, grid: Grid) -> float:
    """Kernel norm of a measure given by its spectrum.

    Synthesizes x -> sum b(lambda_k) muhat(k) phi_k(x) up to the kernel
    truncation and returns the grid L^p norm; the truncation cost is
    bounded by :func:`truncation_bar`.
    """
    level = req.highpass_level if req.variant == "highpass" else None
    return _kernel_norm(mu_spectral, req.p, req.kernel, grid, level)


def highpass_g_norm(
    mu_spectral: SpectralVector,
    n: int,
    req: NormRequest,
    grid: Grid,
) -> float:
    """Kernel norm with the band below 2^(n-1) removed.

    The multiplier is b(lambda) (1 - h(lambda/2^n)), the exact spectral
    form of stripping a level-n reconstruction kernel from the full one.
    """
    return _kernel_norm(mu_spectral, req.p, req.kernel, grid, int(n))


# ------------------------- circle discrepancy ----------------------------

def erdos_turan(mu: Measure) -> float:
    """Sup of |mu([-pi, x))| over x, for a zero-mass measure on the circle.

    Exact for the atomic part; the density part is integrated with the
    rectangle rule, which is exact for the piecewise-constant reading of
    the node values.  A nonzero total mass is removed by subtracting that
    multiple of mu* (with a warning) so the supremum is well defined.
    """
    if mu.system.q != 1:
        raise DimensionError("the circle discrepancy is defined for q=1 only")
    mass = float(np.sum(mu.weights))
    if mu.density is not None:
        mass += float(np.mean(mu.density.values))
    if abs(mass) > 1e-10:
        warnings.warn(
            f"measure has total mass {mass:.3e}; subtracting mass * mu* "
            "before taking the discrepancy",
            stacklevel=2,
        )
    if mu.density is not None:
        dens = mu.density.values - mass
    elif mass != 0.0:
        # a constant density integrates exactly at any node count
        dens = np.full(4, -mass)
    else:
        dens = None
    n_nodes = len(dens) if dens is not None else 0

    order = np.argsort(mu.locations[:, 0], kind="stable")
    locs = mu.locations[order, 0]
    wts = mu.weights[order]
    cum_atoms = np.concatenate([[0.0], np.cumsum(wts)])

    candidates = []
    if dens is not None:
        nodes = -np.pi + TWO_PI * np.arange(n_nodes) / n_nodes
        cum_dens = np.concatenate([[0.0], np.cumsum(dens)]) / n_nodes

        def density_cdf(x):
            cell = np.clip(
                np.floor((x + np.pi) * n_nodes / TWO_PI).astype(int), 0, n_nodes - 1
            )
            return cum_dens[cell] + dens[cell] * (x - nodes[cell]) / TWO_PI

        atom_at_node = np.searchsorted(locs, nodes, side="right")
        candidates.append(cum_atoms[atom_at_node] + cum_dens[:n_nodes])
    else:
        def density_cdf(x):
            return np.zeros_like(np.asarray(x, dtype=float))

    if len(locs):
        left = cum_atoms[:-1] + density_cdf(locs)   # limit from below the jump
        right = cum_atoms[1:] + density_cdf(locs)   # value just past the jump
        candidates.extend([left, right])
    if not candidates:
        return 0.0
    return float(np.max(np.abs(np.concatenate(candidates))))


def erdos_turan_spectral(
    mu: Measure,
    grid: Grid,
    series_length: int = 100_000,
    cesaro: bool = True,
) -> float:
    """Discrepancy recovered from the spectrum; a cross-check path.

    The sawtooth series sum_k sin(k u)/k embeds a zero-mass measure into
    pi times its centered cumulative, so the cumulative itself is the
    synthesis divided by pi plus its circle average (computed directly
    from the measure data).  The series is truncated at ``series_length``
    terms, with triangular smoothing by default to tame the oscillation
    at the jumps.  Agreement with :func:`erdos_turan` is limited by the
    smoothing width: for atoms separated by at least d, on plateaus the
    error is of order TV / (series_length * d), well below 1e-3 for the
    defaults and d >= 0.05.
    """
    if mu.system.q != 1:
        raise DimensionError("the circle discrepancy is defined for q=1 only")
    mass = float(np.sum(mu.weights))
    if mu.density is not None:
        mass += float(np.mean(mu.density.values))
    k = np.arange(1, series_length + 1, dtype=float)
    coeffs = np.zeros(series_length, dtype=complex)
    if mu.n_atoms:
        # amplitude of exp(ikx) in sum_j w_j G(x - t_j)
        coeffs += (mu.weights[None, :] * np.exp(-1j * np.outer(k, mu.locations[:, 0]))).sum(
            axis=1
        ) / (2j * k)
    if mu.density is not None:
        dgrid = mu.density.grid
        spectrum = np.fft.fft(mu.density.values) / dgrid.node_count
        kk = np.arange(1, min(series_length, dgrid.nyquist - 1) + 1)
        phase = 1.0 - 2.0 * (kk % 2).astype(float)
        coeffs[: len(kk)] += spectrum[kk] * phase / (2j * kk)
    if cesaro:
        coeffs *= 1.0 - k / (series_length + 1.0)
    freqs = np.arange(1, series_length + 1).reshape(-1, 1)
    centered = fold_synthesize(freqs, coeffs, 0.0, grid) / np.pi

    # circle average of the cumulative, from the measure data directly
    avg = float(np.sum(mu.weights * (np.pi - mu.locations[:, 0]))) / TWO_PI
    if mu.density is not None:
        vals = mu.density.values
        nn = len(vals)
        partial = np.concatenate([[0.0], np.cumsum(vals)[:-1]]) / nn
        avg += float(np.mean(partial + 0.5 * vals / nn))
    avg -= mass * 0.5  # the subtracted mass * mu* contributes a linear ramp

    return float(np.max(np.abs(centered + avg)))


# --------------------------- band seminorm -------------------------------

def fejer_seminorm(mu: Measure, n_band: int, grid: Grid) -> float:
    """Triangle-weighted band seminorm on the circle.

    Convolves the measure with the band kernel whose exponential weights
    are (1 - |j|/N)/(N + 1) for |j| <= N, then integrates the absolute
    value in plain dx normalization (a factor 2 pi over the mu* average).
    The weights are used exactly as written, including the vanishing edge
    weight at |j| = N.
    """
    if mu.system.q != 1:
        raise DimensionError("the band seminorm is defined for q=1 only")
    if n_band < 1:
        raise ParameterError(f"band order must be >= 1, got {n_band}")
    if n_band >= grid.nyquist:
        raise ResolutionError(
            f"band order {n_band} needs grid Nyquist above it, grid provides "
            f"{grid.nyquist}"
        )
    if mu.system.lambda_max < n_band:
        raise ParameterError(
            f"system enumerates eigenvalues only to {mu.system.lambda_max:g}, "
            f"band order is {n_band}"
        )
    v = fourier_coefficients(mu, float(n_band) + 0.5)
    lam = mu.system.lambdas
    weights = np.where(lam <= n_band, (1.0 - lam / n_band) / (n_band + 1.0), 0.0)
    c0, c = mu.system.pack_complex(weights * v.coefficients)
    vals = fold_synthesize(mu.system.point_freqs, c, c0, grid)
    return TWO_PI * GridFunction(grid, vals).lp_norm(1)


# --------------------- degree-of-approximation proxy ---------------------

def near_best_degree_error(f: GridFunction, n: int, p: float) -> float:
    """Distance from f to its smooth band-limited projection at scale 2^n.

    Returns the grid L^p norm of f minus its low-pass part, an upper proxy
    for the best approximation error from the band below 2^n.  The exact
    minimum over the band is only computed implicitly for p = 2, where the
    smooth projection is within a constant of it; rate detection is what
    this proxy preserves.
    """
    grid = f.grid
    if 2**n > grid.nyquist:
        raise ResolutionError(
            f"scale 2^{n} exceeds the grid Nyquist bound {grid.nyquist}"
        )
    spectrum = np.fft.fftn(f.values)
    shape = grid.shape
    axes = [np.fft.fftfreq(m) * m for m in shape]
    mesh = np.meshgrid(*axes, indexing="ij")
    lam = np.sqrt(sum(m * m for m in mesh))
    low = np.fft.ifftn(spectrum * lowpass_h(lam / 2.0**n)).real
    return GridFunction(grid, f.values - low).lp_norm(p)
