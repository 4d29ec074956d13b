"""Band-limited recovery of a measure from its noisy coefficients.

The level-n reconstruction keeps every coefficient with eigenvalue below
2^(n-1) untouched, rolls off smoothly across one octave, and is exactly
zero from 2^n on.  Noise is an iid perturbation of each observed
coefficient, drawn in basis order so that a fixed seed replays the same
sequence at every level (lower levels see a prefix of the same draws).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ResolutionError
from .filters import lowpass_h
from .grids import Grid, GridFunction
from .measures import Measure, fourier_coefficients, synthesize
from .spectral import SpectralVector
from .system import SystemDescriptor

NOISE_KINDS = ("none", "gaussian", "uniform")


@dataclass(frozen=True)
class NoiseModel:
    """Coefficient noise: kind, scale, and a replayable seed."""

    kind: str = "none"
    scale: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ParameterError(
                f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}"
            )
        if self.scale < 0:
            raise ParameterError(f"noise scale must be >= 0, got {self.scale}")

    def draw(self, system: SystemDescriptor, lambda_cut: float) -> np.ndarray:
        """Noise for every basis entry with eigenvalue below the cut.

        Returns a full-length coefficient array, zero beyond the cut.
        Draws happen in basis order, so the same seed produces the same
        values for a given entry regardless of the cut.
        """
        out = np.zeros(system.n_basis)
        if self.kind == "none":
            return out
        count = 1 + 2 * system.point_band(lambda_cut)
        rng = np.random.default_rng(self.seed)
        if self.kind == "gaussian":
            out[:count] = rng.normal(0.0, self.scale, size=count)
        else:
            out[:count] = rng.uniform(-self.scale, self.scale, size=count)
        return out


@dataclass
class RecoveredMeasure:
    """Level-n reconstruction: spectrum plus its synthesis on the grid."""

    spectral: SpectralVector
    level_n: int
    density_view: GridFunction


def recuperate(mu: Measure, n: int, noise: NoiseModel, grid: Grid) -> RecoveredMeasure:
    """Reconstruct mu from coefficients below 2^n, optionally noisy.

    Parameters
    ----------
    mu : Measure
        Target measure.
    n : int
        Reconstruction level; coefficients with eigenvalue below 2^n are
        observed, the roll-off leaves those below 2^(n-1) untouched.
    noise : NoiseModel
        Perturbation added to each observed coefficient.
    grid : Grid
        Working grid for the density view; its Nyquist bound must exceed
        2^n.

    Returns
    -------
    RecoveredMeasure
        The spectrum is exact over the whole system enumeration: it is
        h(lambda/2^n) (muhat + eps) below 2^n and identically zero above.
    """
    if n < 0:
        raise ParameterError(f"level n must be >= 0, got {n}")
    band_edge = 2.0**n
    if grid.nyquist <= band_edge:
        raise ResolutionError(
            f"level n={n} needs grid Nyquist above {band_edge:g}, "
            f"grid provides {grid.nyquist}"
        )
    system = mu.system
    if system.lambda_max < band_edge:
        raise ParameterError(
            f"system enumerates eigenvalues only to {system.lambda_max:g}, "
            f"level n={n} observes the band up to {band_edge:g}"
        )
    observed = fourier_coefficients(mu, band_edge).coefficients
    observed += noise.draw(system, band_edge)
    n_band = 1 + 2 * system.point_band(band_edge)
    coeffs = np.zeros(system.n_basis)
    coeffs[:n_band] = lowpass_h(system.lambdas[:n_band] / band_edge) * observed[:n_band]
    # exact zeros from the band edge on, so the cut covers the whole system
    spectrum = SpectralVector(system, coeffs, system.lambda_max)
    return RecoveredMeasure(
        spectral=spectrum,
        level_n=int(n),
        density_view=synthesize(spectrum, grid),
    )


def noise_field_l1(
    noise: NoiseModel,
    n: int,
    system: SystemDescriptor,
    grid: Grid,
) -> float:
    """Grid L^1 norm of the noise polynomial sum_{lambda_k < 2^n} eps_k phi_k."""
    band_edge = 2.0**n
    if grid.nyquist <= band_edge:
        raise ResolutionError(
            f"level n={n} needs grid Nyquist above {band_edge:g}, "
            f"grid provides {grid.nyquist}"
        )
    eps = noise.draw(system, band_edge)
    field = synthesize(SpectralVector(system, eps, system.lambda_max), grid)
    return field.lp_norm(1)
