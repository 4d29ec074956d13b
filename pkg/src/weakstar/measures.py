"""Measures on the torus: atoms plus an absolutely continuous part.

A measure is a finite list of weighted point masses together with an
optional density against mu* sampled on a grid.  Atom coefficients are
computed from closed formulas and are therefore available at any
eigenvalue; density coefficients come from the grid FFT, which is exact
below the Nyquist bound and exact everywhere when the density is known
band-limited (the generators in this module always are, except the bump).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ResolutionError
from .grids import TWO_PI, Grid, GridFunction, fold_synthesize, grid_coefficients
from .system import SQRT2, SystemDescriptor
from .spectral import SpectralVector


def torus_distance(a, b) -> float:
    """Geodesic distance on [-pi, pi)^q: wrap each coordinate difference."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    d = (d + np.pi) % TWO_PI - np.pi
    return float(np.sqrt(np.sum(d * d)))


def _wrap(points: np.ndarray) -> np.ndarray:
    return (points + np.pi) % TWO_PI - np.pi


@dataclass
class Measure:
    """Atomic part plus optional density, tied to one system.

    ``band_limit`` records, when known, an eigenvalue bound carrying the
    density's entire spectrum; coefficients beyond it are then exact
    zeros.  Densities of unknown band content are usable only below the
    grid Nyquist bound.
    """

    system: SystemDescriptor
    locations: np.ndarray = field(default_factory=lambda: np.zeros((0, 1)))
    weights: np.ndarray = field(default_factory=lambda: np.zeros(0))
    density: GridFunction = None
    band_limit: float = None

    def __post_init__(self):
        self.locations = _wrap(
            np.asarray(self.locations, dtype=float).reshape(-1, self.system.q)
        )
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(self.locations) != len(self.weights):
            raise ParameterError(
                f"{len(self.locations)} atom locations vs {len(self.weights)} weights"
            )
        if self.density is not None and self.density.grid.q != self.system.q:
            raise ParameterError("density grid dimension does not match the system")
        for i in range(len(self.locations)):
            for j in range(i + 1, len(self.locations)):
                if torus_distance(self.locations[i], self.locations[j]) == 0.0:
                    raise ParameterError(
                        f"atoms {i} and {j} share the location {self.locations[i]}"
                    )

    @property
    def atoms(self) -> list:
        return [
            (self.locations[i].copy(), float(self.weights[i]))
            for i in range(len(self.weights))
        ]

    @property
    def n_atoms(self) -> int:
        return len(self.weights)


def measure_from_atoms(system, atoms) -> Measure:
    """Build a purely atomic measure from (location, weight) pairs.

    Each pair is given as a flat sequence of q coordinates followed by the
    weight, matching the JSON experiment-config convention.
    """
    rows = [np.asarray(a, dtype=float).reshape(-1) for a in atoms]
    q = system.q
    for r in rows:
        if len(r) != q + 1:
            raise ParameterError(
                f"atom literal needs {q} coordinates plus a weight, got {len(r)} values"
            )
    locs = np.array([r[:q] for r in rows]) if rows else np.zeros((0, q))
    w = np.array([r[q] for r in rows]) if rows else np.zeros(0)
    return Measure(system, locs, w)


def total_variation(mu: Measure) -> float:
    """Mass of |mu|: absolute atom weights plus the quadrature of |density|."""
    tv = float(np.sum(np.abs(mu.weights)))
    if mu.density is not None:
        tv += float(np.mean(np.abs(mu.density.values)))
    return tv


def minimal_separation(mu: Measure) -> float:
    """Least pairwise torus distance among the atoms; needs two or more."""
    m = mu.n_atoms
    if m < 2:
        raise ParameterError(
            "minimal separation is undefined for fewer than two atoms"
        )
    best = np.inf
    for i in range(m):
        for j in range(i + 1, m):
            best = min(best, torus_distance(mu.locations[i], mu.locations[j]))
    return float(best)


def fourier_coefficients(mu: Measure, lambda_cut: float) -> SpectralVector:
    """Coefficients of mu against every basis function below the cut.

    Atom contributions are exact closed-form sums.  Density contributions
    use the grid FFT: exact below Nyquist, exact everywhere for densities
    with a recorded band limit, and a resolution error otherwise when the
    cut reaches past what the grid can resolve.
    """
    system = mu.system
    if lambda_cut > system.lambda_max + 1e-9:
        raise ParameterError(
            f"lambda_cut={lambda_cut:g} exceeds the system enumeration bound "
            f"{system.lambda_max:g}"
        )
    out = np.zeros(system.n_basis)
    n_pts = system.point_band(lambda_cut)
    pts = system.point_freqs[:n_pts]

    if mu.n_atoms:
        cos_part = np.zeros(n_pts)
        sin_part = np.zeros(n_pts)
        for loc, w in zip(mu.locations, mu.weights):
            angle = pts.astype(float) @ loc if system.q > 1 else pts[:, 0] * loc[0]
            cos_part += w * np.cos(angle)
            sin_part += w * np.sin(angle)
        out[1 : 1 + 2 * n_pts : 2] = SQRT2 * cos_part
        out[2 : 2 + 2 * n_pts : 2] = SQRT2 * sin_part
        out[0] = float(np.sum(mu.weights))

    if mu.density is not None:
        grid = mu.density.grid
        if mu.band_limit is None:
            if lambda_cut > grid.nyquist:
                raise ResolutionError(
                    f"density of unknown band content cannot supply coefficients "
                    f"beyond the grid Nyquist bound {grid.nyquist}; "
                    f"requested cut {lambda_cut:g}"
                )
            n_dense = n_pts
        else:
            # beyond the recorded band the coefficients are exact zeros
            n_dense = min(n_pts, system.point_band(mu.band_limit + 1e-9, inclusive=True))
        const, c = grid_coefficients(mu.density.values, system.point_freqs[:n_dense], grid)
        out[1 : 1 + 2 * n_dense : 2] += SQRT2 * c.real
        out[2 : 2 + 2 * n_dense : 2] += -SQRT2 * c.imag
        out[0] += const

    return SpectralVector(system, out, float(lambda_cut))


def synthesize(v: SpectralVector, grid: Grid) -> GridFunction:
    """Pointwise sum of coefficient times basis value at every node.

    Exact for band-limited input; coefficients at frequencies the grid
    cannot represent are rejected rather than silently aliased.
    """
    system = v.system
    flags = v.coefficients != 0.0
    flags[0] = False
    if np.any(flags):
        last = len(flags) - 1 - int(np.argmax(flags[::-1]))
        top_point = (last - 1) // 2
        # |k_a| <= lambda, so a safely low top eigenvalue needs no row scan
        if system.point_lambdas[top_point] >= grid.nyquist:
            worst = int(np.max(np.abs(system.point_freqs[: top_point + 1][
                flags[1 : 2 * top_point + 3 : 2] | flags[2 : 2 * top_point + 4 : 2]
            ])))
            if worst >= grid.nyquist:
                raise ResolutionError(
                    f"coefficients at per-axis frequency {worst} cannot be "
                    f"represented on a grid with Nyquist bound {grid.nyquist}"
                )
        n_pts = top_point + 1
    else:
        n_pts = 0
    c0, c = system.pack_complex(v.coefficients[: 1 + 2 * n_pts])
    vals = fold_synthesize(system.point_freqs[:n_pts], c, c0, grid)
    return GridFunction(grid, vals)


# ----------------------- density generators -----------------------------

def uniform_density(grid: Grid):
    """The density of mu* itself.  Band limit 0."""
    return GridFunction(grid, np.ones(grid.shape)), 0.0


def bump_density(grid: Grid):
    """A centered C-infinity bump normalized to unit mass.  Not band
    limited; coefficients decay faster than any power, so grid
    coefficients below Nyquist are accurate to roughly 1e-10 or better on
    the default grids."""
    axes = grid.axis_nodes()
    vals = np.ones(grid.shape)
    for a in range(grid.q):
        s = axes / np.pi
        prof = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        prof[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
        shape = [1] * grid.q
        shape[a] = len(prof)
        vals = vals * prof.reshape(shape)
    f = GridFunction(grid, vals)
    return GridFunction(grid, vals / f.mean()), None


def lacunary_density(grid: Grid, r: float, max_level: int = None):
    """Octave series sum_m 2^(-m r) sqrt(2) cos(2^m x_1).

    Levels run from 0 up to the last power of two the grid resolves (or
    ``max_level``).  The series is exactly band limited, so its
    coefficients are available at any cut.
    """
    if r < 0:
        raise ParameterError(f"lacunary decay rate must be >= 0, got {r}")
    top = int(np.floor(np.log2(grid.nyquist - 1)))
    if max_level is not None:
        top = min(top, int(max_level))
    axes = grid.axis_nodes()
    x1 = axes.reshape((-1,) + (1,) * (grid.q - 1))
    vals = np.zeros(grid.shape)
    for m in range(top + 1):
        vals = vals + 2.0 ** (-m * r) * SQRT2 * np.cos((2**m) * x1)
    return GridFunction(grid, vals), float(2**top)


def bandlimited_density(system: SystemDescriptor, grid: Grid, seed: int, lambda_max: float):
    """Random band-limited density: iid standard normal coefficients
    on every basis function with eigenvalue below ``lambda_max``."""
    if lambda_max > grid.nyquist:
        raise ResolutionError(
            f"band limit {lambda_max:g} exceeds the grid Nyquist bound {grid.nyquist}"
        )
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(system.n_basis)
    band = system.lambdas < lambda_max
    coeffs[band] = rng.standard_normal(int(np.sum(band)))
    v = SpectralVector(system, coeffs, system.lambda_max)
    return synthesize(v, grid), float(lambda_max)
