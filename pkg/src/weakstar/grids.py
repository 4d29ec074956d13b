"""Uniform torus grids, grid functions, and FFT synthesis.

The reference measure is normalized Lebesgue measure on [-pi, pi)^q, so
every quadrature in this module is a plain average over grid nodes.

Synthesis of a trigonometric sum at N uniform nodes per axis is done by
folding the coefficients modulo N into FFT bins and taking one inverse
FFT.  In exact arithmetic this reproduces the sum at the nodes for any
truncation length, including frequencies far beyond the grid Nyquist
limit (such frequencies alias onto lower bins, and the fold is exactly
that aliasing).  Whether node values determine the function elsewhere is
the caller's concern; see :func:`weakstar.measures.synthesize` for the
Nyquist-checked public entry point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Grid:
    """Uniform lattice on [-pi, pi)^q with a power-of-two node count per axis.

    Node j along an axis sits at -pi + 2*pi*j/N.  The rectangle rule on
    these nodes integrates products of basis functions exactly whenever all
    frequencies involved stay below N/2.
    """

    q: int
    points_per_axis: int

    def __post_init__(self):
        if self.q < 1:
            raise ParameterError(f"grid dimension must be positive, got {self.q}")
        n = self.points_per_axis
        if n < 4 or (n & (n - 1)) != 0:
            raise ParameterError(
                f"points_per_axis must be a power of two >= 4, got {n}"
            )

    @property
    def quadrature_weight(self) -> float:
        return float(self.points_per_axis) ** (-self.q)

    @property
    def nyquist(self) -> int:
        """Largest representable frequency bound: |k_i| must stay below this."""
        return self.points_per_axis // 2

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.q

    @property
    def node_count(self) -> int:
        return self.points_per_axis**self.q

    def axis_nodes(self) -> np.ndarray:
        n = self.points_per_axis
        return -np.pi + TWO_PI * np.arange(n) / n

    def nodes(self) -> np.ndarray:
        """All grid nodes as an (N^q, q) array.  O(N^q) memory."""
        axes = [self.axis_nodes()] * self.q
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def spacing(self) -> float:
        return TWO_PI / self.points_per_axis


@dataclass
class GridFunction:
    """Real values on a grid, understood as a density against mu*."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ParameterError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    def mean(self) -> float:
        """Quadrature of the function against mu* (a plain average)."""
        return float(np.mean(self.values))

    def lp_norm(self, p: float) -> float:
        """Grid L^p norm with respect to mu*.

        For p = inf this is the node maximum, a lower bound for the true
        sup norm that tightens as the grid is refined.
        """
        if p == np.inf:
            return float(np.max(np.abs(self.values)))
        if p < 1:
            raise ParameterError(f"p must be >= 1, got {p}")
        if p == 1:
            return float(np.mean(np.abs(self.values)))
        return float(np.mean(np.abs(self.values) ** p) ** (1.0 / p))


def fold_synthesize(
    freqs: np.ndarray,
    coeffs: np.ndarray,
    const: float,
    grid: Grid,
) -> np.ndarray:
    """Evaluate const + 2*Re sum_k c_k exp(i k.x) at all grid nodes.

    ``freqs`` holds one integer frequency row per half-lattice point and
    ``coeffs`` the matching complex amplitudes; the conjugate mirror at -k
    is implied.  Returns the value array shaped like the grid.
    """
    n = grid.points_per_axis
    freqs = np.asarray(freqs)
    coeffs = np.asarray(coeffs, dtype=complex)
    size = grid.node_count
    if grid.q == 1 and _is_contiguous_1d(freqs):
        bins = _fold_contiguous_1d(freqs[0, 0], coeffs, n)
    else:
        # Node offset -pi turns exp(ik.x_j) into (-1)^{sum k} exp(2*pi*i k.j/N).
        phase = 1.0 - 2.0 * ((freqs.sum(axis=1) % 2).astype(float))
        weighted = coeffs * phase
        flat = np.zeros(len(freqs), dtype=np.int64)
        for a in range(grid.q):
            flat = flat * n + (freqs[:, a] % n)
        # bincount is considerably faster than add.at for these sizes
        bins = np.bincount(flat, weights=weighted.real, minlength=size).astype(complex)
        bins += 1j * np.bincount(flat, weights=weighted.imag, minlength=size)
    vals = np.fft.ifftn(bins.reshape(grid.shape)) * size
    return 2.0 * vals.real + const


def _is_contiguous_1d(freqs: np.ndarray) -> bool:
    m = len(freqs)
    if m == 0:
        return False
    lo, hi = int(freqs[0, 0]), int(freqs[-1, 0])
    if hi - lo + 1 != m or lo < 0:
        return False
    return bool(np.array_equal(freqs[:, 0], np.arange(lo, hi + 1)))


def _fold_contiguous_1d(k0: int, coeffs: np.ndarray, n: int) -> np.ndarray:
    """Fold amplitudes at a contiguous frequency run k0..k0+m-1 modulo n.

    With contiguous frequencies the scatter-add reduces to padding the run
    to a multiple of n and summing rows, far faster than bincount.
    """
    k0 = int(k0)
    m = len(coeffs)
    signs = np.where((np.arange(k0, k0 + m) % 2).astype(bool), -1.0, 1.0)
    weighted = coeffs * signs
    lead = k0 % n
    total = lead + m
    padded = np.zeros((-(-total // n)) * n, dtype=complex)
    padded[lead : lead + m] = weighted
    return padded.reshape(-1, n).sum(axis=0)


def grid_coefficients(values: np.ndarray, freqs: np.ndarray, grid: Grid):
    """Complex coefficients of grid data at the requested frequencies.

    Exact whenever the data is a trigonometric sum with all per-axis
    frequencies strictly below the Nyquist bound.  Returns ``(const, c)``
    where ``c[k]`` multiplies exp(i k.x) and the mirror at -k is its
    conjugate.
    """
    n = grid.points_per_axis
    spectrum = np.fft.fftn(values) / grid.node_count
    freqs = np.asarray(freqs)
    phase = 1.0 - 2.0 * ((freqs.sum(axis=1) % 2).astype(float))
    flat = np.zeros(len(freqs), dtype=np.int64) if len(freqs) else np.zeros(0, np.int64)
    for a in range(grid.q):
        flat = flat * n + (freqs[:, a] % n)
    c = spectrum.ravel()[flat] * phase
    return float(spectrum.ravel()[0].real), c
