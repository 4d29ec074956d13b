"""The torus T^q with its real trigonometric orthonormal basis.

A system enumerates every basis function with eigenvalue up to a chosen
bound: the constant function, then for each frequency vector k in the
canonical half lattice (first nonzero coordinate positive) the pair
sqrt(2)*cos(k.x), sqrt(2)*sin(k.x).  Eigenvalues are Euclidean norms
lambda_k = |k|, so the ordering (lambda, lexicographic k, cosine before
sine) is deterministic and lambda is non-decreasing along the basis.

All functions are orthonormal against mu*, the Lebesgue measure normalized
to total mass one, which is also the quadrature convention of
:mod:`weakstar.grids`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BasisLookupError, DimensionError, ParameterError
from .grids import Grid

SQRT2 = float(np.sqrt(2.0))

KIND_CONSTANT = "constant"
KIND_COSINE = "cosine"
KIND_SINE = "sine"


@dataclass(frozen=True)
class BasisIndex:
    """Identifier of one basis function: its kind and frequency vector."""

    kind: str
    frequency: tuple

    def __post_init__(self):
        k = tuple(int(v) for v in self.frequency)
        object.__setattr__(self, "frequency", k)
        if self.kind == KIND_CONSTANT:
            if any(v != 0 for v in k):
                raise ParameterError("constant index must carry the zero frequency")
        elif self.kind in (KIND_COSINE, KIND_SINE):
            nz = [v for v in k if v != 0]
            if not nz:
                raise ParameterError(f"{self.kind} index needs a nonzero frequency")
            if nz[0] < 0:
                raise ParameterError(
                    "frequency must be the canonical half-lattice representative "
                    "(first nonzero coordinate positive)"
                )
        else:
            raise ParameterError(f"unknown basis kind {self.kind!r}")

    @property
    def eigenvalue(self) -> float:
        return float(np.sqrt(sum(v * v for v in self.frequency)))


class SystemDescriptor:
    """Basis enumeration of T^q up to an eigenvalue bound.

    Large systems are stored as flat arrays, one row per half-lattice
    point; :class:`BasisIndex` objects are materialized on demand.  The
    basis layout is fixed: entry 0 is the constant, entries 2j+1 and 2j+2
    are the cosine and sine attached to half-lattice point j.
    """

    def __init__(self, q: int, lambda_max: float, point_freqs: np.ndarray):
        self.q = q
        self.lambda_max = float(lambda_max)
        self.point_freqs = point_freqs
        if q == 1:
            self.point_lambdas = np.abs(point_freqs[:, 0]).astype(float)
        else:
            self.point_lambdas = np.sqrt(
                (point_freqs.astype(float) ** 2).sum(axis=1)
            )
        lam = np.empty(1 + 2 * len(point_freqs))
        lam[0] = 0.0
        lam[1::2] = self.point_lambdas
        lam[2::2] = self.point_lambdas
        self.lambdas = lam
        self.mu_star_normalization = 1.0
        self._lookup = None

    @property
    def n_basis(self) -> int:
        return len(self.lambdas)

    @property
    def n_points(self) -> int:
        return len(self.point_freqs)

    def basis_index(self, i: int) -> BasisIndex:
        if i < 0 or i >= self.n_basis:
            raise BasisLookupError(f"basis position {i} out of range")
        if i == 0:
            return BasisIndex(KIND_CONSTANT, (0,) * self.q)
        point = (i - 1) // 2
        kind = KIND_COSINE if i % 2 == 1 else KIND_SINE
        return BasisIndex(kind, tuple(int(v) for v in self.point_freqs[point]))

    @property
    def basis(self) -> list:
        """The full ordered basis as BasisIndex objects.  O(n_basis)."""
        return [self.basis_index(i) for i in range(self.n_basis)]

    def index_of(self, index: BasisIndex) -> int:
        if len(index.frequency) != self.q:
            raise BasisLookupError(
                f"index has dimension {len(index.frequency)}, system has {self.q}"
            )
        if index.kind == KIND_CONSTANT:
            return 0
        if self._lookup is None:
            self._lookup = {
                tuple(int(v) for v in row): j
                for j, row in enumerate(self.point_freqs)
            }
        j = self._lookup.get(index.frequency)
        if j is None:
            raise BasisLookupError(f"{index} does not belong to this system")
        return 2 * j + 1 if index.kind == KIND_COSINE else 2 * j + 2

    def lambda_of(self, index: BasisIndex) -> float:
        return self.lambdas[self.index_of(index)]

    def point_band(self, cut: float, inclusive: bool = False) -> int:
        """Half-lattice points with eigenvalue below (or up to) the cut.

        The enumeration is sorted by eigenvalue, so a band is always a
        prefix; this avoids boolean masks over multi-million entry arrays.
        """
        side = "right" if inclusive else "left"
        return int(np.searchsorted(self.point_lambdas, cut, side=side))

    # -- packing between the real basis layout and complex exponentials --

    def pack_complex(self, coefficients: np.ndarray):
        """Real basis coefficients -> (const, complex half-lattice amplitudes).

        With a_c, a_s the cosine and sine coefficients at point k, the
        amplitude of exp(i k.x) is (a_c - i a_s)/sqrt(2); the amplitude at
        -k is its conjugate.
        """
        c0 = float(coefficients[0])
        c = (coefficients[1::2] - 1j * coefficients[2::2]) / SQRT2
        return c0, c

    def unpack_complex(self, const: float, c: np.ndarray) -> np.ndarray:
        out = np.empty(self.n_basis)
        out[0] = const
        out[1::2] = SQRT2 * c.real
        out[2::2] = -SQRT2 * c.imag
        return out


def _half_lattice(q: int, lambda_max: float) -> np.ndarray:
    """Canonical half-lattice points with 0 < |k| <= lambda_max."""
    lmax = int(np.floor(lambda_max))
    if q == 1:
        return np.arange(1, lmax + 1, dtype=np.int64).reshape(-1, 1)
    if q == 2:
        blocks = [
            np.stack(
                [np.zeros(lmax, dtype=np.int64), np.arange(1, lmax + 1, dtype=np.int64)],
                axis=1,
            )
        ]
        for k1 in range(1, lmax + 1):
            lim = int(np.floor(np.sqrt(lambda_max * lambda_max - k1 * k1)))
            k2 = np.arange(-lim, lim + 1, dtype=np.int64)
            blocks.append(
                np.stack([np.full_like(k2, k1), k2], axis=1)
            )
        return np.concatenate(blocks, axis=0)
    # q == 3: first coordinate zero reduces to the q=2 rule, else full disks
    sub = _half_lattice(2, lambda_max)
    blocks = [
        np.concatenate([np.zeros((len(sub), 1), dtype=np.int64), sub], axis=1)
    ]
    for k1 in range(1, lmax + 1):
        r2 = lambda_max * lambda_max - k1 * k1
        if r2 < 0:
            break
        lim = int(np.floor(np.sqrt(r2)))
        for k2 in range(-lim, lim + 1):
            lim3 = int(np.floor(np.sqrt(r2 - k2 * k2)))
            k3 = np.arange(-lim3, lim3 + 1, dtype=np.int64)
            blocks.append(
                np.stack(
                    [np.full_like(k3, k1), np.full_like(k3, k2), k3], axis=1
                )
            )
    return np.concatenate(blocks, axis=0)


def build_torus_system(q: int, lambda_max: float) -> SystemDescriptor:
    """Enumerate the torus basis with eigenvalues up to lambda_max.

    Parameters
    ----------
    q : int
        Dimension, one of 1, 2, 3.
    lambda_max : float
        Inclusive eigenvalue bound, at least 1.

    Returns
    -------
    SystemDescriptor
        Basis ordered by (eigenvalue, lexicographic frequency, cosine
        before sine), constant function first.
    """
    if q not in (1, 2, 3):
        raise DimensionError(f"only q in {{1, 2, 3}} is supported, got {q}")
    if lambda_max < 1:
        raise ParameterError(f"lambda_max must be >= 1, got {lambda_max}")
    pts = _half_lattice(q, float(lambda_max))
    if q == 1:
        order = slice(None)  # construction order is already sorted
    else:
        lam = np.sqrt((pts.astype(float) ** 2).sum(axis=1))
        keys = tuple(pts[:, a] for a in range(q - 1, -1, -1)) + (lam,)
        order = np.lexsort(keys)
    return SystemDescriptor(q, float(lambda_max), pts[order])


def eval_basis(system: SystemDescriptor, index: BasisIndex, points) -> np.ndarray:
    """Evaluate one basis function at the given points.

    ``points`` is an (m, q) array; a flat array is accepted when q = 1.
    Values never exceed sqrt(2) in magnitude.
    """
    system.index_of(index)  # membership check, raises BasisLookupError
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if system.q == 1 else pts.reshape(1, -1)
    if pts.shape[1] != system.q:
        raise DimensionError(
            f"points have dimension {pts.shape[1]}, system has {system.q}"
        )
    if index.kind == KIND_CONSTANT:
        return np.ones(len(pts))
    angle = pts @ np.asarray(index.frequency, dtype=float)
    if index.kind == KIND_COSINE:
        return SQRT2 * np.cos(angle)
    return SQRT2 * np.sin(angle)
