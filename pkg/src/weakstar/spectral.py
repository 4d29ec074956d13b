"""Spectral vectors, kernel truncation policy, and multiplier operations.

A kernel of decay order beta is the series sum_k b(lambda_k) phi_k(x)
phi_k(y) with b the mask from :mod:`weakstar.filters`.  Pointwise
evaluation truncates the series at an eigenvalue bound Lambda; for
beta > q the bound is chosen so that an integral-comparison estimate of
the discarded sup norm,

    2 * sum over basis entries with lambda_k > Lambda of b(lambda_k),

stays below a requested tolerance.  That estimate is a worst-case bound:
away from the diagonal the discarded terms oscillate and largely cancel,
so measured truncation errors of L^p norms are typically several orders
of magnitude smaller than the reported bar.  For beta <= q the analytic
bound diverges and an explicit empirical policy must be requested
instead (see :func:`kernel_spec_empirical`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BandCoverageError,
    ParameterError,
    SlowDecayError,
)
from .filters import Filter, mask
from .grids import Grid, GridFunction, fold_synthesize
from .system import BasisIndex, SystemDescriptor

#: hard ceiling on derived truncation bounds; beyond this the enumeration
#: itself would be intractable and the caller should relax the tolerance
#: or fix lambda_truncation explicitly.
MAX_TRUNCATION = 1.0e8


def spectral_tail_bound(beta: float, q: int, lam: float) -> float:
    """Upper bound for 2 * sum_{lambda_k > lam} b(lambda_k) on the torus.

    Comparison of the lattice sum with the integral of t^(q-1-beta),
    with the shell count over-estimated by one lattice spacing.  Requires
    beta > q; valid for lam >= q + 1.
    """
    if beta <= q:
        raise SlowDecayError(
            f"analytic tail bound needs beta > q, got beta={beta}, q={q}"
        )
    s = lam - 1.0
    if s <= 0:
        raise ParameterError(f"tail bound needs lambda > 1, got {lam}")
    if q == 1:
        return 4.0 * s ** (1.0 - beta) / (beta - 1.0)
    if q == 2:
        return 4.0 * np.pi * (
            s ** (2.0 - beta) / (beta - 2.0) + s ** (1.0 - beta) / (beta - 1.0)
        )
    return 8.0 * np.pi * (
        s ** (3.0 - beta) / (beta - 3.0)
        + 2.0 * s ** (2.0 - beta) / (beta - 2.0)
        + s ** (1.0 - beta) / (beta - 1.0)
    )


def truncation_for_tolerance(beta: float, q: int, tolerance: float) -> float:
    """Smallest eigenvalue bound whose tail estimate meets the tolerance."""
    if tolerance <= 0:
        raise ParameterError(f"tail tolerance must be positive, got {tolerance}")
    lo, hi = float(q) + 1.5, MAX_TRUNCATION
    if spectral_tail_bound(beta, q, hi) > tolerance:
        raise ParameterError(
            f"tail tolerance {tolerance} needs a truncation beyond {MAX_TRUNCATION:g} "
            f"for beta={beta}, q={q}; relax it or set lambda_truncation explicitly"
        )
    if spectral_tail_bound(beta, q, lo) <= tolerance:
        return lo
    for _ in range(80):
        mid = np.sqrt(lo * hi)
        if spectral_tail_bound(beta, q, mid) <= tolerance:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class KernelSpec:
    """A mask of order beta plus the truncation policy for its kernel."""

    mask: Filter
    beta: float
    q: int
    lambda_truncation: float
    tail_tolerance: float
    empirical_tail: bool = False

    def mask_values(self, lam: np.ndarray) -> np.ndarray:
        return self.mask.evaluate(lam)


def kernel_spec(
    beta: float,
    q: int,
    tail_tolerance: float = 1e-8,
    lambda_truncation: float = None,
) -> KernelSpec:
    """Build a kernel of order beta > q under the analytic tail policy.

    Either field may be supplied: a missing truncation is derived from the
    tolerance, a missing tolerance is the bound evaluated at the given
    truncation, and if both are given they must be consistent.
    """
    if beta <= 0:
        raise ParameterError(f"kernel order beta must be positive, got {beta}")
    if beta <= q:
        raise SlowDecayError(
            f"beta={beta} <= q={q}: the series tail is not absolutely summable; "
            "use kernel_spec_empirical to opt into the empirical policy"
        )
    if lambda_truncation is None:
        lambda_truncation = truncation_for_tolerance(beta, q, tail_tolerance)
    else:
        bound = spectral_tail_bound(beta, q, lambda_truncation)
        if tail_tolerance is None:
            tail_tolerance = bound
        elif bound > tail_tolerance * (1.0 + 1e-9):
            raise ParameterError(
                f"lambda_truncation={lambda_truncation:g} only reaches tail bound "
                f"{bound:.3g}, above the requested tolerance {tail_tolerance:g}"
            )
    return KernelSpec(
        mask=mask(beta),
        beta=beta,
        q=q,
        lambda_truncation=float(lambda_truncation),
        tail_tolerance=float(tail_tolerance),
    )


def kernel_spec_empirical(
    beta: float,
    q: int,
    grid: Grid,
    cauchy_tolerance: float = 1e-6,
    start: float = 256.0,
    max_lambda: float = 2.0**22,
) -> KernelSpec:
    """Kernel for beta <= q via an empirical Cauchy truncation rule.

    Doubles the truncation until successive partial sums of the section
    x -> K(x, 0) differ by less than ``cauchy_tolerance`` in the grid L^1
    norm.  Results carry the ``empirical_tail`` flag because no analytic
    remainder bound is available in this regime.

    The section diverges on the diagonal when beta <= q, so the node at
    the section center contributes an increment that grows with the
    truncation; whether the criterion can be met depends on how much
    quadrature weight that node carries.  The loop aborts with a clear
    error once the increments stop shrinking or ``max_lambda`` is hit,
    rather than doubling into intractable enumerations; a finer grid or a
    looser tolerance is then the remedy.
    """
    if beta <= 0:
        raise ParameterError(f"kernel order beta must be positive, got {beta}")
    if grid.q != q:
        raise ParameterError(f"grid dimension {grid.q} does not match q={q}")
    from .system import build_torus_system  # cycle-free, deferred for clarity

    b = mask(beta)
    lam = float(start)
    prev = None
    last_delta = np.inf
    rising = 0
    while lam <= max_lambda:
        sys_probe = build_torus_system(q, lam)
        coeffs = b.evaluate(sys_probe.point_lambdas)
        vals = fold_synthesize(sys_probe.point_freqs, coeffs.astype(complex), 1.0, grid)
        if prev is not None:
            delta = float(np.mean(np.abs(vals - prev)))
            if delta < cauchy_tolerance:
                return KernelSpec(
                    mask=b,
                    beta=beta,
                    q=q,
                    lambda_truncation=lam,
                    tail_tolerance=float(cauchy_tolerance),
                    empirical_tail=True,
                )
            rising = rising + 1 if delta >= last_delta else 0
            if rising >= 2:
                raise ParameterError(
                    f"empirical truncation stalled at increment {delta:.3g} "
                    f"(tolerance {cauchy_tolerance:g}); the diagonal node "
                    "dominates, refine the grid or relax the tolerance"
                )
            last_delta = delta
        prev = vals
        lam *= 2.0
    raise ParameterError(
        f"empirical truncation did not stabilize below lambda={max_lambda:g}"
    )


@dataclass
class SpectralVector:
    """Coefficients against a system's basis, valid below an eigenvalue cut.

    Entries at eigenvalues >= lambda_cut are stored as zeros but carry no
    information unless the producing operation says otherwise (band-limited
    constructions keep exact zeros there and say so by setting the cut to
    the system bound).
    """

    system: SystemDescriptor
    coefficients: np.ndarray
    lambda_cut: float

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.shape != (self.system.n_basis,):
            raise ParameterError(
                f"coefficient array has shape {self.coefficients.shape}, "
                f"system has {self.system.n_basis} basis functions"
            )
        if self.lambda_cut > self.system.lambda_max + 1e-9:
            raise BandCoverageError(
                f"lambda_cut={self.lambda_cut:g} exceeds the system enumeration "
                f"bound {self.system.lambda_max:g}"
            )

    def coefficient(self, index: BasisIndex) -> float:
        return float(self.coefficients[self.system.index_of(index)])

    def copy(self) -> "SpectralVector":
        return SpectralVector(self.system, self.coefficients.copy(), self.lambda_cut)

    def _check_mate(self, other: "SpectralVector"):
        if other.system is not self.system:
            raise ParameterError(
                "spectral vectors must share the same system instance"
            )

    def __add__(self, other: "SpectralVector") -> "SpectralVector":
        self._check_mate(other)
        return SpectralVector(
            self.system,
            self.coefficients + other.coefficients,
            min(self.lambda_cut, other.lambda_cut),
        )

    def __sub__(self, other: "SpectralVector") -> "SpectralVector":
        self._check_mate(other)
        return SpectralVector(
            self.system,
            self.coefficients - other.coefficients,
            min(self.lambda_cut, other.lambda_cut),
        )

    def __mul__(self, scalar) -> "SpectralVector":
        return SpectralVector(
            self.system, self.coefficients * float(scalar), self.lambda_cut
        )

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralVector":
        return SpectralVector(self.system, -self.coefficients, self.lambda_cut)


def apply_multiplier(H: Filter, n: float, v: SpectralVector) -> SpectralVector:
    """Multiply coefficients by H(lambda_k / n).

    For a compactly supported H the input must cover the scaled band
    n * support_radius; the output is exactly zero beyond that band and
    its cut is set there.  Masks have unbounded support and keep the
    input's cut.
    """
    if n <= 0:
        raise ParameterError(f"scale n must be positive, got {n}")
    radius = H.support_radius
    if np.isfinite(radius):
        needed = n * radius
        if v.lambda_cut < needed - 1e-9:
            raise BandCoverageError(
                f"multiplier at scale n={n:g} needs coefficients up to "
                f"{needed:g}, vector is only valid below {v.lambda_cut:g}"
            )
        out_cut = min(needed, v.system.lambda_max)
    else:
        out_cut = v.lambda_cut
    values = np.asarray(H.evaluate(v.system.lambdas / n))
    return SpectralVector(v.system, values * v.coefficients, out_cut)


def eval_kernel_section(
    spec: KernelSpec,
    system: SystemDescriptor,
    y,
    grid: Grid,
) -> GridFunction:
    """Evaluate x -> sum_{lambda_k <= Lambda} b(lambda_k) phi_k(x) phi_k(y).

    The absolute truncation error is bounded by ``spec.tail_tolerance``
    when beta > q; under the empirical policy the result carries only the
    Cauchy stabilization evidence recorded on the spec.
    """
    if spec.q != system.q:
        raise ParameterError(
            f"kernel built for q={spec.q}, system has q={system.q}"
        )
    if spec.beta <= system.q and not spec.empirical_tail:
        raise SlowDecayError(
            f"beta={spec.beta} <= q={system.q} requires the empirical policy"
        )
    lam_cap = min(spec.lambda_truncation, system.lambda_max)
    if system.lambda_max + 1e-9 < spec.lambda_truncation:
        raise BandCoverageError(
            f"system enumerates eigenvalues only to {system.lambda_max:g}, "
            f"kernel truncation is {spec.lambda_truncation:g}"
        )
    y = np.asarray(y, dtype=float).reshape(system.q)
    n_pts = system.point_band(lam_cap, inclusive=True)
    pts = system.point_freqs[:n_pts]
    weights = spec.mask_values(system.point_lambdas[:n_pts])
    angle = pts.astype(float) @ y if system.q > 1 else pts[:, 0] * y[0]
    # b * (cos - i sin)(k.y) collects both the cosine and sine coefficients
    coeffs = weights * np.exp(-1j * angle)
    const = float(np.asarray(spec.mask_values(0.0)))
    vals = fold_synthesize(pts, coeffs, const, grid)
    return GridFunction(grid, vals)


def localized_kernel(
    H: Filter,
    n: float,
    x,
    y,
    system: SystemDescriptor,
) -> float:
    """Finite sum sum_k H(lambda_k/n) phi_k(x) phi_k(y); exact, no tail."""
    if not np.isfinite(H.support_radius):
        raise ParameterError(
            "localized kernels need a compactly supported filter"
        )
    if n <= 0:
        raise ParameterError(f"scale n must be positive, got {n}")
    needed = n * H.support_radius
    if system.lambda_max + 1e-9 < needed:
        raise BandCoverageError(
            f"system enumerates eigenvalues only to {system.lambda_max:g}, "
            f"filter at scale n={n:g} is supported up to {needed:g}"
        )
    x = np.asarray(x, dtype=float).reshape(system.q)
    y = np.asarray(y, dtype=float).reshape(system.q)
    n_pts = system.point_band(needed, inclusive=True)
    pts = system.point_freqs[:n_pts].astype(float)
    w = np.asarray(H.evaluate(system.point_lambdas[:n_pts] / n))
    # cos(k.x)cos(k.y) + sin(k.x)sin(k.y) = cos(k.(x - y))
    total = float(np.asarray(H.evaluate(0.0)))
    total += 2.0 * float(np.sum(w * np.cos(pts @ (x - y))))
    return total


def apply_inverse_kernel(spec: KernelSpec, v: SpectralVector) -> SpectralVector:
    """Divide coefficients by the mask; exact inverse of the mask multiplier."""
    weights = np.asarray(spec.mask_values(v.system.lambdas))
    return SpectralVector(v.system, v.coefficients / weights, v.lambda_cut)
