"""Smooth spectral multipliers: low pass, band pass, and decay masks.

The low-pass profile is the standard smooth partition built from
e(s) = exp(-1/s): it is exactly 1 on [0, 1/2], exactly 0 from 1 on, C-infty
everywhere, and symmetric about 3/4 on the transition (so h(3/4) = 1/2).
The band pass is its dyadic difference g(t) = h(t) - h(2t).  Masks are the
positive even profiles (1 + t^2)^(-beta/2) that define kernels of decay
order beta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError


def _bump(s):
    """exp(-1/s) for s > 0, else 0; the classic smooth cutoff ingredient."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def lowpass_h(t):
    """Smooth low-pass profile: 1 on [0, 1/2], 0 on [1, inf), even.

    Accepts scalars or arrays and returns the matching shape.
    """
    arr = np.abs(np.asarray(t, dtype=float))
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.zeros_like(arr)
    out[arr <= 0.5] = 1.0
    mid = (arr > 0.5) & (arr < 1.0)
    if np.any(mid):
        up = _bump(1.0 - arr[mid])
        down = _bump(arr[mid] - 0.5)
        out[mid] = up / (up + down)
    return float(out[0]) if scalar else out


def bandpass_g(t):
    """Dyadic band pass g(t) = h(t) - h(2t), supported on 1/4 <= |t| <= 1."""
    t = np.asarray(t, dtype=float)
    return lowpass_h(t) - lowpass_h(2.0 * t)


def mask_beta(beta: float, t):
    """Decay mask (1 + t^2)^(-beta/2); positive, even, equal to 1 at 0."""
    if beta <= 0:
        raise ParameterError(f"mask order beta must be positive, got {beta}")
    t = np.asarray(t, dtype=float)
    out = (1.0 + t * t) ** (-beta / 2.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Filter:
    """A spectral multiplier together with its support information.

    ``support_radius`` is the smallest R with evaluate(t) = 0 for |t| > R,
    or inf for masks.  Multiplier application scaled by n only needs basis
    coefficients with eigenvalue below n * support_radius.
    """

    kind: str
    evaluate: Callable
    support_radius: float
    beta: float = None

    def __call__(self, t):
        return self.evaluate(t)


def lowpass() -> Filter:
    return Filter(kind="lowpass_h", evaluate=lowpass_h, support_radius=1.0)


def bandpass() -> Filter:
    return Filter(kind="bandpass_g", evaluate=bandpass_g, support_radius=1.0)


def mask(beta: float) -> Filter:
    if beta <= 0:
        raise ParameterError(f"mask order beta must be positive, got {beta}")
    return Filter(
        kind="mask_b",
        evaluate=lambda t, _b=beta: mask_beta(_b, t),
        support_radius=np.inf,
        beta=beta,
    )


def product(first: Filter, second: Filter) -> Filter:
    """Pointwise product of two filters; support is the intersection."""
    return Filter(
        kind="product",
        evaluate=lambda t, _f=first, _g=second: np.asarray(_f.evaluate(t))
        * np.asarray(_g.evaluate(t)),
        support_radius=min(first.support_radius, second.support_radius),
    )
