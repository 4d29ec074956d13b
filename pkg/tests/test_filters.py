import numpy as np
import pytest

from weakstar import (
    ParameterError,
    bandpass,
    bandpass_g,
    lowpass,
    lowpass_h,
    mask,
    mask_beta,
    product,
)


def test_lowpass_plateau_and_support():
    assert lowpass_h(0.3) == 1.0
    assert lowpass_h(0.5) == 1.0
    assert lowpass_h(1.0) == 0.0
    assert lowpass_h(1.7) == 0.0


def test_lowpass_midpoint():
    # the transition is symmetric about 3/4
    assert lowpass_h(0.75) == pytest.approx(0.5, abs=1e-15)


def test_lowpass_even_and_monotone(rng):
    t = rng.uniform(0, 2, size=2000)
    assert np.allclose(lowpass_h(t), lowpass_h(-t))
    ts = np.sort(t)
    vals = lowpass_h(ts)
    assert np.all(np.diff(vals) <= 1e-15)


def test_bandpass_examples():
    assert bandpass_g(0.2) == 0.0
    assert bandpass_g(1.1) == 0.0
    assert bandpass_g(0.75) == pytest.approx(0.5, abs=1e-15)


def test_bandpass_support(rng):
    t = rng.uniform(-2, 2, size=10_000)
    g = bandpass_g(t)
    outside = (np.abs(t) < 0.25) | (np.abs(t) > 1.0)
    assert np.all(g[outside] == 0.0)
    assert np.max(np.abs(g - (lowpass_h(t) - lowpass_h(2 * t)))) < 1e-12


def test_reconstruction_identity(rng):
    # h(t/2) - h(4t) equals one on the band-pass support
    t = rng.uniform(-2, 2, size=10_000)
    g = bandpass_g(t)
    htilde = lowpass_h(t / 2) - lowpass_h(4 * t)
    assert np.max(np.abs(g * htilde - g)) < 1e-12


def test_telescoping_pointwise(rng):
    t = rng.uniform(-3, 3, size=10_000)
    assert np.max(np.abs(lowpass_h(t) - lowpass_h(2 * t) - bandpass_g(t))) < 1e-15


def test_mask_values():
    assert mask_beta(2.0, 0.0) == 1.0
    assert mask_beta(2.0, 1.0) == pytest.approx(0.5, abs=1e-15)
    assert mask_beta(4.0, 3.0) == pytest.approx(0.01, abs=1e-15)


def test_mask_positive_even(rng):
    t = rng.uniform(-50, 50, size=1000)
    vals = mask_beta(1.5, t)
    assert np.all(vals > 0)
    assert np.allclose(vals, mask_beta(1.5, -t))


def test_mask_requires_positive_beta():
    with pytest.raises(ParameterError):
        mask_beta(0.0, 1.0)
    with pytest.raises(ParameterError):
        mask(-1.0)


def test_filter_wrappers():
    h = lowpass()
    g = bandpass()
    b = mask(2.0)
    assert h.support_radius == 1.0
    assert g.support_radius == 1.0
    assert np.isinf(b.support_radius)
    assert b.beta == 2.0
    hb = product(h, b)
    assert hb.support_radius == 1.0
    t = np.linspace(0, 2, 64)
    assert np.allclose(hb.evaluate(t), lowpass_h(t) * mask_beta(2.0, t))
