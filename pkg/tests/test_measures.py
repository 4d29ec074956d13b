import numpy as np
import pytest

from weakstar import (
    Grid,
    GridFunction,
    Measure,
    ParameterError,
    ResolutionError,
    SpectralVector,
    bandlimited_density,
    bump_density,
    build_torus_system,
    fourier_coefficients,
    lacunary_density,
    measure_from_atoms,
    minimal_separation,
    synthesize,
    torus_distance,
    total_variation,
    uniform_density,
)

SQRT2 = np.sqrt(2.0)


def _uniform_measure(system, grid):
    density, band = uniform_density(grid)
    return Measure(system, density=density, band_limit=band)


# --------------------------- coefficients --------------------------------

def test_reference_measure_coefficients(small_system):
    grid = Grid(1, 64)
    mu = _uniform_measure(small_system, grid)
    v = fourier_coefficients(mu, 8.0)
    assert v.coefficients[0] == pytest.approx(1.0, abs=1e-14)
    assert np.max(np.abs(v.coefficients[1:])) < 1e-12


def test_point_mass_coefficients(small_system):
    mu = measure_from_atoms(small_system, [[0.0, 1.0]])
    cut = 8.0
    v = fourier_coefficients(mu, cut)
    assert v.coefficients[0] == 1.0
    for i in range(1, small_system.n_basis):
        b = small_system.basis_index(i)
        if b.eigenvalue >= cut:
            continue  # the cut is strict, entries at or above it stay empty
        expected = SQRT2 if b.kind == "cosine" else 0.0
        assert v.coefficient(b) == pytest.approx(expected, abs=1e-15)


def test_dipole_coefficients(small_system):
    # oracle: direct evaluation of sum_j w_j sqrt(2) sin(k x_j)
    mu = measure_from_atoms(
        small_system, [[np.pi / 2, 0.5], [-np.pi / 2, -0.5]]
    )
    v = fourier_coefficients(mu, 8.0)
    for i in range(small_system.n_basis):
        b = small_system.basis_index(i)
        k = b.frequency[0]
        if b.kind == "sine":
            expected = SQRT2 * (0.5 * np.sin(k * np.pi / 2) - 0.5 * np.sin(-k * np.pi / 2))
        elif b.kind == "cosine":
            expected = SQRT2 * (0.5 - 0.5) * np.cos(k * np.pi / 2)
        else:
            expected = 0.0
        assert v.coefficient(b) == pytest.approx(expected, abs=1e-14)
    assert v.coefficient(small_system.basis_index(2)) == pytest.approx(SQRT2)


def test_linearity(rng):
    s = build_torus_system(1, 16.0)
    mu = measure_from_atoms(s, [[0.3, 1.2]])
    nu = measure_from_atoms(s, [[-1.1, -0.4]])
    both = measure_from_atoms(s, [[0.3, 1.2 * 2.5], [-1.1, -0.4]])
    v = 2.5 * fourier_coefficients(mu, 16.0) + fourier_coefficients(nu, 16.0)
    w = fourier_coefficients(both, 16.0)
    assert np.max(np.abs(v.coefficients - w.coefficients)) < 1e-12


def test_translation_rotates_pairs(rng):
    s = build_torus_system(1, 16.0)
    base = [[0.4, 0.8], [2.0, -0.3]]
    tau = 0.7321
    shifted = [[x + tau, w] for x, w in base]
    v = fourier_coefficients(measure_from_atoms(s, base), 16.0)
    w = fourier_coefficients(measure_from_atoms(s, shifted), 16.0)
    for j, rows in enumerate(s.point_freqs):
        k = rows[0]
        a = np.array([v.coefficients[1 + 2 * j], v.coefficients[2 + 2 * j]])
        b = np.array([w.coefficients[1 + 2 * j], w.coefficients[2 + 2 * j]])
        angle = k * tau
        rot = np.array(
            [[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]]
        )
        # shifting atoms by tau rotates each (cos, sin) coefficient pair
        assert np.max(np.abs(rot @ a - b)) < 1e-10


def test_coefficient_bound(rng):
    s = build_torus_system(1, 32.0)
    grid = Grid(1, 256)
    density, band = bandlimited_density(s, grid, seed=5, lambda_max=10.0)
    mu = Measure(s, np.array([[1.0]]), np.array([-0.7]), density, band)
    v = fourier_coefficients(mu, 32.0)
    assert np.max(np.abs(v.coefficients)) <= SQRT2 * total_variation(mu) + 1e-12


def test_density_beyond_nyquist_rejected():
    s = build_torus_system(1, 64.0)
    grid = Grid(1, 32)
    density, _ = bump_density(grid)
    mu = Measure(s, density=density)  # band content unknown
    with pytest.raises(ResolutionError):
        fourier_coefficients(mu, 64.0)


def test_bandlimited_density_extends_with_zeros():
    s = build_torus_system(1, 64.0)
    grid = Grid(1, 32)
    density, band = bandlimited_density(s, grid, seed=3, lambda_max=8.0)
    mu = Measure(s, density=density, band_limit=band)
    v = fourier_coefficients(mu, 64.0)
    beyond = s.lambdas >= 8.0
    assert np.all(v.coefficients[beyond] == 0.0)


def test_cut_beyond_enumeration_rejected(small_system):
    mu = measure_from_atoms(small_system, [[0.0, 1.0]])
    with pytest.raises(ParameterError):
        fourier_coefficients(mu, 100.0)


# ----------------------------- synthesis ---------------------------------

def test_synthesize_constant(small_system):
    grid = Grid(1, 64)
    coeffs = np.zeros(small_system.n_basis)
    coeffs[0] = 1.0
    out = synthesize(SpectralVector(small_system, coeffs, 8.0), grid)
    assert np.allclose(out.values, 1.0)


def test_synthesize_truncated_point_mass():
    s = build_torus_system(1, 4.0)
    grid = Grid(1, 64)
    mu = measure_from_atoms(s, [[0.0, 1.0]])
    v = fourier_coefficients(mu, 2.0)
    out = synthesize(v, grid)
    x = grid.axis_nodes()
    assert np.max(np.abs(out.values - (1.0 + 2.0 * np.cos(x)))) < 1e-12


def test_roundtrip(rng):
    s = build_torus_system(1, 16.0)
    grid = Grid(1, 64)
    coeffs = rng.standard_normal(s.n_basis)
    coeffs[s.lambdas >= 16.0] = 0.0  # keep everything strictly below the cut
    v = SpectralVector(s, coeffs, s.lambda_max)
    f = synthesize(v, grid)
    mu = Measure(s, density=f, band_limit=16.0)
    w = fourier_coefficients(mu, s.lambda_max)
    assert np.max(np.abs(w.coefficients - coeffs)) < 1e-12


def test_synthesize_nyquist_guard():
    s = build_torus_system(1, 64.0)
    grid = Grid(1, 32)
    coeffs = np.zeros(s.n_basis)
    coeffs[s.index_of(s.basis_index(s.n_basis - 1))] = 1.0
    with pytest.raises(ResolutionError):
        synthesize(SpectralVector(s, coeffs, 64.0), grid)


# ------------------------- scalar functionals ----------------------------

def test_total_variation_examples(small_system):
    grid = Grid(1, 64)
    assert total_variation(measure_from_atoms(small_system, [[0.0, 1.0]])) == 1.0
    dip = measure_from_atoms(small_system, [[np.pi / 2, 0.5], [-np.pi / 2, -0.5]])
    assert total_variation(dip) == 1.0
    density, band = uniform_density(grid)
    mixed = Measure(small_system, np.array([[0.5]]), np.array([-0.25]), density, band)
    assert total_variation(mixed) == pytest.approx(1.25, abs=1e-14)


def test_minimal_separation_examples(small_system):
    mu = measure_from_atoms(small_system, [[0.0, 1.0], [np.pi, 1.0]])
    assert minimal_separation(mu) == pytest.approx(np.pi, abs=1e-12)
    mu = measure_from_atoms(small_system, [[-np.pi + 0.1, 1.0], [np.pi - 0.1, 1.0]])
    assert minimal_separation(mu) == pytest.approx(0.2, abs=1e-12)
    m_count = 7
    lattice = [[2 * np.pi * j / m_count, 1.0] for j in range(m_count)]
    mu = measure_from_atoms(small_system, lattice)
    assert minimal_separation(mu) == pytest.approx(2 * np.pi / m_count, abs=1e-12)


def test_minimal_separation_needs_two_atoms(small_system):
    with pytest.raises(ParameterError):
        minimal_separation(measure_from_atoms(small_system, [[0.0, 1.0]]))


def test_duplicate_atoms_rejected(small_system):
    with pytest.raises(ParameterError):
        measure_from_atoms(small_system, [[0.5, 1.0], [0.5 - 2 * np.pi, 2.0]])


def test_torus_distance_wraps():
    assert torus_distance([3.0], [-3.0]) == pytest.approx(2 * np.pi - 6.0)
    assert torus_distance([0.0, 0.0], [np.pi, 0.0]) == pytest.approx(np.pi)


# ------------------------- density generators ----------------------------

def test_lacunary_density_band(grid1):
    density, band = lacunary_density(grid1, 1.0)
    assert band == 4096.0  # last power of two below the Nyquist bound
    x = grid1.axis_nodes()
    expected = sum(
        2.0 ** (-m) * SQRT2 * np.cos(2**m * x) for m in range(0, 13)
    )
    assert np.max(np.abs(density.values - expected)) < 1e-12


def test_bump_density_properties():
    grid = Grid(1, 2**10)
    density, band = bump_density(grid)
    assert band is None
    assert density.mean() == pytest.approx(1.0, abs=1e-14)
    assert np.all(density.values >= 0.0)
    assert density.values[0] == 0.0  # vanishes at the seam


def test_bump_density_effectively_bandlimited():
    # coefficient magnitudes fall below 1e-10 well inside the grid band,
    # which is what makes FFT coefficients of the bump trustworthy
    grid = Grid(1, 2**10)
    s = build_torus_system(1, 512.0)
    density, _ = bump_density(grid)
    mu = Measure(s, density=density)
    v = fourier_coefficients(mu, 512.0)
    high = s.lambdas >= 300.0
    assert np.max(np.abs(v.coefficients[high])) < 1e-10


def test_bandlimited_density_deterministic(grid1):
    s = build_torus_system(1, 32.0)
    a, _ = bandlimited_density(s, Grid(1, 128), seed=11, lambda_max=8.0)
    b, _ = bandlimited_density(s, Grid(1, 128), seed=11, lambda_max=8.0)
    assert np.array_equal(a.values, b.values)


def test_gridfunction_norms():
    grid = Grid(1, 8)
    f = GridFunction(grid, np.array([1.0, -2, 3, -4, 5, -6, 7, -8]))
    assert f.lp_norm(1) == pytest.approx(4.5)
    assert f.lp_norm(np.inf) == 8.0
    assert f.lp_norm(2) == pytest.approx(np.sqrt(np.mean(f.values**2)))
    with pytest.raises(ParameterError):
        f.lp_norm(0.5)


def test_lp_monotone_in_p(rng):
    grid = Grid(1, 256)
    f = GridFunction(grid, rng.standard_normal(256))
    assert f.lp_norm(1) <= f.lp_norm(2) <= f.lp_norm(np.inf)
