import numpy as np
import pytest

from weakstar import (
    BasisIndex,
    BasisLookupError,
    DimensionError,
    Grid,
    ParameterError,
    build_torus_system,
    eval_basis,
)

SQRT2 = np.sqrt(2.0)


def test_enumeration_q1():
    s = build_torus_system(1, 2.0)
    kinds = [(b.kind, b.frequency) for b in s.basis]
    assert kinds == [
        ("constant", (0,)),
        ("cosine", (1,)),
        ("sine", (1,)),
        ("cosine", (2,)),
        ("sine", (2,)),
    ]
    assert np.allclose(s.lambdas, [0, 1, 1, 2, 2])


def test_enumeration_q2_count():
    s = build_torus_system(2, 1.0)
    assert s.n_basis == 5
    freqs = sorted(tuple(f) for f in s.point_freqs)
    assert freqs == [(0, 1), (1, 0)]


def test_ordering_lexicographic_q2():
    s = build_torus_system(2, 2.5)
    lams = s.point_lambdas
    assert np.all(np.diff(lams) >= -1e-12)
    # among equal eigenvalues the frequency rows are lexicographically sorted
    for lam in np.unique(lams):
        rows = s.point_freqs[np.abs(lams - lam) < 1e-12]
        as_tuples = [tuple(r) for r in rows]
        assert as_tuples == sorted(as_tuples)


def test_ordering_deterministic():
    a = build_torus_system(2, 3.0)
    b = build_torus_system(2, 3.0)
    assert np.array_equal(a.point_freqs, b.point_freqs)


def test_dimension_count_q1():
    # entries strictly below 2^m: the constant plus a cosine and sine per
    # integer frequency 1 .. 2^m - 1
    for m in range(1, 6):
        s = build_torus_system(1, 2.0**m)
        n_below = 1 + 2 * s.point_band(2.0**m)
        assert n_below == 2 * 2**m - 1


def test_constant_evaluates_to_one(small_system):
    idx = BasisIndex("constant", (0,))
    vals = eval_basis(small_system, idx, np.array([[0.1], [2.0], [-3.0]]))
    assert np.all(vals == 1.0)


def test_cosine_sine_values(small_system):
    cos1 = BasisIndex("cosine", (1,))
    sin1 = BasisIndex("sine", (1,))
    assert eval_basis(small_system, cos1, [[0.0]])[0] == pytest.approx(SQRT2, abs=1e-15)
    assert eval_basis(small_system, sin1, [[0.0]])[0] == 0.0


def test_eval_bounded_by_sqrt2(small_system, rng):
    pts = rng.uniform(-np.pi, np.pi, size=(200, 1))
    for b in small_system.basis:
        assert np.max(np.abs(eval_basis(small_system, b, pts))) <= SQRT2 + 1e-12


def test_orthonormality_q1():
    s = build_torus_system(1, 8.0)
    grid = Grid(1, 64)
    nodes = grid.nodes()
    mat = np.stack([eval_basis(s, b, nodes) for b in s.basis])
    gram = (mat @ mat.T) * grid.quadrature_weight
    assert np.max(np.abs(gram - np.eye(s.n_basis))) < 1e-12


def test_orthonormality_q2():
    s = build_torus_system(2, 3.0)
    grid = Grid(2, 16)
    nodes = grid.nodes()
    mat = np.stack([eval_basis(s, b, nodes) for b in s.basis])
    gram = (mat @ mat.T) * grid.quadrature_weight
    assert np.max(np.abs(gram - np.eye(s.n_basis))) < 1e-12


def test_discrete_orthogonality_high_frequency():
    s = build_torus_system(1, 4.0)
    grid = Grid(1, 1024)
    nodes = grid.nodes()
    c3 = eval_basis(s, BasisIndex("cosine", (3,)), nodes)
    s3 = eval_basis(s, BasisIndex("sine", (3,)), nodes)
    assert abs(np.sum(c3 * s3) * grid.quadrature_weight) < 1e-12


def test_index_lookup_roundtrip():
    s = build_torus_system(2, 2.0)
    for i in range(s.n_basis):
        assert s.index_of(s.basis_index(i)) == i


def test_foreign_index_raises(small_system):
    with pytest.raises(BasisLookupError):
        eval_basis(small_system, BasisIndex("cosine", (9,)), [[0.0]])
    with pytest.raises(BasisLookupError):
        small_system.index_of(BasisIndex("cosine", (1, 1)))


def test_bad_parameters():
    with pytest.raises(DimensionError):
        build_torus_system(4, 2.0)
    with pytest.raises(ParameterError):
        build_torus_system(1, 0.5)


def test_basis_index_validation():
    with pytest.raises(ParameterError):
        BasisIndex("constant", (1,))
    with pytest.raises(ParameterError):
        BasisIndex("cosine", (0,))
    with pytest.raises(ParameterError):
        BasisIndex("sine", (-1, 2))
    with pytest.raises(ParameterError):
        BasisIndex("wavelet", (1,))


def test_grid_validation():
    with pytest.raises(ParameterError):
        Grid(1, 100)  # not a power of two
    grid = Grid(1, 8)
    assert grid.nyquist == 4
    assert grid.quadrature_weight == pytest.approx(1 / 8)
    assert grid.axis_nodes()[0] == pytest.approx(-np.pi)


def test_mu_star_normalized(small_system):
    assert small_system.mu_star_normalization == 1.0
