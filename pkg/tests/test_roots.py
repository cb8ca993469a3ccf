import numpy as np
import pytest

from kellerlab.rng import stream
from kellerlab.roots import all_roots, cluster_roots, univariate_roots


def _match(found, expected, tol=1e-8):
    found = sorted(found, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    expected = sorted(expected, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    assert len(found) == len(expected)
    for a, b in zip(found, expected):
        assert abs(a - b) <= tol


def test_quadratic():
    roots = univariate_roots([1, 0, 1], 1e-8)  # z^2 + 1
    _match([r for r, m in roots], [1j, -1j])
    assert all(m == 1 for _, m in roots)


def test_cube_roots_of_unity():
    roots = univariate_roots([-1, 0, 0, 1], 1e-8)  # z^3 - 1
    import cmath
    _match([r for r, m in roots],
           [cmath.exp(2j * cmath.pi * k / 3) for k in range(3)])


def test_cluster_multiplicity():
    # (z - 1)^2 (z + 2) = z^3 - 3z + 2
    roots = univariate_roots([2, -3, 0, 1], 1e-6)
    by_root = {round(r.real, 3): m for r, m in roots}
    assert by_root == {1.0: 2, -2.0: 1}


def test_root_count_with_multiplicity_matches_degree():
    gen = stream(2024, 5, 0)
    for _ in range(25):
        deg = int(gen.integers(1, 9))
        coeffs = gen.normal(size=deg + 1) + 1j * gen.normal(size=deg + 1)
        coeffs[-1] += 3.0  # keep the leading coefficient well away from zero
        roots = univariate_roots(coeffs, 1e-8)
        assert sum(m for _, m in roots) == deg
        # every root satisfies the polynomial to a backward-error level
        for r, _ in roots:
            value = abs(np.polyval(coeffs[::-1], r))
            scale = sum(abs(c) * abs(r) ** k for k, c in enumerate(coeffs))
            assert value <= 1e-7 * max(scale, 1.0)


def test_high_degree_aberth_path():
    # degree 12, distinct roots 1..12 scaled into the unit disk
    true = np.array([k / 13.0 for k in range(1, 13)], dtype=complex)
    coeffs = np.poly(true)[::-1]
    roots = univariate_roots(coeffs, 1e-7)
    _match([r for r, m in roots], list(true), tol=1e-6)


def test_roots_at_origin():
    # z^2 (z - 5)
    roots = univariate_roots([0, 0, -5, 1], 1e-8)
    by_root = {round(r.real, 3): m for r, m in roots}
    assert by_root == {0.0: 2, 5.0: 1}


def test_non_convergence_at_tiny_iteration_cap():
    from kellerlab.errors import NonConvergence
    coeffs = np.poly([k / 9.0 for k in range(1, 9)])[::-1]
    with pytest.raises(NonConvergence):
        univariate_roots(coeffs, 1e-8, max_iter=1)


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        all_roots([0, 0])


def test_cluster_roots_transitive():
    pts = np.array([0.0, 1e-9, 2e-9, 1.0], dtype=complex)
    clusters = cluster_roots(pts, 1.5e-9)
    assert sorted(m for _, m in clusters) == [1, 3]
