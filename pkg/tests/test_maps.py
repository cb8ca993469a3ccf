import math

import numpy as np
import pytest

from kellerlab.bipoly import BivariatePolynomial
from kellerlab.maps import (ComplexPoint, PlanarPolyMap, compose, is_keller,
                            jacobian_determinant, uniform_bound_on_compact,
                            y_degree_dominant)
from kellerlab.rationals import gr
from kellerlab.rng import stream

from conftest import random_polynomial

X, Y = BivariatePolynomial.x(), BivariatePolynomial.y()
IDENT = PlanarPolyMap.identity()


def test_compose_examples():
    f = PlanarPolyMap(X + Y * Y, Y)
    assert compose(IDENT, f) == f and compose(f, IDENT) == f
    g = PlanarPolyMap(X, Y + X ** 3)
    assert compose(f, g) == PlanarPolyMap(
        X + Y * Y + (X ** 3 * Y).scale(gr(2)) + X ** 6, Y + X ** 3)
    assert compose(PlanarPolyMap(X * X, Y), PlanarPolyMap(X, Y ** 3)) == \
        PlanarPolyMap(X * X, Y ** 3)


def test_composition_degree_bound():
    gen = stream(3, 9, 1)
    for _ in range(20):
        f = PlanarPolyMap(random_polynomial(gen, 3), random_polynomial(gen, 3))
        g = PlanarPolyMap(random_polynomial(gen, 3), random_polynomial(gen, 3))
        fg = compose(f, g)
        if fg.degree > 0 and f.degree > 0 and g.degree > 0:
            assert fg.degree <= f.degree * g.degree


def test_jacobian_examples():
    assert jacobian_determinant(PlanarPolyMap(X + Y * Y, Y)) == \
        BivariatePolynomial.constant(1)
    assert jacobian_determinant(PlanarPolyMap(X * X, Y)) == X.scale(gr(2))
    assert jacobian_determinant(PlanarPolyMap(X * Y, Y)) == Y


def test_is_keller():
    assert is_keller(IDENT)
    assert is_keller(PlanarPolyMap(X + Y * Y, Y))
    assert not is_keller(PlanarPolyMap(X * X, Y))


def test_keller_closure_under_composition():
    gen = stream(11, 9, 2)
    from conftest import random_word
    from kellerlab.tame import expand_word
    for k in range(10):
        f = expand_word(random_word(5, 2 * k, max_factors=2, max_degree=3))
        g = expand_word(random_word(5, 2 * k + 1, max_factors=2, max_degree=3))
        assert is_keller(f) and is_keller(g)
        assert is_keller(compose(f, g))


def test_composition_associativity_random():
    gen = stream(13, 9, 3)
    for _ in range(10):
        f = PlanarPolyMap(random_polynomial(gen, 4, 3), random_polynomial(gen, 4, 3))
        g = PlanarPolyMap(random_polynomial(gen, 4, 3), random_polynomial(gen, 4, 3))
        h = PlanarPolyMap(random_polynomial(gen, 4, 3), random_polynomial(gen, 4, 3))
        assert compose(f, compose(g, h)) == compose(compose(f, g), h)


def test_chain_rule_at_points():
    gen = stream(17, 9, 4)
    for _ in range(20):
        f = PlanarPolyMap(random_polynomial(gen, 3), random_polynomial(gen, 3))
        g = PlanarPolyMap(random_polynomial(gen, 3), random_polynomial(gen, 3))
        z = complex(gen.uniform(-1, 1), gen.uniform(-1, 1))
        w = complex(gen.uniform(-1, 1), gen.uniform(-1, 1))
        lhs = jacobian_determinant(compose(f, g)).evaluate(z, w)
        gz = g.first.evaluate(z, w)
        gw = g.second.evaluate(z, w)
        rhs = jacobian_determinant(f).evaluate(gz, gw) * \
            jacobian_determinant(g).evaluate(z, w)
        scale = max(1.0, abs(lhs), abs(rhs))
        assert abs(lhs - rhs) <= 1e-9 * scale


def test_uniform_bound_examples():
    f = PlanarPolyMap(X + Y * Y, Y)
    g = IDENT
    assert uniform_bound_on_compact(f, f, 1.0) == 0.0
    assert uniform_bound_on_compact(f, g, 1.0) == pytest.approx(1.0, rel=1e-9)
    assert uniform_bound_on_compact(f, g, 2.0) == pytest.approx(4.0, rel=1e-9)


def test_uniform_bound_dominates_grid_sup():
    # sup over the polydisk is attained on the torus; a dense grid sample of
    # the torus never exceeds the coefficient bound
    gen = stream(19, 9, 5)
    angles = np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False)
    zs = np.exp(1j * angles)
    for _ in range(50):
        f = PlanarPolyMap(random_polynomial(gen, 3), random_polynomial(gen, 3))
        g = PlanarPolyMap(random_polynomial(gen, 3), random_polynomial(gen, 3))
        bound = uniform_bound_on_compact(f, g, 1.0)
        worst = 0.0
        for z in zs:
            d1 = (f.first - g.first).evaluate_vec(np.full_like(zs, z), zs)
            d2 = (f.second - g.second).evaluate_vec(np.full_like(zs, z), zs)
            worst = max(worst, float(np.max(np.abs(d1) + np.abs(d2))))
        assert worst <= bound


def test_y_degree_dominance_advisory():
    assert y_degree_dominant(PlanarPolyMap(X + Y * Y, Y))
    assert not y_degree_dominant(PlanarPolyMap(X * X, Y))
    assert not y_degree_dominant(PlanarPolyMap(BivariatePolynomial.zero(), Y))


def test_complex_point_rejects_non_finite():
    with pytest.raises(ValueError):
        ComplexPoint(float("inf"), 0)
