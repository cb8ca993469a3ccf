"""Shared fixtures: the bundled catalog and seeded random generators."""

from __future__ import annotations

from fractions import Fraction

import pytest

from kellerlab.bipoly import BivariatePolynomial
from kellerlab.catalog import bundled_catalog
from kellerlab.rationals import GaussianRational, ONE, ZERO
from kellerlab.rng import SALT_WORDS, stream
from kellerlab.tame import AffineFactor, Axis, ElementaryFactor, TameWord


@pytest.fixture(scope="session")
def catalog():
    return bundled_catalog()


def random_coefficient(gen, allow_zero=True) -> GaussianRational:
    while True:
        num = int(gen.integers(-3, 4))
        den = int(gen.integers(1, 4))
        im_num = int(gen.integers(-2, 3)) if gen.random() < 0.3 else 0
        c = GaussianRational(Fraction(num, den), Fraction(im_num, den))
        if allow_zero or not c.is_zero():
            return c


def random_affine(gen) -> AffineFactor:
    while True:
        a = random_coefficient(gen)
        b = random_coefficient(gen)
        d = random_coefficient(gen)
        if not a.is_zero():
            e = (ONE + b * d) / a
            break
        if not d.is_zero() and not b.is_zero():
            # ae - bd = 1 with a = 0 forces bd = -1
            b = (ZERO - ONE) / d
            e = random_coefficient(gen)
            a = ZERO
            break
    c = random_coefficient(gen)
    f = random_coefficient(gen)
    return AffineFactor(a, b, c, d, e, f)


def random_elementary(gen, max_degree=4) -> ElementaryFactor:
    axis = Axis.ADD_TO_X if gen.random() < 0.5 else Axis.ADD_TO_Y
    degree = int(gen.integers(2, max_degree + 1))
    coeffs = [random_coefficient(gen) for _ in range(degree)]
    coeffs.append(random_coefficient(gen, allow_zero=False))
    return ElementaryFactor(axis, tuple(coeffs))


def random_word(seed: int, index: int, max_factors=4, max_degree=4,
                degree_cap=12) -> TameWord:
    """Random tame word; resamples while the elementary degree product
    exceeds the cap.  Factor count and per-factor degrees cover the full
    admissible range; the cap only trims extreme alternation products whose
    exact expansions outgrow desk scale."""
    attempt = 0
    while True:
        gen = stream(seed, SALT_WORDS, index * 1021 + attempt)
        n = int(gen.integers(1, max_factors + 1))
        factors = []
        product = 1
        for _ in range(n):
            if gen.random() < 0.45:
                factors.append(random_affine(gen))
            else:
                el = random_elementary(gen, max_degree)
                product *= len(el.poly) - 1
                factors.append(el)
        if product <= degree_cap:
            return TameWord(factors)
        attempt += 1


def random_polynomial(gen, max_degree=3, terms=4) -> BivariatePolynomial:
    out = {}
    for _ in range(terms):
        i = int(gen.integers(0, max_degree + 1))
        j = int(gen.integers(0, max_degree + 1 - i))
        out[(i, j)] = random_coefficient(gen)
    return BivariatePolynomial(out)
