"""Tame automorphism words: expansion, inversion, degree-reduction decomposition.

Every polynomial automorphism of C^2 is a finite composition of affine maps
(aX+bY+c, dX+eY+f) with ae-bd=1 and elementary maps (X+P(Y), Y) or
(X, Y+P(X)).  A word stores such factors in composition order: the word
[F1, F2, ..., Fk] expands to F1 o F2 o ... o Fk (rightmost factor applied
first).  Only the expanded map is contract-bearing; distinct words may
expand to the same automorphism.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .bipoly import (BivariatePolynomial, UniPoly, uni_degree, uni_to_bivariate,
                     uni_trim)
from .errors import DegenerateAffine, NotAnAutomorphism, NotKeller
from .maps import PlanarPolyMap, compose, is_keller
from .rationals import GaussianRational, ONE, ZERO


class Axis(enum.Enum):
    ADD_TO_X = "x"
    ADD_TO_Y = "y"


@dataclass(frozen=True)
class AffineFactor:
    """(aX + bY + c, dX + eY + f) with ae - bd = 1 exactly."""

    a: GaussianRational
    b: GaussianRational
    c: GaussianRational
    d: GaussianRational
    e: GaussianRational
    f: GaussianRational

    def __post_init__(self):
        det = self.a * self.e - self.b * self.d
        if not det.is_one():
            raise ValueError(f"affine factor determinant is {det}, not 1")

    def to_map(self) -> PlanarPolyMap:
        X, Y = BivariatePolynomial.x(), BivariatePolynomial.y()
        one = BivariatePolynomial.constant(1)
        return PlanarPolyMap(
            X.scale(self.a) + Y.scale(self.b) + one.scale(self.c),
            X.scale(self.d) + Y.scale(self.e) + one.scale(self.f),
        )

    def inverse(self) -> "AffineFactor":
        a, b, c, d, e, f = self.a, self.b, self.c, self.d, self.e, self.f
        return AffineFactor(
            a=e, b=-b, c=b * f - e * c,
            d=-d, e=a, f=d * c - a * f,
        )


@dataclass(frozen=True)
class ElementaryFactor:
    """(X + P(Y), Y) for axis x, or (X, Y + P(X)) for axis y.

    Canonical decompositions use deg P >= 2; lower degrees overlap the
    affine factors and are flagged, not forbidden.
    """

    axis: Axis
    poly: UniPoly

    def __post_init__(self):
        object.__setattr__(self, "poly", uni_trim(self.poly))

    @property
    def overlaps_affine(self) -> bool:
        return uni_degree(self.poly) < 2

    def to_map(self) -> PlanarPolyMap:
        X, Y = BivariatePolynomial.x(), BivariatePolynomial.y()
        if self.axis is Axis.ADD_TO_X:
            return PlanarPolyMap(X + uni_to_bivariate(self.poly, "y"), Y)
        return PlanarPolyMap(X, Y + uni_to_bivariate(self.poly, "x"))

    def inverse(self) -> "ElementaryFactor":
        return ElementaryFactor(self.axis, tuple(-c for c in self.poly))


Factor = Union[AffineFactor, ElementaryFactor]

IDENTITY_AFFINE = AffineFactor(ONE, ZERO, ZERO, ZERO, ONE, ZERO)


@dataclass(frozen=True)
class TameWord:
    factors: tuple[Factor, ...]

    def __init__(self, factors: Sequence[Factor] = ()):
        object.__setattr__(self, "factors", tuple(factors))

    def __len__(self) -> int:
        return len(self.factors)

    def concat(self, other: "TameWord") -> "TameWord":
        """Word for (self expansion) o (other expansion)."""
        return TameWord(self.factors + other.factors)


def expand_word(word: TameWord) -> PlanarPolyMap:
    """Exact composition of the factors; the empty word is the identity."""
    result = PlanarPolyMap.identity()
    for factor in reversed(word.factors):
        result = compose(factor.to_map(), result)
    return result


def invert_word(word: TameWord) -> TameWord:
    """Reversed sequence of per-factor inverses."""
    return TameWord(tuple(f.inverse() for f in reversed(word.factors)))


# -- decomposition -----------------------------------------------------------


def _proportionality(target: BivariatePolynomial, base: BivariatePolynomial):
    """Return c with target = c * base exactly, or None."""
    bt = base.terms
    tt = target.terms
    if set(bt) != set(tt):
        return None
    probe = next(iter(bt))
    c = tt[probe] / bt[probe]
    for e, v in bt.items():
        if tt[e] != v * c:
            return None
    return c


def _affine_from_linear(f: PlanarPolyMap) -> AffineFactor:
    p, q = f.first, f.second
    return AffineFactor(
        a=p.coefficient(1, 0), b=p.coefficient(0, 1), c=p.coefficient(0, 0),
        d=q.coefficient(1, 0), e=q.coefficient(0, 1), f=q.coefficient(0, 0),
    )


def _absorb_low_degree(factors: list[Factor]) -> list[Factor]:
    """Convert degree <= 1 elementaries to affines, then merge adjacent affines."""
    converted: list[Factor] = []
    for fac in factors:
        if isinstance(fac, ElementaryFactor) and fac.overlaps_affine:
            p = fac.poly
            c0 = p[0] if len(p) > 0 else ZERO
            c1 = p[1] if len(p) > 1 else ZERO
            if fac.axis is Axis.ADD_TO_X:
                converted.append(AffineFactor(ONE, c1, c0, ZERO, ONE, ZERO))
            else:
                converted.append(AffineFactor(ONE, ZERO, ZERO, c1, ONE, c0))
        else:
            converted.append(fac)
    merged: list[Factor] = []
    for fac in converted:
        if merged and isinstance(fac, AffineFactor) and isinstance(merged[-1], AffineFactor):
            merged[-1] = _affine_from_linear(
                compose(merged[-1].to_map(), fac.to_map()))
        else:
            merged.append(fac)
    if len(merged) > 1:
        merged = [f for f in merged
                  if not (isinstance(f, AffineFactor) and f == IDENTITY_AFFINE)]
        if not merged:
            merged = [IDENTITY_AFFINE]
    return merged


def decompose_automorphism(f: PlanarPolyMap) -> TameWord:
    """Jung-van der Kulk degree reduction.

    At each step the higher-degree component's leading form must be a scalar
    multiple of a power of the other component's leading form; the matching
    elementary factor is split off on the left and the degree strictly
    decreases.  Ties try the first component, then the second.
    """
    if not is_keller(f):
        raise NotKeller(f"det J of {f!r} is not identically 1")

    factors: list[Factor] = []
    current = f
    while True:
        p, q = current.first, current.second
        n, m = p.degree, q.degree
        if n < 1 or m < 1:  # constant component: impossible for Keller maps
            raise NotAnAutomorphism("component degenerated during reduction")
        if n <= 1 and m <= 1:
            factors.append(_affine_from_linear(current))
            break

        reduced = False
        attempts = []
        if n >= m and int(n) % int(m) == 0:
            attempts.append("first")
        if m >= n and int(m) % int(n) == 0:
            attempts.append("second")
        for which in attempts:
            if which == "first":
                k = int(n) // int(m)
                c = _proportionality(p.leading_form(), q.leading_form() ** k)
                if c is None:
                    continue
                factors.append(ElementaryFactor(
                    Axis.ADD_TO_X, (ZERO,) * k + (c,)))
                current = PlanarPolyMap(p - (q ** k).scale(c), q)
            else:
                k = int(m) // int(n)
                c = _proportionality(q.leading_form(), p.leading_form() ** k)
                if c is None:
                    continue
                factors.append(ElementaryFactor(
                    Axis.ADD_TO_Y, (ZERO,) * k + (c,)))
                current = PlanarPolyMap(p, q - (p ** k).scale(c))
            reduced = True
            break
        if not reduced:
            raise NotAnAutomorphism(
                f"no elementary reduction at degrees ({n}, {m})")

    return TameWord(_absorb_low_degree(factors))


# -- rational approximation --------------------------------------------------


@dataclass(frozen=True)
class FloatAffine:
    """Affine factor with floating coefficients (input to approximation)."""

    a: complex
    b: complex
    c: complex
    d: complex
    e: complex
    f: complex


@dataclass(frozen=True)
class FloatElementary:
    axis: Axis
    coeffs: tuple[complex, ...]


FloatFactor = Union[FloatAffine, FloatElementary, AffineFactor, ElementaryFactor]


def _round_fraction(x: float, epsilon: float) -> Fraction:
    limit = int(math.ceil(2.0 / epsilon)) + 1
    return Fraction(x).limit_denominator(limit)


def _round_complex(z: complex, epsilon: float) -> GaussianRational:
    z = complex(z)
    return GaussianRational(_round_fraction(z.real, epsilon),
                            _round_fraction(z.imag, epsilon))


def rational_approximate_word(factors: Sequence[FloatFactor], epsilon: float) -> TameWord:
    """Replace floating coefficients by Gaussian rationals within epsilon.

    Affine factors are repaired so the determinant is exactly 1: with pivot
    a (or d, when |a| < epsilon), the opposite diagonal entry is recomputed
    in closed form from the rounded off-diagonal entries.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    out: list[Factor] = []
    for fac in factors:
        if isinstance(fac, (AffineFactor, ElementaryFactor)):
            out.append(fac)
            continue
        if isinstance(fac, FloatElementary):
            out.append(ElementaryFactor(
                fac.axis, tuple(_round_complex(c, epsilon) for c in fac.coeffs)))
            continue
        a = _round_complex(fac.a, epsilon)
        b = _round_complex(fac.b, epsilon)
        c = _round_complex(fac.c, epsilon)
        d = _round_complex(fac.d, epsilon)
        e = _round_complex(fac.e, epsilon)
        fq = _round_complex(fac.f, epsilon)
        pivot_a = abs(complex(fac.a)) >= epsilon
        if pivot_a and not a.is_zero():
            e = (GaussianRational(Fraction(1)) + b * d) / a
        elif not d.is_zero():
            b = (a * e - GaussianRational(Fraction(1))) / d
        else:
            raise DegenerateAffine("both a and d rounded to zero")
        out.append(AffineFactor(a, b, c, d, e, fq))
    return TameWord(out)
