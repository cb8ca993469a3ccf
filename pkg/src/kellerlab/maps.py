"""Planar polynomial maps: composition, Jacobians, the Keller predicate.

A map is a pair (P, Q) of exact bivariate polynomials, an element of the
composition semigroup of polynomial self-maps of C^2.  All identities that
matter here (det J = 1, composition laws) are checked in exact rational
arithmetic; floating point appears only at evaluation boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bipoly import BivariatePolynomial, NEG_INF


@dataclass(frozen=True)
class ComplexPoint:
    """A point of C^2 with finite double-precision coordinates."""

    z: complex
    w: complex

    def __post_init__(self):
        for v in (self.z, self.w):
            v = complex(v)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError("ComplexPoint coordinates must be finite")
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "w", complex(self.w))

    def norm(self) -> float:
        return math.sqrt(abs(self.z) ** 2 + abs(self.w) ** 2)


@dataclass(frozen=True)
class PlanarPolyMap:
    """The polynomial map (X, Y) -> (first(X, Y), second(X, Y))."""

    first: BivariatePolynomial
    second: BivariatePolynomial

    @staticmethod
    def identity() -> "PlanarPolyMap":
        return PlanarPolyMap(BivariatePolynomial.x(), BivariatePolynomial.y())

    @property
    def degree(self) -> float:
        return max(self.first.degree, self.second.degree)

    def bezout_bound(self) -> float:
        """deg P * deg Q; the generic upper bound for fiber cardinality."""
        dp, dq = self.first.degree, self.second.degree
        if dp == NEG_INF or dq == NEG_INF:
            return NEG_INF
        return dp * dq

    def evaluate(self, at: ComplexPoint) -> ComplexPoint:
        return ComplexPoint(self.first.evaluate(at.z, at.w),
                            self.second.evaluate(at.z, at.w))

    def evaluate_vec(self, z, w):
        return self.first.evaluate_vec(z, w), self.second.evaluate_vec(z, w)

    def __repr__(self) -> str:
        return f"({self.first!r}, {self.second!r})"


def compose(f: PlanarPolyMap, g: PlanarPolyMap) -> PlanarPolyMap:
    """f o g, expanded exactly: f's variables replaced by g's components."""
    return PlanarPolyMap(
        f.first.substitute(g.first, g.second),
        f.second.substitute(g.first, g.second),
    )


def jacobian_determinant(f: PlanarPolyMap) -> BivariatePolynomial:
    """dP/dX * dQ/dY - dP/dY * dQ/dX, exactly."""
    return (f.first.partial_x() * f.second.partial_y()
            - f.first.partial_y() * f.second.partial_x())


def is_keller(f: PlanarPolyMap) -> bool:
    """True iff the Jacobian determinant is exactly the constant 1."""
    return jacobian_determinant(f) == BivariatePolynomial.constant(1)


def jacobian_entries(f: PlanarPolyMap) -> tuple[BivariatePolynomial, ...]:
    """(dP/dX, dP/dY, dQ/dX, dQ/dY)."""
    return (f.first.partial_x(), f.first.partial_y(),
            f.second.partial_x(), f.second.partial_y())


def y_degree_dominant(f: PlanarPolyMap) -> bool:
    """Advisory predicate: each component's total degree is attained in Y.

    Part of the definition of the etale family; not enforced on construction
    because useful test maps (power maps, for instance) violate it.
    """
    for p in (f.first, f.second):
        if p.is_zero():
            return False
        if p.y_degree != p.degree:
            return False
    return True


def uniform_bound_on_compact(f: PlanarPolyMap, g: PlanarPolyMap, radius: float) -> float:
    """Sum over both components of sum_ij |a_ij - b_ij| * radius^(i+j).

    An upper bound for sup over the closed polydisk of the coordinatewise
    deviation, summed over coordinates.  Coefficient moduli are rounded with
    a relative slack of 1e-12 upward so the bound stays a bound in floating
    point.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    total = 0.0
    for pf, pg in ((f.first, g.first), (f.second, g.second)):
        diff = pf - pg
        for (i, j), c in diff.terms.items():
            total += math.hypot(float(c.re), float(c.im)) * radius ** (i + j)
    return total * (1.0 + 1e-12)
