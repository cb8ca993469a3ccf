"""Exact sparse bivariate polynomials over the Gaussian rationals.

A polynomial is a mapping from exponent pairs ``(i, j)`` (powers of X and Y)
to nonzero ``GaussianRational`` coefficients.  The zero polynomial is the
empty mapping and its total degree is the sentinel ``-inf`` — never ``-1``,
so degree arithmetic cannot silently corrupt Bezout bounds.

Canonical term order (used for serialization and printing): ascending total
degree, then ascending Y-exponent within a degree (X-heavy terms first).
Floating evaluation uses plain ascending ``(i, j)`` lexicographic order so
the summation order is reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DegreeBoundViolated, EvaluationOverflow
from .rationals import GaussianRational, ONE, ZERO, gr

Exponent = tuple[int, int]
Terms = dict[Exponent, GaussianRational]

NEG_INF = float("-inf")


def _clean(terms: Mapping[Exponent, GaussianRational]) -> Terms:
    return {e: c for e, c in terms.items() if not c.is_zero()}


def canonical_order(exponent: Exponent) -> tuple[int, int]:
    i, j = exponent
    return (i + j, j)


class BivariatePolynomial:
    """Immutable sparse polynomial in X and Y over Q+iQ."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponent, GaussianRational] | None = None):
        self._terms = _clean(terms or {})

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "BivariatePolynomial":
        return BivariatePolynomial()

    @staticmethod
    def constant(c) -> "BivariatePolynomial":
        c = c if isinstance(c, GaussianRational) else gr(c)
        return BivariatePolynomial({(0, 0): c})

    @staticmethod
    def x(power: int = 1) -> "BivariatePolynomial":
        return BivariatePolynomial({(power, 0): ONE})

    @staticmethod
    def y(power: int = 1) -> "BivariatePolynomial":
        return BivariatePolynomial({(0, power): ONE})

    @staticmethod
    def monomial(i: int, j: int, c) -> "BivariatePolynomial":
        c = c if isinstance(c, GaussianRational) else gr(c)
        return BivariatePolynomial({(i, j): c})

    # -- views -------------------------------------------------------------

    @property
    def terms(self) -> Terms:
        return dict(self._terms)

    def items_canonical(self):
        return sorted(self._terms.items(), key=lambda kv: canonical_order(kv[0]))

    def coefficient(self, i: int, j: int) -> GaussianRational:
        return self._terms.get((i, j), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self._terms)

    @property
    def degree(self) -> float:
        """Total degree; -inf for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(i + j for i, j in self._terms)

    @property
    def x_degree(self) -> float:
        if not self._terms:
            return NEG_INF
        return max(i for i, _ in self._terms)

    @property
    def y_degree(self) -> float:
        if not self._terms:
            return NEG_INF
        return max(j for _, j in self._terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return BivariatePolynomial(out)

    def __sub__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            out[e] = -c if s is None else s - c
        return BivariatePolynomial(out)

    def __neg__(self) -> "BivariatePolynomial":
        return BivariatePolynomial({e: -c for e, c in self._terms.items()})

    def __mul__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        if not self._terms or not other._terms:
            return BivariatePolynomial()
        out: Terms = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                e = (i1 + i2, j1 + j2)
                p = c1 * c2
                s = out.get(e)
                out[e] = p if s is None else s + p
        return BivariatePolynomial(out)

    def scale(self, c: GaussianRational) -> "BivariatePolynomial":
        if c.is_zero():
            return BivariatePolynomial()
        return BivariatePolynomial({e: k * c for e, k in self._terms.items()})

    def __pow__(self, n: int) -> "BivariatePolynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = BivariatePolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- calculus ----------------------------------------------------------

    def partial_x(self) -> "BivariatePolynomial":
        out: Terms = {}
        for (i, j), c in self._terms.items():
            if i > 0:
                out[(i - 1, j)] = c * GaussianRational(Fraction(i))
        return BivariatePolynomial(out)

    def partial_y(self) -> "BivariatePolynomial":
        out: Terms = {}
        for (i, j), c in self._terms.items():
            if j > 0:
                out[(i, j - 1)] = c * GaussianRational(Fraction(j))
        return BivariatePolynomial(out)

    # -- evaluation --------------------------------------------------------

    def evaluate(self, z: complex, w: complex) -> complex:
        """Floating evaluation, terms summed in ascending (i, j) lex order."""
        acc = 0j
        try:
            for (i, j) in sorted(self._terms):
                acc += self._terms[(i, j)].to_complex() * (z ** i) * (w ** j)
        except OverflowError:
            raise EvaluationOverflow(f"overflow at ({z!r}, {w!r})")
        if not (math.isfinite(acc.real) and math.isfinite(acc.imag)):
            raise EvaluationOverflow(f"non-finite value at ({z!r}, {w!r})")
        return acc

    def evaluate_exact(self, z: GaussianRational, w: GaussianRational) -> GaussianRational:
        acc = ZERO
        for (i, j), c in self._terms.items():
            acc = acc + c * (z ** i) * (w ** j)
        return acc

    def evaluate_vec(self, z, w):
        """Vectorized floating evaluation on numpy arrays (complex128)."""
        import numpy as np

        acc = np.zeros(np.broadcast(z, w).shape, dtype=np.complex128)
        zp: dict[int, "np.ndarray"] = {}
        wp: dict[int, "np.ndarray"] = {}
        for (i, j) in sorted(self._terms):
            if i not in zp:
                zp[i] = np.power(z, i) if i != 1 else z
            if j not in wp:
                wp[j] = np.power(w, j) if j != 1 else w
            acc = acc + self._terms[(i, j)].to_complex() * zp[i] * wp[j]
        return acc

    # -- structure ---------------------------------------------------------

    def substitute(self, px: "BivariatePolynomial", py: "BivariatePolynomial") -> "BivariatePolynomial":
        """Exact substitution X := px, Y := py."""
        acc = BivariatePolynomial()
        xpow: dict[int, BivariatePolynomial] = {0: BivariatePolynomial.constant(1)}
        ypow: dict[int, BivariatePolynomial] = {0: BivariatePolynomial.constant(1)}

        def power_of(cache, base, n):
            if n not in cache:
                k = max(e for e in cache if e <= n)
                v = cache[k]
                while k < n:
                    v = v * base
                    k += 1
                    cache[k] = v
            return cache[n]

        for (i, j) in sorted(self._terms, key=canonical_order):
            term = power_of(xpow, px, i) * power_of(ypow, py, j)
            acc = acc + term.scale(self._terms[(i, j)])
        return acc

    def leading_form(self) -> "BivariatePolynomial":
        """Homogeneous part of top total degree (zero polynomial if zero)."""
        if not self._terms:
            return BivariatePolynomial()
        d = self.degree
        return BivariatePolynomial({e: c for e, c in self._terms.items() if e[0] + e[1] == d})

    def coefficients_in_y(self) -> list[tuple[GaussianRational, ...]]:
        """List indexed by the Y-exponent; entry k is the X-coefficient tuple
        of the univariate polynomial multiplying Y^k (ascending X powers)."""
        if not self._terms:
            return []
        ydeg = int(self.y_degree)
        rows: list[dict[int, GaussianRational]] = [dict() for _ in range(ydeg + 1)]
        for (i, j), c in self._terms.items():
            rows[j][i] = c
        out = []
        for row in rows:
            if row:
                xd = max(row)
                out.append(tuple(row.get(i, ZERO) for i in range(xd + 1)))
            else:
                out.append(())
        return out

    def eval_x_exact(self, x: GaussianRational) -> tuple[GaussianRational, ...]:
        """Substitute an exact X value; returns univariate coefficients in Y."""
        if not self._terms:
            return ()
        ydeg = int(self.y_degree)
        out = [ZERO] * (ydeg + 1)
        xp: dict[int, GaussianRational] = {0: ONE}
        for (i, j), c in self._terms.items():
            if i not in xp:
                xp[i] = x ** i
            out[j] = out[j] + c * xp[i]
        return uni_trim(tuple(out))

    def shift_x(self, k: int) -> "BivariatePolynomial":
        """Multiply by X^k (k >= 0) or divide exactly by X^-k (k < 0)."""
        out: Terms = {}
        for (i, j), c in self._terms.items():
            ni = i + k
            if ni < 0:
                raise ValueError("inexact division by a power of X")
            out[(ni, j)] = c
        return BivariatePolynomial(out)

    def min_x_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no X-valuation")
        return min(i for i, _ in self._terms)

    def monic(self) -> "BivariatePolynomial":
        """Divide by the coefficient of the canonical leading term."""
        if not self._terms:
            return self
        lead = max(self._terms, key=canonical_order)
        c = self._terms[lead]
        return BivariatePolynomial({e: k / c for e, k in self._terms.items()})

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in self.items_canonical():
            mono = "".join(
                (f"X^{i}" if i > 1 else "X" if i == 1 else "",
                 f"Y^{j}" if j > 1 else "Y" if j == 1 else ""))
            cs = str(c)
            if mono and cs == "1":
                parts.append(mono)
            elif mono and cs == "-1":
                parts.append(f"-{mono}")
            elif mono:
                parts.append(f"({cs}){mono}")
            else:
                parts.append(f"({cs})")
        return " + ".join(parts)


# -- univariate helpers (coefficient tuples, ascending degree) --------------

UniPoly = tuple[GaussianRational, ...]


def uni_trim(coeffs: Iterable[GaussianRational]) -> UniPoly:
    cs = list(coeffs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return tuple(cs)


def uni_degree(p: UniPoly) -> float:
    return len(p) - 1 if p else NEG_INF


def uni_is_constant(p: UniPoly) -> bool:
    return len(p) <= 1


def uni_eval_exact(p: UniPoly, x: GaussianRational) -> GaussianRational:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def uni_eval_complex(p: UniPoly, x: complex) -> complex:
    acc = 0j
    for c in reversed(p):
        acc = acc * x + c.to_complex()
    return acc


def uni_to_bivariate(p: UniPoly, variable: str) -> BivariatePolynomial:
    """Embed a univariate polynomial as a polynomial in X or in Y."""
    if variable == "x":
        return BivariatePolynomial({(k, 0): c for k, c in enumerate(p)})
    if variable == "y":
        return BivariatePolynomial({(0, k): c for k, c in enumerate(p)})
    raise ValueError("variable must be 'x' or 'y'")


def uni_from_ints(values: Iterable) -> UniPoly:
    return uni_trim(tuple(v if isinstance(v, GaussianRational) else gr(v) for v in values))


# -- grid equality -----------------------------------------------------------

def equal_by_grid(p: BivariatePolynomial, q: BivariatePolynomial, degree_bound: int) -> bool:
    """Exact rational evaluation of p - q on {0..B} x {0..B}.

    For inputs within the degree bound this coincides with coefficient
    equality: a nonzero bivariate polynomial of degree <= B cannot vanish on
    a (B+1) x (B+1) grid.
    """
    if degree_bound < 0:
        raise DegreeBoundViolated("degree bound must be non-negative")
    for poly in (p, q):
        if poly.degree > degree_bound:
            raise DegreeBoundViolated(
                f"degree {poly.degree} exceeds bound {degree_bound}")
    diff = p - q
    if diff.is_zero():
        return True
    for a in range(degree_bound + 1):
        xa = GaussianRational(Fraction(a))
        row = diff.eval_x_exact(xa)
        for b in range(degree_bound + 1):
            if not uni_eval_exact(row, GaussianRational(Fraction(b))).is_zero():
                return False
    return True
