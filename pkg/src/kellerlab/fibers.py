"""Fibers and the geometric degree.

A fiber F^{-1}(a, b) is computed by exact Sylvester elimination of Y from
(P - a, Q - b) (the target is embedded exactly: complex doubles are dyadic
Gaussian rationals), floating root extraction in X, back-substitution in Y,
and a joint 2-complex-dimensional Newton polish.  Candidates must verify
both residuals within the tolerance and are deduplicated at ten times the
tolerance.  The geometric degree is the maximum fiber cardinality observed
over targets drawn from the image of the bidisk of radius two, so fibers
are never empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bipoly import BivariatePolynomial
from .errors import BothConstantInY, ResultantVanishes, Unstable
from .maps import ComplexPoint, PlanarPolyMap, jacobian_entries
from .rationals import GaussianRational
from .resultants import resultant_eliminate_y_exact
from .rng import SALT_FIBER_TRIALS, stream
from .roots import all_roots, cluster_roots, trim_coefficients

DEFAULT_TOL = 1e-8
DEFAULT_TRIALS = 16

# running tally of fiber solves, for run summaries; violations raise Unstable
SOLVE_STATS = {"solves": 0}


@dataclass(frozen=True)
class FiberResult:
    """Verified fiber points over one target."""

    target: ComplexPoint
    points: list[ComplexPoint]
    residuals: list[float]
    cardinality: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "cardinality", len(self.points))


def resultant_eliminate_y(p: BivariatePolynomial, q: BivariatePolynomial) -> np.ndarray:
    """Res_Y(p, q) with exact rational arithmetic, converted to floating
    coefficients (ascending powers of X)."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant inputs must be nonzero")
    if p.y_degree <= 0 and q.y_degree <= 0:
        raise BothConstantInY("neither input depends on Y")
    exact = resultant_eliminate_y_exact(p, q)
    return np.array([c.to_complex() for c in exact], dtype=np.complex128)


def _shift_to_target(f: PlanarPolyMap, target: ComplexPoint,
                     exact_target: tuple[GaussianRational, GaussianRational] | None):
    if exact_target is None:
        a = GaussianRational.from_complex(target.z)
        b = GaussianRational.from_complex(target.w)
    else:
        a, b = exact_target
    pa = f.first - BivariatePolynomial.constant(a)
    qb = f.second - BivariatePolynomial.constant(b)
    return pa, qb


def _univariate_in_y(p: BivariatePolynomial, x0: complex) -> np.ndarray:
    rows = p.coefficients_in_y()
    out = np.zeros(len(rows), dtype=np.complex128)
    for j, row in enumerate(rows):
        acc = 0j
        for i, c in enumerate(row):
            acc += c.to_complex() * x0 ** i
        out[j] = acc
    return out


def _newton_polish(f: PlanarPolyMap, target: ComplexPoint,
                   xs: np.ndarray, ys: np.ndarray, tol: float,
                   iterations: int = 25):
    """Joint Newton iteration on (P - a, Q - b) for arrays of candidates."""
    px, py, qx, qy = jacobian_entries(f)
    x, y = xs.copy(), ys.copy()
    for _ in range(iterations):
        with np.errstate(over="ignore", invalid="ignore"):
            r1 = f.first.evaluate_vec(x, y) - target.z
            r2 = f.second.evaluate_vec(x, y) - target.w
            res = np.maximum(np.abs(r1), np.abs(r2))
        res = np.where(np.isfinite(res), res, np.inf)
        if np.all(res <= tol * 1e-3):
            break
        with np.errstate(over="ignore", invalid="ignore"):
            j11 = px.evaluate_vec(x, y)
            j12 = py.evaluate_vec(x, y)
            j21 = qx.evaluate_vec(x, y)
            j22 = qy.evaluate_vec(x, y)
        det = j11 * j22 - j12 * j21
        ok = np.isfinite(det) & (np.abs(det) > 1e-300)
        safe = np.where(ok, det, 1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            dx = (r1 * j22 - r2 * j12) / safe
            dy = (r2 * j11 - r1 * j21) / safe
            nx = np.where(ok & np.isfinite(dx), x - dx, x)
            ny = np.where(ok & np.isfinite(dy), y - dy, y)
        # candidates that wander off to non-finite territory are frozen; the
        # residual filter drops them later
        x = np.where(np.isfinite(nx), nx, x)
        y = np.where(np.isfinite(ny), ny, y)
    return x, y


def solve_fiber(f: PlanarPolyMap, target: ComplexPoint,
                tol: float = DEFAULT_TOL,
                exact_target: tuple[GaussianRational, GaussianRational] | None = None) -> FiberResult:
    """All solutions of f(x, y) = target, verified to residual <= tol.

    The elimination runs on an exact embedding of the target; callers that
    know the target as small rationals can pass it via exact_target to keep
    the exact arithmetic cheap.  Raises ResultantVanishes when the eliminant
    is identically zero (positive-dimensional fiber or non-dominant map).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    pa, qb = _shift_to_target(f, target, exact_target)
    if pa.is_zero() or qb.is_zero():
        raise ResultantVanishes("a component is identically the target value")
    eliminant = resultant_eliminate_y(pa, qb)
    eliminant = trim_coefficients(eliminant, rel_tol=0.0)
    if eliminant.size == 0:
        raise ResultantVanishes("identically zero resultant")
    if eliminant.size == 1:
        return FiberResult(target, [], [])

    x_clusters = cluster_roots(all_roots(eliminant), tol)

    cand_x: list[complex] = []
    cand_y: list[complex] = []
    for x0, _mult in x_clusters:
        # back-substitute with whichever component has the richer Y part at x0
        ua = trim_coefficients(_univariate_in_y(pa, x0), rel_tol=1e-10)
        ub = trim_coefficients(_univariate_in_y(qb, x0), rel_tol=1e-10)
        u = ua if ua.size >= ub.size else ub
        if u.size <= 1:
            continue
        for y0, _m in cluster_roots(all_roots(u), tol):
            cand_x.append(x0)
            cand_y.append(y0)

    if not cand_x:
        return FiberResult(target, [], [])

    xs = np.array(cand_x, dtype=np.complex128)
    ys = np.array(cand_y, dtype=np.complex128)
    finite = np.isfinite(xs) & np.isfinite(ys)
    xs, ys = xs[finite], ys[finite]
    xs, ys = _newton_polish(f, target, xs, ys, tol)

    with np.errstate(over="ignore", invalid="ignore"):
        r1 = f.first.evaluate_vec(xs, ys) - target.z
        r2 = f.second.evaluate_vec(xs, ys) - target.w
        resid = np.sqrt(np.abs(r1) ** 2 + np.abs(r2) ** 2)
    resid = np.where(np.isfinite(resid), resid, np.inf)

    points: list[ComplexPoint] = []
    residuals: list[float] = []
    cluster_radius = 10.0 * tol
    for k in np.lexsort((ys.imag, ys.real, xs.imag, xs.real)):
        if resid[k] > tol:
            continue
        p = ComplexPoint(complex(xs[k]), complex(ys[k]))
        dup = any(abs(p.z - q.z) ** 2 + abs(p.w - q.w) ** 2 <= cluster_radius ** 2
                  for q in points)
        if not dup:
            points.append(p)
            residuals.append(float(resid[k]))
    SOLVE_STATS["solves"] += 1
    result = FiberResult(target, points, residuals)
    bound = f.bezout_bound()
    if result.cardinality > bound:
        raise Unstable(
            f"fiber cardinality {result.cardinality} exceeds the Bezout "
            f"bound {bound} (numerical duplication)")
    return result


def _bidisk_point(gen) -> tuple[GaussianRational, GaussianRational]:
    """Uniform point of the radius-2 bidisk, snapped to small rationals.

    The snap (denominators <= 4096) keeps the exact elimination arithmetic
    cheap without affecting genericity of the sampled targets.
    """
    from fractions import Fraction

    u = gen.random(4)
    r1, r2 = 2.0 * np.sqrt(u[0]), 2.0 * np.sqrt(u[1])
    t1, t2 = 2.0 * np.pi * u[2], 2.0 * np.pi * u[3]
    z = r1 * np.exp(1j * t1)
    w = r2 * np.exp(1j * t2)

    def snap(v: complex) -> GaussianRational:
        return GaussianRational(Fraction(float(v.real)).limit_denominator(4096),
                                Fraction(float(v.imag)).limit_denominator(4096))

    return snap(complex(z)), snap(complex(w))


def geometric_degree(f: PlanarPolyMap, trials: int = DEFAULT_TRIALS,
                     seed: int = 0, tol: float = DEFAULT_TOL,
                     return_cardinalities: bool = False):
    """Maximum observed fiber cardinality over image-sampled targets.

    Targets are images of uniformly random points of the radius-2 bidisk,
    which guarantees nonempty fibers; trial i draws from an independent
    stream keyed by (seed, i), so results do not depend on evaluation order.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    cards: list[int] = []
    for i in range(trials):
        gen = stream(seed, SALT_FIBER_TRIALS, i)
        sz, sw = _bidisk_point(gen)
        ez = f.first.evaluate_exact(sz, sw)
        ew = f.second.evaluate_exact(sz, sw)
        target = ComplexPoint(ez.to_complex(), ew.to_complex())
        result = solve_fiber(f, target, tol, exact_target=(ez, ew))
        cards.append(result.cardinality)
    best = max(cards)
    if return_cardinalities:
        return best, cards
    return best
