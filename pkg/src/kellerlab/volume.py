"""Monte Carlo volume estimation and the image symmetric-difference metric.

Estimators integrate over an axis-aligned box in R^4 with stratified
sampling: the box is cut into s^4 congruent cells (s capped at 16 and chosen
so each cell receives at least two draws), every cell receives the same
number of points from its own counter-based stream, and leftover draws form
one plain Monte Carlo block over the whole box.  Estimates are unbiased;
standard errors pool the per-cell variances.  All partial results are merged
in a fixed order, so values are bit-for-bit reproducible for any worker
count.

The distance between two maps is the volume of the multiplicity-weighted
symmetric difference of their images of a domain: samples y of an image
bounding box contribute m_f(y) when only f covers y and m_g(y) when only g
does, where m counts fiber points inside the domain.  Maps with a known
polynomial inverse get exact membership at vector speed; other maps fall
back to per-sample fiber solving.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bipoly import BivariatePolynomial
from .charset import CharacteristicSet, contains_batch
from .errors import BoxOverflow, DivisionByZeroDistance
from .fibers import solve_fiber
from .maps import ComplexPoint, PlanarPolyMap, jacobian_determinant
from .rng import SALT_VOLUME, stream

MAX_STRATA_PER_AXIS = 16
MIN_SAMPLES = 10_000

Box = tuple[np.ndarray, np.ndarray]  # (lo[4], hi[4])


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    stderr: float
    samples: int
    seed: int
    box: tuple[tuple[float, float], ...] | None = None

    def as_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr,
                "samples": self.samples, "seed": self.seed,
                "box": None if self.box is None else [list(b) for b in self.box]}


# -- sampling domains --------------------------------------------------------


class SamplingDomain:
    """A bounded subset of C^2 with a bounding box and batch membership."""

    def bounding_box(self) -> Box:
        raise NotImplementedError

    def contains(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def volume(self) -> float | None:
        """Exact volume when known in closed form, else None."""
        return None

    def scaled(self, t: float) -> "SamplingDomain":
        raise NotImplementedError


@dataclass(frozen=True)
class BallDomain(SamplingDomain):
    """Open ball of C^2 = R^4 centered at a point (default: the origin)."""

    radius: float
    center: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    def bounding_box(self) -> Box:
        c = np.asarray(self.center)
        r = self.radius
        return c - r, c + r

    def contains(self, points: np.ndarray) -> np.ndarray:
        d = points - np.asarray(self.center)
        return np.einsum("ij,ij->i", d, d) < self.radius ** 2

    def volume(self) -> float:
        return math.pi ** 2 * self.radius ** 4 / 2.0

    def scaled(self, t: float) -> "BallDomain":
        return BallDomain(self.radius * t,
                          tuple(v * t for v in self.center))


@dataclass(frozen=True)
class CharsetDomain(SamplingDomain):
    charset: CharacteristicSet

    def bounding_box(self) -> Box:
        r = self.charset.ball_radius
        return np.full(4, -r), np.full(4, r)

    def contains(self, points: np.ndarray) -> np.ndarray:
        return contains_batch(self.charset, points)

    def volume(self) -> float | None:
        if self.charset.fattening_radius == 0.0:
            return math.pi ** 2 * self.charset.ball_radius ** 4 / 2.0
        return None

    def scaled(self, t: float) -> "SamplingDomain":
        return ScaledDomain(self, t)


@dataclass(frozen=True)
class ScaledDomain(SamplingDomain):
    base: SamplingDomain
    factor: float

    def bounding_box(self) -> Box:
        lo, hi = self.base.bounding_box()
        return lo * self.factor, hi * self.factor

    def contains(self, points: np.ndarray) -> np.ndarray:
        return self.base.contains(points / self.factor)

    def volume(self) -> float | None:
        v = self.base.volume()
        return None if v is None else v * self.factor ** 4

    def scaled(self, t: float) -> "SamplingDomain":
        return ScaledDomain(self.base, self.factor * t)


# -- stratified engine -------------------------------------------------------


def _strata_per_axis(samples: int) -> int:
    s = int((samples / 2) ** 0.25)
    return max(1, min(MAX_STRATA_PER_AXIS, s))


def _block_points(lo: np.ndarray, widths: np.ndarray, s: int, per_cell: int,
                  seed: int, salt_index: int, block: int) -> np.ndarray:
    """Points of one block (all cells with first-axis stratum == block)."""
    gen = stream(seed, SALT_VOLUME, (salt_index << 8) | block)
    cells = s ** 3
    u = gen.random((cells * per_cell, 4))
    # cell index in C order over axes 1..3
    idx = np.repeat(np.arange(cells), per_cell)
    c3 = idx % s
    c2 = (idx // s) % s
    c1 = idx // (s * s)
    corner = np.empty((cells * per_cell, 4))
    corner[:, 0] = block
    corner[:, 1] = c1
    corner[:, 2] = c2
    corner[:, 3] = c3
    return lo + (corner + u) * widths


def estimate_box_integral(box: Box, samples: int, seed: int,
                          integrand: Callable[[np.ndarray], np.ndarray],
                          salt_index: int = 0,
                          workers: int = 1) -> VolumeEstimate:
    """Integral of `integrand` over the box by stratified Monte Carlo."""
    lo, hi = np.asarray(box[0], dtype=float), np.asarray(box[1], dtype=float)
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be at least {MIN_SAMPLES}")
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(hi > lo)):
        raise BoxOverflow(f"degenerate bounding box {lo} .. {hi}")
    vol_box = float(np.prod(hi - lo))

    s = _strata_per_axis(samples)
    cells_total = s ** 4
    per_cell = samples // cells_total
    grid_n = per_cell * cells_total
    rem = samples - grid_n
    widths = (hi - lo) / s

    def run_block(block: int):
        pts = _block_points(lo, widths, s, per_cell, seed, salt_index, block)
        vals = integrand(pts).astype(np.float64).reshape(s ** 3, per_cell)
        return vals.mean(axis=1), vals.var(axis=1, ddof=1) if per_cell > 1 else np.zeros(s ** 3)

    blocks = range(s)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_block, blocks))
    else:
        results = [run_block(b) for b in blocks]

    cell_vol = vol_box / cells_total
    t_grid = 0.0
    var_grid = 0.0
    for mean_b, var_b in results:  # fixed block order
        t_grid += cell_vol * float(np.sum(mean_b))
        var_grid += cell_vol ** 2 * float(np.sum(var_b)) / per_cell

    if rem > 0:
        gen = stream(seed, SALT_VOLUME, (salt_index << 8) | 0xFF)
        pts = lo + gen.random((rem, 4)) * (hi - lo)
        vals = integrand(pts).astype(np.float64)
        t_plain = vol_box * float(vals.mean())
        var_plain = vol_box ** 2 * float(vals.var(ddof=1)) / rem if rem > 1 else 0.0
        w = grid_n / samples
        value = w * t_grid + (1.0 - w) * t_plain
        variance = w * w * var_grid + (1.0 - w) ** 2 * var_plain
    else:
        value = t_grid
        variance = var_grid

    return VolumeEstimate(value=float(value), stderr=float(math.sqrt(max(variance, 0.0))),
                          samples=samples, seed=seed,
                          box=tuple((float(a), float(b)) for a, b in zip(lo, hi)))


# -- interval arithmetic for image boxes --------------------------------------


class _Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float):
        self.lo, self.hi = lo, hi

    def __add__(self, o):
        return _Interval(self.lo + o.lo, self.hi + o.hi)

    def __sub__(self, o):
        return _Interval(self.lo - o.hi, self.hi - o.lo)

    def __mul__(self, o):
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return _Interval(min(c), max(c))


class _Rect:
    """Complex rectangle: re and im intervals."""

    __slots__ = ("re", "im")

    def __init__(self, re: _Interval, im: _Interval):
        self.re, self.im = re, im

    @staticmethod
    def constant(z: complex) -> "_Rect":
        return _Rect(_Interval(z.real, z.real), _Interval(z.imag, z.imag))

    def __add__(self, o):
        return _Rect(self.re + o.re, self.im + o.im)

    def __mul__(self, o):
        return _Rect(self.re * o.re - self.im * o.im,
                     self.re * o.im + self.im * o.re)

    def power(self, n: int) -> "_Rect":
        out = _Rect.constant(1.0 + 0.0j)
        for _ in range(n):
            out = out * self
        return out


def _poly_rect(p: BivariatePolynomial, zr: _Rect, wr: _Rect) -> _Rect:
    acc = _Rect.constant(0j)
    zp: dict[int, _Rect] = {}
    wp: dict[int, _Rect] = {}
    for (i, j) in sorted(p.terms):
        if i not in zp:
            zp[i] = zr.power(i)
        if j not in wp:
            wp[j] = wr.power(j)
        acc = acc + _Rect.constant(p.coefficient(i, j).to_complex()) * zp[i] * wp[j]
    return acc


def image_box(maps: Sequence[PlanarPolyMap], domain: SamplingDomain) -> Box:
    """Axis-aligned box covering the images of the domain under every map,
    from rectangular interval evaluation over the domain's bounding box."""
    lo, hi = domain.bounding_box()
    zr = _Rect(_Interval(float(lo[0]), float(hi[0])),
               _Interval(float(lo[1]), float(hi[1])))
    wr = _Rect(_Interval(float(lo[2]), float(hi[2])),
               _Interval(float(lo[3]), float(hi[3])))
    out_lo = np.full(4, np.inf)
    out_hi = np.full(4, -np.inf)
    for f in maps:
        with np.errstate(all="ignore"):
            r1 = _poly_rect(f.first, zr, wr)
            r2 = _poly_rect(f.second, zr, wr)
        cur_lo = np.array([r1.re.lo, r1.im.lo, r2.re.lo, r2.im.lo])
        cur_hi = np.array([r1.re.hi, r1.im.hi, r2.re.hi, r2.im.hi])
        out_lo = np.minimum(out_lo, cur_lo)
        out_hi = np.maximum(out_hi, cur_hi)
    if not (np.all(np.isfinite(out_lo)) and np.all(np.isfinite(out_hi))):
        raise BoxOverflow("interval image box is not finite")
    return out_lo, out_hi


# -- membership counting -----------------------------------------------------


def _inverse_membership(inverse: PlanarPolyMap, domain: SamplingDomain,
                        yz: np.ndarray, yw: np.ndarray) -> np.ndarray:
    xz, xw = inverse.evaluate_vec(yz, yw)
    pts = np.column_stack([xz.real, xz.imag, xw.real, xw.imag])
    return domain.contains(pts).astype(np.int64)


def _fiber_membership(f: PlanarPolyMap, domain: SamplingDomain,
                      yz: np.ndarray, yw: np.ndarray, tol: float) -> np.ndarray:
    out = np.zeros(yz.shape, dtype=np.int64)
    for k in range(yz.size):
        out[k] = image_membership(f, domain, ComplexPoint(yz[k], yw[k]), tol)
    return out


def image_membership(f: PlanarPolyMap, domain: SamplingDomain,
                     y: ComplexPoint, tol: float = 1e-8) -> int:
    """Number of fiber points of f over y lying in the domain (0 = outside
    the image up to tolerance)."""
    result = solve_fiber(f, y, tol)
    if not result.points:
        return 0
    pts = np.array([[p.z.real, p.z.imag, p.w.real, p.w.imag]
                    for p in result.points])
    return int(np.count_nonzero(domain.contains(pts)))


# -- estimators ---------------------------------------------------------------


def multiplicity_volume(f: PlanarPolyMap, domain: SamplingDomain,
                        samples: int, seed: int,
                        workers: int = 1) -> VolumeEstimate:
    """Multiplicity-counted image volume: integral over the domain of
    |det J_f|^2 (the real 4x4 Jacobian determinant of the underlying map).

    For a Keller map this equals the domain volume."""
    det = jacobian_determinant(f)
    lo, hi = domain.bounding_box()

    def integrand(pts: np.ndarray) -> np.ndarray:
        inside = domain.contains(pts)
        z = pts[:, 0] + 1j * pts[:, 1]
        w = pts[:, 2] + 1j * pts[:, 3]
        vals = np.abs(det.evaluate_vec(z, w)) ** 2
        return vals * inside

    return estimate_box_integral((lo, hi), samples, seed, integrand,
                                 salt_index=1, workers=workers)


def rho_distance(f: PlanarPolyMap, g: PlanarPolyMap, domain: SamplingDomain,
                 samples: int, seed: int,
                 f_inverse: PlanarPolyMap | None = None,
                 g_inverse: PlanarPolyMap | None = None,
                 tol: float = 1e-8,
                 multiplicity: bool = True,
                 workers: int = 1) -> VolumeEstimate:
    """Volume of the multiplicity-weighted symmetric difference of f(D), g(D).

    Samples an image box covering both images; a sample y adds m_f(y) when
    m_g(y) = 0 and m_g(y) when m_f(y) = 0.  With multiplicity=False the
    contribution is the bare indicator (plain geometric volume, for
    comparison).  Symmetric in (f, g) by construction.  Estimating
    rho(f, f) returns exactly zero.
    """
    box = image_box((f, g), domain)

    def membership(h, inverse, yz, yw):
        if inverse is not None:
            return _inverse_membership(inverse, domain, yz, yw)
        return _fiber_membership(h, domain, yz, yw, tol)

    def integrand(pts: np.ndarray) -> np.ndarray:
        yz = pts[:, 0] + 1j * pts[:, 1]
        yw = pts[:, 2] + 1j * pts[:, 3]
        if f is g or f == g:
            return np.zeros(pts.shape[0])
        mf = membership(f, f_inverse, yz, yw)
        mg = membership(g, g_inverse, yz, yw)
        only_f = (mf > 0) & (mg == 0)
        only_g = (mg > 0) & (mf == 0)
        if not multiplicity:
            return (only_f | only_g).astype(np.float64)
        return (mf * only_f + mg * only_g).astype(np.float64)

    return estimate_box_integral(box, samples, seed, integrand,
                                 salt_index=2, workers=workers)


@dataclass(frozen=True)
class RatioSeries:
    scales: tuple[float, ...]
    ratios: tuple[tuple[float, float], ...]  # (ratio, propagated stderr)
    numerators: tuple[VolumeEstimate, ...] = field(default=(), repr=False)
    denominators: tuple[VolumeEstimate, ...] = field(default=(), repr=False)


def contraction_ratio(f: PlanarPolyMap, g1: PlanarPolyMap, g2: PlanarPolyMap,
                      scales: Sequence[float], samples: int, seed: int,
                      domain: SamplingDomain | None = None,
                      inverses: dict | None = None,
                      workers: int = 1) -> RatioSeries:
    """rho(f o g1, f o g2, tD) / rho(g1, g2, tD) along a dilation ladder.

    `inverses` may provide polynomial inverses under the keys
    'fg1', 'fg2', 'g1', 'g2'.  No limit is asserted; the series only reports
    what the estimator sees at the given scales.
    """
    from .maps import compose

    if list(scales) != sorted(set(scales)) or any(t <= 0 for t in scales):
        raise ValueError("scales must be strictly increasing and positive")
    if g1 == g2:
        raise ValueError("g1 and g2 must differ")
    base = domain if domain is not None else BallDomain(1.0)
    inverses = inverses or {}
    fg1, fg2 = compose(f, g1), compose(f, g2)
    nums, dens, ratios = [], [], []
    for t in scales:
        dom_t = base.scaled(t)
        num = rho_distance(fg1, fg2, dom_t, samples, seed,
                           f_inverse=inverses.get("fg1"),
                           g_inverse=inverses.get("fg2"), workers=workers)
        den = rho_distance(g1, g2, dom_t, samples, seed,
                           f_inverse=inverses.get("g1"),
                           g_inverse=inverses.get("g2"), workers=workers)
        if den.value == 0.0:
            raise DivisionByZeroDistance(f"zero denominator distance at scale {t}")
        ratio = num.value / den.value
        rel_num = (num.stderr / num.value) ** 2 if num.value else 0.0
        rel_den = (den.stderr / den.value) ** 2
        rel = math.sqrt(rel_num + rel_den)
        ratios.append((ratio, abs(ratio) * rel))
        nums.append(num)
        dens.append(den)
    return RatioSeries(tuple(float(t) for t in scales), tuple(ratios),
                       tuple(nums), tuple(dens))


def domain_volume_estimate(domain: SamplingDomain, samples: int, seed: int,
                           workers: int = 1) -> VolumeEstimate:
    """Monte Carlo volume of the domain itself."""
    lo, hi = domain.bounding_box()

    def integrand(pts: np.ndarray) -> np.ndarray:
        return domain.contains(pts).astype(np.float64)

    return estimate_box_integral((lo, hi), samples, seed, integrand,
                                 salt_index=3, workers=workers)
