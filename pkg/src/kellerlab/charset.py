"""Characteristic-set geometry: thick stars on stared segments.

The removed set E lives over finitely many slices Z_k = 1/k.  Each slice
carries the unit segment l = [0, 1] on the real W-axis, a dense sequence of
dyadic star centers on l, and thick stars: 2m triangles sharing the center
vertex, m in the upper half plane and m mirrored below, all kept an angular
margin away from the real axis so that distinct star bodies meet only in l.
Valences are partitioned between slices by residue classes, so no two stars
anywhere share a ray count; per-bundle ray lengths start at 1/20 and decay
by exactly 1/10 per bundle of five stars.  The domain is the open ball
B(0, R) minus the fattened E (a Z-disk of the fattening radius around each
slice); with zero fattening E is a null set in R^4.

Truncation: the ideal object is a countable union; this build truncates at
(slices, bundles_per_slice) and records the truncation.  At any finite
truncation the domain only approximates the ideal separating property.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvariantViolation
from .maps import ComplexPoint
from .rng import SALT_CHARSET, stream

BUNDLE_SIZE = 5
FIRST_BUDGET = Fraction(1, 20)
DECAY = Fraction(1, 10)
AXIS_MARGIN = math.pi / 12.0
# rational lower bound for sin(AXIS_MARGIN) used in exact disjointness checks
SIN_MARGIN_LB = Fraction(1, 4)


@dataclass(frozen=True)
class ThickStar:
    """2m triangles in the W-plane sharing the single vertex at the center."""

    center: ComplexPoint          # (Z_k, c) with c on the segment
    center_w: Fraction            # exact dyadic W-coordinate
    valence: int                  # m >= 2; the star has 2m triangles
    bundle: int
    length: Fraction              # ray budget of the bundle, attained
    rotation: float               # seeded jitter of the angular fan
    fattening_radius: float
    triangles: tuple[tuple[complex, complex, complex], ...]

    @property
    def ray_count(self) -> int:
        return self.valence


@dataclass(frozen=True)
class StaredSegment:
    """One slice {Z_k} x (l union stars)."""

    z_index: int                  # k, 1-based
    z_value: Fraction             # 1/k
    segment: tuple[Fraction, Fraction]
    valences: tuple[int, ...]
    stars: tuple[ThickStar, ...]
    bundle_max_ray: tuple[Fraction, ...]


@dataclass(frozen=True)
class CharacteristicSet:
    ball_radius: float
    slices_count: int
    bundles_per_slice: int
    fattening_radius: float
    seed: int
    slices: tuple[StaredSegment, ...]
    truncation_note: str = field(default="finite truncation of a countable construction")

    def all_stars(self):
        for sl in self.slices:
            yield from sl.stars


def _dyadic_centers(count: int) -> list[Fraction]:
    out: list[Fraction] = []
    den = 2
    while len(out) < count:
        for num in range(1, den, 2):
            out.append(Fraction(num, den))
            if len(out) == count:
                break
        den *= 2
    return out


def _slice_valences(k: int, slices: int, count: int) -> tuple[int, ...]:
    vals = []
    m = 2
    while len(vals) < count:
        if m % slices == k % slices:
            vals.append(m)
        m += 1
    return tuple(vals)


def _build_star(z: Fraction, center: Fraction, valence: int, bundle: int,
                length: Fraction, rotation: float, fatten: float) -> ThickStar:
    m = valence
    slot = (math.pi - 2.0 * AXIS_MARGIN) / m
    delta = slot / 4.0
    lf = float(length)
    cf = float(center)
    triangles = []
    for half in (1.0, -1.0):
        for i in range(m):
            theta = half * (AXIS_MARGIN + slot * (i + 0.5) + rotation)
            apex = complex(cf, 0.0)
            v1 = apex + lf * cmath.exp(1j * (theta - half * delta))
            v2 = apex + lf * cmath.exp(1j * (theta + half * delta))
            triangles.append((apex, v1, v2))
    return ThickStar(
        center=ComplexPoint(complex(float(z), 0.0), complex(cf, 0.0)),
        center_w=center, valence=m, bundle=bundle, length=length,
        rotation=rotation, fattening_radius=fatten,
        triangles=tuple(triangles),
    )


def _check_pair_disjoint(c1: Fraction, l1: Fraction, c2: Fraction, l2: Fraction) -> bool:
    """Exact sufficient test: disk separation, or the angular-margin cone
    bound g > min(L) * (1 + 1/sin(margin))."""
    g = abs(c1 - c2)
    if g > l1 + l2:
        return True
    return g > min(l1, l2) * (1 + 1 / SIN_MARGIN_LB)


def build_characteristic_set(ball_radius: float, slices: int,
                             bundles_per_slice: int, fattening_radius: float,
                             seed: int) -> CharacteristicSet:
    """Deterministic construction; every invariant is verified before return.

    Z_k = 1/k for k = 1..slices; the segment is [0, 1] on the real W-axis;
    star centers enumerate the dyadic rationals of (0, 1); valences are
    split between slices by residue classes; bundle ray budgets are
    (1/20) * (1/10)^b and each bundle attains its budget.
    """
    if ball_radius <= 1:
        raise InvariantViolation("ball radius must exceed 1")
    if slices < 1 or bundles_per_slice < 1:
        raise InvariantViolation("slices and bundles_per_slice must be positive")
    if fattening_radius < 0:
        raise InvariantViolation("fattening radius must be non-negative")

    fatten_exact = Fraction(float(fattening_radius))
    stars_per_slice = BUNDLE_SIZE * bundles_per_slice
    budgets = tuple(FIRST_BUDGET * DECAY ** b for b in range(bundles_per_slice))
    centers = _dyadic_centers(stars_per_slice)

    z_values = [Fraction(1, k) for k in range(1, slices + 1)]
    if slices > 1:
        min_gap = min(z_values[k] - z_values[k + 1] for k in range(slices - 1))
        if not fatten_exact < min_gap:
            raise InvariantViolation(
                f"fattening radius {fattening_radius} is not below the "
                f"minimal slice gap {min_gap}")
        if not 2 * fatten_exact < min_gap:
            raise InvariantViolation(
                "fattened slices overlap: 2 * fattening >= minimal slice gap")

    slices_out = []
    star_counter = 0
    for k in range(1, slices + 1):
        valences = _slice_valences(k, slices, stars_per_slice)
        stars = []
        for j in range(stars_per_slice):
            bundle = j // BUNDLE_SIZE
            m = valences[j]
            slot = (math.pi - 2.0 * AXIS_MARGIN) / m
            jitter = float(stream(seed, SALT_CHARSET, star_counter).uniform(
                -slot / 8.0, slot / 8.0))
            stars.append(_build_star(z_values[k - 1], centers[j], m, bundle,
                                     budgets[bundle], jitter, fattening_radius))
            star_counter += 1
        # within-slice disjointness of star bodies minus the segment
        for a in range(len(stars)):
            for b in range(a + 1, len(stars)):
                if not _check_pair_disjoint(stars[a].center_w, stars[a].length,
                                            stars[b].center_w, stars[b].length):
                    raise InvariantViolation(
                        f"stars at {stars[a].center_w} and {stars[b].center_w} "
                        f"in slice {k} may intersect")
        # bundle decay chain, exact
        maxima = tuple(max(s.length for s in stars[b * BUNDLE_SIZE:(b + 1) * BUNDLE_SIZE])
                       for b in range(bundles_per_slice))
        for b in range(1, bundles_per_slice):
            if not maxima[b] * 10 <= maxima[b - 1]:
                raise InvariantViolation("bundle ray decay chain violated")
        slices_out.append(StaredSegment(
            z_index=k, z_value=z_values[k - 1],
            segment=(Fraction(0), Fraction(1)),
            valences=valences, stars=tuple(stars), bundle_max_ray=maxima))

    # global valence uniqueness
    all_vals = [m for sl in slices_out for m in sl.valences]
    if len(all_vals) != len(set(all_vals)):
        raise InvariantViolation("two stars share a valence")

    # containment in the ball, with fattening
    r_exact = Fraction(float(ball_radius))
    max_w = max((s.center_w + s.length for sl in slices_out for s in sl.stars),
                default=Fraction(1))
    max_w = max(max_w, Fraction(1)) + fatten_exact
    max_z = Fraction(1) + fatten_exact
    if not max_z * max_z + max_w * max_w < r_exact * r_exact:
        raise InvariantViolation("fattened E is not contained in the ball")

    return CharacteristicSet(
        ball_radius=float(ball_radius), slices_count=slices,
        bundles_per_slice=bundles_per_slice,
        fattening_radius=float(fattening_radius), seed=seed,
        slices=tuple(slices_out))


# -- membership --------------------------------------------------------------


def _segment_distance(pw: np.ndarray, a: complex, b: complex) -> np.ndarray:
    ab = b - a
    denom = abs(ab) ** 2
    t = ((pw - a) * np.conj(ab)).real / denom
    t = np.clip(t, 0.0, 1.0)
    return np.abs(pw - (a + t * ab))


def _triangle_distance(pw: np.ndarray, tri: tuple[complex, complex, complex]) -> np.ndarray:
    a, b, c = tri
    d = np.minimum(_segment_distance(pw, a, b),
                   np.minimum(_segment_distance(pw, b, c),
                              _segment_distance(pw, c, a)))
    # inside test via signs of the three edge cross products
    def cross(o, e, p):
        v = e - o
        return v.real * (p - o).imag - v.imag * (p - o).real
    c1 = cross(a, b, pw)
    c2 = cross(b, c, pw)
    c3 = cross(c, a, pw)
    inside = ((c1 >= 0) & (c2 >= 0) & (c3 >= 0)) | ((c1 <= 0) & (c2 <= 0) & (c3 <= 0))
    return np.where(inside, 0.0, d)


def slice_w_distance(sl: StaredSegment, pw: np.ndarray) -> np.ndarray:
    """Distance in the W-plane from points to the slice body (segment + stars)."""
    a = complex(float(sl.segment[0]), 0.0)
    b = complex(float(sl.segment[1]), 0.0)
    dist = _segment_distance(pw, a, b)
    for star in sl.stars:
        for tri in star.triangles:
            dist = np.minimum(dist, _triangle_distance(pw, tri))
    return dist


def contains_batch(cs: CharacteristicSet, points: np.ndarray) -> np.ndarray:
    """Membership for an (n, 4) array of real coordinates [Re z, Im z, Re w, Im w].

    A point belongs to D iff it is inside the open ball and farther than the
    fattening radius from every slice body in the product metric.
    """
    pz = points[:, 0] + 1j * points[:, 1]
    pw = points[:, 2] + 1j * points[:, 3]
    inside = (np.abs(pz) ** 2 + np.abs(pw) ** 2) < cs.ball_radius ** 2
    fatten = cs.fattening_radius
    for sl in cs.slices:
        dz = np.abs(pz - complex(float(sl.z_value), 0.0))
        candidates = inside & (dz <= fatten)
        if not np.any(candidates):
            continue
        dw = slice_w_distance(sl, pw[candidates])
        dist_sq = dz[candidates] ** 2 + dw ** 2
        bad = dist_sq <= fatten * fatten
        idx = np.where(candidates)[0][bad]
        inside[idx] = False
    return inside


def contains_point(cs: CharacteristicSet, p: ComplexPoint) -> bool:
    pts = np.array([[p.z.real, p.z.imag, p.w.real, p.w.imag]], dtype=np.float64)
    return bool(contains_batch(cs, pts)[0])


def _triangle_area(tri: tuple[complex, complex, complex]) -> float:
    a, b, c = tri
    return abs((b - a).real * (c - a).imag - (b - a).imag * (c - a).real) / 2.0


def removed_volume(cs: CharacteristicSet) -> float:
    """4-volume removed by the fattened E.

    Zero when the fattening radius is zero (E is a finite union of sets of
    real dimension <= 2).  Otherwise the exact product formula: the sum of
    triangle areas times the area of the fattening disk; segments contribute
    zero area.  Star and slice disjointness make the sum exact.
    """
    r = cs.fattening_radius
    if r == 0.0:
        return 0.0
    total_area = 0.0
    for sl in cs.slices:
        for star in sl.stars:
            for tri in star.triangles:
                total_area += _triangle_area(tri)
    return total_area * math.pi * r * r
