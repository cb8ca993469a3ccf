"""Asymptotic tracts: canonical rational maps and what they produce.

A canonical rational map is R(X, Y) = (X^-alpha, X^beta Y + X^-alpha Phi(X))
with deg Phi < alpha + beta.  Composing a polynomial map with R yields a
Laurent map; when no negative powers of X survive, the result is the dual
polynomial map G_R, whose X=0 slice parametrizes one component of the
asymptotic variety.  That component is implicitized by a resultant, and
substituting the dual back into the implicit form factors as
H(G_R) = X^gamma * S with S(0, Y) nonzero; S = 0 is the phantom curve.

The search for tracts enumerates (alpha, beta) in a box, assembles the
polynomiality conditions on Phi's coefficients, solves their affine-linear
part exactly, and keeps only candidates verified by exact composition, so
no spurious tract is ever reported.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd

from .bipoly import (BivariatePolynomial, UniPoly, uni_degree, uni_trim)
from .errors import IdenticallyZero, NoPositiveValuation, NotPolynomial
from .maps import PlanarPolyMap
from .rationals import GaussianRational, ONE, ZERO
from .resultants import implicitize_pair

LaurentTerms = dict[tuple[int, int], GaussianRational]


class CanonicalFlag(enum.Enum):
    DEG_PHI_TOO_LARGE = "DegPhiTooLarge"
    GCD_NOT_ONE = "GcdNotOne"
    GAMMA_RANGE_EMPTY = "GammaRangeEmpty"


@dataclass(frozen=True)
class CanonicalRationalMap:
    """R(X, Y) = (X^-alpha, X^beta Y + X^-alpha Phi(X))."""

    alpha: int
    beta: int
    phi: UniPoly = ()

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError("alpha must be a positive integer")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        object.__setattr__(self, "phi", uni_trim(self.phi))

    def __repr__(self):
        return f"R(alpha={self.alpha}, beta={self.beta}, phi={[str(c) for c in self.phi]})"


@dataclass(frozen=True)
class LaurentMap:
    """Pair of finite Laurent series in X (integer powers) and Y (>= 0)."""

    first: LaurentTerms
    second: LaurentTerms

    def min_x_exponents(self) -> tuple[int, int]:
        def low(t: LaurentTerms) -> int:
            return min((i for i, _ in t), default=0)
        return low(self.first), low(self.second)

    def is_polynomial(self) -> bool:
        lo1, lo2 = self.min_x_exponents()
        return lo1 >= 0 and lo2 >= 0


@dataclass(frozen=True)
class PhantomExtraction:
    gamma: int
    s: BivariatePolynomial


def validate_canonical(r: CanonicalRationalMap) -> frozenset[CanonicalFlag]:
    """Flag set; empty means fully canonical.

    GcdNotOne: the effective X-exponents of X^(alpha+beta) Y + Phi(X) have a
    common divisor other than 1.  GammaRangeEmpty: beta - alpha < 2, so no
    exponent gamma with 2 <= gamma <= beta - alpha can exist.
    """
    flags = set()
    if uni_degree(r.phi) >= r.alpha + r.beta:
        flags.add(CanonicalFlag.DEG_PHI_TOO_LARGE)
    exponents = [r.alpha + r.beta]
    exponents.extend(k for k, c in enumerate(r.phi) if not c.is_zero())
    g = 0
    for e in exponents:
        g = gcd(g, e)
    if g != 1:
        flags.add(CanonicalFlag.GCD_NOT_ONE)
    if r.beta - r.alpha < 2:
        flags.add(CanonicalFlag.GAMMA_RANGE_EMPTY)
    return frozenset(flags)


# -- Laurent arithmetic ------------------------------------------------------


def _lmul(a: LaurentTerms, b: LaurentTerms) -> LaurentTerms:
    out: LaurentTerms = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            e = (i1 + i2, j1 + j2)
            p = c1 * c2
            s = out.get(e)
            out[e] = p if s is None else s + p
    return {e: c for e, c in out.items() if not c.is_zero()}


def _ladd(a: LaurentTerms, b: LaurentTerms) -> LaurentTerms:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        out[e] = c if s is None else s + c
    return {e: c for e, c in out.items() if not c.is_zero()}


def _lpow(a: LaurentTerms, n: int) -> LaurentTerms:
    result: LaurentTerms = {(0, 0): ONE}
    base = a
    while n:
        if n & 1:
            result = _lmul(result, base)
        base = _lmul(base, base) if n > 1 else base
        n >>= 1
    return result


def _tract_second_component(r: CanonicalRationalMap) -> LaurentTerms:
    v: LaurentTerms = {(r.beta, 1): ONE}
    for k, c in enumerate(r.phi):
        if not c.is_zero():
            v = _ladd(v, {(k - r.alpha, 0): c})
    return v


def _compose_component(p: BivariatePolynomial, r: CanonicalRationalMap) -> LaurentTerms:
    v = _tract_second_component(r)
    vpow: dict[int, LaurentTerms] = {0: {(0, 0): ONE}}

    def v_power(j: int) -> LaurentTerms:
        if j not in vpow:
            k = max(e for e in vpow if e <= j)
            cur = vpow[k]
            while k < j:
                cur = _lmul(cur, v)
                k += 1
                vpow[k] = cur
        return vpow[j]

    out: LaurentTerms = {}
    for (i, j), c in sorted(p.terms.items()):
        term = {(e[0] - r.alpha * i, e[1]): k * c for e, k in v_power(j).items()}
        out = _ladd(out, term)
    return out


def compose_with_tract(f: PlanarPolyMap, r: CanonicalRationalMap) -> LaurentMap:
    """Exact Laurent expansion of f o R."""
    return LaurentMap(_compose_component(f.first, r),
                      _compose_component(f.second, r))


def _laurent_to_polynomial(t: LaurentTerms) -> BivariatePolynomial:
    return BivariatePolynomial({(i, j): c for (i, j), c in t.items()})


def dual_map(f: PlanarPolyMap, r: CanonicalRationalMap) -> PlanarPolyMap:
    """The dual polynomial map G_R = f o R, when it is a polynomial map.

    Raises NotPolynomial when negative X powers survive, i.e. R is not an
    asymptotic tract of f.
    """
    lm = compose_with_tract(f, r)
    if not lm.is_polynomial():
        raise NotPolynomial(
            f"negative X-exponents survive composition with {r!r}: "
            f"{lm.min_x_exponents()}")
    return PlanarPolyMap(_laurent_to_polynomial(lm.first),
                         _laurent_to_polynomial(lm.second))


def component_parametrization(gr_map: PlanarPolyMap) -> tuple[UniPoly, UniPoly]:
    """The X=0 slice of both components, as univariate polynomials in Y."""
    def slice0(p: BivariatePolynomial) -> UniPoly:
        terms = {j: c for (i, j), c in p.terms.items() if i == 0}
        if not terms:
            return ()
        return uni_trim(tuple(terms.get(j, ZERO) for j in range(max(terms) + 1)))
    return slice0(gr_map.first), slice0(gr_map.second)


def implicitize(param: tuple[UniPoly, UniPoly]) -> BivariatePolynomial:
    """Implicit form H with H(g1(t), g2(t)) identically zero.

    Content-normalized with leading coefficient one (canonical term order);
    the result may be a proper power of the irreducible form, so downstream
    checks rely on vanishing, not irreducibility.
    """
    g1, g2 = param
    return implicitize_pair(g1, g2).monic()


def phantom_extract(h: BivariatePolynomial, gr_map: PlanarPolyMap) -> PhantomExtraction:
    """Factor h(gr) as X^gamma * S with S(0, Y) != 0.

    Raises IdenticallyZero when h(gr) = 0 and NoPositiveValuation when no
    positive power of X divides it.
    """
    value = h.substitute(gr_map.first, gr_map.second)
    if value.is_zero():
        raise IdenticallyZero("h vanishes identically on the dual map")
    gamma = value.min_x_exponent()
    if gamma < 1:
        raise NoPositiveValuation("X does not divide h(gr)")
    s = value.shift_x(-gamma)
    if all(i > 0 for i, _ in s.terms):
        raise AssertionError("S(0, Y) vanished after exact division")
    return PhantomExtraction(gamma, s)


# -- search ------------------------------------------------------------------

# A polynomial in the unknown coefficients of Phi: exponent tuple -> scalar.
_PhiPoly = dict[tuple[int, ...], GaussianRational]


def _pp_mul(a: _PhiPoly, b: _PhiPoly) -> _PhiPoly:
    out: _PhiPoly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            p = c1 * c2
            s = out.get(e)
            out[e] = p if s is None else s + p
    return {e: c for e, c in out.items() if not c.is_zero()}


def _pp_add(a: _PhiPoly, b: _PhiPoly) -> _PhiPoly:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        out[e] = c if s is None else s + c
    return {e: c for e, c in out.items() if not c.is_zero()}


def _phi_equations(p: BivariatePolynomial, alpha: int, beta: int, nphi: int) -> list[_PhiPoly]:
    """Polynomiality conditions on Phi for one component.

    Returns, for every surviving monomial X^i Y^j with i < 0, its coefficient
    as a polynomial in the unknown coefficients (phi_0, ..., phi_{nphi-1}).
    """
    zero_exp = (0,) * nphi
    one: _PhiPoly = {zero_exp: ONE}

    # V = X^beta Y + X^-alpha Phi(X) with symbolic Phi
    v: dict[tuple[int, int], _PhiPoly] = {(beta, 1): one}
    for k in range(nphi):
        e = tuple(1 if t == k else 0 for t in range(nphi))
        v = _symadd(v, {(k - alpha, 0): {e: ONE}})

    vpow: dict[int, dict[tuple[int, int], _PhiPoly]] = {0: {(0, 0): one}}

    def v_power(j: int):
        if j not in vpow:
            k = max(e for e in vpow if e <= j)
            cur = vpow[k]
            while k < j:
                cur = _symmul(cur, v)
                k += 1
                vpow[k] = cur
        return vpow[j]

    acc: dict[tuple[int, int], _PhiPoly] = {}
    for (i, j), c in sorted(p.terms.items()):
        vp = v_power(j)
        shifted = {(e[0] - alpha * i, e[1]): {m: s * c for m, s in pp.items()}
                   for e, pp in vp.items()}
        acc = _symadd(acc, shifted)
    return [pp for (i, _j), pp in acc.items() if i < 0 and pp]


def _symmul(a, b):
    out: dict[tuple[int, int], _PhiPoly] = {}
    for e1, p1 in a.items():
        for e2, p2 in b.items():
            e = (e1[0] + e2[0], e1[1] + e2[1])
            prod = _pp_mul(p1, p2)
            if e in out:
                out[e] = _pp_add(out[e], prod)
            else:
                out[e] = prod
    return {e: p for e, p in out.items() if p}


def _symadd(a, b):
    out = {e: dict(p) for e, p in a.items()}
    for e, p in b.items():
        if e in out:
            out[e] = _pp_add(out[e], p)
        else:
            out[e] = dict(p)
    return {e: p for e, p in out.items() if p}


def _solve_linear_subsystem(equations: list[_PhiPoly], nphi: int):
    """Solve the affine-linear members of the equation set exactly.

    Returns (particular, nullspace basis) with free variables set to zero,
    or None when the linear subsystem is inconsistent; inconsistency of a
    subset of the constraints already rules out the full system.
    """
    rows = []
    for eq in equations:
        if all(sum(e) <= 1 for e in eq):
            coeffs = [ZERO] * nphi
            const = ZERO
            for e, c in eq.items():
                if sum(e) == 0:
                    const = c
                else:
                    coeffs[e.index(1)] = c
            rows.append((coeffs, -const))
    # Gaussian elimination over the exact field
    matrix = [row[0][:] + [row[1]] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(nphi):
        pivot = next((k for k in range(r, len(matrix))
                      if not matrix[k][col].is_zero()), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = ONE / matrix[r][col]
        matrix[r] = [v * inv for v in matrix[r]]
        for k in range(len(matrix)):
            if k != r and not matrix[k][col].is_zero():
                factor = matrix[k][col]
                matrix[k] = [a - factor * b for a, b in zip(matrix[k], matrix[r])]
        pivots.append(col)
        r += 1
    for k in range(r, len(matrix)):
        if any(not v.is_zero() for v in matrix[k][:nphi]):
            continue
        if not matrix[k][nphi].is_zero():
            return None  # 0 = nonzero
    particular = [ZERO] * nphi
    for row_idx, col in enumerate(pivots):
        particular[col] = matrix[row_idx][nphi]
    free = [c for c in range(nphi) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * nphi
        vec[fc] = ONE
        for row_idx, col in enumerate(pivots):
            vec[col] = -matrix[row_idx][fc]
        basis.append(vec)
    return particular, basis


def tract_search(f: PlanarPolyMap, alpha_max: int, beta_max: int,
                 phi_deg_max: int) -> list[tuple[CanonicalRationalMap, frozenset[CanonicalFlag]]]:
    """All tracts of f within the (alpha, beta, deg Phi) box.

    For each cell the polynomiality condition is assembled symbolically in
    Phi's coefficients; the affine-linear subsystem is solved exactly and
    its solution space is sampled at the particular solution and at unit
    offsets along the nullspace basis.  Every candidate is then verified by
    exact composition, so the returned list contains only genuine tracts.
    An empty list is a valid outcome.
    """
    if alpha_max < 0 or beta_max < 0 or phi_deg_max < 0:
        raise ValueError("bounds must be non-negative")
    found: list[tuple[CanonicalRationalMap, frozenset[CanonicalFlag]]] = []
    seen: set[tuple[int, int, UniPoly]] = set()
    for alpha in range(1, alpha_max + 1):
        for beta in range(0, beta_max + 1):
            nphi = min(phi_deg_max, alpha + beta - 1) + 1
            equations: list[_PhiPoly] = []
            for comp in (f.first, f.second):
                equations.extend(_phi_equations(comp, alpha, beta, nphi))
            solved = _solve_linear_subsystem(equations, nphi)
            if solved is None:
                continue
            particular, basis = solved
            candidates = [tuple(particular)]
            for vec in basis:
                candidates.append(tuple(p + v for p, v in zip(particular, vec)))
            for cand in candidates:
                phi = uni_trim(cand)
                key = (alpha, beta, phi)
                if key in seen:
                    continue
                seen.add(key)
                r = CanonicalRationalMap(alpha, beta, phi)
                if compose_with_tract(f, r).is_polynomial():
                    found.append((r, validate_canonical(r)))
    return found


# -- sampled union check -----------------------------------------------------


def _sample_parameters(count: int = 32) -> list[complex]:
    import cmath
    return [((k + 1) / 8.0) * cmath.exp(2j * cmath.pi * k / count)
            for k in range(count)]


def asymptotic_union_check(f: PlanarPolyMap, g: PlanarPolyMap,
                           alpha_max: int, beta_max: int, phi_deg_max: int,
                           tolerance: float = 1e-6) -> dict:
    """Sampled containment F(A(G)) within A(F o G).

    For every tract R of g, points f(G_R(0, t)) are tested against every
    implicitized component derived from the tracts of f o g: either the
    implicit form vanishes within tolerance, or, for constant
    parametrizations, the point is within tolerance of that point component.
    """
    from .maps import compose as compose_maps

    fg = compose_maps(f, g)
    tracts_g = tract_search(g, alpha_max, beta_max, phi_deg_max)
    tracts_fg = tract_search(fg, alpha_max, beta_max, phi_deg_max)

    components = []
    for r, _flags in tracts_fg:
        dual = dual_map(fg, r)
        param = component_parametrization(dual)
        if uni_degree(param[0]) <= 0 and uni_degree(param[1]) <= 0:
            c1 = param[0][0].to_complex() if param[0] else 0j
            c2 = param[1][0].to_complex() if param[1] else 0j
            components.append({"tract": r, "kind": "point", "point": (c1, c2)})
        else:
            components.append({"tract": r, "kind": "curve",
                               "h": implicitize(param)})

    records = []
    all_contained = True
    for r, _flags in tracts_g:
        dual_g = dual_map(g, r)
        param_g = component_parametrization(dual_g)
        g1, g2 = param_g
        samples = []
        for t in _sample_parameters():
            from .bipoly import uni_eval_complex
            p0 = uni_eval_complex(g1, t) if g1 else 0j
            q0 = uni_eval_complex(g2, t) if g2 else 0j
            image = (f.first.evaluate(p0, q0), f.second.evaluate(p0, q0))
            best = None
            contained = False
            for comp in components:
                if comp["kind"] == "point":
                    dist = abs(image[0] - comp["point"][0]) ** 2 \
                        + abs(image[1] - comp["point"][1]) ** 2
                    value = dist ** 0.5
                else:
                    value = abs(comp["h"].evaluate(image[0], image[1]))
                if best is None or value < best[1]:
                    best = (comp["tract"], value)
                if value <= tolerance:
                    contained = True
                    break
            samples.append({"t": t, "image": image, "contained": contained,
                            "closest": None if best is None else
                            {"tract": repr(best[0]), "value": best[1]}})
            if not contained:
                all_contained = False
        records.append({"tract": r, "flags": sorted(fl.value for fl in _flags),
                        "samples": samples})

    return {
        "tracts_of_g": len(tracts_g),
        "tracts_of_fg": len(tracts_fg),
        "records": records,
        "verdict": all_contained,
    }
