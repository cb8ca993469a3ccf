"""Exact Sylvester resultants over the Gaussian rationals.

The scalar core is a Sylvester determinant computed by Gaussian elimination
over the exact field Q+iQ.  Resultants with polynomial entries (eliminating
Y from bivariate inputs, or implicitizing a parametrization) are recovered
from scalar resultants at integer nodes by Newton interpolation, skipping
nodes where a leading coefficient vanishes (there the evaluated Sylvester
matrix would not be the evaluated resultant).
"""

from __future__ import annotations

from fractions import Fraction

from .bipoly import (BivariatePolynomial, UniPoly, uni_degree, uni_eval_exact,
                     uni_trim)
from .rationals import GaussianRational, ONE, ZERO


def _det_exact(matrix: list[list[GaussianRational]]) -> GaussianRational:
    """Determinant by elimination over the field; row swaps flip the sign."""
    n = len(matrix)
    m = [row[:] for row in matrix]
    det = ONE
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot_row is None:
            return ZERO
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            det = -det
        pivot = m[col][col]
        det = det * pivot
        inv = ONE / pivot
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor.is_zero():
                continue
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    return det


def sylvester_matrix(p: UniPoly, q: UniPoly) -> list[list[GaussianRational]]:
    """Classical Sylvester matrix of two univariate polynomials (ascending
    coefficient tuples), of size deg p + deg q."""
    dp, dq = len(p) - 1, len(q) - 1
    if dp < 0 or dq < 0:
        raise ValueError("resultant of the zero polynomial")
    n = dp + dq
    rows: list[list[GaussianRational]] = []
    pc = list(reversed(p))  # descending
    qc = list(reversed(q))
    for shift in range(dq):
        rows.append([ZERO] * shift + pc + [ZERO] * (n - shift - dp - 1))
    for shift in range(dp):
        rows.append([ZERO] * shift + qc + [ZERO] * (n - shift - dq - 1))
    return rows


def resultant_scalar(p: UniPoly, q: UniPoly) -> GaussianRational:
    """Resultant of univariate polynomials over Q+iQ.

    deg 0 edge cases follow the usual convention Res(c, q) = c^deg q.
    """
    p, q = uni_trim(p), uni_trim(q)
    if not p or not q:
        raise ValueError("resultant of the zero polynomial")
    dp, dq = len(p) - 1, len(q) - 1
    if dp == 0 and dq == 0:
        return ONE
    if dp == 0:
        return p[0] ** dq
    if dq == 0:
        return q[0] ** dp
    return _det_exact(sylvester_matrix(p, q))


# -- exact interpolation -----------------------------------------------------


def newton_interpolate(nodes: list[GaussianRational],
                       values: list[GaussianRational]) -> UniPoly:
    """Monomial coefficients of the unique interpolant through the nodes."""
    n = len(nodes)
    if n == 0:
        return ()
    # divided differences
    dd = list(values)
    for level in range(1, n):
        for k in range(n - 1, level - 1, -1):
            dd[k] = (dd[k] - dd[k - 1]) / (nodes[k] - nodes[k - level])
    # expand the Newton form
    coeffs: list[GaussianRational] = [dd[n - 1]]
    for k in range(n - 2, -1, -1):
        node = nodes[k]
        new = [ZERO] * (len(coeffs) + 1)
        for idx, c in enumerate(coeffs):
            new[idx + 1] = new[idx + 1] + c
            new[idx] = new[idx] - c * node
        new[0] = new[0] + dd[k]
        coeffs = new
    return uni_trim(coeffs)


def _int_node(k: int) -> GaussianRational:
    # 0, 1, -1, 2, -2, ... keeps interpolation nodes small
    mag = (k + 1) // 2
    return GaussianRational(Fraction(mag if k % 2 == 1 else -mag))


def resultant_eliminate_y_exact(p: BivariatePolynomial,
                                q: BivariatePolynomial) -> UniPoly:
    """Res_Y(p, q) as an exact univariate polynomial in X.

    Vanishes exactly at the X-values of common roots.  Nodes where either
    leading Y-coefficient vanishes are skipped.
    """
    py = p.coefficients_in_y()
    qy = q.coefficients_in_y()
    dp, dq = len(py) - 1, len(qy) - 1
    if dp <= 0 and dq <= 0:
        from .errors import BothConstantInY
        raise BothConstantInY("neither input depends on Y")
    if dp == 0:
        # Res(c(X), q) = c(X)^deg_Y q
        base = BivariatePolynomial({(i, 0): c for i, c in enumerate(py[0])})
        return (base ** dq).coefficients_in_y()[0] if dq else (ONE,)
    if dq == 0:
        base = BivariatePolynomial({(i, 0): c for i, c in enumerate(qy[0])})
        return (base ** dp).coefficients_in_y()[0] if dp else (ONE,)

    lc_p = uni_trim(py[-1])
    lc_q = uni_trim(qy[-1])
    deg_bound = (dp * max(0, int(max(len(row) for row in qy)) - 1)
                 + dq * max(0, int(max(len(row) for row in py)) - 1))
    nodes: list[GaussianRational] = []
    values: list[GaussianRational] = []
    k = 0
    while len(nodes) < deg_bound + 1:
        x = _int_node(k)
        k += 1
        if uni_eval_exact(lc_p, x).is_zero() or uni_eval_exact(lc_q, x).is_zero():
            continue
        pv = p.eval_x_exact(x)
        qv = q.eval_x_exact(x)
        values.append(resultant_scalar(pv, qv))
        nodes.append(x)
    return newton_interpolate(nodes, values)


def implicitize_pair(g1: UniPoly, g2: UniPoly) -> BivariatePolynomial:
    """H(U, V) = Res_Y(U - g1(Y), V - g2(Y)), exactly.

    The output vanishes identically on the curve (g1(t), g2(t)); it may be a
    power of the irreducible defining polynomial.  U is carried by the X slot
    and V by the Y slot of the result.
    """
    d1, d2 = int(max(0, uni_degree(g1))), int(max(0, uni_degree(g2)))
    if d1 == 0 and d2 == 0:
        from .errors import BothConstant
        raise BothConstant("parametrization components are both constant")
    if d1 == 0:
        # Res(U - c, V - g2) = (U - c)^deg g2
        base = BivariatePolynomial.x() - BivariatePolynomial.constant(g1[0] if g1 else ZERO)
        return base ** d2
    if d2 == 0:
        base = BivariatePolynomial.y() - BivariatePolynomial.constant(g2[0] if g2 else ZERO)
        return base ** d1

    # tensor interpolation: degree <= d2 in U, <= d1 in V
    u_nodes = [_int_node(k) for k in range(d2 + 1)]
    v_nodes = [_int_node(k) for k in range(d1 + 1)]
    per_v: list[UniPoly] = []
    for v in v_nodes:
        vals = []
        for u in u_nodes:
            pu = uni_trim(tuple(u - c if k == 0 else -c for k, c in enumerate(g1)) or (u,))
            qv = uni_trim(tuple(v - c if k == 0 else -c for k, c in enumerate(g2)) or (v,))
            vals.append(resultant_scalar(pu, qv))
        per_v.append(newton_interpolate(u_nodes, vals))
    width = max(len(c) for c in per_v)
    terms: dict[tuple[int, int], GaussianRational] = {}
    for ui in range(width):
        column = [c[ui] if ui < len(c) else ZERO for c in per_v]
        poly_v = newton_interpolate(v_nodes, column)
        for vj, coeff in enumerate(poly_v):
            if not coeff.is_zero():
                terms[(ui, vj)] = coeff
    return BivariatePolynomial(terms)
