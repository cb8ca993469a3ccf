"""Simultaneous complex root finding.

Degree <= 4 goes to the companion matrix (numpy); higher degrees use the
Aberth-Ehrlich iteration with Bini-style initial points on a circle.  The
stopping rule is a backward-error test, which also terminates cleanly on
clusters from multiple roots; those are merged afterwards by the caller's
tolerance.
"""

from __future__ import annotations

import numpy as np

from .errors import NonConvergence

MAX_ITERATIONS = 1000


def trim_coefficients(coeffs, rel_tol: float = 0.0) -> np.ndarray:
    """Drop trailing (leading-degree) coefficients of magnitude <= rel_tol * max."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size == 0:
        return c
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.zeros(0, dtype=np.complex128)
    keep = c.size
    while keep > 0 and abs(c[keep - 1]) <= rel_tol * scale:
        keep -= 1
    return c[:keep]


def _horner_many(coeffs: np.ndarray, z: np.ndarray):
    """Evaluate p and p' at each z point; also a running error bound for p."""
    n = coeffs.size - 1
    p = np.full_like(z, coeffs[n])
    dp = np.zeros_like(z)
    err = np.abs(p)
    az = np.abs(z)
    for k in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[k]
        err = err * az + np.abs(p)
    return p, dp, err


def _aberth(coeffs: np.ndarray, max_iter: int = MAX_ITERATIONS) -> np.ndarray:
    n = coeffs.size - 1
    lead = coeffs[-1]
    radius = 1.0 + max(abs(c / lead) for c in coeffs[:-1])
    angles = 2.0 * np.pi * (np.arange(n) + 0.5) / n + 0.4
    z = radius * np.exp(1j * angles)

    eps = np.finfo(np.float64).eps
    for _ in range(max_iter):
        p, dp, err = _horner_many(coeffs, z)
        converged = np.abs(p) <= 4.0 * eps * err
        if np.all(converged):
            return z
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), 0.0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            sums = np.sum(1.0 / diff, axis=1) - 1.0  # remove diagonal's 1/1
        denom = 1.0 - newton * sums
        step = np.where(np.abs(denom) > 1e-300, newton / denom, newton)
        step = np.where(np.isfinite(step), step, newton)
        # stalled points with zero derivative get a deterministic nudge
        stuck = (dp == 0) & ~converged
        if np.any(stuck):
            step = step + stuck * (0.5 * radius / n) * np.exp(1j * 0.7)
        z = np.where(converged, z, z - step)
        if np.max(np.abs(np.where(converged, 0.0, step))) <= eps * (1.0 + np.max(np.abs(z))):
            p, dp, err = _horner_many(coeffs, z)
            if np.all(np.abs(p) <= 8.0 * eps * err):
                return z
    p, dp, err = _horner_many(coeffs, z)
    if np.all(np.abs(p) <= 1e3 * eps * err):
        return z
    raise NonConvergence(
        f"Aberth iteration did not converge for degree {n} after {max_iter} steps")


def all_roots(coeffs, max_iter: int = MAX_ITERATIONS) -> np.ndarray:
    """All complex roots with multiplicity, as a flat array of length deg."""
    c = trim_coefficients(coeffs)
    if c.size == 0:
        raise ValueError("the zero polynomial has no well-defined roots")
    if c.size == 1:
        return np.zeros(0, dtype=np.complex128)
    # factor out roots at the origin
    nzero = 0
    while nzero < c.size - 1 and c[nzero] == 0:
        nzero += 1
    core = c[nzero:]
    core = core / np.max(np.abs(core))  # scale-free; roots unchanged
    deg = core.size - 1
    if deg == 0:
        roots = np.zeros(0, dtype=np.complex128)
    elif deg <= 4:
        roots = np.roots(core[::-1])
    else:
        roots = _aberth(core, max_iter)
    if nzero:
        roots = np.concatenate([roots, np.zeros(nzero, dtype=np.complex128)])
    return roots


def cluster_roots(roots: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Merge roots within tol (transitively); centroids with multiplicities.

    Deterministic: clusters are formed over roots sorted by (re, im) and
    reported in that order.
    """
    if roots.size == 0:
        return []
    order = np.lexsort((roots.imag, roots.real))
    pts = roots[order]
    clusters: list[list[complex]] = []
    for z in pts:
        placed = False
        for cl in clusters:
            if any(abs(z - v) <= tol for v in cl):
                cl.append(z)
                placed = True
                break
        if not placed:
            clusters.append([z])
    return [(complex(np.mean(cl)), len(cl)) for cl in clusters]


def univariate_roots(coeffs, tol: float,
                     max_iter: int = MAX_ITERATIONS) -> list[tuple[complex, int]]:
    """Root clusters of a complex univariate polynomial.

    Returns (centroid, multiplicity) pairs; multiplicities sum to the degree.
    Raises NonConvergence when the iteration cap is exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return cluster_roots(all_roots(coeffs, max_iter), tol)
