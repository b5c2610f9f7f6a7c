"""Pure-Python (numpy) Aberth-Ehrlich simultaneous root solver.

Batched fallback for the compiled kernel: identical initial guesses and
update rule (simultaneous/Jacobi sweep), so the two backends agree within
solver tolerance.  Coefficients are monic, row k holding a_1..a_n of
z^n + sum a_j z^(n-j).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

# fixed irrational rotation of the initial-guess circle (2 - golden ratio)
_ROT = 0.3819660112501051


def initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    m, n = coeffs.shape
    with np.errstate(divide="ignore"):
        mags = np.abs(coeffs) ** (1.0 / np.arange(1, n + 1))
    cauchy = 2.0 * mags.max(axis=1)
    radius = np.maximum(0.5 * cauchy, 1e-30)
    angles = 2.0 * np.pi * (np.arange(n) + _ROT) / n
    return radius[:, None] * np.exp(1j * angles)[None, :]


def _horner(coeffs: np.ndarray, z: np.ndarray):
    """Evaluate p and p' at z for every row; coeffs (m, n), z (m, n)."""
    m, n = coeffs.shape
    p = np.ones_like(z)
    dp = np.zeros_like(z)
    for j in range(n):
        dp = dp * z + p
        p = p * z + coeffs[:, j][:, None]
    return p, dp


def residual_scale(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[1]
    with np.errstate(divide="ignore"):
        mags = np.abs(coeffs) ** (1.0 / np.arange(1, n + 1))
    cauchy = 2.0 * mags.max(axis=1)
    return (1.0 + cauchy) ** n


def solve_batch(coeffs, tol: float = 1e-12, maxiter: int = 300):
    """Roots of a batch of monic polynomials.

    Returns (roots (m, n), iterations (m,), converged (m,)).  A row counts as
    converged once max_i |p(z_i)| <= tol * (1 + cauchy_bound)^n.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=complex)
    m, n = coeffs.shape
    if n == 1:
        roots = -coeffs.copy()
        return roots, np.zeros(m, dtype=np.int64), np.ones(m, dtype=bool)

    z = initial_guesses(coeffs)
    zero_rows = np.all(coeffs == 0, axis=1)
    bound = tol * residual_scale(coeffs)
    iters = np.zeros(m, dtype=np.int64)
    active = ~zero_rows
    z[zero_rows] = 0.0

    idx = np.arange(m)
    for _ in range(maxiter):
        if not np.any(active):
            break
        rows = idx[active]
        za = z[rows]
        p, dp = _horner(coeffs[rows], za)
        res = np.abs(p).max(axis=1)
        done = res <= bound[rows]
        if np.any(done):
            active[rows[done]] = False
            keep = ~done
            rows = rows[keep]
            if len(rows) == 0:
                continue
            za = za[keep]
            p = p[keep]
            dp = dp[keep]
        # Newton correction with a guard against vanishing derivative
        small = np.abs(dp) < 1e-300
        dp = np.where(small, 1.0, dp)
        w = p / dp
        w = np.where(small, 0.05 * (1 + np.abs(za)), w)
        # Aberth coupling term
        diff = za[:, :, None] - za[:, None, :]
        np.einsum("mii->mi", diff)[:] = np.inf
        s = (1.0 / diff).sum(axis=2)
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
        z[rows] = za - w / denom
        iters[rows] += 1

    return z, iters, ~active | zero_rows
