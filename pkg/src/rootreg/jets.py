"""Truncated Taylor-series arithmetic ("jets").

A jet of order K at a batch of points is an array of shape (m, K+1) whose
column j holds f^(j)(t)/j!.  All combinators below operate along the last
axis, so every derivative a curve oracle reports is an exact closure output
rather than a finite difference.
"""

from __future__ import annotations

import numpy as np


def jet_const(values, order: int) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    out = np.zeros(v.shape + (order + 1,), dtype=complex)
    out[..., 0] = v
    return out


def jet_var(ts, order: int) -> np.ndarray:
    """Jet of the identity map t -> t."""
    t = np.asarray(ts, dtype=complex)
    out = np.zeros(t.shape + (order + 1,), dtype=complex)
    out[..., 0] = t
    if order >= 1:
        out[..., 1] = 1.0
    return out


def jmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    K = a.shape[-1] - 1
    out = np.zeros(np.broadcast(a[..., 0], b[..., 0]).shape + (K + 1,), dtype=complex)
    for k in range(K + 1):
        acc = out[..., k]
        for j in range(k + 1):
            acc += a[..., j] * b[..., k - j]
    return out


def jrecip(a: np.ndarray) -> np.ndarray:
    K = a.shape[-1] - 1
    out = np.zeros_like(a)
    out[..., 0] = 1.0 / a[..., 0]
    for k in range(1, K + 1):
        s = np.zeros_like(a[..., 0])
        for j in range(1, k + 1):
            s += a[..., j] * out[..., k - j]
        out[..., k] = -s * out[..., 0]
    return out


def jdiv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return jmul(a, jrecip(b))


def jexp(a: np.ndarray) -> np.ndarray:
    K = a.shape[-1] - 1
    out = np.zeros_like(a)
    out[..., 0] = np.exp(a[..., 0])
    for k in range(1, K + 1):
        s = np.zeros_like(a[..., 0])
        for j in range(1, k + 1):
            s += j * a[..., j] * out[..., k - j]
        out[..., k] = s / k
    return out


def jpow(a: np.ndarray, r: float, w0=None) -> np.ndarray:
    """Jet of a**r.

    ``w0`` selects the branch at order zero; defaults to the principal power.
    Requires a nonzero constant term.
    """
    K = a.shape[-1] - 1
    out = np.zeros_like(a)
    a0 = a[..., 0]
    if w0 is None:
        w0 = np.power(a0, r)
    out[..., 0] = w0
    if K == 0:
        return out
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_a0 = 1.0 / a0
    for k in range(1, K + 1):
        s = np.zeros_like(a0)
        for j in range(1, k + 1):
            s += (r * j - (k - j)) * a[..., j] * out[..., k - j]
        out[..., k] = s * inv_a0 / k
    return out


def jpolyval(coeffs, x: np.ndarray) -> np.ndarray:
    """Evaluate a polynomial (highest degree first) on a jet via Horner."""
    K = x.shape[-1] - 1
    out = jet_const(np.broadcast_to(coeffs[0], x[..., 0].shape).copy(), K)
    for c in coeffs[1:]:
        out = jmul(out, x)
        out[..., 0] += c
    return out


def derivatives_from_jet(jet: np.ndarray) -> np.ndarray:
    """Convert Taylor coefficients to derivative values f^(j)(t)."""
    K = jet.shape[-1] - 1
    fact = np.ones(K + 1)
    for j in range(2, K + 1):
        fact[j] = fact[j - 1] * j
    return jet * fact
