"""Coefficient interpolation bounds, Taylor-based derivative bounds,
higher-order Glaeser inequalities, and radical derivative envelopes.

Every constant here is computed (from inverse-matrix row sums and the case
analysis behind them), never asserted from thin air: reports publish the
constant they certify against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve
from .errors import OrderOutOfRange, SignChange, SingularMatrix
from .function_spaces import holder_constant
from .quadrature import detect_zeros


@dataclass(frozen=True)
class InterpolationBoundResult:
    m: int
    alpha: float
    A: float
    B: float
    M: float
    nodes: tuple
    constant_C: float
    per_coefficient_bounds: tuple
    branch: str  # "nodes", "classical", "large-node-fallback"
    condition_number: float

    def to_json(self):
        return {
            "m": self.m,
            "alpha": self.alpha,
            "A": self.A,
            "B": self.B,
            "M": self.M,
            "nodes": list(self.nodes),
            "constant_C": self.constant_C,
            "per_coefficient_bounds": list(self.per_coefficient_bounds),
            "branch": self.branch,
            "condition_number": self.condition_number,
        }


def _classical_constant(m: int) -> tuple:
    """Row-sum norm of the inverse node matrix for nodes k/m on [0, 1].

    Bounds |a_j| <= C max|P| for P(x) = a_1 x + ... + a_m x^m with |P| <= A
    on [0, 1].
    """
    k = np.arange(1, m + 1, dtype=float)
    V = np.power.outer(k / m, np.arange(1, m + 1, dtype=float))
    cond = float(np.linalg.cond(V, p=np.inf))
    if not np.isfinite(cond) or cond > 1e14:
        raise SingularMatrix("classical node matrix is numerically singular", cond)
    C = float(np.abs(np.linalg.inv(V)).sum(axis=1).max())
    return C, cond


def interpolation_bound(m: int, alpha: float, A: float, B: float, M: float) -> InterpolationBoundResult:
    """Certified coefficient bounds for P(x) = a_1 x + ... + a_m x^m obeying
    |P(x)| <= A (1 + M x^{m+alpha}) on [0, B].

    Every |a_j| is guaranteed <= constant_C * A * (1 + M^{j/(m+alpha)} B^j) / B^j.
    The three branches of the underlying proof (interpolation nodes, M = 0,
    and nodes exceeding B) are all implemented exactly.
    """
    if m < 1 or not 0 < alpha <= 1 or A < 0 or M < 0 or B <= 0:
        raise ValueError("need m >= 1, alpha in (0,1], A,M >= 0, B > 0")
    ma = m + alpha
    j = np.arange(1, m + 1, dtype=float)

    if M == 0:
        C, cond = _classical_constant(m)
        bounds = C * A * (1.0 + 0.0) / B**j
        return InterpolationBoundResult(m, alpha, A, B, M, (), C, tuple(bounds), "classical", cond)

    nodes = (j / (ma - j)) ** (1.0 / ma) * M ** (-1.0 / ma)
    if np.any(nodes > B):
        # here M B^{m+alpha} < k/(m+alpha-k) for some k, so |P| <= A(m+alpha)/alpha
        C0, cond = _classical_constant(m)
        C = C0 * ma / alpha
        bounds = C * A * (1.0 + M ** (j / ma) * B**j) / B**j
        return InterpolationBoundResult(
            m, alpha, A, B, M, tuple(nodes), C, tuple(bounds), "large-node-fallback", cond
        )

    # node-matrix branch (after the A = B = 1 reduction)
    L = np.power.outer(j / (ma - j), j / ma).T  # L[k-1, j-1] = (k/(ma-k))^{j/ma}
    cond = float(np.linalg.cond(L, p=np.inf))
    if not np.isfinite(cond) or cond > 1e14:
        raise SingularMatrix("interpolation node matrix is numerically singular", cond)
    Linv = np.linalg.inv(L)
    qk = ma / (ma - j)  # certified |P(x_k)| <= A * qk after reduction
    C = float((np.abs(Linv) @ qk).max())
    bounds = C * A * (1.0 + M ** (j / ma) * B**j) / B**j
    return InterpolationBoundResult(m, alpha, A, B, M, tuple(nodes), C, tuple(bounds), "nodes", cond)


def check_interpolation_hypothesis(coeffs, A: float, B: float, M: float, alpha: float,
                                   grid_points: int = 10_000) -> bool:
    """Dense-grid verification of |P(x)| <= A(1 + M x^{m+alpha}) on [0, B]."""
    coeffs = np.asarray(coeffs, dtype=complex)
    m = len(coeffs)
    xs = np.linspace(0.0, B, grid_points)
    powers = np.power.outer(xs, np.arange(1, m + 1, dtype=float))
    vals = np.abs(powers @ coeffs)
    envelope = A * (1.0 + M * xs ** (m + alpha))
    return bool(np.all(vals <= envelope * (1 + 1e-12) + 1e-300))


@dataclass(frozen=True)
class DerivativeBoundCheck:
    s: int
    lhs: float
    rhs: float
    constant: float
    slack: float
    holds: bool

    def to_json(self):
        return {
            "s": self.s,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant,
            "slack": self.slack,
            "holds": self.holds,
        }


def _oscillation_dense(f: Curve, a: float, b: float, samples: int) -> float:
    vals = f.values(np.linspace(a, b, samples))
    re = vals.real
    im = vals.imag
    # diameter of a dense 1-d curve trace: exact over samples
    pts = np.column_stack([re, im])
    from .function_spaces import _convex_hull

    hull = _convex_hull(np.unique(pts, axis=0))
    if len(hull) == 1:
        return 0.0
    d2 = ((hull[:, None, :] - hull[None, :, :]) ** 2).sum(axis=2)
    return float(np.sqrt(d2.max()))


def taylor_bound_check(f: Curve, interval, m: int, alpha: float, t: float, s: int,
                       samples: int = 4097) -> DerivativeBoundCheck:
    """Both sides of the intermediate-derivative bound

    |f^(s)(t)| <= C |I|^{-s} (V_I(f) + V_I(f)^{(m+a-s)/(m+a)} H^{s/(m+a)} |I|^s)

    with C assembled from :func:`interpolation_bound` applied to the Taylor
    polynomial at t (one-sided reach |I|/2, hence the 2^s factor).
    """
    a, b = float(interval[0]), float(interval[1])
    if not 1 <= s <= m:
        raise OrderOutOfRange(f"need 1 <= s <= m, got s={s}, m={m}")
    if not a <= t <= b:
        raise ValueError("t must lie in the interval")
    length = b - a
    delta = 0.5 * length
    ts = np.linspace(a, b, samples)
    V = _oscillation_dense(f, a, b, samples)
    topvals = f.derivatives(ts, m)
    H = holder_constant(ts, topvals, alpha)
    lhs = abs(f.derivative(t, s))

    ma = m + alpha
    if V == 0.0:
        # zero oscillation forces every Taylor coefficient to vanish
        return DerivativeBoundCheck(s, lhs, 0.0, 0.0, -lhs, lhs <= 1e-12)

    M_red = H / V * delta**ma  # reduced hypothesis constant on [0, 1]
    ib = interpolation_bound(m, alpha, 1.0, 1.0, M_red)
    C_eq = ib.constant_C * math.factorial(s) * 2**s
    rhs_core = length ** (-s) * (V + V ** ((ma - s) / ma) * H ** (s / ma) * length**s)
    rhs = C_eq * rhs_core
    return DerivativeBoundCheck(s, lhs, rhs, C_eq, rhs - lhs, lhs <= rhs * (1 + 1e-12))


def glaeser_check(f: Curve, interval, m: int, alpha: float, samples: int = 4097):
    """Higher-order Glaeser inequality at the interval center.

    Requires real-valued f with f and f' of constant sign on the interval;
    the oscillation V is then replaced by |f(t0)| on the monotone half.
    """
    a, b = float(interval[0]), float(interval[1])
    t0 = 0.5 * (a + b)
    ts = np.linspace(a, b, samples)
    j1 = f.jets(ts, 1)
    vals, dvals = j1[:, 0], j1[:, 1]
    if np.max(np.abs(vals.imag)) > 1e-9 * max(1.0, np.max(np.abs(vals))):
        raise SignChange("sign hypotheses need a real-valued function", witness=float(ts[0]))
    v, dv = vals.real, dvals.real

    def sign_witness(x):
        pos = x > 1e-14 * max(1.0, np.max(np.abs(x)))
        neg = x < -1e-14 * max(1.0, np.max(np.abs(x)))
        if pos.any() and neg.any():
            return float(ts[int(np.flatnonzero(pos)[0] if pos.any() else 0)])
        return None

    for name, arr in (("f", v), ("f'", dv)):
        w = sign_witness(arr)
        if w is not None:
            raise SignChange(f"{name} changes sign on the interval", witness=w)

    length = b - a
    f0 = abs(f.value(t0))
    topvals = f.derivatives(ts, m)
    H = holder_constant(ts, topvals, alpha)
    ma = m + alpha
    checks = []
    for s in range(1, m + 1):
        lhs = abs(f.derivative(t0, s))
        if f0 == 0.0:
            rhs = 0.0
            C_eq = 0.0
        else:
            M_red = H / f0 * (0.5 * length) ** ma
            ib = interpolation_bound(m, alpha, 1.0, 1.0, M_red)
            C_eq = ib.constant_C * math.factorial(s) * 2**s
            rhs = C_eq * length ** (-s) * (f0 + f0 ** ((ma - s) / ma) * H ** (s / ma) * length**s)
        checks.append(DerivativeBoundCheck(s, lhs, rhs, C_eq, rhs - lhs, lhs <= rhs * (1 + 1e-12)))
    return checks


def glaeser_constant_transform(C: float, m: int, alpha: float, direction: str) -> float:
    """Constant exchange between the oscillation form and the derivative form
    of the first-order Glaeser inequality."""
    if C <= 0:
        raise ValueError("C must be positive")
    ma = m + alpha
    if direction == "to_eq4":
        return max(C, C ** ((ma - 1.0) / ma))
    if direction == "to_eq3":
        return max(C, C ** (ma / (ma - 1.0)))
    raise ValueError("direction must be 'to_eq4' or 'to_eq3'")


@dataclass(frozen=True)
class RadicalEnvelope:
    k: int
    alpha: float
    p: float
    ts: np.ndarray
    lam: np.ndarray
    weak_p_norm: float
    bound_core: float
    empirical_ratio: float

    def to_json(self):
        return {
            "k": self.k,
            "alpha": self.alpha,
            "p": self.p,
            "weak_p_norm": self.weak_p_norm,
            "bound_core": self.bound_core,
            "empirical_ratio": self.empirical_ratio,
        }


def radical_envelope(g: Curve, interval, k: int, alpha: float, samples: int = 4097,
                     zero_margin_rel: float = 1e-7) -> RadicalEnvelope:
    """Envelope Lam = |g'| |g|^{1/(k+alpha)-1} on {g != 0} and its weak-p
    quasinorm at the conjugate exponent p = (k+alpha)'.

    The comparison constant against
    max(Hoeld_alpha(g^(k))^{1/(k+alpha)} |I|^{1/p}, ||g'||_inf^{1/(k+alpha)})
    is published as an empirical ratio, not asserted.
    """
    a, b = float(interval[0]), float(interval[1])
    ma = k + alpha
    p = ma / (ma - 1.0)
    zeros = detect_zeros(g, a, b)
    from .function_spaces import singularity_graded_grid
    from .quadrature import detect_dips

    dips = [t for t, _ in detect_dips(g, a, b)]
    ts = singularity_graded_grid(a, b, sorted(set(zeros) | set(dips)), bulk=samples - 1,
                                 per_side=1200, t_min_rel=zero_margin_rel)
    jb = g.jets(ts, 1)
    gv, gp = jb[:, 0], jb[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.abs(gp) * np.abs(gv) ** (1.0 / ma - 1.0)
    lam = np.nan_to_num(lam, nan=0.0, posinf=0.0)

    # weak norm over the union of retained segments (cells touching a zero of
    # g are excluded; the envelope is defined a.e. on {g != 0})
    span = b - a
    seg_ok = np.ones(len(ts) - 1, dtype=bool)
    for z in zeros:
        seg_ok &= ~((ts[:-1] <= z + zero_margin_rel * span) & (ts[1:] >= z - zero_margin_rel * span))
    from .function_spaces import _weak_lp_from_segments

    wk = _weak_lp_from_segments(lam[:-1][seg_ok], lam[1:][seg_ok], np.diff(ts)[seg_ok], p)

    dense = np.linspace(a, b, samples)
    H = holder_constant(dense, g.derivatives(dense, k), alpha)
    sup_gp = float(np.max(np.abs(g.derivatives(dense, 1))))
    core = max(H ** (1.0 / ma) * (b - a) ** (1.0 / p), sup_gp ** (1.0 / ma))
    ratio = wk / core if core > 0 else 0.0
    return RadicalEnvelope(k, alpha, p, ts, lam, wk, core, ratio)
