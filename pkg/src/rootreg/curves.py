"""Curve oracles: complex-valued functions of one real parameter with
exact derivative jets.

Every analytic family used by the package (coefficient curves, cutoffs,
continuous radical branches) is a ``Curve``.  Values and jets are vectorized
over arrays of parameters; derivatives come from truncated Taylor arithmetic,
never from finite differences, so hypothesis checks measure the mathematics
and not the estimator.
"""

from __future__ import annotations

import math

import numpy as np

from . import jets as J

_FACT = [math.factorial(k) for k in range(24)]


class Curve:
    """A scalar function t -> C with derivative jets of any order."""

    def values(self, ts) -> np.ndarray:
        return self.jets(ts, 0)[..., 0]

    def value(self, t) -> complex:
        return complex(self.values(np.asarray([t], dtype=float))[0])

    def jets(self, ts, order: int) -> np.ndarray:
        raise NotImplementedError

    def derivative(self, t, s: int = 1) -> complex:
        return complex(self.jets(np.asarray([t], dtype=float), s)[0, s] * _FACT[s])

    def derivatives(self, ts, s: int) -> np.ndarray:
        """Values of the s-th derivative at many points."""
        return self.jets(ts, s)[..., s] * _FACT[s]

    # arithmetic sugar
    def __add__(self, other):
        return SumCurve(self, _as_curve(other))

    def __radd__(self, other):
        return SumCurve(_as_curve(other), self)

    def __sub__(self, other):
        return SumCurve(self, ScaledCurve(_as_curve(other), -1.0))

    def __rsub__(self, other):
        return SumCurve(_as_curve(other), ScaledCurve(self, -1.0))

    def __mul__(self, other):
        if np.isscalar(other):
            return ScaledCurve(self, other)
        return ProductCurve(self, _as_curve(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return ScaledCurve(self, -1.0)


def _as_curve(x) -> Curve:
    if isinstance(x, Curve):
        return x
    return ConstCurve(complex(x))


class ConstCurve(Curve):
    def __init__(self, value: complex):
        self.c = complex(value)

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        return J.jet_const(np.full(ts.shape, self.c, dtype=complex), order)


class PolyCurve(Curve):
    """Polynomial in t, coefficients in ascending order of degree."""

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        # cache factorial-scaled derivative coefficient arrays
        self._derivs = [self.coeffs]
        c = self.coeffs
        while len(c) > 1:
            c = c[1:] * np.arange(1, len(c))
            self._derivs.append(c)

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        out = np.zeros(ts.shape + (order + 1,), dtype=complex)
        for k in range(order + 1):
            if k < len(self._derivs):
                out[..., k] = np.polyval(self._derivs[k][::-1], ts) / _FACT[k]
        return out


class TrigCurve(Curve):
    """Finite sum of complex exponentials: sum_m c_m exp(i f_m t).

    Complex frequencies are allowed (e.g. f = i gives exp(-t))."""

    def __init__(self, freqs, coeffs):
        self.freqs = np.asarray(freqs, dtype=complex)
        self.coeffs = np.asarray(coeffs, dtype=complex)

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        phases = np.exp(1j * np.outer(ts, self.freqs))  # (m, nf)
        out = np.empty(ts.shape + (order + 1,), dtype=complex)
        ifr = 1j * self.freqs
        for k in range(order + 1):
            out[..., k] = phases @ (self.coeffs * ifr**k) / _FACT[k]
        return out


class PowerCurve(Curve):
    """t -> t**gamma on t > 0 (principal branch)."""

    def __init__(self, gamma: float):
        self.gamma = float(gamma)

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        out = np.empty(ts.shape + (order + 1,), dtype=complex)
        coef = 1.0
        for k in range(order + 1):
            with np.errstate(divide="ignore", invalid="ignore"):
                out[..., k] = coef * np.power(ts.astype(complex), self.gamma - k) / _FACT[k]
            coef *= self.gamma - k
        return out


class AffineInputCurve(Curve):
    """f(a t + b) for an inner affine reparameterization."""

    def __init__(self, base: Curve, a: float, b: float):
        self.base = base
        self.a = float(a)
        self.b = float(b)

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        inner = self.base.jets(self.a * ts + self.b, order)
        scale = self.a ** np.arange(order + 1)
        return inner * scale


class SumCurve(Curve):
    def __init__(self, *terms):
        self.terms = terms

    def jets(self, ts, order):
        out = self.terms[0].jets(ts, order).copy()
        for t in self.terms[1:]:
            out += t.jets(ts, order)
        return out


class ScaledCurve(Curve):
    def __init__(self, base: Curve, factor):
        self.base = base
        self.factor = complex(factor)

    def jets(self, ts, order):
        return self.base.jets(ts, order) * self.factor


class ProductCurve(Curve):
    def __init__(self, *factors):
        self.factors = factors

    def jets(self, ts, order):
        out = self.factors[0].jets(ts, order)
        for f in self.factors[1:]:
            out = J.jmul(out, f.jets(ts, order))
        return out


class QuotientCurve(Curve):
    def __init__(self, num: Curve, den: Curve):
        self.num = num
        self.den = den

    def jets(self, ts, order):
        return J.jdiv(self.num.jets(ts, order), self.den.jets(ts, order))


class SmoothStepCurve(Curve):
    """The bump phi with phi=1 for t<=0 and phi=0 for t>=1.

    phi(t) = S(1-t) / (S(t) + S(1-t)) with S(u) = exp(-1/u) on u > 0.
    """

    # exp(-1/u) underflows for u < ~1/745; treat those tails as exactly 0/1
    _EDGE = 1.4e-3

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        out = np.zeros(ts.shape + (order + 1,), dtype=complex)
        lo = ts <= self._EDGE
        hi = ts >= 1.0 - self._EDGE
        out[lo, 0] = 1.0
        mid = ~(lo | hi)
        if np.any(mid):
            u = J.jet_var(ts[mid], order)
            one_minus = J.jet_const(np.ones(np.count_nonzero(mid)), order) - u
            s1 = J.jexp(-J.jrecip(u))
            s2 = J.jexp(-J.jrecip(one_minus))
            out[mid] = J.jdiv(s2, s1 + s2)
        return out


class CutoffWindowCurve(Curve):
    """psi(t) = phi(alpha - t) * phi(t - beta): 1 on [alpha,beta], 0 outside
    [alpha-1, beta+1]."""

    def __init__(self, alpha: float, beta: float):
        self.alpha = float(alpha)
        self.beta = float(beta)
        step = SmoothStepCurve()
        left = AffineInputCurve(step, -1.0, self.alpha)
        right = AffineInputCurve(step, 1.0, -self.beta)
        self._prod = ProductCurve(left, right)

    def jets(self, ts, order):
        return self._prod.jets(ts, order)


class TaylorExtendedCurve(Curve):
    """Extend a curve beyond [a, b] by its Taylor polynomials at the endpoints.

    Keeps C^{order-1,1} regularity across the seams; used before applying a
    cutoff window.
    """

    def __init__(self, base: Curve, a: float, b: float, order: int):
        self.base = base
        self.a = float(a)
        self.b = float(b)
        self.order = int(order)
        ja = base.jets(np.array([self.a]), self.order)[0]
        jb = base.jets(np.array([self.b]), self.order)[0]
        # ascending coefficients of the Taylor polynomials in (t - endpoint)
        self._pa = PolyCurve(ja)
        self._pb = PolyCurve(jb)

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        out = np.empty(ts.shape + (order + 1,), dtype=complex)
        left = ts < self.a
        right = ts > self.b
        mid = ~(left | right)
        if np.any(mid):
            out[mid] = self.base.jets(ts[mid], order)
        if np.any(left):
            out[left] = self._pa.jets(ts[left] - self.a, order)
        if np.any(right):
            out[right] = self._pb.jets(ts[right] - self.b, order)
        return out


class RampCurve(Curve):
    """(t - w)_+^q: identically zero left of w, a monomial ramp right of it.

    C^{q-1,1} across the seam; handy for budgets whose radicals must vanish
    on a stretch without the essentially-flat tail of an exponential cutoff.
    """

    def __init__(self, w: float, q: int = 3):
        if q < 1:
            raise ValueError("q must be a positive integer")
        self.w = float(w)
        self.q = int(q)

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        out = np.zeros(ts.shape + (order + 1,), dtype=complex)
        u = ts - self.w
        pos = u > 0
        if np.any(pos):
            coef = 1.0
            for k in range(min(order, self.q) + 1):
                out[pos, k] = coef * u[pos] ** (self.q - k) / _FACT[k]
                coef *= self.q - k
        return out


class SampledCurve(Curve):
    """Piecewise-linear curve through samples; derivative data is tagged
    finite-difference and only first order is meaningful."""

    source = "finite-difference"

    def __init__(self, grid, values):
        self.grid = np.asarray(grid, dtype=float)
        self.vals = np.asarray(values, dtype=complex)
        if self.grid.ndim != 1 or self.grid.shape != self.vals.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if not np.all(np.diff(self.grid) > 0):
            raise ValueError("grid must be strictly increasing")

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        out = np.zeros(ts.shape + (order + 1,), dtype=complex)
        re = np.interp(ts, self.grid, self.vals.real)
        im = np.interp(ts, self.grid, self.vals.imag)
        out[..., 0] = re + 1j * im
        if order >= 1:
            idx = np.clip(np.searchsorted(self.grid, ts, side="right") - 1, 0, len(self.grid) - 2)
            slopes = np.diff(self.vals) / np.diff(self.grid)
            out[..., 1] = slopes[idx]
        return out


class RadicalBranchCurve(Curve):
    """A continuous selection of base(t)**(1/k) over a fixed domain.

    The branch starts from the principal root at the left end of the domain
    and is continued by always taking the k-th root closest to the previous
    value (on a cached adaptive table).  On cost ties the first candidate in
    fixed rotation order wins, which makes the selection deterministic.
    """

    def __init__(self, base: Curve, k: int, domain, table_size: int = 1025, max_depth: int = 14):
        if k < 1:
            raise ValueError("k must be a positive integer")
        self.base = base
        self.k = int(k)
        self.domain = (float(domain[0]), float(domain[1]))
        self._units = np.exp(2j * np.pi * np.arange(self.k) / self.k)
        self._build_table(table_size, max_depth)

    def _principal(self, g):
        g = np.asarray(g, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            mag = np.abs(g) ** (1.0 / self.k)
        ang = np.angle(g) / self.k
        return mag * np.exp(1j * ang)

    def _continue_from(self, ref, g):
        """Pick the k-th root of each g closest to the matching ref value."""
        pr = self._principal(g)
        cand = pr[..., None] * self._units  # (..., k)
        d = np.abs(cand - np.asarray(ref, dtype=complex)[..., None])
        pick = np.argmin(d, axis=-1)
        return np.take_along_axis(cand, pick[..., None], axis=-1)[..., 0]

    def _build_table(self, n0: int, max_depth: int):
        a, b = self.domain
        ts = np.linspace(a, b, n0)
        for _ in range(max_depth):
            g = self.base.values(ts)
            w = np.empty_like(g)
            w[0] = self._principal(g[0])
            for i in range(1, len(ts)):
                w[i] = self._continue_from(w[i - 1], g[i])
            jump = np.abs(np.diff(w))
            scale = np.maximum(np.abs(w[:-1]), np.abs(w[1:]))
            bad = jump > 0.25 * np.maximum(scale, 1e-300)
            bad &= np.diff(ts) > 1e-13 * (b - a)
            if not np.any(bad):
                break
            mids = 0.5 * (ts[:-1][bad] + ts[1:][bad])
            ts = np.sort(np.concatenate([ts, mids]))
        else:
            g = self.base.values(ts)
            w = np.empty_like(g)
            w[0] = self._principal(g[0])
            for i in range(1, len(ts)):
                w[i] = self._continue_from(w[i - 1], g[i])
        self._ts = ts
        self._ws = w

    def branch_values(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        g = self.base.values(ts)
        idx = np.clip(np.searchsorted(self._ts, ts) - 1, 0, len(self._ts) - 1)
        ref = self._ws[idx]
        return self._continue_from(ref, g)

    def jets(self, ts, order):
        ts = np.asarray(ts, dtype=float)
        base_jets = self.base.jets(ts, order)
        w0 = self.branch_values(ts)
        return J.jpow(base_jets, 1.0 / self.k, w0=w0)

    def abs_derivative(self, ts) -> np.ndarray:
        """|(base^{1/k})'| = (1/k) |base'| |base|^{1/k - 1}, phase-free."""
        jb = self.base.jets(np.asarray(ts, dtype=float), 1)
        g, gp = jb[..., 0], jb[..., 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.abs(gp) * np.abs(g) ** (1.0 / self.k - 1.0) / self.k


def make_named_curve(name: str, **params) -> Curve:
    """Builtin analytic families addressable by name.

    "power": t**gamma; "radical-of": continuous branch g**(1/n) of a named g;
    "trig-poly": seeded random trigonometric polynomial.
    """
    if name == "power":
        return PowerCurve(params["gamma"])
    if name == "poly":
        coeffs = [complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
                  for c in params["coeffs"]]
        return PolyCurve(coeffs)
    if name == "radical-of":
        inner = params["of"]
        base = make_named_curve(inner.pop("name"), **inner) if isinstance(inner, dict) else inner
        return RadicalBranchCurve(base, int(params["n"]), params["domain"])
    if name == "trig-poly":
        return random_trig_curve(
            np.random.default_rng(int(params.get("seed", 0))),
            degree=int(params.get("degree", 3)),
            scale=float(params.get("scale", 1.0)),
            real=bool(params.get("real", False)),
        )
    raise KeyError(f"unknown builtin function family: {name!r}")


def random_trig_curve(rng, degree: int = 3, scale: float = 1.0, real: bool = False) -> TrigCurve:
    freqs = np.arange(-degree, degree + 1, dtype=float)
    coeffs = rng.normal(size=len(freqs)) + 1j * rng.normal(size=len(freqs))
    coeffs *= scale / np.sqrt(len(freqs))
    if real:
        # conjugate-symmetric spectrum gives a real-valued curve
        coeffs = coeffs + np.conj(coeffs[::-1])
    return TrigCurve(freqs, coeffs)
