"""Monic complex polynomials: evaluation, root solving, reconstruction,
Tschirnhausen reduction, resultants, model rescaling, and cluster splitting.

Coefficient convention: P(Z) = Z^n + sum_{j=1}^n a_j Z^{n-j}, so coeffs[j-1]
is the coefficient of Z^{n-j} and the leading coefficient is implicitly 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    AllCoefficientsZero,
    NonConvergence,
    NoSplit,
    SingularJacobian,
    ZeroDominant,
)


@dataclass(frozen=True)
class MonicPolynomial:
    coeffs: tuple  # a_1 .. a_n

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if len(self.coeffs) < 1:
            raise ValueError("degree must be at least 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def full_coeffs(self) -> np.ndarray:
        """Coefficients including the leading 1, highest degree first."""
        return np.concatenate([[1.0 + 0j], self.array()])

    def to_json(self):
        return [[c.real, c.imag] for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "MonicPolynomial":
        return cls(tuple(complex(re, im) for re, im in data))


@dataclass(frozen=True)
class TschirnhausenPolynomial:
    """Z^n + sum_{j>=2} coeffs[j-2] Z^{n-j}; the subleading coefficient is
    identically zero and ``shift`` records the substitution a_1/n."""

    degree: int
    coeffs: tuple  # a~_2 .. a~_n
    shift: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        object.__setattr__(self, "shift", complex(self.shift))
        if len(self.coeffs) != self.degree - 1:
            raise ValueError("need exactly degree-1 reduced coefficients")

    def to_monic(self) -> MonicPolynomial:
        return MonicPolynomial((0j,) + self.coeffs)


@dataclass(frozen=True)
class RootMultiset:
    roots: tuple
    residual: float

    def array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=complex)

    def sorted(self) -> np.ndarray:
        r = self.array()
        return r[np.lexsort((r.imag, r.real))]


@dataclass(frozen=True)
class SplitResult:
    left: MonicPolynomial
    right: MonicPolynomial
    gap: float
    resultant_abs: float
    left_roots: tuple = field(default=(), compare=False)
    right_roots: tuple = field(default=(), compare=False)


def evaluate(P: MonicPolynomial, z):
    """Horner evaluation; accepts scalars or arrays."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for a in P.coeffs:
        out = out * z + a
    return out if out.ndim else complex(out)


def cauchy_bound(P: MonicPolynomial) -> float:
    mags = np.abs(P.array())
    if not mags.any():
        return 0.0
    return float(2.0 * np.max(mags ** (1.0 / np.arange(1, P.degree + 1))))


def _newton_polish(coeff_rows: np.ndarray, roots: np.ndarray, steps: int = 2) -> np.ndarray:
    """A few plain Newton steps to push converged roots to machine accuracy;
    only applied where it does not increase the residual."""
    z = roots
    for _ in range(steps):
        p = np.ones_like(z)
        dp = np.zeros_like(z)
        for j in range(coeff_rows.shape[1]):
            dp = dp * z + p
            p = p * z + coeff_rows[:, j][:, None]
        small = np.abs(dp) < 1e-300
        cand = z - np.where(small, 0.0, p / np.where(small, 1.0, dp))
        pc = np.ones_like(z)
        for j in range(coeff_rows.shape[1]):
            pc = pc * cand + coeff_rows[:, j][:, None]
        z = np.where(np.abs(pc) <= np.abs(p), cand, z)
    return z


def solve_roots(P: MonicPolynomial, tol: float = 1e-12) -> RootMultiset:
    """All roots at once via the Aberth-Ehrlich kernel.

    Deterministic for identical inputs; raises NonConvergence when the
    residual contract max|P(root)| <= tol*(1+cauchy_bound)^n cannot be met.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rows = P.array()[None, :]
    roots, _, ok = kernels.solve_batch(rows, tol=tol)
    if not ok[0]:
        raise NonConvergence(f"root solver did not converge for degree {P.degree}")
    roots = _newton_polish(rows, roots)
    res = float(np.max(np.abs(evaluate(P, roots[0]))))
    return RootMultiset(tuple(roots[0]), res)


def companion_roots(P: MonicPolynomial) -> np.ndarray:
    """Eigenvalues of the companion matrix; cross-check fallback solver."""
    n = P.degree
    C = np.zeros((n, n), dtype=complex)
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -P.array()[::-1]
    return np.linalg.eigvals(C)


def solve_batch_coeffs(coeff_rows: np.ndarray, tol: float = 1e-12):
    """Batched root solve of many monic polynomials of one degree."""
    coeff_rows = np.ascontiguousarray(coeff_rows, dtype=complex)
    roots, iters, ok = kernels.solve_batch(coeff_rows, tol=tol)
    if not np.all(ok):
        bad = int(np.flatnonzero(~ok)[0])
        raise NonConvergence(f"batched root solve failed at row {bad}")
    return _newton_polish(coeff_rows, roots)


def from_roots(roots) -> MonicPolynomial:
    roots = np.asarray(roots, dtype=complex)
    if roots.size == 0:
        raise ValueError("need at least one root")
    c = np.array([1.0 + 0j])
    for r in roots:
        c = np.convolve(c, np.array([1.0 + 0j, -r]))
    return MonicPolynomial(tuple(c[1:]))


def tschirnhausen(P: MonicPolynomial) -> TschirnhausenPolynomial:
    """Coefficients of P(Z - a_1/n): the exact binomial expansion."""
    n = P.degree
    s = P.coeffs[0] / n
    full = P.full_coeffs()  # a_0 = 1 first
    new = np.zeros(n + 1, dtype=complex)
    for j in range(n + 1):
        acc = 0j
        for ell in range(j + 1):
            acc += full[ell] * math.comb(n - ell, j - ell) * (-s) ** (j - ell)
        new[j] = acc
    return TschirnhausenPolynomial(n, tuple(new[2:]), shift=s)


def dominant_index(Q: TschirnhausenPolynomial) -> int:
    """Smallest k in {2..n} attaining max_j |a~_j|^{1/j}."""
    mags = np.abs(np.asarray(Q.coeffs))
    if not mags.any():
        raise AllCoefficientsZero("all reduced coefficients vanish")
    weighted = mags ** (1.0 / np.arange(2, Q.degree + 1))
    return int(np.argmax(weighted)) + 2


def rescale_to_model(Q: TschirnhausenPolynomial, k: int, branch_root=None) -> TschirnhausenPolynomial:
    """Rescale by the chosen k-th root of a~_k so the k-th coordinate is 1.

    ``branch_root`` is the continuous root choice w with w^k = a~_k; defaults
    to the principal branch.  The k-th output coordinate is set to 1 exactly.
    """
    ak = Q.coeffs[k - 2]
    if ak == 0:
        raise ZeroDominant(f"coefficient {k} vanishes; cannot rescale")
    if branch_root is None:
        w = abs(ak) ** (1.0 / k) * np.exp(1j * np.angle(ak) / k)
    else:
        w = complex(branch_root)
        if abs(w**k - ak) > 1e-6 * abs(ak):
            raise ValueError("branch_root is not a k-th root of the dominant coefficient")
    scaled = [aj * w ** (-(j)) for j, aj in zip(range(2, Q.degree + 1), Q.coeffs)]
    scaled[k - 2] = 1.0 + 0j
    return TschirnhausenPolynomial(Q.degree, tuple(scaled), shift=Q.shift)


def resultant(P: MonicPolynomial, Q: MonicPolynomial) -> complex:
    """Sylvester-matrix determinant; zero iff the two share a root."""
    p = P.full_coeffs()
    q = Q.full_coeffs()
    n, m = P.degree, Q.degree
    S = np.zeros((n + m, n + m), dtype=complex)
    for i in range(m):
        S[i, i : i + n + 1] = p
    for i in range(n):
        S[m + i, i : i + m + 1] = q
    return complex(np.linalg.det(S))


def _convolve_monic(b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Coefficients a_1..a_n of (monic b-poly)*(monic c-poly)."""
    fb = np.concatenate([[1.0 + 0j], b])
    fc = np.concatenate([[1.0 + 0j], c])
    return np.convolve(fb, fc)[1:]


def _split_jacobian(b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Jacobian of (b, c) -> coeffs(P_b * P_c); det = resultant(P_b, P_c)."""
    nb, nc = len(b), len(c)
    n = nb + nc
    Jm = np.zeros((n, n), dtype=complex)
    fc = np.concatenate([[1.0 + 0j], c])
    fb = np.concatenate([[1.0 + 0j], b])
    for i in range(1, nb + 1):  # d a_s / d b_i = c_{s-i}
        for s in range(1, n + 1):
            if 0 <= s - i <= nc:
                Jm[s - 1, i - 1] = fc[s - i]
    for i in range(1, nc + 1):
        for s in range(1, n + 1):
            if 0 <= s - i <= nb:
                Jm[s - 1, nb + i - 1] = fb[s - i]
    return Jm


def refine_split_newton(P: MonicPolynomial, guess: SplitResult, tol: float = 1e-12,
                        maxiter: int = 50) -> tuple:
    """Newton iteration on the coefficient map phi(b, c) = a.

    Returns (SplitResult, iterations).  Quadratically convergent from a
    cluster-accurate guess; raises SingularJacobian when the factors share a
    root to working precision.
    """
    a = P.array()
    b = guess.left.array().copy()
    c = guess.right.array().copy()
    scale = 1.0 + float(np.max(np.abs(a)))
    it = 0
    for it in range(1, maxiter + 1):
        r = _convolve_monic(b, c) - a
        if np.max(np.abs(r)) <= tol * scale:
            break
        Jm = _split_jacobian(b, c)
        det = np.linalg.det(Jm)
        if abs(det) < 1e-300 * scale:
            raise SingularJacobian("resultant is numerically zero")
        try:
            step = np.linalg.solve(Jm, r)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from exc
        b -= step[: len(b)]
        c -= step[len(b):]
    else:
        raise NonConvergence("split refinement hit the iteration cap")
    left = MonicPolynomial(tuple(b))
    right = MonicPolynomial(tuple(c))
    res = abs(resultant(left, right))
    if res == 0.0:
        raise SingularJacobian("refined factors share a root")
    return SplitResult(left, right, guess.gap, res, guess.left_roots, guess.right_roots), it


def _partition_score(points: np.ndarray, mask: np.ndarray):
    """(min cross distance) / (max intra diameter) for a binary partition."""
    left = points[mask]
    right = points[~mask]
    cross = np.abs(left[:, None] - right[None, :])
    gap = float(cross.min())

    def diam(x):
        if len(x) < 2:
            return 0.0
        return float(np.abs(x[:, None] - x[None, :]).max())

    d = max(diam(left), diam(right))
    ratio = math.inf if d == 0 else gap / d
    return gap, ratio


def split_clusters(P: MonicPolynomial, gap_factor: float = 1.5, tol: float = 1e-12) -> SplitResult:
    """Split P into two coprime monic factors by root clustering.

    Roots are first merged into proximity groups (never separating numerically
    identical roots, which would zero the resultant).  Candidate binary
    partitions of the groups are scored both in the plane and on the modulus
    line; the best ratio of inter-cluster distance to largest intra-cluster
    diameter wins and must exceed ``gap_factor``.
    """
    if P.degree < 2:
        raise NoSplit("degree-1 polynomial cannot split")
    rm = solve_roots(P, tol)
    roots = rm.array()
    scale = 1.0 + cauchy_bound(P)
    # proximity groups: union by distance below the solver's accuracy floor
    thr = max(1e-7 * scale, 10.0 * rm.residual ** (1.0 / P.degree) if rm.residual > 0 else 0.0)
    order = np.lexsort((roots.imag, roots.real))
    groups: list[list[int]] = []
    for idx in order:
        placed = False
        for g in groups:
            if abs(roots[g[0]] - roots[idx]) <= thr:
                g.append(int(idx))
                placed = True
                break
        if not placed:
            groups.append([int(idx)])
    if len(groups) < 2:
        raise NoSplit("all roots coincide; no binary partition exists", best_ratio=0.0)

    centers = np.array([roots[g].mean() for g in groups])
    moduli = np.abs(centers)
    best = None  # (ratio, metric_rank, mask_key, mask)
    for bits in range(1, 2 ** (len(groups) - 1)):
        mask = np.array([(bits >> i) & 1 == 1 for i in range(len(groups))])
        for rank, pts in enumerate((centers, moduli.astype(complex))):
            _, ratio = _partition_score(pts, mask)
            key = (-ratio, rank, bits)
            if best is None or key < best[0]:
                best = (key, mask)
    (neg_ratio, _, _), mask = best
    ratio = -neg_ratio
    if ratio <= gap_factor:
        raise NoSplit(
            f"best cluster ratio {ratio:.3g} does not exceed gap factor {gap_factor:.3g}",
            best_ratio=ratio,
        )

    left_idx = [i for g, m in zip(groups, mask) if m for i in g]
    right_idx = [i for g, m in zip(groups, mask) if not m for i in g]
    left_roots = roots[left_idx]
    right_roots = roots[right_idx]
    # deterministic orientation: the factor containing the lexicographically
    # smallest root goes left
    lmin = min((r.real, r.imag) for r in left_roots)
    rmin = min((r.real, r.imag) for r in right_roots)
    if rmin < lmin:
        left_roots, right_roots = right_roots, left_roots
    gap = float(np.min(np.abs(left_roots[:, None] - right_roots[None, :])))
    guess = SplitResult(
        from_roots(left_roots),
        from_roots(right_roots),
        gap,
        0.0,
        tuple(left_roots),
        tuple(right_roots),
    )
    refined, _ = refine_split_newton(P, guess, tol=tol)
    return refined


def min_cost_assignment(cost: np.ndarray) -> np.ndarray:
    """Exact minimum-cost assignment, lexicographically smallest on ties.

    Permutations are enumerated in lexicographic order for n <= 7 (first
    argmin is the lex-smallest tie); larger sizes fall back to the Hungarian
    algorithm, which is cost-exact but picks one optimum.
    """
    n = cost.shape[0]
    if n <= 7:
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
        totals = cost[np.arange(n)[None, :], perms].sum(axis=1)
        return perms[int(np.argmin(totals))]
    from scipy.optimize import linear_sum_assignment

    _, cols = linear_sum_assignment(cost)
    return cols
