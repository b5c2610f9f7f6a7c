"""Continuous root systems along parameter curves: matched tracking,
monodromy, box tracking, regularity reports, and the unordered-tuple metric.

Trajectories are identified with their piecewise-linear interpolants; the
L^p data of a tracked root integrates the interpolant's exact a.e.
derivative (per-step difference quotients), which is also what makes the
discrete Hoelder inequality exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .curves import PolyCurve, SampledCurve, TrigCurve, random_trig_curve
from .errors import MonodromyObstruction, RefinementCeiling, SizeMismatch
from .function_spaces import SampledFunction, holder_data, lp_norm, step_lp_norm, step_weak_lp
from .polynomials import min_cost_assignment, solve_batch_coeffs


@dataclass
class CurveFamily:
    """Parameterized monic polynomial family: degree, one coefficient curve
    per power, and the parameter domain."""

    degree: int
    coeffs: tuple  # Curve objects for a_1..a_n
    domain: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.degree:
            raise ValueError("need one coefficient curve per degree")
        self.domain = (float(self.domain[0]), float(self.domain[1]))

    def coeff_matrix(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        out = np.empty((len(ts), self.degree), dtype=complex)
        for j, c in enumerate(self.coeffs):
            out[:, j] = c.values(ts)
        return out

    @classmethod
    def from_samples(cls, grid, coeff_vectors, degree=None) -> "CurveFamily":
        grid = np.asarray(grid, dtype=float)
        coeff_vectors = np.asarray(coeff_vectors, dtype=complex)
        n = coeff_vectors.shape[1] if degree is None else degree
        curves = tuple(SampledCurve(grid, coeff_vectors[:, j]) for j in range(n))
        return cls(n, curves, (grid[0], grid[-1]))

    def coefficient_scale(self, samples: int = 1025) -> float:
        """max_j ||a_j||^{1/j} in C^{n-1,1} norm (sup of derivatives up to
        n-1 plus the Lipschitz constant of the top one).

        Sampled coefficient curves carry only first-order jets, so they go
        through the divided-difference estimator instead of the jet oracle.
        """
        n = self.degree
        best = 0.0
        for j, c in enumerate(self.coeffs, start=1):
            if isinstance(c, SampledCurve):
                hd = holder_data(SampledFunction(c.grid, c.vals), n - 1, 1.0)
            else:
                hd = holder_data(c, n - 1, 1.0, domain=self.domain, samples=samples)
            best = max(best, hd.cka_norm ** (1.0 / j))
        return best


@dataclass
class RootSystem:
    grid: np.ndarray
    trajectories: np.ndarray  # (n, len(grid)) matched branches
    max_step_jump: float
    refinement_depth: int

    @property
    def degree(self) -> int:
        return self.trajectories.shape[0]

    def branch(self, i: int) -> SampledFunction:
        return SampledFunction(self.grid, self.trajectories[i])

    def multiset_at(self, idx: int) -> np.ndarray:
        return self.trajectories[:, idx]

    def as_multivalued(self) -> "MultiValued":
        return MultiValued(self.grid, self.trajectories)

    def to_json(self):
        return {
            "grid": [float(t) for t in self.grid],
            "trajectories": [[[z.real, z.imag] for z in tr] for tr in self.trajectories],
            "max_step_jump": self.max_step_jump,
            "refinement_depth": self.refinement_depth,
        }

    def to_csv_rows(self):
        header = ["t"]
        for i in range(self.degree):
            header += [f"re_lambda_{i}", f"im_lambda_{i}"]
        yield tuple(header)
        for k, t in enumerate(self.grid):
            row = [repr(float(t))]
            for i in range(self.degree):
                z = self.trajectories[i, k]
                row += [repr(z.real), repr(z.imag)]
            yield tuple(row)


@dataclass
class MultiValued:
    """Unordered n-tuples over a grid; label order carries no meaning."""

    grid: np.ndarray
    values: np.ndarray  # (n, len(grid))

    @property
    def n(self) -> int:
        return self.values.shape[0]


def match_step(prev, next_) -> np.ndarray:
    """Minimum-total-squared-distance assignment between two root multisets.

    Returns perm with next_[perm[i]] continuing prev[i]; the lexicographically
    smallest permutation wins among cost ties.
    """
    prev = np.asarray(prev, dtype=complex)
    next_ = np.asarray(next_, dtype=complex)
    if prev.shape != next_.shape:
        raise SizeMismatch("multisets must have equal cardinality")
    cost = np.abs(prev[:, None] - next_[None, :]) ** 2
    return np.asarray(min_cost_assignment(cost), dtype=int)


_PERM_CACHE: dict = {}


def _perm_table(n: int) -> np.ndarray:
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    return _PERM_CACHE[n]


def _sigma_batch(prev_rows: np.ndarray, next_rows: np.ndarray) -> np.ndarray:
    """Per-step optimal permutations for many consecutive pairs at once;
    sigma[k] maps prev label j to its continuation index in next."""
    m, n = prev_rows.shape
    if n == 1:
        return np.zeros((m, 1), dtype=np.intp)
    if n <= 7:
        perms = _perm_table(n)
        cost = np.abs(prev_rows[:, :, None] - next_rows[:, None, :]) ** 2
        totals = cost[:, np.arange(n)[None, :], perms].sum(axis=2)
        return perms[np.argmin(totals, axis=1)]
    out = np.empty((m, n), dtype=np.intp)
    for k in range(m):
        out[k] = match_step(prev_rows[k], next_rows[k])
    return out


def chain_match(roots: np.ndarray) -> np.ndarray:
    """Align rows of solver output (m, n) into matched trajectories (n, m).

    Per-step optimal permutations between raw neighbors are computed in one
    batch and prefix-composed; assignment optimality is label-equivariant,
    so this equals matching each row against the already-aligned previous
    one.  Lexicographic tie-breaking matches :func:`match_step` because the
    permutation table is in lexicographic order and argmin takes the first
    minimum.
    """
    m, n = roots.shape
    if n == 1 or m == 1:
        return roots.T.copy()
    sigmas = _sigma_batch(roots[:-1], roots[1:])
    return _compose_chain(roots, sigmas)


def _compose_chain(roots: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    m, n = roots.shape
    aligned = np.empty_like(roots)
    aligned[0] = roots[0]
    pi = np.arange(n, dtype=np.intp)
    for k in range(1, m):
        pi = sigmas[k - 1][pi]
        aligned[k] = roots[k][pi]
    return aligned.T


def _matched_displacements(traj: np.ndarray) -> np.ndarray:
    return np.abs(np.diff(traj, axis=1)).max(axis=0)


def _min_separation_rows(roots: np.ndarray) -> np.ndarray:
    m, n = roots.shape
    d = np.abs(roots[:, :, None] - roots[:, None, :])
    d[:, np.arange(n), np.arange(n)] = np.inf
    return d.min(axis=(1, 2))


def _collision_ladders(family, probe: int, min_step_rel: float, solver_tol: float,
                       dip_rel: float = 0.2, max_dips: int = 16) -> np.ndarray:
    """Geometric node ladders into every dip of the minimal root separation.

    The probe grid is fixed, so the ladder set does not depend on the
    requested tracking grid."""
    a, b = family.domain
    span = b - a
    ts = np.linspace(a, b, probe)
    roots = solve_batch_coeffs(family.coeff_matrix(ts), tol=solver_tol)
    sep = _min_separation_rows(roots)
    ref = float(np.median(sep) + sep.max(initial=0.0))
    interior = (sep[1:-1] <= sep[:-2]) & (sep[1:-1] <= sep[2:])
    idx = np.flatnonzero(interior) + 1
    idx = idx[sep[idx] <= dip_rel * ref]
    if len(idx) == 0:
        return np.empty(0)
    idx = idx[np.argsort(sep[idx])][:max_dips]
    centers = []
    for i in idx:
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, probe - 1)]
        for _ in range(6):  # batched scan-minimization of the separation
            sub = np.linspace(lo, hi, 17)
            rsub = solve_batch_coeffs(family.coeff_matrix(sub), tol=solver_tol)
            j = int(np.argmin(_min_separation_rows(rsub)))
            lo, hi = sub[max(j - 1, 0)], sub[min(j + 1, 16)]
        centers.append(0.5 * (lo + hi))
    reach = 2.0 * span / probe
    lad = np.geomspace(min_step_rel * span, reach, 120)
    out = []
    for z in centers:
        for side in (-1.0, 1.0):
            pts = z + side * lad
            out.append(pts[(pts > a) & (pts < b)])
        if a < z < b:
            out.append(np.array([z]))
    return np.concatenate(out) if out else np.empty(0)


def track_curve(family: CurveFamily, initial_grid: int = 257, jump_tol: float = 1.5,
                max_depth: int = 40, grid=None, solver_tol: float = 1e-12,
                min_step_rel: float = 1e-9, collision_probe: int = 2049) -> RootSystem:
    """Matched root trajectories over the family's domain.

    Two refinement triggers, both floored at min_step_rel * domain:

    Refinement has two mechanisms, both floored at min_step_rel * domain:

    - a collision probe: minimal root separation is scanned on a fixed dense
      grid (independent of the requested grid), its dips are located, and a
      geometric ladder of nodes is forced into each dip.  A near-collision
      narrower than a base step hides unresolved derivative mass without any
      displacement anomaly, and whether plain bisection ever finds it would
      depend on the base sampling phase; probing makes the resolved feature
      set, hence every L^p report, stable under base-grid refinement.
    - displacement sweeps: a step whose matched displacement exceeds
      jump_tol * root_scale * (step / domain)^{1/n} is bisected.  The 1/n
      exponent is the worst-case Hoelder regularity of the roots, so a
      uniform budget would miss Z^n - t style cusps; the scale is the global
      Cauchy radius (a local scale would shrink exactly as fast as the
      displacement it gates and refine forever at a cusp).

    Near an exact collision no depth suffices; the remaining sub-floor step
    contributes O(step^{1 - p/n'}) to every L^p report.
    """
    n = family.degree
    span = family.domain[1] - family.domain[0]
    if grid is None:
        if initial_grid < 2:
            raise ValueError("initial_grid must be at least 2")
        ts = np.linspace(family.domain[0], family.domain[1], initial_grid)
        if collision_probe and n >= 2:
            ladders = _collision_ladders(family, collision_probe, min_step_rel, solver_tol)
            if len(ladders):
                ts = np.unique(np.concatenate([ts, ladders]))
    else:
        ts = np.asarray(grid, dtype=float)  # an explicit grid is used as-is

    def root_scale(mat):
        mags = np.abs(mat)
        with np.errstate(divide="ignore"):
            return float((mags ** (1.0 / np.arange(1, n + 1))).max(initial=0.0))
    coeffs = family.coeff_matrix(ts)
    roots = solve_batch_coeffs(coeffs, tol=solver_tol)
    scale = max(root_scale(coeffs), 1e-12)

    def step_data(prev_rows, next_rows):
        sig = _sigma_batch(prev_rows, next_rows)
        moved = np.abs(np.take_along_axis(next_rows, sig, axis=1) - prev_rows)
        return sig, moved.max(axis=1)

    sigmas, disp = step_data(roots[:-1], roots[1:])
    depth = 0
    while True:
        steps = np.diff(ts)
        thresh = jump_tol * scale * (steps / span) ** (1.0 / n)
        bad = (disp > thresh) & (steps > min_step_rel * span)
        if not np.any(bad):
            break
        if depth >= max_depth:
            raise RefinementCeiling(
                f"{int(bad.sum())} steps still exceed the jump tolerance at depth {max_depth}"
            )
        mids = 0.5 * (ts[:-1][bad] + ts[1:][bad])
        new_roots = solve_batch_coeffs(family.coeff_matrix(mids), tol=solver_tol)
        m_old = len(ts)
        ts = np.concatenate([ts, mids])
        order = np.argsort(ts, kind="stable")
        roots = np.concatenate([roots, new_roots])[order]
        ts = ts[order]
        # only steps whose endpoints include a new node need rematching
        is_new = np.concatenate([np.zeros(m_old, bool), np.ones(len(mids), bool)])[order]
        touched = is_new[:-1] | is_new[1:]
        old_sigmas, old_disp = sigmas, disp
        sigmas = np.empty((len(ts) - 1, n), dtype=np.intp)
        disp = np.empty(len(ts) - 1)
        keep_old = ~touched
        old_index = np.cumsum(~is_new) - 1  # position in the pre-insert arrays
        src = old_index[:-1][keep_old]
        sigmas[keep_old] = old_sigmas[src]
        disp[keep_old] = old_disp[src]
        if np.any(touched):
            sig_new, disp_new = step_data(roots[:-1][touched], roots[1:][touched])
            sigmas[touched] = sig_new
            disp[touched] = disp_new
        depth += 1

    traj = _compose_chain(roots, sigmas)
    return RootSystem(ts, traj, float(disp.max(initial=0.0)), depth)


def monodromy_loop(family: CurveFamily, initial_grid: int = 257, jump_tol: float = 0.05,
                   closure_tol: float = 1e-9, stability_passes: int = 2) -> tuple:
    """Permutation induced on the start multiset by tracking once around a
    closed coefficient loop; re-tracked at doubled resolution until stable."""
    a, b = family.domain
    ca = family.coeff_matrix(np.array([a]))[0]
    cb = family.coeff_matrix(np.array([b]))[0]
    scale = max(1.0, float(np.max(np.abs(ca))))
    if np.max(np.abs(ca - cb)) > closure_tol * scale:
        raise ValueError("family is not closed: endpoint coefficients differ")
    prev = None
    grid_n = initial_grid
    for _ in range(stability_passes + 1):
        system = track_curve(family, initial_grid=grid_n, jump_tol=jump_tol)
        perm = tuple(int(i) for i in match_step(system.trajectories[:, -1], system.trajectories[:, 0]))
        if prev is not None and perm == prev:
            return perm
        prev = perm
        grid_n = 2 * (grid_n - 1) + 1
    return prev


@dataclass(frozen=True)
class RegularityReport:
    p: float
    lp_of_derivative: float
    w1p_norm: float
    holder_gamma: float
    holder_quotient: float
    weak_lp_of_derivative: float
    weak_lp_critical: float  # quasinorm at p = n/(n-1): data only, no pass/fail
    coefficient_scale: float
    bound_ratio: float
    in_guaranteed_range: bool
    interval_length: float

    def to_json(self):
        return {
            "p": self.p,
            "lp_of_derivative": self.lp_of_derivative,
            "w1p_norm": self.w1p_norm,
            "holder_gamma": self.holder_gamma,
            "holder_quotient": self.holder_quotient,
            "weak_lp_of_derivative": self.weak_lp_of_derivative,
            "weak_lp_critical": self.weak_lp_critical,
            "coefficient_scale": self.coefficient_scale,
            "bound_ratio": self.bound_ratio,
            "in_guaranteed_range": self.in_guaranteed_range,
            "interval_length": self.interval_length,
        }


def holder_quotient(grid: np.ndarray, vals: np.ndarray, gamma: float,
                    chunk: int = 512) -> float:
    """sup over all sample pairs of |v(t)-v(s)| / |t-s|^gamma."""
    best = 0.0
    n = len(grid)
    for start in range(0, n - 1, chunk):
        end = min(start + chunk, n - 1)
        for i in range(start, end):
            dt = grid[i + 1 :] - grid[i]
            dv = np.abs(vals[i + 1 :] - vals[i])
            q = dv / dt**gamma
            m = float(q.max(initial=0.0))
            if m > best:
                best = m
    return best


def regularity_report(system: RootSystem, branch: int, p: float, family: CurveFamily,
                      coefficient_scale: float = None, with_holder: bool = True) -> RegularityReport:
    """L^p / weak-L^p / W^{1,p} / Hoelder data of one matched branch plus the
    ratio against the coefficient scale max_j ||a_j||^{1/j}_{C^{n-1,1}}.

    The derivative is the interpolant's exact step density, so the Hoelder
    quotient at exponent 1 - 1/p is bounded by the L^p norm by construction.
    ``with_holder=False`` skips the quadratic-cost pair supremum.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    lam = system.trajectories[branch]
    ts = system.grid
    steps = np.diff(ts)
    slopes = np.abs(np.diff(lam)) / steps
    lp_d = step_lp_norm(slopes, steps, p)
    weak_d = step_weak_lp(slopes, steps, p)
    lp_val = lp_norm(SampledFunction(ts, lam), p)
    gamma = 1.0 - 1.0 / p
    hq = holder_quotient(ts, lam, gamma) if with_holder else 0.0
    scale = family.coefficient_scale() if coefficient_scale is None else coefficient_scale
    length = float(ts[-1] - ts[0])
    denom = max(1.0, length ** (1.0 / p)) * scale
    n = family.degree
    p_crit = n / (n - 1.0) if n > 1 else math.inf
    weak_crit = step_weak_lp(slopes, steps, p_crit) if n > 1 else 0.0
    return RegularityReport(
        p=p,
        lp_of_derivative=lp_d,
        w1p_norm=lp_val + lp_d,
        holder_gamma=gamma,
        holder_quotient=hq,
        weak_lp_of_derivative=weak_d,
        weak_lp_critical=weak_crit,
        coefficient_scale=scale,
        bound_ratio=lp_d / denom if denom > 0 else math.inf,
        in_guaranteed_range=p < n / (n - 1.0) if n > 1 else True,
        interval_length=length,
    )


# ---------------------------------------------------------------------------
# unordered-tuple metric and intrinsic energy


def an_distance(x, y) -> float:
    """min over permutations of the l2 distance between unordered tuples."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise SizeMismatch("tuples must have equal length")
    perm = match_step(x, y)
    return float(np.sqrt(np.sum(np.abs(x - y[perm]) ** 2)))


def an_distances_pairwise(values: np.ndarray) -> np.ndarray:
    """Metric increments d(f(t_{i+1}), f(t_i)) along a multivalued sample."""
    n, m = values.shape
    out = np.empty(m - 1)
    if n <= 7:
        perms = _perm_table(n)
        a = values[:, :-1].T  # (m-1, n)
        b = values[:, 1:].T
        cost = np.abs(a[:, :, None] - b[:, None, :]) ** 2
        totals = cost[:, np.arange(n)[None, :], perms].sum(axis=2)  # (m-1, n!)
        out = np.sqrt(totals.min(axis=1))
    else:
        for i in range(m - 1):
            out[i] = an_distance(values[:, i], values[:, i + 1])
    return out


def intrinsic_w1p_energy(f: MultiValued, p: float) -> float:
    """L^p norm of the metric difference quotients of an unordered-tuple map
    (piecewise-constant metric derivative)."""
    if p < 1:
        raise ValueError("p must be at least 1")
    steps = np.diff(f.grid)
    quotients = an_distances_pairwise(f.values) / steps
    return step_lp_norm(quotients, steps, p)


# ---------------------------------------------------------------------------
# multiparameter box tracking


@dataclass
class BoxFamily:
    """Coefficients over an axis-parallel box in the plane: each entry is a
    callable (x, y) -> complex accepting arrays."""

    degree: int
    coeff_fns: tuple
    box: tuple  # ((x0, x1), (y0, y1))

    def coeff_matrix(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        out = np.empty((len(xs), self.degree), dtype=complex)
        for j, fn in enumerate(self.coeff_fns):
            out[:, j] = fn(xs, ys)
        return out


@dataclass
class BoxReport:
    grid_x: np.ndarray
    grid_y: np.ndarray
    branch: np.ndarray  # (len(grid_y), len(grid_x)) stitched single branch
    lp_dx: float
    lp_dy: float
    p: float
    obstruction: object = None

    def to_json(self):
        out = {
            "p": self.p,
            "lp_dx": None if math.isnan(self.lp_dx) else self.lp_dx,
            "lp_dy": None if math.isnan(self.lp_dy) else self.lp_dy,
            "obstruction": None,
        }
        if self.obstruction is not None:
            cell, perm = self.obstruction
            out["obstruction"] = {"cell": list(cell), "permutation": list(perm)}
        return out


def _line_roots(bf: BoxFamily, xs, ys, tol=1e-12) -> np.ndarray:
    coeffs = bf.coeff_matrix(np.broadcast_to(xs, np.broadcast(xs, ys).shape).ravel(),
                             np.broadcast_to(ys, np.broadcast(xs, ys).shape).ravel())
    return solve_batch_coeffs(coeffs, tol=tol)


def _cycle_permutation(bf: BoxFamily, cell_x, cell_y, samples_per_edge: int = 33):
    """Root permutation around one grid-cell boundary cycle."""
    x0, x1 = cell_x
    y0, y1 = cell_y
    sx = np.linspace(x0, x1, samples_per_edge)
    sy = np.linspace(y0, y1, samples_per_edge)
    path = (
        [(x, y0) for x in sx]
        + [(x1, y) for y in sy[1:]]
        + [(x, y1) for x in sx[::-1][1:]]
        + [(x0, y) for y in sy[::-1][1:]]
    )
    xs = np.array([p[0] for p in path])
    ys = np.array([p[1] for p in path])
    roots = _line_roots(bf, xs, ys)
    aligned = chain_match(roots)
    return tuple(int(i) for i in match_step(aligned[:, -1], aligned[:, 0]))


def track_box(bf: BoxFamily, p: float, grid: int = 17, detect: bool = False,
              samples_per_line: int = 129) -> BoxReport:
    """Track along axis-parallel lines over a box and stitch a single-valued
    branch when every grid-cell cycle has trivial monodromy.

    A nontrivial cell permutation raises MonodromyObstruction (or lands in
    the report when ``detect`` is set).
    """
    (x0, x1), (y0, y1) = bf.box
    gx = np.linspace(x0, x1, grid)
    gy = np.linspace(y0, y1, grid)

    obstruction = None
    identity = None
    for i in range(grid - 1):
        for j in range(grid - 1):
            perm = _cycle_permutation(bf, (gx[i], gx[i + 1]), (gy[j], gy[j + 1]))
            if identity is None:
                identity = tuple(range(len(perm)))
            if perm != identity:
                obstruction = ((i, j), perm)
                if not detect:
                    raise MonodromyObstruction(
                        f"nontrivial monodromy around cell ({i}, {j})",
                        cell=(i, j),
                        permutation=perm,
                    )
                break
        if obstruction is not None:
            break

    if obstruction is not None:
        return BoxReport(gx, gy, None, math.nan, math.nan, p, obstruction)

    # stitch: bottom row once, then every column line seeded from it
    fine_x = np.linspace(x0, x1, samples_per_line)
    fine_y = np.linspace(y0, y1, samples_per_line)
    bottom = chain_match(_line_roots(bf, fine_x, np.full_like(fine_x, y0)))
    n = bf.degree
    branch = np.empty((samples_per_line, samples_per_line), dtype=complex)
    lp_dy_pow = 0.0
    col_idx = np.arange(samples_per_line)
    for ci in col_idx:
        col = chain_match(_line_roots(bf, np.full_like(fine_y, fine_x[ci]), fine_y))
        perm = match_step(col[:, 0], bottom[:, ci])
        # reorder column branches so label 0 continues the bottom row's label 0
        inv = np.empty(n, dtype=np.intp)
        for a_, b_ in enumerate(perm):
            inv[b_] = a_
        col = col[inv]
        branch[:, ci] = col[0]
        steps = np.diff(fine_y)
        slopes = np.abs(np.diff(col[0])) / steps
        weight = _trap_weight(fine_x, ci)
        lp_dy_pow += weight * float((slopes**p * steps).sum())
    lp_dx_pow = 0.0
    for ri in range(samples_per_line):
        row = branch[ri]
        steps = np.diff(fine_x)
        slopes = np.abs(np.diff(row)) / steps
        weight = _trap_weight(fine_y, ri)
        lp_dx_pow += weight * float((slopes**p * steps).sum())
    return BoxReport(fine_x, fine_y, branch, lp_dx_pow ** (1.0 / p), lp_dy_pow ** (1.0 / p), p)


def _trap_weight(grid: np.ndarray, i: int) -> float:
    if i == 0:
        return 0.5 * (grid[1] - grid[0])
    if i == len(grid) - 1:
        return 0.5 * (grid[-1] - grid[-2])
    return 0.5 * (grid[i + 1] - grid[i - 1])


# ---------------------------------------------------------------------------
# builtin families


def family_zn_minus_t(n: int, domain=(0.0, 1.0)) -> CurveFamily:
    """Z^n - t: the sharpness family with roots t^{1/n}."""
    coeffs = [PolyCurve([0.0]) for _ in range(n - 1)] + [PolyCurve([0.0, -1.0])]
    return CurveFamily(n, tuple(coeffs), domain)


def family_zn_minus_loop(n: int, turns: float = 1.0) -> CurveFamily:
    """Z^n - e^{i theta}, theta from 0 to 2 pi turns (closed loop)."""
    coeffs = [PolyCurve([0.0]) for _ in range(n - 1)] + [TrigCurve([turns], [-1.0])]
    return CurveFamily(n, tuple(coeffs), (0.0, 2.0 * np.pi))


def family_random_trig(n: int, seed: int, domain=(0.0, 1.0), degree: int = 6,
                       target_scale: float = None) -> CurveFamily:
    """Seeded random trigonometric coefficient curves, rescaled so that
    max_j ||a_j||^{1/j}_{C^{n-1,1}} hits a target in [0.1, 10]."""
    rng = np.random.default_rng(seed)
    curves = [random_trig_curve(rng, degree=degree, scale=1.0) for _ in range(n)]
    fam = CurveFamily(n, tuple(curves), domain)
    current = fam.coefficient_scale(samples=257)
    if target_scale is None:
        target_scale = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
    s = target_scale / current
    scaled = tuple(c * (s ** (j + 1)) for j, c in enumerate(curves))
    return CurveFamily(n, scaled, domain)
