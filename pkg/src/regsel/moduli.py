"""Sampled moduli and regularity verifiers.

Three kinds of quantities live here:

* exact regularity constants for linear operators (from the SVD),
* sampled Lipschitz / calmness moduli for black-box function oracles,
* brute-force verifiers for the distance inequalities that define metric
  regularity and the Aubin property on grid-sampled graphs.

The sampled estimators interleave uniform exploration with shrinking-scale
refinement around the incumbent maximizer, so for a fixed seed the estimate
is nondecreasing in the sample budget and converges to the exact operator
norm on linear oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import convex
from .errors import ContractError, ShapeError
from .linalg import (SURJECTIVITY_RTOL, as_matrix, as_vector, svd)

# Relative slack used when comparing sampled distances against kappa times
# sampled distances; absorbs roundoff in grid arithmetic.
CHECK_RTOL = 1e-9
CHECK_ATOL = 1e-15

LSC_FLOOR = 1e-3
LSC_TAIL_TOL = 1e-6


def fmt_float(x: float) -> str:
    """17 significant digits; round-trips float64 exactly."""
    return format(float(x), ".17g")


def _fmt_witness(witness: tuple) -> str:
    groups = []
    for w in witness:
        arr = np.atleast_1d(np.asarray(w, dtype=float))
        groups.append(" ".join(fmt_float(v) for v in arr))
    return ";".join(groups)


CSV_HEADER = "kind,value,radius,samples,seed,verdict,witness"


@dataclass
class ModulusEstimate:
    """One sampled or exact modulus, serializable to a CSV row."""

    kind: str
    value: float
    radius: float = float("nan")
    samples: int = 0
    seed: int = 0
    witness: tuple = ()

    def csv_row(self) -> str:
        return ",".join([
            self.kind,
            fmt_float(self.value),
            fmt_float(self.radius) if np.isfinite(self.radius) else "",
            str(self.samples) if self.samples else "",
            str(self.seed),
            "",
            _fmt_witness(self.witness),
        ])


@dataclass
class CheckReport:
    """Outcome of a distance-inequality verification."""

    kind: str
    ok: bool
    kappa: float
    worst_ratio: float
    witness: tuple = ()
    detail: str = ""

    def csv_row(self) -> str:
        return ",".join([
            self.kind,
            fmt_float(self.worst_ratio),
            "",
            "",
            "",
            "pass" if self.ok else "fail",
            _fmt_witness(self.witness),
        ])


def csv_report(items: Sequence) -> str:
    lines = [CSV_HEADER]
    lines += [item.csv_row() for item in items]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# exact linear moduli


def reg_linear(op) -> float:
    """Regularity modulus of a linear operator: 1/sigma_min, +inf if not onto."""
    m = as_matrix(op)
    if m.shape[0] > m.shape[1]:
        return float("inf")
    s = svd(m).s
    smin = s[m.shape[0] - 1]
    if not smin > SURJECTIVITY_RTOL * s[0]:
        return float("inf")
    return float(1.0 / smin)


# ---------------------------------------------------------------------------
# sampled lip / clm


def _draw_in_ball(rng, center: np.ndarray, radius: float) -> np.ndarray:
    d = center.size
    v = rng.standard_normal(d)
    n = np.linalg.norm(v)
    u = v / n if n > 0 else np.eye(d)[0]
    r = rng.random() ** (1.0 / d)
    return center + radius * r * u


def _clip_ball(p: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    delta = p - center
    n = np.linalg.norm(delta)
    if n <= radius:
        return p
    return center + delta * (radius / n)


# Refinement scales cycle through powers of two so there is always a batch of
# proposals at the length scale matching the incumbent's remaining error.
_SCALE_CYCLE = 28

# Difference quotients over gaps below this fraction of the radius are
# dominated by cancellation noise in f(x) - f(x') and can overshoot the true
# modulus, so such pairs are skipped.
_MIN_GAP_FRAC = 1e-7


def _sup_center_quotient(f, center, radius, samples, seed):
    """sup ||f(x)-f(center)|| / ||x-center|| over a sampled ball."""
    rng = np.random.default_rng(seed)
    fc = as_vector(f(center))
    d = center.size
    best_q = -np.inf
    best_x = None
    for i in range(samples):
        if i % 3 != 0 and best_x is not None:
            scale = 2.0 ** (-((i // 3) % _SCALE_CYCLE))
            x = _clip_ball(best_x + scale * radius * rng.standard_normal(d),
                           center, radius)
        else:
            x = _draw_in_ball(rng, center, radius)
        gap = np.linalg.norm(x - center)
        if gap < _MIN_GAP_FRAC * radius:
            continue
        q = np.linalg.norm(as_vector(f(x)) - fc) / gap
        if q > best_q:
            best_q, best_x = q, x
    if best_x is None:
        return 0.0, (center,)
    return float(best_q), (best_x, center)


def _sup_pair_quotient(f, center, radius, samples, seed):
    """sup ||f(x)-f(x')|| / ||x-x'|| over sampled pairs in a ball."""
    rng = np.random.default_rng(seed)
    d = center.size
    best_q = -np.inf
    best_pair = None
    for i in range(samples):
        if i % 3 != 0 and best_pair is not None:
            scale = 2.0 ** (-((i // 3) % _SCALE_CYCLE))
            x = _clip_ball(best_pair[0] + scale * radius * rng.standard_normal(d),
                           center, radius)
            xp = _clip_ball(best_pair[1] + scale * radius * rng.standard_normal(d),
                            center, radius)
        else:
            x = _draw_in_ball(rng, center, radius)
            xp = _draw_in_ball(rng, center, radius)
        gap = np.linalg.norm(x - xp)
        if gap < _MIN_GAP_FRAC * radius:
            continue
        q = np.linalg.norm(as_vector(f(x)) - as_vector(f(xp))) / gap
        if q > best_q:
            best_q, best_pair = q, (x, xp)
    if best_pair is None:
        return 0.0, (center, center)
    return float(best_q), best_pair


def lip_estimate(f: Callable, center, radius: float, samples: int = 3000,
                 seed: int = 0) -> ModulusEstimate:
    """Sampled Lipschitz modulus of ``f`` on the closed ball around center.

    The pair sample always includes the center-anchored stream used by
    clm_estimate with the same seed, so lip_estimate(...) >= clm_estimate(...)
    holds exactly, not just in the limit.
    """
    center = as_vector(center)
    if not radius > 0:
        raise ContractError(f"radius must be positive, got {radius}")
    if samples < 1:
        raise ContractError("samples must be >= 1")
    q_pair, wit_pair = _sup_pair_quotient(f, center, radius, samples, seed)
    q_clm, wit_clm = _sup_center_quotient(f, center, radius, samples, seed)
    if q_clm > q_pair:
        q_pair, wit_pair = q_clm, wit_clm
    return ModulusEstimate(kind="lip", value=q_pair, radius=radius,
                           samples=samples, seed=seed, witness=wit_pair)


def clm_estimate(f: Callable, center, radius: float, samples: int = 3000,
                 seed: int = 0) -> ModulusEstimate:
    """Sampled calmness modulus: difference quotients anchored at center."""
    center = as_vector(center)
    if not radius > 0:
        raise ContractError(f"radius must be positive, got {radius}")
    if samples < 1:
        raise ContractError("samples must be >= 1")
    q, wit = _sup_center_quotient(f, center, radius, samples, seed)
    return ModulusEstimate(kind="clm", value=q, radius=radius, samples=samples,
                           seed=seed, witness=wit)


# ---------------------------------------------------------------------------
# grid-sampled graphs and distance-inequality checks


@dataclass
class SampledMapping:
    """Set-valued mapping sampled on a grid around a base pair.

    ``forward`` maps a point to the list of its values (a single vector, a
    list of vectors, or a 2-D array of stacked rows). ``radius_x`` bounds the
    sampled domain ball, ``radius_y`` the image ball used for test values.
    """

    forward: Callable
    x_base: np.ndarray
    y_base: np.ndarray
    radius_x: float
    radius_y: float

    def __post_init__(self):
        self.x_base = as_vector(self.x_base)
        self.y_base = as_vector(self.y_base)
        if not (self.radius_x > 0 and self.radius_y > 0):
            raise ContractError("sampled mapping needs positive radii")
        vals = self.values_at(self.x_base)
        gap = min(np.linalg.norm(v - self.y_base) for v in vals)
        if gap > 1e-12:
            raise ContractError(
                f"base point is not on the graph (gap {gap:.3e})")

    def values_at(self, x) -> list[np.ndarray]:
        out = self.forward(np.asarray(x, dtype=float))
        if isinstance(out, np.ndarray):
            if out.ndim <= 1:
                return [as_vector(out, dim=self.y_base.size)]
            return [as_vector(row, dim=self.y_base.size) for row in out]
        if np.isscalar(out):
            return [as_vector(out, dim=self.y_base.size)]
        vals = [as_vector(v, dim=self.y_base.size) for v in out]
        if not vals:
            raise ShapeError("forward oracle returned no values")
        return vals


def _axis_counts(dim: int, grid) -> list[int]:
    if np.isscalar(grid):
        counts = [int(grid)] * dim
    else:
        counts = [int(g) for g in grid]
        if len(counts) != dim:
            raise ShapeError(f"grid spec has {len(counts)} entries for dim {dim}")
    # Odd counts keep the base point on the grid.
    return [c + 1 if c % 2 == 0 else c for c in counts]


def _sample_graph(mapping: SampledMapping, grid):
    dim = mapping.x_base.size
    counts = _axis_counts(dim, grid)
    axes = [np.linspace(mapping.x_base[i] - mapping.radius_x,
                        mapping.x_base[i] + mapping.radius_x, counts[i])
            for i in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    keep = np.linalg.norm(pts - mapping.x_base, axis=1) <= mapping.radius_x + 1e-12
    pts = pts[keep]
    gx_idx, gy = [], []
    for i, x in enumerate(pts):
        for v in mapping.values_at(x):
            gx_idx.append(i)
            gy.append(v)
    gy = np.array(gy)
    gx_idx = np.array(gx_idx, dtype=int)
    in_ball = np.linalg.norm(gy - mapping.y_base, axis=1) <= mapping.radius_y + 1e-12
    y_test = np.unique(gy[in_ball], axis=0)
    return pts, gy, gx_idx, y_test


def _ratio_scan(mapping: SampledMapping, grid):
    """Worst d(x, fib(y)) / d(y, F(x)) over the sampled graph, with witness."""
    pts, gy, gx_idx, y_test = _sample_graph(mapping, grid)
    n_pts = pts.shape[0]
    worst = 0.0
    witness = ()
    for y in y_test:
        dist_rows = np.linalg.norm(gy - y, axis=1)
        d_y_fx = np.full(n_pts, np.inf)
        np.minimum.at(d_y_fx, gx_idx, dist_rows)
        match_tol = CHECK_RTOL * (1.0 + np.linalg.norm(y))
        fib = pts[d_y_fx <= match_tol]
        if fib.shape[0] == 0:
            # y came from the graph, so this cannot happen; guard anyway.
            finite = np.isfinite(d_y_fx) & (d_y_fx > 0)
            j = int(np.argmin(np.where(finite, d_y_fx, np.inf)))
            return float("inf"), (pts[j], y)
        d_x_fib = np.sqrt(
            ((pts[:, None, :] - fib[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
        denom = np.where(d_y_fx > 0, d_y_fx, np.inf)
        ratios = d_x_fib / denom
        bad_zero = (d_y_fx == 0) & (d_x_fib > 0)
        if np.any(bad_zero):
            j = int(np.argmax(bad_zero))
            return float("inf"), (pts[j], y)
        j = int(np.argmax(ratios))
        if ratios[j] > worst:
            worst = float(ratios[j])
            witness = (pts[j], y)
    return worst, witness


def sampled_reg(mapping: SampledMapping, grid=11) -> ModulusEstimate:
    """Worst sampled regularity ratio over the grid graph."""
    worst, witness = _ratio_scan(mapping, grid)
    return ModulusEstimate(kind="reg-sampled", value=worst,
                           radius=mapping.radius_x, witness=witness)


def verify_metric_regularity(mapping: SampledMapping, kappa: float,
                             grid=11) -> CheckReport:
    """Check d(x, F^{-1}(y)) <= kappa d(y, F(x)) on the sampled graph.

    x runs over the domain grid ball, y over graph values inside the image
    ball; inverse images are reconstructed from the sampled graph. The
    comparison carries a 1e-9 relative slack for grid roundoff.
    """
    if not kappa > 0:
        raise ContractError(f"kappa must be positive, got {kappa}")
    worst, witness = _ratio_scan(mapping, grid)
    ok = worst <= kappa * (1.0 + CHECK_RTOL) + CHECK_ATOL
    return CheckReport(kind="metric-regularity", ok=bool(ok), kappa=kappa,
                       worst_ratio=worst, witness=witness,
                       detail=f"worst ratio {worst:.6g} vs kappa {kappa:.6g}")


def verify_aubin(mapping: SampledMapping, kappa: float, grid=11) -> CheckReport:
    """Check the Aubin inequality for the inverse of the sampled graph.

    For sampled values y, y' and x in F^{-1}(y') inside the domain ball,
    requires d(x, F^{-1}(y)) <= kappa ||y' - y||. Equivalent to
    verify_metric_regularity with the same constant on the same graph.
    """
    if not kappa > 0:
        raise ContractError(f"kappa must be positive, got {kappa}")
    pts, gy, gx_idx, y_test = _sample_graph(mapping, grid)
    n_pts = pts.shape[0]
    fibers = []
    for y in y_test:
        dist_rows = np.linalg.norm(gy - y, axis=1)
        d_y_fx = np.full(n_pts, np.inf)
        np.minimum.at(d_y_fx, gx_idx, dist_rows)
        match_tol = CHECK_RTOL * (1.0 + np.linalg.norm(y))
        fibers.append(pts[d_y_fx <= match_tol])
    worst = 0.0
    witness = ()
    ok = True
    for a, y_from in enumerate(y_test):
        fib_from = fibers[a]
        if fib_from.shape[0] == 0:
            continue
        for b, y_to in enumerate(y_test):
            if a == b:
                continue
            gap_y = np.linalg.norm(y_from - y_to)
            if gap_y == 0.0:
                continue
            fib_to = fibers[b]
            if fib_to.shape[0] == 0:
                ok = False
                worst = float("inf")
                witness = (fib_from[0], y_from, y_to)
                continue
            dists = np.sqrt(((fib_from[:, None, :] - fib_to[None, :, :]) ** 2)
                            .sum(axis=2)).min(axis=1)
            j = int(np.argmax(dists))
            ratio = float(dists[j] / gap_y)
            if ratio > worst:
                worst = ratio
                witness = (fib_from[j], y_from, y_to)
            if dists[j] > kappa * gap_y * (1.0 + CHECK_RTOL) + CHECK_ATOL:
                ok = False
    return CheckReport(kind="aubin", ok=bool(ok), kappa=kappa,
                       worst_ratio=worst, witness=witness,
                       detail=f"worst ratio {worst:.6g} vs kappa {kappa:.6g}")


def lg_bound_check(op, g: Callable, center, kappa: float, lam: float,
                   radius: float = 0.5, grid=11, samples: int = 600,
                   seed: int = 0) -> tuple[CheckReport, ModulusEstimate]:
    """Perturbation bound check for a linear map plus a Lipschitz term.

    Preconditions: reg_linear(op) < kappa and sampled lip of g < lam < 1/kappa.
    Samples the regularity ratio of x -> op x + g(x) around the center and
    compares it against (1/kappa - lam)^{-1} + 1e-6.
    """
    m = as_matrix(op)
    center = as_vector(center, dim=m.shape[1])
    reg0 = reg_linear(m)
    if not reg0 < kappa:
        raise ContractError(
            f"kappa: need reg_linear(op) < kappa, got {reg0:.6g} >= {kappa:.6g}")
    if not lam < 1.0 / kappa:
        raise ContractError(
            f"lambda: need lam < 1/kappa, got {lam:.6g} >= {1.0 / kappa:.6g}")
    lip = lip_estimate(g, center, radius, samples=samples, seed=seed)
    if not lip.value < lam:
        raise ContractError(
            f"lambda: sampled lip {lip.value:.6g} is not below lam {lam:.6g}")

    def forward(x):
        return m @ x + as_vector(g(x), dim=m.shape[0])

    y_center = forward(center)
    image_radius = (svd(m).s[0] + lam) * radius + 1e-9
    mapping = SampledMapping(forward=forward, x_base=center, y_base=y_center,
                             radius_x=radius, radius_y=image_radius)
    measured, witness = _ratio_scan(mapping, grid)
    bound = 1.0 / (1.0 / kappa - lam)
    ok = measured <= bound + 1e-6
    report = CheckReport(
        kind="perturbation-bound", ok=bool(ok), kappa=kappa,
        worst_ratio=measured, witness=witness,
        detail=f"sampled reg {measured:.6g} vs bound {bound:.6g}")
    return report, lip


# ---------------------------------------------------------------------------
# lower-semicontinuity probes


def counterexample_mapping(y: float, k_max: int) -> np.ndarray:
    """Values {y} united with {y + 1/k : 0 < |k| <= k_max}, sorted."""
    if k_max < 1:
        raise ContractError(f"k_max must be >= 1, got {k_max}")
    ks = np.arange(1, k_max + 1, dtype=float)
    offsets = np.concatenate([[0.0], 1.0 / ks, -1.0 / ks])
    return np.sort(float(y) + offsets)


def truncated_counterexample(y_box: float = 0.1, x_box: float = 0.05,
                             k_max: int = 40) -> Callable:
    """Box truncation of the branch-union mapping, as a set map for probes.

    Returns a callable y -> 2-D array of value rows. Outside |y| <= y_box
    the value set is empty. The truncation removes the branch that would
    provide nearby values, which kills lower semicontinuity at the top edge.
    """

    def set_map(y):
        yv = float(np.atleast_1d(np.asarray(y, dtype=float))[0])
        if abs(yv) > y_box:
            return np.zeros((0, 1))
        vals = counterexample_mapping(yv, k_max)
        vals = vals[np.abs(vals) <= x_box]
        return vals.reshape(-1, 1)

    return set_map


@dataclass
class LscProbeReport:
    verdict: str
    witness_y: np.ndarray
    witness_x: np.ndarray
    approach: list = field(default_factory=list)
    distances: list = field(default_factory=list)
    floor: float = LSC_FLOOR
    tail_tol: float = LSC_TAIL_TOL

    @property
    def violated(self) -> bool:
        return self.verdict == "lsc-violated"


def _set_distance(value_set, x: np.ndarray) -> float:
    if isinstance(value_set, convex.ConvexSet):
        return value_set.distance(x)
    arr = np.asarray(value_set, dtype=float)
    if arr.size == 0:
        return float("inf")
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if x.size == 1 else arr.reshape(1, -1)
    return float(np.linalg.norm(arr - x, axis=1).min())


def lsc_probe(set_map: Callable, at: tuple, approach: Sequence,
              floor: float = LSC_FLOOR, tail_tol: float = LSC_TAIL_TOL) -> LscProbeReport:
    """Probe lower semicontinuity of a set map along an approach sequence.

    ``at`` is a pair (y, x) with x in set_map(y) up to 1e-9. The verdict is
    lsc-violated when every distance beyond the first three steps stays above
    ``floor`` while the sequence has converged (last step within tail_tol of
    y); anything else is lsc-consistent. The probe reports distances either
    way and never raises on empty value sets (their distance is +inf).
    """
    y, x = at
    y = as_vector(y)
    x = as_vector(x)
    base_gap = _set_distance(set_map(y), x)
    if not base_gap <= 1e-9:
        raise ContractError(
            f"probe point is not in set_map(y): distance {base_gap:.3e}")
    approach = [as_vector(p, dim=y.size) for p in approach]
    if not approach:
        raise ContractError("approach sequence is empty")
    distances = [_set_distance(set_map(p), x) for p in approach]
    tail_converged = np.linalg.norm(approach[-1] - y) <= tail_tol
    tail = distances[3:]
    violated = bool(tail) and tail_converged and all(d > floor for d in tail)
    return LscProbeReport(
        verdict="lsc-violated" if violated else "lsc-consistent",
        witness_y=y, witness_x=x, approach=approach, distances=distances,
        floor=floor, tail_tol=tail_tol)
