"""Iterated truncated projections for generalized equations.

Solves y in g(x) + F(x) near a base pair, where F^{-1} is available as a
convex-set oracle and g is a Lipschitz perturbation. Each step projects the
current iterate onto the inverse image of the corrected target, truncated to
a ball whose radius shrinks geometrically; the truncation radii are what
certify that the returned selection is calm with an explicit constant.

A base point with g(x_base) != 0 is handled by shifting the query, so the
solved inclusion is always stated at (x_base, y_base + g(x_base)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .convex import ConvexSet, Intersection, dykstra, truncate
from .errors import (ContractError, InfeasibilitySuspectedError, LocalityError,
                     NumericBreakdownError, RegularityError)
from .linalg import as_vector


@dataclass
class IterationConfig:
    """Constants driving the iteration.

    kappa bounds the regularity modulus of the linear part, lam the
    Lipschitz modulus of the perturbation, alpha sits strictly between kappa
    and 1/lam. tol is the stopping threshold on step lengths.
    """

    kappa: float
    lam: float
    alpha: float
    tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not self.kappa > 0:
            raise ContractError(f"kappa must be positive, got {self.kappa}")
        if self.lam < 0:
            raise ContractError(f"lambda must be >= 0, got {self.lam}")
        if not self.alpha > self.kappa:
            raise ContractError(
                f"alpha must exceed kappa, got alpha={self.alpha} kappa={self.kappa}")
        if self.lam > 0 and not self.alpha < 1.0 / self.lam:
            raise ContractError(
                f"alpha must stay below 1/lambda, got alpha={self.alpha} "
                f"1/lambda={1.0 / self.lam}")
        if not self.kappa * self.lam < 1.0:
            raise ContractError(
                f"kappa*lambda must be < 1, got {self.kappa * self.lam}")
        if not self.alpha * self.lam < 1.0:
            raise ContractError(
                f"alpha*lambda must be < 1, got {self.alpha * self.lam}")
        if not self.tol > 0:
            raise ContractError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ContractError(f"max_iter must be >= 1, got {self.max_iter}")

    @property
    def contraction(self) -> float:
        return self.alpha * self.lam

    @property
    def gamma(self) -> float:
        """Calmness constant certified for the selection."""
        return 2.0 * self.kappa / (1.0 - self.contraction)


def default_config(reg_value: float, sampled_lip: float, tol: float = 1e-10,
                   max_iter: int = 200) -> IterationConfig:
    """Default constant schedule from a measured regularity modulus and lip.

    kappa gets a 10% margin over the modulus, lambda a 20% margin over the
    sampled lip; alpha is the midpoint of its admissible interval. Rejected
    when the resulting kappa*lambda reaches 0.9.
    """
    if not np.isfinite(reg_value) or reg_value <= 0:
        raise ContractError(f"regularity modulus must be finite positive, got {reg_value}")
    if sampled_lip < 0:
        raise ContractError(f"sampled lip must be >= 0, got {sampled_lip}")
    kappa = 1.1 * reg_value
    lam = 1.2 * sampled_lip
    if kappa * lam >= 0.9:
        raise ContractError(
            f"kappa*lambda: default schedule rejected, {kappa * lam:.6g} >= 0.9")
    alpha = 0.5 * (kappa + 1.0 / lam) if lam > 0 else 2.0 * kappa
    return IterationConfig(kappa=kappa, lam=lam, alpha=alpha, tol=tol,
                           max_iter=max_iter)


@dataclass
class GeneralizedEquation:
    """Problem data: F^{-1} as a convex-set oracle plus a perturbation g.

    radius_x / radius_y bound the certified neighborhood of the base pair,
    radius_graph is the ambient graph-localization radius and must dominate
    both. For parametric perturbations g takes (x, p) and p_base is set.
    """

    finv: Callable[[np.ndarray], ConvexSet]
    g: Callable | None
    x_base: np.ndarray
    y_base: np.ndarray
    radius_x: float
    radius_y: float
    radius_graph: float
    p_base: np.ndarray | None = None

    def __post_init__(self):
        self.x_base = as_vector(self.x_base)
        self.y_base = as_vector(self.y_base)
        for name in ("radius_x", "radius_y", "radius_graph"):
            if not getattr(self, name) > 0:
                raise ContractError(f"{name} must be positive")
        if max(self.radius_x, self.radius_y) > self.radius_graph:
            raise ContractError(
                "radius_graph must dominate radius_x and radius_y")
        if self.p_base is not None:
            self.p_base = as_vector(self.p_base)
        base_set = self.finv(self.y_base)
        if not isinstance(base_set, ConvexSet):
            raise ContractError("finv must return ConvexSet instances")
        gap = membership_gap(base_set, self.x_base)
        if gap > 1e-9:
            raise ContractError(
                f"x_base is not in finv(y_base): gap {gap:.3e}")

    def g_value(self, x) -> np.ndarray:
        if self.g is None:
            return np.zeros(self.y_base.size)
        return as_vector(self.g(x), dim=self.y_base.size)


def membership_gap(s: ConvexSet, x) -> float:
    """Distance-style feasibility gap; worst member distance for intersections."""
    if isinstance(s, Intersection):
        return s.gap(x)
    return s.distance(x)


@dataclass
class IterationCertificate:
    """A-posteriori record of one solve."""

    kappa: float
    lam: float
    alpha: float
    tau: float
    gamma: float
    increments: list = field(default_factory=list)
    residual: float = float("nan")
    calm_ok: bool = False
    iterate_count: int = 0
    tail_bound: float = 0.0


def compute_tau(cfg: IterationConfig, radii: tuple[float, float]) -> float:
    """Certified query radius around y_base + g(x_base)."""
    a, b = radii
    if not (a > 0 and b > 0):
        raise ContractError("radii must be positive")
    tau = (1.0 - cfg.contraction) * min(a / (2.0 * cfg.kappa),
                                        b / (1.0 + cfg.kappa * cfg.lam))
    if not tau > 0:
        raise ContractError(f"certified radius collapsed to {tau}")
    return tau


def _project_truncated(base_set: ConvexSet, center: np.ndarray, radius: float,
                       start: np.ndarray, cfg: IterationConfig,
                       what: str) -> np.ndarray:
    trunc = truncate(base_set, center, radius)
    try:
        z = dykstra(trunc.members, start)
    except InfeasibilitySuspectedError as exc:
        raise RegularityError(
            f"{what}: truncated inverse image looks empty (gap {exc.gap:.3e}); "
            f"kappa={cfg.kappa:.6g} may be below the true regularity modulus "
            f"or lambda={cfg.lam:.6g} misestimated") from exc
    gap = membership_gap(trunc, z)
    if gap > 10.0 * cfg.tol:
        raise NumericBreakdownError(
            f"{what}: projection gap {gap:.3e} exceeds 10*tol")
    return z


def initial_selection(problem: GeneralizedEquation, cfg: IterationConfig,
                      y) -> np.ndarray:
    """Calm starting selection: project x_base onto the truncated fiber.

    ``y`` is a query for the unperturbed part, within radius_y of y_base.
    The truncation ball has radius kappa * ||y - y_base||, so the calm bound
    with constant kappa holds by construction.
    """
    y = as_vector(y, dim=problem.y_base.size)
    dev = float(np.linalg.norm(y - problem.y_base))
    if dev > problem.radius_y + 1e-12:
        raise LocalityError(
            f"query is {dev:.6g} from y_base, outside the image ball "
            f"{problem.radius_y:.6g}", bound=problem.radius_y)
    return _project_truncated(problem.finv(y), problem.x_base,
                              cfg.kappa * dev, problem.x_base, cfg,
                              "initial selection")


def iterate_step(problem: GeneralizedEquation, cfg: IterationConfig, y,
                 z_prev, z_curr) -> np.ndarray:
    """One corrector step of the iteration.

    Projects z_curr onto the inverse image of y - g(z_curr), truncated to
    the ball of radius alpha*lambda*||z_curr - z_prev|| around z_curr.
    Locality guards keep the iterate in the domain ball and the corrected
    target in the image ball.
    """
    y = as_vector(y, dim=problem.y_base.size)
    z_prev = as_vector(z_prev, dim=problem.x_base.size)
    z_curr = as_vector(z_curr, dim=problem.x_base.size)
    drift = float(np.linalg.norm(z_curr - problem.x_base))
    if drift > problem.radius_x + 1e-12:
        raise LocalityError(
            f"iterate drifted {drift:.6g} from x_base, outside the domain "
            f"ball {problem.radius_x:.6g}", bound=problem.radius_x)
    w = y - problem.g_value(z_curr)
    w_dev = float(np.linalg.norm(w - problem.y_base))
    if w_dev > problem.radius_y + 1e-12:
        raise LocalityError(
            f"corrected target is {w_dev:.6g} from y_base, outside the image "
            f"ball {problem.radius_y:.6g}", bound=problem.radius_y)
    radius = cfg.contraction * float(np.linalg.norm(z_curr - z_prev))
    return _project_truncated(problem.finv(w), z_curr, radius, z_curr, cfg,
                              "iterate step")


def solve(problem: GeneralizedEquation, cfg: IterationConfig,
          y) -> tuple[np.ndarray, IterationCertificate]:
    """Solve y in g(x) + F(x) for a query in the certified tau-ball.

    Returns the selection value and a certificate with the step lengths,
    the final membership residual, and the calmness verdict against
    gamma = 2*kappa/(1 - alpha*lambda).
    """
    y = as_vector(y, dim=problem.y_base.size)
    tau = compute_tau(cfg, (problem.radius_x, problem.radius_y))
    g_base = problem.g_value(problem.x_base)
    dev = float(np.linalg.norm(y - problem.y_base - g_base))
    if dev > tau + 1e-15:
        raise LocalityError(
            f"query is {dev:.6g} from the base output, outside the certified "
            f"radius tau={tau:.6g}", bound=tau)

    z0 = initial_selection(problem, cfg, y - g_base)

    # First corrector step carries the wider radius kappa*(1+kappa*lambda)*dev.
    w1 = y - problem.g_value(z0)
    w1_dev = float(np.linalg.norm(w1 - problem.y_base))
    if w1_dev > problem.radius_y + 1e-12:
        raise LocalityError(
            f"corrected target is {w1_dev:.6g} from y_base, outside the image "
            f"ball {problem.radius_y:.6g}", bound=problem.radius_y)
    radius1 = cfg.kappa * (1.0 + cfg.kappa * cfg.lam) * dev
    z1 = _project_truncated(problem.finv(w1), z0, radius1, z0, cfg,
                            "first corrector step")

    increments = [float(np.linalg.norm(z1 - z0))]
    z_prev, z_curr = z0, z1
    while increments[-1] > cfg.tol:
        if len(increments) >= cfg.max_iter:
            raise NumericBreakdownError(
                f"no convergence after {cfg.max_iter} steps; last increment "
                f"{increments[-1]:.3e}")
        z_next = iterate_step(problem, cfg, y, z_prev, z_curr)
        step = float(np.linalg.norm(z_next - z_curr))
        if increments[-1] > 0 and step > cfg.contraction * increments[-1] * (1 + 1e-6) + 1e-15:
            raise RegularityError(
                f"observed step ratio {step / increments[-1]:.6g} exceeds "
                f"alpha*lambda={cfg.contraction:.6g}; moduli misestimated")
        increments.append(step)
        z_prev, z_curr = z_curr, z_next

    x = z_curr
    final_set = problem.finv(y - problem.g_value(x))
    residual = membership_gap(final_set, x)
    if residual > 10.0 * cfg.tol:
        raise NumericBreakdownError(
            f"final membership residual {residual:.3e} exceeds 10*tol")
    gamma = cfg.gamma
    calm_ok = bool(np.linalg.norm(x - problem.x_base) <= gamma * dev + 1e-9)
    cert = IterationCertificate(
        kappa=cfg.kappa, lam=cfg.lam, alpha=cfg.alpha, tau=tau, gamma=gamma,
        increments=increments, residual=float(residual), calm_ok=calm_ok,
        iterate_count=len(increments),
        tail_bound=increments[-1] / (1.0 - cfg.contraction))
    return x, cert


def solve_implicit(problem: GeneralizedEquation, cfg: IterationConfig,
                   p) -> tuple[np.ndarray, IterationCertificate]:
    """Solve y_base in g(x, p) + F(x) for a parameter near p_base.

    Requires problem.g to accept (x, p) and problem.p_base to be set. The
    parameter enters only through the driving term g(x_base, p) - g(x_base,
    p_base), whose norm must stay within tau; the locality error reports the
    parameter when it does not.
    """
    if problem.p_base is None:
        raise ContractError("solve_implicit needs p_base on the problem")
    if problem.g is None:
        raise ContractError("solve_implicit needs a parametric perturbation g")
    p = as_vector(p, dim=problem.p_base.size)

    def g_fixed(x):
        return problem.g(x, p)

    fixed = GeneralizedEquation(
        finv=problem.finv, g=g_fixed, x_base=problem.x_base,
        y_base=problem.y_base, radius_x=problem.radius_x,
        radius_y=problem.radius_y, radius_graph=problem.radius_graph)
    g_ref = as_vector(problem.g(problem.x_base, problem.p_base),
                      dim=problem.y_base.size)
    target = problem.y_base + g_ref
    try:
        return solve(fixed, cfg, target)
    except LocalityError as exc:
        raise LocalityError(
            f"parameter p={np.array2string(p)} moves the driving term outside "
            f"the certified radius: {exc}", bound=exc.bound) from exc


@dataclass
class SweepRow:
    y: np.ndarray
    x: np.ndarray | None
    certificate: IterationCertificate | None
    error: str = ""


@dataclass
class SweepResult:
    rows: list
    tau: float
    gamma: float
    max_continuity_ratio: float
    jump_indices: list
    empirical_clm: float


def sweep(problem: GeneralizedEquation, cfg: IterationConfig,
          ys: Sequence) -> SweepResult:
    """Solve along a grid of queries and report continuity diagnostics.

    All grid points must lie in the certified tau-ball up front. Per-point
    solver failures are recorded in the rows; ratios between consecutive
    successful points feed the continuity report, and ratios above 10*gamma
    are flagged as jumps.
    """
    tau = compute_tau(cfg, (problem.radius_x, problem.radius_y))
    g_base = problem.g_value(problem.x_base)
    base_out = problem.y_base + g_base
    ys = [as_vector(y, dim=problem.y_base.size) for y in ys]
    if not ys:
        raise ContractError("sweep needs at least one grid point")
    for i, y in enumerate(ys):
        dev = float(np.linalg.norm(y - base_out))
        if dev > tau + 1e-15:
            raise LocalityError(
                f"grid point {i} is {dev:.6g} from the base output, outside "
                f"tau={tau:.6g}", bound=tau)
    rows: list[SweepRow] = []
    for y in ys:
        try:
            x, cert = solve(problem, cfg, y)
            rows.append(SweepRow(y=y, x=x, certificate=cert))
        except (RegularityError, NumericBreakdownError) as exc:
            rows.append(SweepRow(y=y, x=None, certificate=None, error=str(exc)))
    gamma = cfg.gamma
    max_ratio = 0.0
    jumps: list[int] = []
    for i in range(len(rows) - 1):
        r0, r1 = rows[i], rows[i + 1]
        if r0.x is None or r1.x is None:
            continue
        gap_y = float(np.linalg.norm(r0.y - r1.y))
        if gap_y == 0.0:
            continue
        ratio = float(np.linalg.norm(r0.x - r1.x)) / gap_y
        if ratio > max_ratio:
            max_ratio = ratio
        if ratio > 10.0 * gamma:
            jumps.append(i)
    emp_clm = 0.0
    for r in rows:
        if r.x is None:
            continue
        dev = float(np.linalg.norm(r.y - base_out))
        if dev > 0:
            emp_clm = max(emp_clm,
                          float(np.linalg.norm(r.x - problem.x_base)) / dev)
    return SweepResult(rows=rows, tau=tau, gamma=gamma,
                       max_continuity_ratio=max_ratio, jump_indices=jumps,
                       empirical_clm=emp_clm)
