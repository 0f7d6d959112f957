"""Constrained endpoint steering through the selection engine.

The continuous problem is to drive x' = f(x, u), x(0) = 0, to a target
endpoint x(1) = b with every control value inside a compact convex set.
Discretization is trapezoidal collocation on a uniform mesh with nodal
states and piecewise constant controls. The linear part of the dynamics
together with the endpoint rows and the lifted control constraints forms
the set-valued side; its graph is an intersection of affine constraints
with a product of convex sets, hence convex and closed. The nonlinear
remainder of f enters as the Lipschitz perturbation.

Internally the iteration runs in mesh-weighted coordinates (nodal values
scaled by sqrt(h)) so that the regularity modulus of the collocation
operator is mesh independent. Certificates are reported in the
discretized function-space norms: max_i N*|x_{i+1} - x_i| for states,
max_i |u_i| for controls.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from .convex import (AffineSet, Box, ConvexSet, Halfspaces, Intersection,
                     direction_grid)
from .errors import (ContractError, LocalityError, NumericBreakdownError,
                     RegularityError, ShapeError, UncontrollableError)
from .linalg import SURJECTIVITY_RTOL, as_matrix, as_vector, svd
from .moduli import ModulusEstimate, lip_estimate
from .selection import (GeneralizedEquation, IterationCertificate,
                        IterationConfig, compute_tau, default_config, solve)
from .smooth import FD_JACOBIAN_STEP

DEFAULT_MESH = 64
TAU_FLOOR = 0.065
QUADRATURE_POINTS = 128
DYNAMICS_RESIDUAL_TOL = 1e-8
CONTROL_MEMBERSHIP_TOL = 1e-7


@dataclass
class ControlProblem:
    """Steering problem data: dynamics oracle, control set, dimensions, mesh."""

    dynamics: Callable[[np.ndarray, np.ndarray], np.ndarray]
    control_set: ConvexSet
    state_dim: int
    control_dim: int
    mesh_size: int = DEFAULT_MESH

    def __post_init__(self):
        if self.state_dim < 1 or self.control_dim < 1:
            raise ContractError(
                f"dimensions must be positive, got state {self.state_dim} "
                f"control {self.control_dim}")
        if self.mesh_size < 2:
            raise ContractError(f"mesh size must be at least 2, got {self.mesh_size}")
        probe = as_vector(self.dynamics(np.zeros(self.state_dim),
                                        np.zeros(self.control_dim)))
        if probe.size != self.state_dim:
            raise ShapeError(
                f"dynamics returned dimension {probe.size}, expected {self.state_dim}")
        if not np.all(np.isfinite(probe)):
            raise ContractError("dynamics oracle not finite at the origin")
        if float(np.max(np.abs(probe))) > 1e-12:
            raise ContractError(
                f"dynamics must vanish at the rest point, got |f(0,0)| = "
                f"{float(np.max(np.abs(probe))):.3e}")
        if self.control_set.dim != self.control_dim:
            raise ShapeError(
                f"control set lives in dimension {self.control_set.dim}, "
                f"expected {self.control_dim}")
        if not self.control_set.contains(np.zeros(self.control_dim), tol=1e-9):
            raise ContractError("control set must contain the zero control")
        for j in range(self.control_dim):
            e = np.zeros(self.control_dim)
            e[j] = 1.0
            if not (np.isfinite(self.control_set.support(e))
                    and np.isfinite(self.control_set.support(-e))):
                raise ContractError(
                    f"control set unbounded along axis {j}; it must be compact")


@dataclass(frozen=True)
class DiscretizedSystem:
    """Linearization at the rest point plus mesh data."""

    a_matrix: np.ndarray
    b_matrix: np.ndarray
    state_dim: int
    control_dim: int
    mesh_size: int

    @property
    def step(self) -> float:
        return 1.0 / self.mesh_size

    @property
    def transition_factor(self) -> np.ndarray:
        """One-interval state propagator e^{A/N}; always invertible."""
        return expm(self.a_matrix * self.step)


def linearize(problem: ControlProblem) -> DiscretizedSystem:
    """Central-difference A = df/dx and B = df/du at the origin."""
    n, m = problem.state_dim, problem.control_dim
    f = problem.dynamics
    a = np.zeros((n, n))
    b = np.zeros((n, m))
    hstep = FD_JACOBIAN_STEP
    for j in range(n):
        e = np.zeros(n)
        e[j] = hstep
        a[:, j] = (f(e, np.zeros(m)) - f(-e, np.zeros(m))) / (2.0 * hstep)
    for j in range(m):
        e = np.zeros(m)
        e[j] = hstep
        b[:, j] = (f(np.zeros(n), e) - f(np.zeros(n), -e)) / (2.0 * hstep)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise NumericBreakdownError("linearization produced non-finite entries")
    return DiscretizedSystem(a_matrix=a, b_matrix=b, state_dim=n,
                             control_dim=m, mesh_size=problem.mesh_size)


def kalman_rank(sys: DiscretizedSystem) -> tuple[int, bool]:
    """Rank of [B, AB, ..., A^{n-1}B]; controllable iff it equals n."""
    a, b = sys.a_matrix, sys.b_matrix
    blocks = [b]
    for _ in range(sys.state_dim - 1):
        blocks.append(a @ blocks[-1])
    k = np.hstack(blocks)
    s = svd(k).s
    if s.size == 0 or s[0] <= 0.0:
        return 0, sys.state_dim == 0
    rank = int(np.sum(s > SURJECTIVITY_RTOL * s[0]))
    return rank, rank == sys.state_dim


def reachable_interior(sys: DiscretizedSystem, control_set: ConvexSet,
                       quad_points: int = QUADRATURE_POINTS,
                       direction_count: int | None = None,
                       seed: int = 0) -> tuple[bool, float]:
    """Does 0 lie interior to the integral of e^{At} B 𝒰 over [0, 1]?

    The support function of the reachable integral in direction d is the
    integral of support_𝒰(B^T e^{A^T t} d); midpoint quadrature of that
    integrand over a deterministic direction grid gives the margin. A
    positive margin certifies interiority up to grid and quadrature
    resolution.
    """
    if quad_points < 2:
        raise ContractError(f"need at least 2 quadrature points, got {quad_points}")
    n = sys.state_dim
    count = direction_count if direction_count is not None else max(2 * n, 16)
    dirs = direction_grid(n, count, seed=seed)
    mids = (np.arange(quad_points) + 0.5) / quad_points
    # m x n maps direction -> control-space direction, one per quadrature node
    lifted = [sys.b_matrix.T @ expm(sys.a_matrix.T * t) for t in mids]
    margin = np.inf
    for d in dirs:
        total = 0.0
        for w in lifted:
            total += control_set.support(w @ d)
        margin = min(margin, total / quad_points)
    return margin > 0.0, float(margin)


def _weighted_operator(sys: DiscretizedSystem) -> np.ndarray:
    """Collocation rows in density form plus endpoint rows, both acting on
    the sqrt(h)-scaled unknowns (x_1..x_N, u_0..u_{N-1}); x_0 = 0 is
    eliminated. Density rows keep their natural coefficients under the
    weighting, endpoint rows pick up sqrt(N)."""
    n, m, big_n = sys.state_dim, sys.control_dim, sys.mesh_size
    a, b = sys.a_matrix, sys.b_matrix
    nx = n * big_n
    mat = np.zeros((nx + n, nx + m * big_n))
    for i in range(big_n):
        r = slice(n * i, n * (i + 1))
        if i > 0:
            mat[r, n * (i - 1):n * i] = -big_n * np.eye(n) - a / 2.0
        mat[r, n * i:n * (i + 1)] = big_n * np.eye(n) - a / 2.0
        mat[r, nx + m * i:nx + m * (i + 1)] = -b
    mat[nx:, n * (big_n - 1):nx] = np.sqrt(big_n) * np.eye(n)
    return mat


def _lift_control_set(control_set: ConvexSet, sys: DiscretizedSystem) -> Halfspaces:
    """Per-interval control constraints as halfspaces on the scaled unknowns."""
    n, m, big_n = sys.state_dim, sys.control_dim, sys.mesh_size
    nx = n * big_n
    dim = nx + m * big_n
    sq = np.sqrt(big_n)
    if isinstance(control_set, Box):
        if control_set.dim != m:
            raise ShapeError(f"control set dimension {control_set.dim}, expected {m}")
        if np.any(~np.isfinite(control_set.lower)) or np.any(~np.isfinite(control_set.upper)):
            raise ContractError("control set must be compact")
        rows = np.zeros((2 * m * big_n, dim))
        offs = np.zeros(2 * m * big_n)
        for i in range(big_n):
            for j in range(m):
                col = nx + m * i + j
                rows[2 * (m * i + j), col] = sq
                offs[2 * (m * i + j)] = control_set.upper[j]
                rows[2 * (m * i + j) + 1, col] = -sq
                offs[2 * (m * i + j) + 1] = -control_set.lower[j]
        return Halfspaces(rows, offs)
    if isinstance(control_set, Halfspaces):
        base_rows = as_matrix(control_set.normals)
        if base_rows.shape[1] != m:
            raise ShapeError(
                f"control set dimension {base_rows.shape[1]}, expected {m}")
        k = base_rows.shape[0]
        rows = np.zeros((k * big_n, dim))
        offs = np.zeros(k * big_n)
        for i in range(big_n):
            rows[k * i:k * (i + 1), nx + m * i:nx + m * (i + 1)] = base_rows * sq
            offs[k * i:k * (i + 1)] = control_set.offsets
        return Halfspaces(rows, offs)
    raise ContractError(
        f"control set of type {type(control_set).__name__} is not supported; "
        "use a box or halfspaces")


def _remainder(problem: ControlProblem, sys: DiscretizedSystem):
    """Nonlinearity minus linearization at the collocation points, acting on
    and returning sqrt(h)-scaled vectors."""
    n, m, big_n = sys.state_dim, sys.control_dim, sys.mesh_size
    a, b = sys.a_matrix, sys.b_matrix
    f = problem.dynamics
    nx = n * big_n
    sq = np.sqrt(big_n)

    def g(scaled):
        scaled = np.asarray(scaled, dtype=float)
        states = np.vstack([np.zeros(n), (scaled[:nx] * sq).reshape(big_n, n)])
        controls = (scaled[nx:] * sq).reshape(big_n, m)
        out = np.zeros(nx + n)
        for i in range(big_n):
            mean = 0.5 * (f(states[i], controls[i]) + f(states[i + 1], controls[i]))
            linear = a @ (0.5 * (states[i] + states[i + 1])) + b @ controls[i]
            out[n * i:n * (i + 1)] = linear - mean
        return out / sq

    return g


def _unscale(scaled: np.ndarray, sys: DiscretizedSystem) -> tuple[np.ndarray, np.ndarray]:
    n, m, big_n = sys.state_dim, sys.control_dim, sys.mesh_size
    nx = n * big_n
    sq = np.sqrt(big_n)
    states = np.vstack([np.zeros(n), (scaled[:nx] * sq).reshape(big_n, n)])
    controls = (scaled[nx:] * sq).reshape(big_n, m)
    return states, controls


@dataclass
class SteeringSetup:
    """Precomputed steering data shared across queries on one problem."""

    problem: ControlProblem
    sys: DiscretizedSystem
    operator: np.ndarray
    equation: GeneralizedEquation
    config: IterationConfig
    tau: float
    tau_target: float
    lip: ModulusEstimate
    calm_bound: float
    rank_verdict: bool
    interior_verdict: bool | None

    def query(self, b) -> np.ndarray:
        b = as_vector(b, dim=self.sys.state_dim)
        y = np.zeros(self.operator.shape[0])
        y[-self.sys.state_dim:] = b
        return y


def steering_setup(problem: ControlProblem, sys: DiscretizedSystem | None = None,
                   tau_target: float = TAU_FLOOR, tol: float = 1e-11,
                   samples: int = 400, seed: int = 0,
                   max_iter: int = 200) -> SteeringSetup:
    """Build the discretized generalized equation and its constant schedule.

    Controllability is gated first (rank test, then the interior test only
    if the rank test fails). The Lipschitz modulus of the remainder is
    sampled on the ball the correctors of a tau-sized query live in; the
    recorded estimate keeps that radius. The locality radii on the equation
    are the larger ones required to certify tau.
    """
    if sys is None:
        sys = linearize(problem)
    rank, rank_ok = kalman_rank(sys)
    interior_ok: bool | None = None
    if not rank_ok:
        interior_ok, _ = reachable_interior(sys, problem.control_set, seed=seed)
        if not interior_ok:
            raise UncontrollableError(
                f"rank test gives {rank} < {sys.state_dim} and the reachable "
                "set has empty interior at 0",
                rank_verdict=rank_ok, interior_verdict=interior_ok)
    if tau_target <= 0:
        raise ContractError(f"tau target must be positive, got {tau_target}")

    mat = _weighted_operator(sys)
    fact = svd(mat)
    smin = fact.s[mat.shape[0] - 1]
    if smin <= SURJECTIVITY_RTOL * fact.s[0]:
        raise RegularityError(
            "collocation operator is not surjective; the discretized "
            "problem has no regularity modulus")
    kappa = 1.1 / smin

    g = _remainder(problem, sys)
    # correctors of a tau-sized query stay within kappa*(1+kappa*lam)*tau
    # of the base; 1.55 covers the schedule's margins there
    lip = lip_estimate(g, np.zeros(mat.shape[1]),
                       radius=1.55 * kappa * tau_target,
                       samples=samples, seed=seed)
    try:
        cfg = default_config(1.0 / smin, lip.value, tol=tol, max_iter=max_iter)
    except ContractError as exc:
        raise RegularityError(
            f"constant schedule rejected for the steering problem: {exc}") from exc

    stretch = 1.0 / (1.0 - cfg.contraction)
    radius_x = 2.0 * cfg.kappa * tau_target * stretch * 1.02
    radius_y = (1.0 + cfg.kappa * cfg.lam) * tau_target * stretch * 1.02
    lifted = _lift_control_set(problem.control_set, sys)

    def finv(w):
        return Intersection([AffineSet(mat, w), lifted])

    equation = GeneralizedEquation(
        finv=finv, g=g,
        x_base=np.zeros(mat.shape[1]), y_base=np.zeros(mat.shape[0]),
        radius_x=radius_x, radius_y=radius_y,
        radius_graph=2.0 * (radius_x + radius_y))
    tau = compute_tau(cfg, (radius_x, radius_y))

    calm_bound = _transported_calm_bound(sys, fact, cfg)
    return SteeringSetup(problem=problem, sys=sys, operator=mat,
                         equation=equation, config=cfg, tau=tau,
                         tau_target=tau_target, lip=lip,
                         calm_bound=calm_bound, rank_verdict=rank_ok,
                         interior_verdict=interior_ok)


def _transported_calm_bound(sys: DiscretizedSystem, fact, cfg: IterationConfig) -> float:
    """Calmness constant in the reporting norms.

    The engine certifies gamma = 2*kappa/(1 - alpha*lambda) in the scaled
    Euclidean norm. Reported ratios use max_i N|x_{i+1}-x_i| + max_i |u_i|,
    so the pseudoinverse is re-measured row by row in those coordinates and
    the same series factor and kappa margin are applied.
    """
    n, m, big_n = sys.state_dim, sys.control_dim, sys.mesh_size
    nx = n * big_n
    r = n * big_n + n
    pinv = fact.vt[:r].T @ (fact.u / fact.s[:r]).T
    sq = np.sqrt(big_n)
    diff = np.zeros((nx, nx + m * big_n))
    for i in range(big_n):
        rr = slice(n * i, n * (i + 1))
        if i > 0:
            diff[rr, n * (i - 1):n * i] = -big_n * sq * np.eye(n)
        diff[rr, n * i:n * (i + 1)] = big_n * sq * np.eye(n)
    sel = np.zeros((m * big_n, nx + m * big_n))
    for j in range(m * big_n):
        sel[j, nx + j] = sq
    row_norm_diff = float(np.max(np.linalg.norm(diff @ pinv, axis=1)))
    row_norm_sel = float(np.max(np.linalg.norm(sel @ pinv, axis=1)))
    return 2.0 * 1.1 * (row_norm_diff + row_norm_sel) / (1.0 - cfg.contraction)


@dataclass
class SteeringResult:
    """Trajectory, control values, and the certified ratios for one target."""

    states: np.ndarray
    controls: np.ndarray
    target: np.ndarray
    endpoint_error: float
    calm_ratio: float
    calm_bound: float
    dynamics_residual: float
    tau: float
    certificate: IterationCertificate

    def csv_lines(self) -> list[str]:
        """Rows t_i, state components, control components (blank past N-1)."""
        from .moduli import fmt_float
        n = self.states.shape[1]
        m = self.controls.shape[1]
        big_n = self.controls.shape[0]
        header = (["t"] + [f"x{j + 1}" for j in range(n)]
                  + [f"u{j + 1}" for j in range(m)])
        lines = [",".join(header)]
        for i in range(big_n + 1):
            cells = [fmt_float(i / big_n)]
            cells += [fmt_float(v) for v in self.states[i]]
            if i < big_n:
                cells += [fmt_float(v) for v in self.controls[i]]
            else:
                cells += [""] * m
            lines.append(",".join(cells))
        return lines


def _trajectory_norms(states: np.ndarray, controls: np.ndarray, mesh: int) -> float:
    """Discretized |x'|_inf + esssup |u| seminorm of a trajectory pair."""
    slope = mesh * np.max(np.abs(np.diff(states, axis=0))) if states.shape[0] > 1 else 0.0
    bound = np.max(np.abs(controls)) if controls.size else 0.0
    return float(slope + bound)


def steer(problem: ControlProblem, sys: DiscretizedSystem | None = None,
          b=None, setup: SteeringSetup | None = None,
          tau_target: float | None = None, tol: float = 1e-11,
          samples: int = 400, seed: int = 0) -> SteeringResult:
    """Steer the origin to endpoint b with admissible controls.

    Solves the discretized generalized equation for the query whose only
    nonzero rows are the endpoint target. Raises UncontrollableError when
    both controllability tests fail, LocalityError when |b| exceeds the
    certified radius, and NumericBreakdownError when the returned
    trajectory violates the dynamics or control-membership contracts.
    """
    if b is None:
        raise ContractError("steer needs a target endpoint")
    if setup is None:
        if sys is None:
            sys = linearize(problem)
        b = as_vector(b, dim=sys.state_dim)
        target = tau_target if tau_target is not None else max(
            TAU_FLOOR, 1.3 * float(np.linalg.norm(b)))
        setup = steering_setup(problem, sys, tau_target=target, tol=tol,
                               samples=samples, seed=seed)
    sys = setup.sys
    b = as_vector(b, dim=sys.state_dim)

    scaled, cert = solve(setup.equation, setup.config, setup.query(b))
    states, controls = _unscale(scaled, sys)

    h = sys.step
    f = problem.dynamics
    residual = 0.0
    for i in range(sys.mesh_size):
        mean = 0.5 * (f(states[i], controls[i]) + f(states[i + 1], controls[i]))
        gap = states[i + 1] - states[i] - h * mean
        residual = max(residual, float(np.max(np.abs(gap))))
    if residual > DYNAMICS_RESIDUAL_TOL:
        raise NumericBreakdownError(
            f"trajectory violates the discretized dynamics by {residual:.3e}")
    for i in range(sys.mesh_size):
        if not problem.control_set.contains(controls[i], tol=CONTROL_MEMBERSHIP_TOL):
            raise NumericBreakdownError(
                f"control value at interval {i} leaves the admissible set")

    norm_b = float(np.linalg.norm(b))
    ratio = _trajectory_norms(states, controls, sys.mesh_size) / norm_b if norm_b > 0 else 0.0
    endpoint_error = float(np.linalg.norm(states[-1] - b))
    return SteeringResult(states=states, controls=controls, target=b.copy(),
                          endpoint_error=endpoint_error, calm_ratio=ratio,
                          calm_bound=setup.calm_bound,
                          dynamics_residual=residual, tau=setup.tau,
                          certificate=cert)


@dataclass
class ControlSweep:
    """Steering results over a target grid with worst-case ratios.

    results and errors run parallel to the target grid; a failed target
    leaves None in results and the failure message in errors.
    """

    results: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    max_calm_ratio: float = 0.0
    max_continuity_ratio: float = 0.0
    calm_bound: float = np.inf
    tau: float = np.inf


def calm_sweep(problem: ControlProblem, sys: DiscretizedSystem | None = None,
               targets: Sequence | None = None, tau_target: float | None = None,
               tol: float = 1e-11, samples: int = 400,
               seed: int = 0) -> ControlSweep:
    """Steer every target on a grid and report worst calm/continuity ratios.

    Continuity ratios compare adjacent targets: the difference of the two
    trajectory pairs in the discretized sup norms over the distance of the
    targets.
    """
    if targets is None or len(targets) == 0:
        raise ContractError("calm_sweep needs a nonempty target grid")
    if sys is None:
        sys = linearize(problem)
    grid = [as_vector(t, dim=sys.state_dim) for t in targets]
    worst = max(float(np.linalg.norm(t)) for t in grid)
    target = tau_target if tau_target is not None else max(TAU_FLOOR, 1.3 * worst)
    setup = steering_setup(problem, sys, tau_target=target, tol=tol,
                           samples=samples, seed=seed)
    sweep = ControlSweep(calm_bound=setup.calm_bound, tau=setup.tau)
    for t in grid:
        try:
            res = steer(problem, sys, t, setup=setup)
        except (LocalityError, RegularityError, NumericBreakdownError) as exc:
            sweep.results.append(None)
            sweep.errors.append(str(exc))
            continue
        sweep.results.append(res)
        sweep.errors.append("")
        sweep.max_calm_ratio = max(sweep.max_calm_ratio, res.calm_ratio)
    for prev, cur in zip(sweep.results, sweep.results[1:]):
        if prev is None or cur is None:
            continue
        dist = float(np.linalg.norm(cur.target - prev.target))
        if dist <= 0:
            continue
        num = _trajectory_norms(cur.states - prev.states,
                                cur.controls - prev.controls, sys.mesh_size)
        sweep.max_continuity_ratio = max(sweep.max_continuity_ratio, num / dist)
    return sweep


def simulate_trapezoidal(dynamics: Callable, state_dim: int, controls: np.ndarray,
                         start: np.ndarray | None = None,
                         tol: float = 1e-14, max_inner: int = 100) -> np.ndarray:
    """Integrate the implicit trapezoidal recursion for given interval controls.

    Serves as the independent feasibility check for steering output: a
    trajectory solves the discretized problem iff it matches this recursion
    from the same start under the same controls.
    """
    controls = np.atleast_2d(np.asarray(controls, dtype=float))
    big_n = controls.shape[0]
    h = 1.0 / big_n
    x = np.zeros(state_dim) if start is None else as_vector(start, dim=state_dim)
    out = np.zeros((big_n + 1, state_dim))
    out[0] = x
    for i in range(big_n):
        u = controls[i]
        fi = as_vector(dynamics(x, u), dim=state_dim)
        z = x + h * fi
        converged = False
        for _ in range(max_inner):
            znew = x + 0.5 * h * (fi + as_vector(dynamics(z, u), dim=state_dim))
            if np.max(np.abs(znew - z)) < tol:
                z = znew
                converged = True
                break
            z = znew
        if not converged:
            raise NumericBreakdownError(
                f"implicit trapezoidal step {i} did not settle in {max_inner} sweeps")
        x = z
        out[i + 1] = x
    return out


def endpoint_order_ratios(problem: ControlProblem, control_value,
                          meshes: Sequence[int] = (32, 64, 128),
                          ref_mesh: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint errors of the trapezoidal map under mesh doubling.

    Holds the control constant, integrates on each mesh and on a fine
    reference mesh, and returns (errors, ratios of consecutive errors).
    Second order convergence shows as ratios near 4.
    """
    value = as_vector(control_value, dim=problem.control_dim)
    if any(meshes[i + 1] != 2 * meshes[i] for i in range(len(meshes) - 1)):
        raise ContractError(f"meshes must double, got {tuple(meshes)}")
    if ref_mesh <= max(meshes):
        raise ContractError("reference mesh must exceed the tested meshes")
    reference = simulate_trapezoidal(
        problem.dynamics, problem.state_dim,
        np.tile(value, (ref_mesh, 1)))[-1]
    errors = []
    for mesh in meshes:
        end = simulate_trapezoidal(problem.dynamics, problem.state_dim,
                                   np.tile(value, (mesh, 1)))[-1]
        errors.append(float(np.linalg.norm(end - reference)))
    errors = np.array(errors)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = errors[:-1] / errors[1:]
    return errors, ratios
