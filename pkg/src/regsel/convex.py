"""Closed convex sets with metric projections.

The catalogue is deliberately small: affine solution sets, boxes, balls,
halfspace systems, and finite intersections of those. Every set answers
project / contains / support / distance, which is all the selection
iteration needs. Projections onto intersections run Dykstra's alternating
scheme, which converges to the metric projection for closed convex members.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from .errors import ContractError, InfeasibilitySuspectedError, ShapeError
from .linalg import SURJECTIVITY_RTOL, as_matrix, as_vector, svd

DYKSTRA_TOL = 1e-10
DYKSTRA_MAX_ROUNDS = 10000


class ConvexSet:
    """Base interface; concrete sets override the four queries."""

    dim: int

    def project(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def distance(self, x) -> float:
        x = as_vector(x, dim=self.dim)
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x, tol: float = 1e-9) -> bool:
        return self.distance(x) <= tol

    def support(self, d) -> float:
        """Support value sup{<d, x> : x in set}; +inf when unbounded."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class AffineSet(ConvexSet):
    """Solution set {x : op @ x = rhs}.

    The system must be consistent; rank-deficient rows are fine as long as
    the right-hand side lies in the range. Projection uses an orthonormal
    row-space basis from one SVD taken at construction.
    """

    def __init__(self, op, rhs):
        self.op = as_matrix(op)
        self.rhs = as_vector(rhs, dim=self.op.shape[0])
        self.dim = self.op.shape[1]
        fac = svd(self.op)
        cutoff = SURJECTIVITY_RTOL * fac.s[0] if fac.s[0] > 0 else 0.0
        rank = int(np.sum(fac.s > cutoff))
        if rank == 0 and np.linalg.norm(self.rhs) > 1e-12:
            raise ContractError("affine system has zero operator but nonzero rhs")
        self._rowspace = fac.vt[:rank]  # orthonormal rows spanning row space
        if rank > 0:
            x0 = fac.vt[:rank].T @ ((fac.u[:, :rank].T @ self.rhs) / fac.s[:rank])
        else:
            x0 = np.zeros(self.dim)
        resid = np.linalg.norm(self.op @ x0 - self.rhs)
        if resid > 1e-9 * (1.0 + np.linalg.norm(self.rhs)):
            raise ContractError(
                f"inconsistent affine system, residual {resid:.3e}")
        self._anchor = x0

    def project(self, x):
        x = as_vector(x, dim=self.dim)
        r = self._rowspace
        if r.shape[0] == 0:
            return x.copy()
        return x - r.T @ (r @ (x - self._anchor))

    def distance(self, x):
        x = as_vector(x, dim=self.dim)
        if self._rowspace.shape[0] == 0:
            return 0.0
        return float(np.linalg.norm(self._rowspace @ (x - self._anchor)))

    def support(self, d):
        d = as_vector(d, dim=self.dim)
        r = self._rowspace
        tangential = d if r.shape[0] == 0 else d - r.T @ (r @ d)
        if np.linalg.norm(tangential) > 1e-10 * max(1.0, np.linalg.norm(d)):
            return float("inf")
        return float(d @ self._anchor)

    def to_json(self):
        return {"type": "affine", "matrix": self.op.tolist(), "rhs": self.rhs.tolist()}


class Box(ConvexSet):
    """Axis-aligned box {x : lower <= x <= upper} with finite bounds."""

    def __init__(self, lower, upper):
        self.lower = as_vector(lower)
        self.upper = as_vector(upper, dim=self.lower.size)
        if np.any(self.lower > self.upper):
            raise ContractError("box has lower > upper in some coordinate")
        self.dim = self.lower.size

    def project(self, x):
        x = as_vector(x, dim=self.dim)
        return np.clip(x, self.lower, self.upper)

    def distance(self, x):
        x = as_vector(x, dim=self.dim)
        viol = np.maximum(0.0, np.maximum(self.lower - x, x - self.upper))
        return float(np.linalg.norm(viol))

    def support(self, d):
        d = as_vector(d, dim=self.dim)
        return float(np.sum(np.where(d >= 0, self.upper * d, self.lower * d)))

    def to_json(self):
        return {"type": "box", "lower": self.lower.tolist(), "upper": self.upper.tolist()}


class Ball(ConvexSet):
    """Euclidean ball; radius zero gives the singleton {center}."""

    def __init__(self, center, radius):
        self.center = as_vector(center)
        self.radius = float(radius)
        if not np.isfinite(self.radius) or self.radius < 0:
            raise ContractError(f"ball radius must be finite and >= 0, got {radius}")
        self.dim = self.center.size

    def project(self, x):
        x = as_vector(x, dim=self.dim)
        delta = x - self.center
        norm = np.linalg.norm(delta)
        if norm <= self.radius or norm == 0.0:
            return x.copy()
        return self.center + delta * (self.radius / norm)

    def distance(self, x):
        x = as_vector(x, dim=self.dim)
        return float(max(0.0, np.linalg.norm(x - self.center) - self.radius))

    def support(self, d):
        d = as_vector(d, dim=self.dim)
        return float(d @ self.center + self.radius * np.linalg.norm(d))

    def to_json(self):
        return {"type": "ball", "center": self.center.tolist(), "radius": self.radius}


class Halfspaces(ConvexSet):
    """Polyhedron {x : normals @ x <= offsets}; rows must be nonzero."""

    def __init__(self, normals, offsets):
        self.normals = as_matrix(normals)
        self.offsets = as_vector(offsets, dim=self.normals.shape[0])
        self.dim = self.normals.shape[1]
        norms = np.linalg.norm(self.normals, axis=1)
        if np.any(norms == 0.0):
            raise ContractError("halfspace normal row is zero")
        self._row_norms = norms
        # Axis-aligned systems reduce to a clamp, which keeps the selection
        # iteration cheap for control-set cylinders.
        nonzeros = np.count_nonzero(self.normals, axis=1)
        self._axis_aligned = bool(np.all(nonzeros == 1))
        if self._axis_aligned:
            lo = np.full(self.dim, -np.inf)
            hi = np.full(self.dim, np.inf)
            for row, off in zip(self.normals, self.offsets):
                j = int(np.nonzero(row)[0][0])
                c = row[j]
                if c > 0:
                    hi[j] = min(hi[j], off / c)
                else:
                    lo[j] = max(lo[j], off / c)
            if np.any(lo > hi):
                raise ContractError("halfspace system is empty (bounds cross)")
            self._lo, self._hi = lo, hi

    def project(self, x):
        x = as_vector(x, dim=self.dim)
        if self._axis_aligned:
            return np.clip(x, self._lo, self._hi)
        sets = [_SingleHalfspace(self.normals[i], self.offsets[i])
                for i in range(self.normals.shape[0])]
        return dykstra(sets, x)

    def distance(self, x):
        x = as_vector(x, dim=self.dim)
        if self._axis_aligned:
            viol = np.maximum(0.0, np.maximum(self._lo - x, x - self._hi))
            return float(np.linalg.norm(viol))
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x, tol: float = 1e-9):
        x = as_vector(x, dim=self.dim)
        viol = (self.normals @ x - self.offsets) / self._row_norms
        return bool(np.max(viol) <= tol)

    def support(self, d):
        d = as_vector(d, dim=self.dim)
        res = linprog(-d, A_ub=self.normals, b_ub=self.offsets,
                      bounds=[(None, None)] * self.dim, method="highs")
        if res.status == 3:
            return float("inf")
        if res.status == 2:
            raise InfeasibilitySuspectedError("halfspace system is empty")
        if not res.success:  # pragma: no cover - solver hiccup
            raise InfeasibilitySuspectedError(f"support LP failed: {res.message}")
        return float(-res.fun)

    def to_json(self):
        return {"type": "halfspaces", "normals": self.normals.tolist(),
                "offsets": self.offsets.tolist()}


class _SingleHalfspace(ConvexSet):
    """Internal helper for Dykstra on general halfspace systems."""

    def __init__(self, normal, offset):
        self.normal = normal
        self.offset = float(offset)
        self._nn = float(normal @ normal)
        self.dim = normal.size

    def project(self, x):
        viol = self.normal @ x - self.offset
        if viol <= 0:
            return np.asarray(x, dtype=float).copy()
        return x - (viol / self._nn) * self.normal


class Intersection(ConvexSet):
    """Finite intersection; members are flattened at construction."""

    def __init__(self, members):
        flat: list[ConvexSet] = []
        for m in members:
            if isinstance(m, Intersection):
                flat.extend(m.members)
            else:
                flat.append(m)
        if not flat:
            raise ContractError("intersection needs at least one member")
        dims = {m.dim for m in flat}
        if len(dims) != 1:
            raise ShapeError(f"intersection members disagree on dimension: {dims}")
        self.members = flat
        self.dim = flat[0].dim

    def project(self, x):
        x = as_vector(x, dim=self.dim)
        return dykstra(self.members, x)

    def contains(self, x, tol: float = 1e-9):
        return all(m.contains(x, tol) for m in self.members)

    def gap(self, x) -> float:
        """Worst member distance; a feasibility gap, not the true distance."""
        return max(m.distance(x) for m in self.members)

    def support(self, d):
        d = as_vector(d, dim=self.dim)
        a_ub, b_ub, a_eq, b_eq = [], [], [], []
        lo = np.full(self.dim, -np.inf)
        hi = np.full(self.dim, np.inf)
        for m in self.members:
            if isinstance(m, Halfspaces):
                a_ub.append(m.normals)
                b_ub.append(m.offsets)
            elif isinstance(m, Box):
                lo = np.maximum(lo, m.lower)
                hi = np.minimum(hi, m.upper)
            elif isinstance(m, AffineSet):
                a_eq.append(m.op)
                b_eq.append(m.rhs)
            else:
                raise ContractError(
                    "support of an intersection needs polyhedral members only")
        res = linprog(
            -d,
            A_ub=np.vstack(a_ub) if a_ub else None,
            b_ub=np.concatenate(b_ub) if b_ub else None,
            A_eq=np.vstack(a_eq) if a_eq else None,
            b_eq=np.concatenate(b_eq) if b_eq else None,
            bounds=list(zip(np.where(np.isfinite(lo), lo, None),
                            np.where(np.isfinite(hi), hi, None))),
            method="highs")
        if res.status == 3:
            return float("inf")
        if res.status == 2:
            raise InfeasibilitySuspectedError("intersection is empty")
        if not res.success:  # pragma: no cover
            raise InfeasibilitySuspectedError(f"support LP failed: {res.message}")
        return float(-res.fun)

    def to_json(self):
        return {"type": "intersection", "members": [m.to_json() for m in self.members]}


class TruncatedSet(Intersection):
    """base intersected with a closed ball; the workhorse of the iteration."""

    def __init__(self, base: ConvexSet, center, radius):
        self.base = base
        self.center = as_vector(center, dim=base.dim)
        self.radius = float(radius)
        super().__init__([base, Ball(self.center, self.radius)])

    def to_json(self):
        return {"type": "intersection",
                "members": [self.base.to_json(),
                            Ball(self.center, self.radius).to_json()]}


def truncate(base: ConvexSet, center, radius) -> TruncatedSet:
    """Intersect ``base`` with the closed ball around ``center``."""
    return TruncatedSet(base, center, radius)


def dykstra(sets, start, tol: float = DYKSTRA_TOL,
            max_rounds: int = DYKSTRA_MAX_ROUNDS) -> np.ndarray:
    """Dykstra's alternating projections onto an intersection.

    Stops when one full round moves the iterate by <= tol AND the iterate is
    feasible; displacement alone is not enough, because the scheme can sit on
    a transient plateau while the correction terms still carry momentum.
    Unlike plain alternating projections this converges to the metric
    projection of ``start``. Raises InfeasibilitySuspectedError when the
    round budget is exhausted (in particular for empty intersections, where
    the displacement vanishes but the gap stays put).
    """
    x = np.array(start, dtype=float)
    corrections = [np.zeros_like(x) for _ in sets]
    gap_tol = max(1e-9, 10.0 * tol)
    for _ in range(max_rounds):
        x_prev = x.copy()
        for i, s in enumerate(sets):
            y = s.project(x + corrections[i])
            corrections[i] = x + corrections[i] - y
            x = y
        if np.linalg.norm(x - x_prev) <= tol:
            gap = max(s.distance(x) for s in sets)
            if gap <= gap_tol:
                return x
    gap = max(s.distance(x) for s in sets)
    raise InfeasibilitySuspectedError(
        f"alternating projections did not settle in {max_rounds} rounds "
        f"(gap {gap:.3e}); the intersection may be empty",
        last_iterate=x, gap=gap)


def direction_grid(dim: int, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic spread of unit directions: +-axes first, then seeded."""
    if count < 2 * dim:
        raise ContractError(f"need at least {2 * dim} directions in dimension {dim}")
    dirs = [np.eye(dim)[i] for i in range(dim)]
    dirs += [-np.eye(dim)[i] for i in range(dim)]
    rng = np.random.default_rng(seed)
    while len(dirs) < count:
        v = rng.standard_normal(dim)
        n = np.linalg.norm(v)
        if n > 1e-12:
            dirs.append(v / n)
    return np.array(dirs)


def interior_contains(set_or_support, point, directions: int | None = None,
                      seed: int = 0) -> tuple[bool, float]:
    """Support-function interiority test.

    ``set_or_support`` is a ConvexSet or a callable direction -> support
    value. Probes a deterministic direction grid (at least 2*dim vectors)
    and returns (verdict, margin) with margin = min support(d) - <d, point>.
    A positive margin certifies interiority up to the grid resolution.
    """
    point = as_vector(point)
    if callable(set_or_support) and not isinstance(set_or_support, ConvexSet):
        sample = set_or_support
    else:
        sample = set_or_support.support
    count = directions if directions is not None else 2 * point.size
    grid = direction_grid(point.size, count, seed=seed)
    margin = float("inf")
    for d in grid:
        margin = min(margin, float(sample(d)) - float(d @ point))
    return margin > 0.0, margin


def set_from_json(data: dict) -> ConvexSet:
    """Inverse of to_json for the whole catalogue."""
    if not isinstance(data, dict) or "type" not in data:
        raise ContractError("convex set JSON needs a 'type' field")
    kind = data["type"]
    try:
        if kind == "affine":
            return AffineSet(data["matrix"], data["rhs"])
        if kind == "box":
            return Box(data["lower"], data["upper"])
        if kind == "ball":
            return Ball(data["center"], data["radius"])
        if kind == "halfspaces":
            return Halfspaces(data["normals"], data["offsets"])
        if kind == "intersection":
            return Intersection([set_from_json(m) for m in data["members"]])
    except KeyError as exc:
        raise ContractError(f"convex set JSON of type {kind!r} missing field {exc}") from exc
    raise ContractError(f"unknown convex set type {kind!r}")
