"""Smooth maps with surjective derivative: local right inverses.

A continuously differentiable f with surjective Jacobian B at the base
point splits into its linearization and a remainder whose Lipschitz modulus
vanishes at the base. Feeding that split to the selection iteration yields a
local right inverse of f that is calm at the base with constant close to
2/sigma_min(B), and differentiable there with derivative B^T (B B^T)^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .convex import AffineSet
from .errors import ContractError, RegularityError, ShapeError
from .linalg import (SURJECTIVITY_RTOL, as_matrix, as_vector, is_surjective,
                     pinv_matrix, svd)
from .moduli import lip_estimate, reg_linear
from .selection import (GeneralizedEquation, IterationCertificate,
                        IterationConfig, default_config, solve)

FD_JACOBIAN_STEP = 1e-6


@dataclass
class SmoothProblem:
    """A smooth map with a distinguished base point.

    ``jacobian`` is optional; central differences with step
    1e-6*(1+||x||) are used when it is absent. The Jacobian at the base
    must be surjective (rows <= cols and sigma_min clear of the cutoff).
    """

    f: Callable
    x_base: np.ndarray
    jacobian: Callable | None = None
    radius: float = 1.0

    def __post_init__(self):
        self.x_base = as_vector(self.x_base)
        if not self.radius > 0:
            raise ContractError(f"radius must be positive, got {self.radius}")
        self.y_base = as_vector(self.f(self.x_base))
        if self.y_base.size > self.x_base.size:
            raise ShapeError(
                f"map has {self.y_base.size} outputs and {self.x_base.size} "
                "inputs; the derivative cannot be surjective")
        b = self.jacobian_at(self.x_base)
        if not is_surjective(b):
            raise RegularityError("Jacobian at the base point is not surjective")
        self._base_jacobian = b

    def jacobian_at(self, x) -> np.ndarray:
        x = as_vector(x, dim=self.x_base.size)
        if self.jacobian is not None:
            b = as_matrix(self.jacobian(x))
            if b.shape != (self.y_base.size, self.x_base.size):
                raise ShapeError(f"jacobian has shape {b.shape}, expected "
                                 f"{(self.y_base.size, self.x_base.size)}")
            return b
        step = FD_JACOBIAN_STEP * (1.0 + np.linalg.norm(x))
        cols = []
        for j in range(x.size):
            e = np.zeros_like(x)
            e[j] = step
            cols.append((as_vector(self.f(x + e)) - as_vector(self.f(x - e)))
                        / (2.0 * step))
        return np.stack(cols, axis=1)

    @property
    def base_jacobian(self) -> np.ndarray:
        return self._base_jacobian


def split(problem: SmoothProblem) -> GeneralizedEquation:
    """Split f into its base linearization and the remainder.

    The linear part x -> B(x - x_base) enters through its inverse images
    (affine sets); the remainder g(x) = f(x) - B(x - x_base) carries the
    constant f(x_base), so the selection solver restates queries at
    y_base + g(x_base) = f(x_base) and solving y in g(x) + F(x) means
    exactly f(x) = y.
    """
    b = problem.base_jacobian
    x0 = problem.x_base

    def finv(w):
        return AffineSet(b, as_vector(w, dim=b.shape[0]) + b @ x0)

    def g(x):
        x = as_vector(x, dim=x0.size)
        return as_vector(problem.f(x)) - b @ (x - x0)

    return GeneralizedEquation(
        finv=finv, g=g, x_base=x0, y_base=np.zeros(b.shape[0]),
        radius_x=problem.radius, radius_y=problem.radius,
        radius_graph=2.0 * problem.radius)


def remainder_lip_profile(problem: SmoothProblem,
                          radii: tuple = (0.1, 0.01, 0.001),
                          samples: int = 1500, seed: int = 0) -> list:
    """Sampled lip of the remainder at shrinking radii.

    Strict differentiability itself is not checkable from an oracle; this
    reports the observable consequence, a remainder modulus that decays with
    the radius. Returns a list of ModulusEstimate rows.
    """
    b = problem.base_jacobian
    x0 = problem.x_base

    def g(x):
        return as_vector(problem.f(x)) - b @ (x - x0)

    return [lip_estimate(g, x0, r, samples=samples, seed=seed) for r in radii]


def config_for(problem: SmoothProblem, samples: int = 1500,
               seed: int = 0, tol: float = 1e-10,
               max_iter: int = 200) -> IterationConfig:
    """Default constant schedule for a smooth problem."""
    b = problem.base_jacobian
    x0 = problem.x_base

    def g(x):
        return as_vector(problem.f(x)) - b @ (x - x0)

    lip = lip_estimate(g, x0, problem.radius, samples=samples, seed=seed)
    return default_config(reg_linear(b), lip.value, tol=tol, max_iter=max_iter)


def smooth_selection(problem: SmoothProblem, y, cfg: IterationConfig | None = None
                     ) -> tuple[np.ndarray, IterationCertificate]:
    """Local right inverse: returns x with f(x) = y, plus the certificate."""
    if cfg is None:
        cfg = config_for(problem)
    ge = split(problem)
    x, cert = solve(ge, cfg, y)
    y = as_vector(y, dim=problem.y_base.size)
    resid = np.linalg.norm(as_vector(problem.f(x)) - y)
    if resid > 1e-8 * (1.0 + np.linalg.norm(y)):
        raise RegularityError(
            f"selection does not satisfy f(x) = y: residual {resid:.3e}")
    return x, cert


def derivative_check(problem: SmoothProblem, cfg: IterationConfig | None = None,
                     step: float | None = None) -> tuple[np.ndarray, float]:
    """Finite-difference derivative of the selection at the base output.

    Central differences with step 1e-5*(1+||y_base||) by default. Returns
    the stencil Jacobian J (cols x rows of f's Jacobian) and the worst of
    two deviations: ||B J - I|| and ||J - B^T (B B^T)^{-1}||, both as
    operator norms. Smooth fixtures land well under 1e-4.
    """
    if cfg is None:
        cfg = config_for(problem)
    b = problem.base_jacobian
    m = b.shape[0]
    h = step if step is not None else 1e-5 * (1.0 + np.linalg.norm(problem.y_base))
    cols = []
    for j in range(m):
        e = np.zeros(m)
        e[j] = h
        x_plus, _ = smooth_selection(problem, problem.y_base + e, cfg)
        x_minus, _ = smooth_selection(problem, problem.y_base - e, cfg)
        cols.append((x_plus - x_minus) / (2.0 * h))
    j_fd = np.stack(cols, axis=1)
    dev_left = svd(b @ j_fd - np.eye(m)).s[0]
    dev_pinv = svd(j_fd - pinv_matrix(b)).s[0]
    return j_fd, float(max(dev_left, dev_pinv))


def augmented_jacobian(b) -> tuple[np.ndarray, bool]:
    """Augmented block matrix [[I, B^T], [B, 0]] and its invertibility verdict.

    The block matrix is invertible exactly when B is surjective; the verdict
    uses the shared relative singular-value cutoff.
    """
    b = as_matrix(b)
    m, n = b.shape
    j = np.zeros((n + m, n + m))
    j[:n, :n] = np.eye(n)
    j[:n, n:] = b.T
    j[n:, :n] = b
    s = svd(j).s
    verdict = bool(s[-1] > SURJECTIVITY_RTOL * s[0])
    return j, verdict


def calm_bound_linear(b, cross_check: bool = False, samples: int = 10000,
                      seed: int = 0) -> float:
    """Calmness bound 2/sigma_min for the selection of a linear surjection.

    With cross_check=True the bound is validated against twice the sampled
    sup of least-norm solutions over unit targets (adaptive cap sampling);
    a mismatch beyond 5% raises.
    """
    b = as_matrix(b)
    bound = 2.0 * reg_linear(b)
    if not np.isfinite(bound):
        return bound
    if cross_check:
        from .linalg import least_norm_solve  # local import to avoid cycle noise
        m = b.shape[0]
        rng = np.random.default_rng(seed)
        best = 0.0
        best_dir = None
        rounds = 4
        per_round = max(1, samples // rounds)
        cap = 1.0
        for _ in range(rounds):
            if best_dir is None:
                dirs = rng.standard_normal((per_round, m))
            else:
                dirs = best_dir + cap * rng.standard_normal((per_round, m))
            norms = np.linalg.norm(dirs, axis=1)
            dirs = dirs[norms > 1e-12] / norms[norms > 1e-12, None]
            sols = least_norm_solve(b, dirs.T)
            vals = np.linalg.norm(sols, axis=0)
            k = int(np.argmax(vals))
            if vals[k] > best:
                best = float(vals[k])
                best_dir = dirs[k]
            cap *= 0.1
        if abs(2.0 * best - bound) > 0.05 * bound:
            raise RegularityError(
                f"calm bound {bound:.6g} disagrees with sampled sup "
                f"{2.0 * best:.6g}")
    return float(bound)
