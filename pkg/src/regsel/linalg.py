"""Dense linear-operator kernels.

All matrix computations in the package funnel through the SVD helpers here,
so surjectivity decisions and regularity constants come from a single source.
Vectors are 1-D float64 arrays, operators are 2-D float64 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericBreakdownError, RegularityError, ShapeError

# Relative singular-value cutoff below which an operator is treated as
# non-surjective. Shared by every module.
SURJECTIVITY_RTOL = 1e-10

# Residual slack for least-norm solves: ||op x - rhs|| <= RESIDUAL_RTOL*(1+||rhs||).
RESIDUAL_RTOL = 1e-9


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Validate and convert to a finite 1-D float64 array."""
    v = np.asarray(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise ShapeError(f"expected a vector, got array of shape {v.shape}")
    if v.size == 0:
        raise ShapeError("expected a nonempty vector")
    if not np.all(np.isfinite(v)):
        raise ShapeError("vector has non-finite entries")
    if dim is not None and v.size != dim:
        raise ShapeError(f"expected a vector of length {dim}, got {v.size}")
    return v


def as_matrix(a) -> np.ndarray:
    """Validate and convert to a finite 2-D float64 array."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got array of shape {m.shape}")
    if m.size == 0:
        raise ShapeError("expected a nonempty matrix")
    if not np.all(np.isfinite(m)):
        raise ShapeError("matrix has non-finite entries")
    return m


@dataclass(frozen=True)
class SvdFactorization:
    """Full SVD ``a = u @ diag(s) @ vt`` with singular values descending."""

    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray

    def reconstruction_error(self, a) -> float:
        a = as_matrix(a)
        k = self.s.size
        recon = (self.u[:, :k] * self.s) @ self.vt[:k]
        return float(np.linalg.norm(recon - a))


def svd(a) -> SvdFactorization:
    """Full SVD of a matrix; raises NumericBreakdownError if LAPACK fails."""
    m = as_matrix(a)
    try:
        u, s, vt = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericBreakdownError(f"SVD failed: {exc}") from exc
    return SvdFactorization(u=u, s=s, vt=vt)


def operator_norm(a) -> float:
    """Largest singular value."""
    return float(svd(a).s[0])


def sigma_min_surjective(a) -> float:
    """Smallest singular value relevant for surjectivity (rows <= cols).

    For a map onto its row count this is s[rows-1]; it is zero exactly when
    the rows are dependent.
    """
    m = as_matrix(a)
    rows, cols = m.shape
    if rows > cols:
        raise ShapeError(f"operator with {rows} rows and {cols} cols cannot be surjective")
    return float(svd(m).s[rows - 1])


def is_surjective(a, rtol: float = SURJECTIVITY_RTOL) -> bool:
    """True when the smallest row-relevant singular value clears rtol * s_max."""
    m = as_matrix(a)
    if m.shape[0] > m.shape[1]:
        return False
    s = svd(m).s
    return bool(s[m.shape[0] - 1] > rtol * s[0])


def least_norm_solve(a, rhs) -> np.ndarray:
    """Minimum-norm solution of ``a @ x = rhs`` for surjective ``a``.

    ``rhs`` may be a vector or a matrix of stacked column right-hand sides;
    the answer has matching shape. Raises RegularityError when ``a`` is not
    numerically surjective, NumericBreakdownError when the residual check
    fails.
    """
    m = as_matrix(a)
    rows, cols = m.shape
    b = np.asarray(rhs, dtype=float)
    vector_input = b.ndim <= 1
    if vector_input:
        b = as_vector(rhs, dim=rows).reshape(rows, 1)
    elif b.ndim == 2:
        if b.shape[0] != rows:
            raise ShapeError(f"rhs has {b.shape[0]} rows, operator has {rows}")
        if not np.all(np.isfinite(b)):
            raise ShapeError("rhs has non-finite entries")
    else:
        raise ShapeError(f"rhs must be 1-D or 2-D, got shape {b.shape}")

    if rows > cols:
        raise RegularityError("operator has more rows than columns; not surjective")
    fac = svd(m)
    if not fac.s[rows - 1] > SURJECTIVITY_RTOL * fac.s[0]:
        raise RegularityError(
            f"operator numerically non-surjective: sigma_min={fac.s[rows - 1]:.3e} "
            f"vs sigma_max={fac.s[0]:.3e}")
    # x = V_r diag(1/s) U^T b lies in the row space, hence has minimal norm.
    x = fac.vt[:rows].T @ ((fac.u.T @ b) / fac.s[:rows, None])
    resid = np.linalg.norm(m @ x - b, axis=0)
    scale = 1.0 + np.linalg.norm(b, axis=0)
    if np.any(resid > RESIDUAL_RTOL * scale):
        raise NumericBreakdownError(
            f"least-norm residual {resid.max():.3e} exceeds tolerance")
    return x[:, 0] if vector_input else x


def pinv_apply(a, rhs) -> np.ndarray:
    """Apply the least-norm right inverse ``a^T (a a^T)^{-1}`` to ``rhs``.

    Independent route from least_norm_solve (normal equations instead of a
    direct SVD solve); the two agree to 1e-9 on surjective operators.
    """
    m = as_matrix(a)
    rows, cols = m.shape
    b = as_vector(rhs, dim=rows)
    if rows > cols:
        raise RegularityError("operator has more rows than columns; not surjective")
    if not is_surjective(m):
        raise RegularityError("operator numerically non-surjective")
    gram = m @ m.T
    try:
        w = np.linalg.solve(gram, b)
    except np.linalg.LinAlgError as exc:
        raise NumericBreakdownError(f"normal-equation solve failed: {exc}") from exc
    return m.T @ w


def pinv_matrix(a) -> np.ndarray:
    """Least-norm right inverse as an explicit cols x rows matrix."""
    m = as_matrix(a)
    rows, cols = m.shape
    if rows > cols:
        raise RegularityError("operator has more rows than columns; not surjective")
    fac = svd(m)
    if not fac.s[rows - 1] > SURJECTIVITY_RTOL * fac.s[0]:
        raise RegularityError("operator numerically non-surjective")
    return fac.vt[:rows].T @ (fac.u.T / fac.s[:rows, None])
