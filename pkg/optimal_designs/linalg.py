"""
Small dense matrix kernel used by every criterion evaluation.

Matrices are two dimensional ``numpy`` float arrays. The design matrices in
scope have entries in {-1, 0, 1}, so information matrices hold integers and
the tolerances below only need to be fixed, not tuned.
"""
from typing import NamedTuple

import numpy as np
from scipy import linalg as sla

from optimal_designs.exceptions import SingularMatrixError


RANK_TOLERANCE = 1e-9
PIVOT_TOLERANCE = 1e-12


class LogDet(NamedTuple):
    is_singular: bool
    logdet: float


class Spectrum(NamedTuple):
    """
    Batched summary of a stack of symmetric matrices.
    """

    is_singular: np.ndarray
    logdet: np.ndarray
    inverse_diagonal: np.ndarray


def as_matrix(values):
    """
    Coerce ``values`` to a finite two dimensional float array.
    """
    matrix = np.asarray(values, dtype=float)
    if matrix.ndim != 2:
        raise ValueError(f"Expected a 2-D matrix, got an array with {matrix.ndim} dimensions.")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("Matrix entries must be finite.")
    return matrix


def _require_square(matrix):
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {matrix.shape}.")


def gram(X):
    """
    Return ``X'X``.
    """
    X = as_matrix(X)
    if X.shape[0] < 1:
        raise ValueError("gram needs at least one row.")
    return X.T @ X


def logdet_spd(M):
    """
    Log determinant of a symmetric matrix through its Cholesky factor.

    A failed factorization, or a squared pivot not above ``PIVOT_TOLERANCE``
    times the largest diagonal entry, flags the matrix as singular.
    """
    M = as_matrix(M)
    _require_square(M)
    if M.shape[0] == 0:
        return LogDet(False, 0.0)
    scale = float(np.max(np.abs(np.diag(M))))
    if scale <= 0.0:
        return LogDet(True, float("-inf"))
    try:
        factor = np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        return LogDet(True, float("-inf"))
    pivots = np.diag(factor) ** 2
    if np.min(pivots) <= PIVOT_TOLERANCE * scale:
        return LogDet(True, float("-inf"))
    return LogDet(False, float(np.sum(np.log(pivots))))


def inverse_spd(M):
    """
    Inverse of a symmetric positive definite matrix.

    Raises:
        SingularMatrixError: when ``logdet_spd`` flags ``M`` as singular.
    """
    M = as_matrix(M)
    if logdet_spd(M).is_singular:
        raise SingularMatrixError("Matrix is singular; it has no inverse.")
    factor = sla.cho_factor(M, lower=True)
    inverse = sla.cho_solve(factor, np.eye(M.shape[0]))
    return (inverse + inverse.T) / 2.0


def rank(M, tol=RANK_TOLERANCE):
    """
    Numerical rank from a column pivoted QR decomposition.

    A pivot counts when its magnitude is at least ``tol`` times the largest pivot.
    """
    if tol <= 0:
        raise ValueError("tol must be positive.")
    M = as_matrix(M)
    if M.size == 0:
        return 0
    R, _ = sla.qr(M, mode="r", pivoting=True)
    pivots = np.abs(np.diag(R))
    if pivots.size == 0 or pivots[0] == 0.0:
        return 0
    return int(np.count_nonzero(pivots >= tol * pivots[0]))


def batch_rank(stack, tol=RANK_TOLERANCE):
    """
    Ranks of a ``(m, p, p)`` stack of Gram matrices.

    Singular values replace QR pivots here because numpy decomposes whole
    stacks at once; the relative threshold is the same as in ``rank``.
    """
    stack = np.asarray(stack, dtype=float)
    if stack.shape[0] == 0:
        return np.zeros(0, dtype=int)
    singular_values = np.linalg.svd(stack, compute_uv=False)
    largest = singular_values[..., :1]
    accepted = (singular_values >= tol * largest) & (largest > 0.0)
    return np.count_nonzero(accepted, axis=-1)


def batch_spectrum(stack):
    """
    Singularity flags, log determinants and inverse diagonals for a stack of SPD matrices.

    Uses the same relative pivot threshold as ``logdet_spd``, applied to the
    eigenvalues. Entries of singular matrices are ``-inf`` and ``inf``.
    """
    stack = np.asarray(stack, dtype=float)
    eigenvalues, eigenvectors = np.linalg.eigh(stack)
    scale = np.max(np.abs(np.diagonal(stack, axis1=-2, axis2=-1)), axis=-1)
    is_singular = (eigenvalues[..., 0] <= PIVOT_TOLERANCE * scale) | (scale <= 0.0)
    safe = np.where(is_singular[..., None], 1.0, eigenvalues)
    logdet = np.where(is_singular, -np.inf, np.sum(np.log(np.abs(safe)), axis=-1))
    inverse_diagonal = np.einsum("...ji,...i->...j", eigenvectors ** 2, 1.0 / safe)
    inverse_diagonal = np.where(is_singular[..., None], np.inf, inverse_diagonal)
    return Spectrum(is_singular, logdet, inverse_diagonal)
