# src/rand_geometry.py
import logging
from typing import Tuple

import numpy as np
import scipy.linalg

from src.errors import DimensionError
from src.models.rng import RngState

logger = logging.getLogger(__name__)


def _check_dims(D: int, d: int) -> None:
    if D < 1 or d < 1 or d > D:
        raise DimensionError(f"Need 1 <= d <= D, got D={D}, d={d}")


def gen_gaussian(rng: RngState, D: int, d: int) -> np.ndarray:
    """D x d matrix of i.i.d. standard normal entries, fully determined by ``rng``"""
    _check_dims(D, d)
    return rng.generator().standard_normal((D, d))


def gen_gaussian_batch(rng: RngState, n: int, D: int, d: int) -> np.ndarray:
    """``n`` independent D x d Gaussian matrices stacked along the first axis"""
    _check_dims(D, d)
    if n < 1:
        raise DimensionError(f"Batch size must be positive, got {n}")
    return rng.generator().standard_normal((n, D, d))


def gen_haar_orthogonal(rng: RngState, D: int) -> np.ndarray:
    """Haar-distributed D x D orthogonal matrix.

    QR of a Gaussian matrix with the signs of R's diagonal moved into Q, so
    that the triangular factor has a positive diagonal.
    """
    if D < 1:
        raise DimensionError(f"Need D >= 1, got {D}")
    gaussian = rng.generator().standard_normal((D, D))
    q, r = scipy.linalg.qr(gaussian)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def uniform_in_box(rng: RngState, D: int, half_width: float = 1.0) -> np.ndarray:
    """Uniform point in [-half_width, half_width]^D"""
    if D < 1:
        raise DimensionError(f"Need D >= 1, got {D}")
    return rng.generator().uniform(-half_width, half_width, size=D)


def affine_subspace_distance(A: np.ndarray, p: np.ndarray, q: np.ndarray) -> Tuple[float, np.ndarray, bool]:
    """Distance from ``q`` to the affine subspace p + range(A).

    Returns (distance, argmin y, rank_deficient). The least-squares problem
    min_y ||Ay + p - q|| is solved with an SVD-based LAPACK driver; for a
    rank-deficient A the minimum-norm y is returned and the flag is set.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    D, d = A.shape
    if p.shape != (D,) or q.shape != (D,):
        raise DimensionError(f"Points must have shape ({D},), got {p.shape} and {q.shape}")

    target = q - p
    y, _, rank, _ = scipy.linalg.lstsq(A, target, lapack_driver="gelsd")
    residual = A @ y - target
    rank_deficient = bool(rank < d)
    if rank_deficient:
        logger.warning("Embedding matrix is rank deficient (rank %d < %d)", rank, d)
    return float(np.linalg.norm(residual)), y, rank_deficient


def affine_subspace_distance_batch(A_batch: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorized distance for a stack of (full column rank) matrices, via reduced QR"""
    A_batch = np.asarray(A_batch, dtype=float)
    target = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    if A_batch.ndim != 3 or A_batch.shape[1] != target.shape[0]:
        raise DimensionError(f"Expected a (n, {target.shape[0]}, d) stack, got {A_batch.shape}")
    basis, _ = np.linalg.qr(A_batch)
    coefficients = np.einsum("nDd,D->nd", basis, target)
    residual = target[None, :] - np.einsum("nDd,nd->nD", basis, coefficients)
    return np.linalg.norm(residual, axis=1)


def projection_norm_batch(A_batch: np.ndarray, v: np.ndarray) -> np.ndarray:
    """||P v|| where P projects onto range(A), for each matrix of the stack"""
    A_batch = np.asarray(A_batch, dtype=float)
    basis, _ = np.linalg.qr(A_batch)
    return np.linalg.norm(np.einsum("nDd,D->nd", basis, np.asarray(v, dtype=float)), axis=1)
