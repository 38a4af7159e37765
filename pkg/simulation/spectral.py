import logging
from typing import Optional

import numpy as np
from scipy import linalg

from common.linalg import orthogonal_complement, range_basis

logger = logging.getLogger(__name__)

# Relative invariance tolerance for deflated directions
_INVARIANCE_TOL = 1e-8


def spectral_abscissa(A: np.ndarray) -> float:
    """max Re λ(A); −inf for an empty matrix"""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return float('-inf')
    return float(np.max(linalg.eigvals(A).real))


def deflated_abscissa(A: np.ndarray, directions: Optional[np.ndarray] = None) -> float:
    """Spectral abscissa of A on the quotient by an A-invariant subspace.

    ``directions`` spans the subspace to remove; with an orthonormal
    complement Q the result is the abscissa of QᵀAQ.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if directions is None or np.asarray(directions).size == 0:
        return spectral_abscissa(A)
    Z = range_basis(directions, 1e-12)
    AZ = A @ Z
    leak = np.linalg.norm(AZ - Z @ (Z.T @ AZ))
    if leak > _INVARIANCE_TOL * max(1.0, np.linalg.norm(A)):
        logger.warning(f"Deflated directions are not invariant (leak {leak:.2e}); abscissa is approximate")
    Q = orthogonal_complement(Z)
    return spectral_abscissa(Q.T @ A @ Q)


def spectrum(A: np.ndarray) -> np.ndarray:
    return linalg.eigvals(np.atleast_2d(np.asarray(A, dtype=float)))


def contains_spectrum(outer: np.ndarray, inner: np.ndarray, tol: float) -> bool:
    """Every eigenvalue in ``inner`` has a distinct partner in ``outer`` within ``tol``.

    Partners are matched greedily by distance; repeated eigenvalues need
    repeated partners.
    """
    return max_unmatched_distance(outer, inner) <= tol


def max_unmatched_distance(outer: np.ndarray, inner: np.ndarray) -> float:
    available = list(np.asarray(outer).ravel())
    worst = 0.0
    for value in sorted(np.asarray(inner).ravel(), key=lambda z: (z.real, z.imag)):
        if not available:
            return float('inf')
        distances = np.abs(np.asarray(available) - value)
        j = int(np.argmin(distances))
        worst = max(worst, float(distances[j]))
        available.pop(j)
    return worst
