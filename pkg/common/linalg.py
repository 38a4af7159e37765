"""Dense linear-algebra helpers shared by the subspace, control and simulation stages."""
from typing import Optional, Tuple

import numpy as np
from scipy import linalg


def range_basis(M: np.ndarray, tol: float, scale: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis of the column space of M with singular-value truncation.

    Singular values at or below ``tol * scale`` are discarded; ``scale``
    defaults to the largest singular value of M.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n = M.shape[0]
    if M.size == 0 or M.shape[1] == 0:
        return np.zeros((n, 0))
    U, s, _ = linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((n, 0))
    reference = s[0] if scale is None else scale
    rank = int(np.sum(s > tol * reference))
    return U[:, :rank]


def orthogonal_complement(Q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of im Q (Q orthonormal)."""
    n, k = Q.shape
    if k == 0:
        return np.eye(n)
    if k >= n:
        return np.zeros((n, 0))
    full, _ = linalg.qr(Q, mode='full')
    return full[:, k:]


def schur_split(A: np.ndarray, threshold: float, right: bool = True) -> Tuple[np.ndarray, np.ndarray, int]:
    """Ordered real Schur form of A with a chosen half-plane moved to the top.

    With ``right=True`` eigenvalues with Re λ > threshold lead; otherwise those
    with Re λ < threshold lead. Returns (T, Z, k) with A = Z T Zᵀ and k the
    size of the leading block.
    """
    n = A.shape[0]
    shifted = A - threshold * np.eye(n)
    T, Z, k = linalg.schur(shifted, output='real', sort='rhp' if right else 'lhp')
    return T + threshold * np.eye(n), Z, int(k)


def symmetric_part(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X + X.T)
