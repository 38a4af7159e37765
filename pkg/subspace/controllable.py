import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from common.errors import InvalidInputError
from common.linalg import range_basis
from config.settings import settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Subspace represented by a matrix with orthonormal columns.

    When the basis was computed on a lumped model, ``E`` holds the
    normalized class indicators and ``reduced`` the coordinates with
    ``Q = E @ reduced``.
    """
    Q: np.ndarray
    tol: float
    E: Optional[np.ndarray] = None
    reduced: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.Q.shape[1]

    @property
    def ambient(self) -> int:
        return self.Q.shape[0]

    def projector(self) -> np.ndarray:
        return self.Q @ self.Q.T

    def orthogonality_defect(self) -> float:
        return float(np.linalg.norm(self.Q.T @ self.Q - np.eye(self.dim)))

    def frame(self) -> Tuple[np.ndarray, np.ndarray]:
        """(E, X) with Q = E X; E is the identity when no lumping took place"""
        if self.E is None:
            return np.eye(self.ambient), self.Q
        return self.E, self.reduced

    @classmethod
    def of(cls, M: np.ndarray, tol: float = None) -> 'OrthonormalBasis':
        """Orthonormal basis of im M"""
        tol = settings.RANK_TOL if tol is None else tol
        return cls(Q=range_basis(M, tol), tol=tol)


BasisLike = Union[OrthonormalBasis, np.ndarray]


def _matrix(basis: BasisLike) -> np.ndarray:
    return basis.Q if isinstance(basis, OrthonormalBasis) else np.atleast_2d(np.asarray(basis, dtype=float))


def _split_classes(labels: np.ndarray, rows: np.ndarray, tol: float) -> np.ndarray:
    """Split each class into groups of rows equal within tol; labels follow first appearance"""
    refined = np.full(labels.shape[0], -1, dtype=int)
    count = 0
    for s in range(labels.shape[0]):
        if refined[s] >= 0:
            continue
        candidates = np.flatnonzero((labels == labels[s]) & (refined < 0))
        close = candidates[np.linalg.norm(rows[candidates] - rows[s], axis=1) <= tol]
        refined[close] = count
        count += 1
    return refined


def class_indicators(labels: np.ndarray, normalized: bool = True) -> np.ndarray:
    """Indicator columns of the classes, scaled to unit norm unless ``normalized`` is False"""
    labels = np.asarray(labels, dtype=int)
    count = int(labels.max()) + 1 if labels.size else 0
    E = np.zeros((labels.shape[0], count))
    E[np.arange(labels.shape[0]), labels] = 1.0
    return E / np.sqrt(E.sum(axis=0)) if normalized else E


def equitable_partition(A: np.ndarray, B: np.ndarray, tol: float = None) -> np.ndarray:
    """Coarsest partition of the states whose class indicators span an A-invariant subspace containing im B.

    States start grouped by equal rows of B. A class is split whenever two
    of its states see different row sums of A over some class; the loop
    stops when no class splits. Returns one integer label per state.
    """
    tol = settings.ROW_TOL if tol is None else tol
    n = A.shape[0]
    labels = np.zeros(n, dtype=int)
    if n == 0:
        return labels
    labels = _split_classes(labels, B, tol * max(1.0, float(np.max(np.abs(B), initial=0.0))))
    while int(labels.max()) + 1 < n:
        count = int(labels.max()) + 1
        sums = A @ class_indicators(labels, normalized=False)
        scale = max(1.0, float(np.max(np.linalg.norm(sums, axis=1))))
        refined = _split_classes(labels, sums, tol * scale)
        if int(refined.max()) + 1 == count:
            break
        labels = refined
    return labels


def _krylov(A: np.ndarray, B: np.ndarray, tol: float) -> Tuple[np.ndarray, int]:
    n = A.shape[0]
    Q = range_basis(B, tol)
    W = Q
    scale = np.linalg.norm(A, 2) if n else 0.0
    steps = 0
    while W.shape[1] > 0 and Q.shape[1] < n and scale > 0.0:
        V = A @ W
        for _ in range(2):
            V = V - Q @ (Q.T @ V)
        W = range_basis(V, tol, scale=scale)
        Q = np.hstack([Q, W])
        steps += 1
    return Q, steps


def controllable_subspace(A: np.ndarray, B: np.ndarray, tol: float = None, lump: bool = True) -> OrthonormalBasis:
    """Orthonormal basis of span[B, AB, …, A^{n−1}B].

    With ``lump`` the pair is first reduced to the span of the class
    indicators of :func:`equitable_partition`, which is A-invariant and
    contains im B, so the Krylov sequence runs on (EᵀAE, EᵀB) and is
    lifted back. The result then lies inside im E exactly and states of
    one class carry identical rows.

    The Krylov sequence is grown one block at a time; each new block is
    orthogonalized twice against the current basis and truncated at
    ``tol`` relative to ‖A‖₂. Iteration stops as soon as a block adds no
    direction.
    """
    tol = settings.RANK_TOL if tol is None else tol
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.asarray(B, dtype=float)
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    n = A.shape[0]
    if A.shape != (n, n) or B.shape[0] != n:
        raise InvalidInputError(f"incompatible shapes A{A.shape}, B{B.shape}")

    if lump and n:
        labels = equitable_partition(A, B)
        if int(labels.max()) + 1 < n:
            E = class_indicators(labels)
            reduced, steps = _krylov(E.T @ A @ E, E.T @ B, tol)
            logger.debug(f"Krylov basis of dimension {reduced.shape[1]}/{n} on {E.shape[1]} lumped states "
                         f"after {steps} steps")
            return OrthonormalBasis(Q=E @ reduced, tol=tol, E=E, reduced=reduced)

    Q, steps = _krylov(A, B, tol)
    logger.debug(f"Krylov basis of dimension {Q.shape[1]}/{n} after {steps} steps")
    return OrthonormalBasis(Q=Q, tol=tol)


def inclusion_defect(U: BasisLike, V: BasisLike) -> float:
    """max over columns u of U of ‖(I − VVᵀ)u‖"""
    U, V = _matrix(U), _matrix(V)
    if U.shape[0] != V.shape[0]:
        raise InvalidInputError(f"ambient dimensions differ: {U.shape[0]} vs {V.shape[0]}")
    if U.shape[1] == 0:
        return 0.0
    residual = U - V @ (V.T @ U) if V.shape[1] else U
    return float(np.max(np.linalg.norm(residual, axis=0)))


def subspace_leq(U: BasisLike, V: BasisLike, tol: float = None) -> bool:
    """True iff im U ⊆ im V within ``tol``"""
    tol = settings.INCLUSION_TOL if tol is None else tol
    return inclusion_defect(U, V) <= tol


def invariance_defect(A: np.ndarray, basis: BasisLike) -> float:
    """‖(I − QQᵀ)AQ‖_F"""
    Q = _matrix(basis)
    AQ = A @ Q
    return float(np.linalg.norm(AQ - Q @ (Q.T @ AQ)))
