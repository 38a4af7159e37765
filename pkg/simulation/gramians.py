import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
from scipy import linalg

from common.errors import HankelMismatchError, SpectrumError
from common.linalg import schur_split, symmetric_part
from config.settings import settings

logger = logging.getLogger(__name__)

# Above this size the Kronecker fallback is not attempted
_KRONECKER_LIMIT = 60


def lyapunov_solve(A: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Solve AX + XAᵀ + Q = 0 for Hurwitz A"""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    eigenvalues = linalg.eigvals(A)
    worst = eigenvalues[np.argmax(eigenvalues.real)]
    if worst.real >= 0.0:
        raise SpectrumError(f"Lyapunov operator is singular or unstable (eigenvalue {worst:.3e})", worst)

    X = linalg.solve_continuous_lyapunov(A, -Q)
    residual = np.linalg.norm(A @ X + X @ A.T + Q)
    if residual > 1e-8 * max(np.linalg.norm(Q), 1e-300) and A.shape[0] <= _KRONECKER_LIMIT:
        n = A.shape[0]
        operator = np.kron(np.eye(n), A) + np.kron(A, np.eye(n))
        X = np.linalg.solve(operator, -Q.reshape(-1, order='F')).reshape((n, n), order='F')
        logger.debug(f"Lyapunov residual {residual:.2e}; used vectorized fallback")
    return symmetric_part(X) if np.allclose(Q, Q.T) else X


@dataclass
class HankelResult:
    values: np.ndarray
    n_deflated: int
    deflated_eigenvalues: np.ndarray

    def distinct(self, tol: float = 1e-6) -> List[float]:
        """Values with near-duplicates (relative ``tol``) merged, descending"""
        groups: List[float] = []
        for value in self.values:
            if not groups or abs(groups[-1] - value) > tol * max(1.0, abs(value)):
                groups.append(float(value))
        return groups


def hankel_singular_values(
    A: np.ndarray, B: np.ndarray, C: np.ndarray, deflate_tol: float = None
) -> HankelResult:
    """Hankel singular values of the stable part of (A, B, C).

    Modes with Re λ ≥ −deflate_tol are split off through an ordered Schur
    form and a Sylvester decoupling; gramians are computed on what remains.
    """
    deflate_tol = settings.DEFLATE_TOL if deflate_tol is None else deflate_tol
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    C = np.atleast_2d(np.asarray(C, dtype=float))

    T, Z, k = schur_split(A, -deflate_tol, right=False)
    n = A.shape[0]
    if k == 0:
        raise SpectrumError("deflation removed every mode; no stable part left")

    Bt = Z.T @ B
    Ct = C @ Z
    T11, T12, T22 = T[:k, :k], T[:k, k:], T[k:, k:]
    if k < n:
        X = linalg.solve_sylvester(T11, -T22, -T12)
        B_stable = Bt[:k] - X @ Bt[k:]
    else:
        B_stable = Bt[:k]
    C_stable = Ct[:, :k]

    Wc = lyapunov_solve(T11, B_stable @ B_stable.T)
    Wo = lyapunov_solve(T11.T, C_stable.T @ C_stable)
    squared = np.clip(linalg.eigvals(Wc @ Wo).real, 0.0, None)
    values = np.sort(np.sqrt(squared))[::-1]

    deflated = linalg.eigvals(T22) if k < n else np.array([])
    logger.info(f"Hankel singular values: {k} stable modes, {n - k} deflated, largest {values[0]:.4g}")
    return HankelResult(values=values, n_deflated=n - k, deflated_eigenvalues=deflated)


@dataclass
class ReferenceComparison:
    matched: Dict[float, float] = field(default_factory=dict)
    unmatched: List[float] = field(default_factory=list)
    closest: Dict[float, float] = field(default_factory=dict)
    band: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.unmatched


def compare_to_reference(
    values: Sequence[float],
    reference: Sequence[float] = None,
    band: float = None,
    strict: bool = False,
) -> ReferenceComparison:
    """Match each reference value to the closest computed value within ``band``"""
    reference = settings.HANKEL_REFERENCE if reference is None else reference
    band = settings.HANKEL_BAND if band is None else band
    values = np.asarray(values, dtype=float)
    comparison = ReferenceComparison(band=band)
    for ref in reference:
        if values.size:
            closest = float(values[np.argmin(np.abs(values - ref))])
            if abs(closest - ref) <= band + 1e-9:
                comparison.matched[ref] = closest
                continue
            comparison.closest[ref] = closest
        comparison.unmatched.append(ref)

    if comparison.unmatched:
        logger.warning(f"Reference Hankel values without a match within ±{band}: {comparison.unmatched} "
                       f"(closest computed: {comparison.closest})")
        if strict:
            raise HankelMismatchError(comparison.unmatched, band, comparison.closest)
    return comparison
