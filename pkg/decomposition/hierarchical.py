import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from scipy import linalg

from common.errors import ExistenceViolationError, InvalidParameterError
from config.settings import settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HierarchicalDecomposition:
    """Cascade Ξ: upstream blocks (Â_i, B_i) feeding the downstream (Â_0, R̂_i, B_0).

    ``residuals`` holds ‖AP_0 − P_0Â_0‖_F under 'global' and
    ‖AP_i − P_iÂ_i − P_0R̂_i‖_F under 'cluster <i>' (1-based).
    """
    A0_hat: np.ndarray
    Ai_hat: Tuple[np.ndarray, ...]
    Ri_hat: Tuple[np.ndarray, ...]
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.Ai_hat)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    @property
    def robust(self) -> bool:
        return False


def residual_key(i: int) -> str:
    return f'cluster {i + 1}'


def least_squares_blocks(cs) -> Tuple[np.ndarray, List[np.ndarray], List[np.ndarray]]:
    """Minimum-norm solutions of AP_0 ≈ P_0X and AP_i ≈ P_iX + P_0Y"""
    A, P0 = cs.A, cs.P0
    A0_hat = linalg.pinv(P0) @ A @ P0
    Ai_hat, Ri_hat = [], []
    for i, Pi in enumerate(cs.P):
        stacked = linalg.pinv(np.hstack([Pi, P0])) @ A @ Pi
        n_i = Pi.shape[1]
        Ai_hat.append(stacked[:n_i])
        Ri_hat.append(stacked[n_i:])
    return A0_hat, Ai_hat, Ri_hat


def decomposition_residuals(cs, A0_hat, Ai_hat, Ri_hat) -> Dict[str, float]:
    A, P0 = cs.A, cs.P0
    residuals = {'global': float(np.linalg.norm(A @ P0 - P0 @ A0_hat))}
    for i, Pi in enumerate(cs.P):
        residuals[residual_key(i)] = float(np.linalg.norm(A @ Pi - Pi @ Ai_hat[i] - P0 @ Ri_hat[i]))
    return residuals


def decompose(cs, tol: float = None) -> HierarchicalDecomposition:
    """Exact hierarchical model decomposition of a clustered system.

    Â_0 = P_0†AP_0 and (Â_i, R̂_i) = [P_i P_0]†AP_i. Raises
    ExistenceViolationError when any residual exceeds ``tol``.
    """
    tol = settings.RESIDUAL_TOL if tol is None else tol
    A0_hat, Ai_hat, Ri_hat = least_squares_blocks(cs)
    residuals = decomposition_residuals(cs, A0_hat, Ai_hat, Ri_hat)
    worst = max(residuals.values())
    if worst > tol:
        logger.error(f"Decomposition residual {worst:.3e} exceeds {tol:.1e}")
        raise ExistenceViolationError(residuals, tol)
    logger.info(f"Exact decomposition for {cs.N} clusters, max residual {worst:.2e}")
    return HierarchicalDecomposition(A0_hat, tuple(Ai_hat), tuple(Ri_hat), residuals)


def retrofit_decompose(cs) -> HierarchicalDecomposition:
    """Singleton clusters with Â_i fixed to each component's local block.

    P_0 is the identity, so R̂_i = AP_i − P_iÂ_i collects the coupling
    columns of component i.
    """
    if any(size != 1 for size in cs.r):
        raise InvalidParameterError('clusters', list(cs.r), 'retrofit decomposition needs singleton clusters')
    P0 = cs.P0
    A0_hat = P0.T @ cs.A @ P0
    Ai_hat = tuple(np.array(block) for block in cs.A_local)
    Ri_hat = tuple(P0.T @ (cs.A @ Pi - Pi @ Ai) for Pi, Ai in zip(cs.P, Ai_hat))
    residuals = decomposition_residuals(cs, A0_hat, Ai_hat, Ri_hat)
    logger.info(f"Retrofit decomposition for {cs.N} components, max residual {max(residuals.values()):.2e}")
    return HierarchicalDecomposition(A0_hat, Ai_hat, Ri_hat, residuals)
