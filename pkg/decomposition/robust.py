import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
from scipy import linalg

from config.settings import settings
from .hierarchical import HierarchicalDecomposition, least_squares_blocks, residual_key, decomposition_residuals

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RobustDecomposition(HierarchicalDecomposition):
    """Decomposition with an error state e: ė = Â_e e + F̂_0ξ_0 + Σ F̂_iξ_i.

    Upstream blocks never see e (Ê_i = 0); the downstream block sees Ê_0 e.
    """
    Ae_hat: np.ndarray = None
    E0_hat: np.ndarray = None
    Ei_hat: Tuple[np.ndarray, ...] = ()
    F0_hat: np.ndarray = None
    Fi_hat: Tuple[np.ndarray, ...] = ()
    leakage_norms: Dict[str, float] = field(default_factory=dict)

    @property
    def robust(self) -> bool:
        return True

    @property
    def total_leakage(self) -> float:
        return float(np.sqrt(sum(v ** 2 for v in self.leakage_norms.values())))

    def is_exact(self, tol: float = None) -> bool:
        tol = settings.RESIDUAL_TOL if tol is None else tol
        return max(self.leakage_norms.values()) <= tol


def robust_decompose(cs) -> RobustDecomposition:
    """Least-squares decomposition completed by error dynamics; always succeeds.

    Ê_0 = 0 and Â_e = A; the leakage matrices absorb whatever the
    least-squares blocks cannot reproduce.
    """
    A, P0 = cs.A, cs.P0
    A0_hat, Ai_hat, Ri_hat = least_squares_blocks(cs)

    F0_hat = A @ P0 - P0 @ A0_hat
    Fi_hat = tuple(A @ Pi - Pi @ Ai - P0 @ Ri for Pi, Ai, Ri in zip(cs.P, Ai_hat, Ri_hat))
    E0_hat = np.zeros((P0.shape[1], cs.n))
    Ei_hat = tuple(np.zeros((Pi.shape[1], cs.n)) for Pi in cs.P)

    leakage = {'global': float(np.linalg.norm(F0_hat))}
    for i, Fi in enumerate(Fi_hat):
        leakage[residual_key(i)] = float(np.linalg.norm(Fi))
    residuals = decomposition_residuals(cs, A0_hat, Ai_hat, Ri_hat)

    logger.info(f"Robust decomposition for {cs.N} clusters, leakage "
                + ', '.join(f"{k}={v:.3e}" for k, v in leakage.items()))
    return RobustDecomposition(
        A0_hat=A0_hat, Ai_hat=tuple(Ai_hat), Ri_hat=tuple(Ri_hat), residuals=residuals,
        Ae_hat=np.array(A), E0_hat=E0_hat, Ei_hat=Ei_hat, F0_hat=F0_hat, Fi_hat=Fi_hat,
        leakage_norms=leakage,
    )


def bookkeeping_residual(cs, rd: RobustDecomposition) -> float:
    """‖Â_e + P_0Ê_0 + ΣP_iÊ_i − A‖_F"""
    total = rd.Ae_hat + cs.P0 @ rd.E0_hat
    for Pi, Ei in zip(cs.P, rd.Ei_hat):
        total = total + Pi @ Ei
    return float(np.linalg.norm(total - cs.A))


def error_gain(rd: RobustDecomposition, grid: Tuple[float, float, int] = None):
    """Largest singular value of (jωI − Â_e)⁻¹[F̂_0 F̂_1 … F̂_N] on a log grid.

    Returns (frequencies, gains, peak).
    """
    low, high, count = settings.GAIN_GRID if grid is None else grid
    frequencies = np.logspace(low, high, int(count))
    leakage = np.hstack([rd.F0_hat, *rd.Fi_hat])
    n = rd.Ae_hat.shape[0]
    gains = np.empty_like(frequencies)
    for j, omega in enumerate(frequencies):
        response = linalg.solve(1j * omega * np.eye(n) - rd.Ae_hat, leakage)
        gains[j] = linalg.svdvals(response)[0] if response.size else 0.0
    peak = float(gains.max()) if gains.size else 0.0
    logger.info(f"Error transfer gain peak {peak:.3e} over [{frequencies[0]:.2g}, {frequencies[-1]:.2g}] rad/s")
    return frequencies, gains, peak
