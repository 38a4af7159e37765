import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from common.errors import SynthesisError
from common.linalg import orthogonal_complement
from config.settings import settings
from subspace.controllable import controllable_subspace
from .riccati import solve_care

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DynamicController:
    """Observer-based state feedback ẋ_K = A_K x_K + B_K y, u = C_K x_K.

    For an LQR design A_K = A − BK − HC, B_K = H and C_K = −K.
    ``marginal_modes`` lists eigenvalues of parts left out of the design
    because they were uncontrollable or unobservable with Re λ ≈ 0.
    """
    A_K: np.ndarray
    B_K: np.ndarray
    C_K: np.ndarray
    K: Optional[np.ndarray] = None
    H: Optional[np.ndarray] = None
    marginal_modes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    design_abscissa: float = float('-inf')
    name: str = ''

    @property
    def order(self) -> int:
        return self.A_K.shape[0]

    @property
    def n_inputs(self) -> int:
        """Number of measured signals"""
        return self.B_K.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.C_K.shape[0]

    @classmethod
    def zero(cls, n_outputs: int, n_inputs: int, name: str = '') -> 'DynamicController':
        """Static zero controller: u ≡ 0"""
        return cls(A_K=np.zeros((0, 0)), B_K=np.zeros((0, n_inputs)), C_K=np.zeros((n_outputs, 0)), name=name)


@dataclass(frozen=True)
class LoopWeights:
    """LQR and observer weights for one loop of second-order components"""
    q_theta: float = settings.Q_THETA
    q_omega: float = settings.Q_OMEGA
    r: float = settings.R_WEIGHT
    observer: float = settings.OBSERVER_WEIGHT

    def state_weight(self, blocks: int, n0: int = 2) -> np.ndarray:
        """I_blocks ⊗ diag(q_θ, q_ω, …, q_ω)"""
        return np.kron(np.eye(blocks), np.diag([self.q_theta] + [self.q_omega] * (n0 - 1)))

    def input_weight(self, inputs: int) -> np.ndarray:
        return self.r * np.eye(inputs)

    def observer_weights(self, states: int, outputs: int) -> Tuple[np.ndarray, np.ndarray]:
        return self.observer * np.eye(states), self.input_weight(outputs)

    def scaled(self, state: float = 1.0, inputs: float = 1.0, observer: float = 1.0) -> 'LoopWeights':
        return LoopWeights(self.q_theta * state, self.q_omega * state, self.r * inputs, self.observer * observer)


def _deflated_design(A: np.ndarray, B: np.ndarray, Q: np.ndarray, R: np.ndarray, what: str, deflate_tol: float):
    """LQR gain designed on the controllable subspace of (A, B); returns (K, closed-loop eigenvalues, marginal)"""
    n = A.shape[0]
    Vc = controllable_subspace(A, B).Q
    marginal = np.zeros(0, dtype=complex)
    if Vc.shape[1] < n:
        Vu = orthogonal_complement(Vc)
        leftover = linalg.eigvals(Vu.T @ A @ Vu)
        if np.any(leftover.real > deflate_tol):
            raise SynthesisError(f"{what}: {Vu.shape[1]} modes outside the design subspace are unstable",
                                 leftover[leftover.real > deflate_tol])
        marginal = leftover[np.abs(leftover.real) <= deflate_tol]
        logger.debug(f"{what}: deflated {Vu.shape[1]} modes ({len(marginal)} marginal)")
    if Vc.shape[1] == 0:
        return np.zeros((B.shape[1], n)), np.zeros(0, dtype=complex), marginal
    A_c, B_c, Q_c = Vc.T @ A @ Vc, Vc.T @ B, Vc.T @ Q @ Vc
    solution = solve_care(A_c, B_c, Q_c, R)
    return solution.K @ Vc.T, linalg.eigvals(A_c - B_c @ solution.K), marginal


def lqr_observer_controller(
    A: np.ndarray,
    B: np.ndarray,
    C: np.ndarray,
    Q: np.ndarray,
    R: np.ndarray,
    Qo: np.ndarray,
    Ro: np.ndarray,
    name: str = '',
    deflate_tol: float = None,
) -> DynamicController:
    """LQR state feedback with an LQR-designed (dual) observer.

    Controller and observer are designed on the controllable and observable
    subspaces; excluded modes must satisfy Re λ ≤ ``deflate_tol``.
    """
    deflate_tol = settings.DEFLATE_TOL if deflate_tol is None else deflate_tol
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    C = np.atleast_2d(np.asarray(C, dtype=float))

    K, control_poles, control_marginal = _deflated_design(A, B, Q, R, f"{name or 'controller'} state feedback",
                                                          deflate_tol)
    L, observer_poles, observer_marginal = _deflated_design(A.T, C.T, Qo, Ro, f"{name or 'controller'} observer",
                                                            deflate_tol)
    H = L.T

    poles = np.concatenate([control_poles, observer_poles])
    design_abscissa = float(np.max(poles.real)) if poles.size else float('-inf')
    if design_abscissa >= 0.0:
        raise SynthesisError(f"{name}: designed loop is not stable (abscissa {design_abscissa:.3e})")

    controller = DynamicController(
        A_K=A - B @ K - H @ C,
        B_K=H,
        C_K=-K,
        K=K,
        H=H,
        marginal_modes=np.concatenate([control_marginal, observer_marginal]),
        design_abscissa=float(design_abscissa),
        name=name,
    )
    logger.debug(f"Designed {name or 'controller'} of order {controller.order}, "
                 f"design abscissa {design_abscissa:.3e}, {controller.marginal_modes.size} marginal modes")
    return controller


def design_centralized(cs, weights: LoopWeights = None) -> DynamicController:
    """Observer-based LQR on the full clustered system with one actuator and sensor per component"""
    weights = weights or LoopWeights()
    N0 = sum(cs.r)
    B = cs.input_matrix()
    C = cs.output_matrix()
    Qo, Ro = weights.observer_weights(cs.n, N0)
    return lqr_observer_controller(
        cs.A, B, C, weights.state_weight(N0, cs.n0), weights.input_weight(N0), Qo, Ro, name='centralized'
    )
