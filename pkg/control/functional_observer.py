import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from common.errors import PreconditionError
from decomposition.superposition import hierarchical_realization
from simulation.integrator import piecewise_constant, simulate
from simulation.spectral import spectral_abscissa

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FunctionalObserver:
    """Estimator of C_iξ_i from the measurements of cluster i.

    State [φ_i; x̂_i]:
        φ̇_i = Â_iφ_i + (A_i − Â_i)x̂_i + L_iv_i + G_iû_0
        x̂̇_i = A_ix̂_i + B_iû_i + L_iv_i + G_iû_0
        ψ_i = −C_iφ_i + y_i
    with G_i = P_iᵀP_0B_0.
    """
    cluster: int
    A_hat: np.ndarray
    A_local: np.ndarray
    L: np.ndarray
    G: np.ndarray
    B: np.ndarray
    C: np.ndarray

    @property
    def n_i(self) -> int:
        return self.A_hat.shape[0]

    @property
    def order(self) -> int:
        return 2 * self.n_i

    @property
    def A(self) -> np.ndarray:
        zeros = np.zeros_like(self.A_hat)
        return np.block([[self.A_hat, self.A_local - self.A_hat], [zeros, self.A_local]])

    @property
    def B_local_input(self) -> np.ndarray:
        """Map of û_i"""
        return np.vstack([np.zeros_like(self.B), self.B])

    @property
    def B_global_input(self) -> np.ndarray:
        """Map of û_0"""
        return np.vstack([self.G, self.G])

    @property
    def B_interaction(self) -> np.ndarray:
        """Map of v_i"""
        return np.vstack([self.L, self.L])

    @property
    def C_out(self) -> np.ndarray:
        """ψ_i = C_out z + y_i"""
        return np.hstack([-self.C, np.zeros_like(self.C)])


def build_functional_observer(cs, hd, i: int, check: bool = True) -> FunctionalObserver:
    """Functional observer of C_iξ_i for cluster i; A_i and Â_i must be stable"""
    A_local = np.array(cs.A_local[i])
    A_hat = np.array(hd.Ai_hat[i])
    if check:
        for label, matrix in ((f'A_{i + 1}', A_local), (f'Â_{i + 1}', A_hat)):
            abscissa = spectral_abscissa(matrix)
            if abscissa >= 0.0:
                logger.error(f"Observer precondition fails: {label} abscissa {abscissa:.3e}")
                raise PreconditionError(label, abscissa)
    G = cs.P[i].T @ cs.P0 @ cs.B0
    return FunctionalObserver(cluster=i, A_hat=A_hat, A_local=A_local, L=np.array(cs.L_local[i]),
                              G=G, B=np.array(cs.B[i]), C=np.array(cs.C[i]))


def observer_target(cs, hd, i: int) -> np.ndarray:
    """U_i: map from the state of Ξ to the observer state it should track"""
    realization = hierarchical_realization(cs, hd)
    Pi, P0 = cs.P[i], cs.P0
    n_i = Pi.shape[1]
    top = np.zeros((n_i, realization.dim))
    top[:, realization.global_slice] = Pi.T @ P0
    if realization.error_slice is not None:
        top[:, realization.error_slice] = Pi.T
    bottom = top.copy()
    bottom[:, realization.slices[i]] = np.eye(n_i)
    return np.vstack([top, bottom])


def verify_observer_conditions(cs, obs: FunctionalObserver, hd) -> Dict[str, float]:
    """Frobenius residuals of the three functional-observer identities.

    'dynamics':    U A_Ξ − F U − [L_i; L_i] M_ext,i T
    'input':       U [B_loc B_0] − observer input maps
    'output':      C_i S_i − (C_out U + C_iP_iᵀT)
    """
    realization = hierarchical_realization(cs, hd)
    i = obs.cluster
    U = observer_target(cs, hd, i)
    T = realization.T
    interaction = obs.B_interaction @ cs.interaction_rows(i) @ T
    dynamics = U @ realization.A - obs.A @ U - interaction

    local_cols = slice(sum(cs.r[:i]), sum(cs.r[:i + 1]))
    expected_local = np.zeros((obs.order, realization.B_local.shape[1]))
    expected_local[:, local_cols] = obs.B_local_input
    input_residual = np.hstack([
        U @ realization.B_local - expected_local,
        U @ realization.B_global - obs.B_global_input,
    ])

    selector = np.zeros((obs.n_i, realization.dim))
    selector[:, realization.slices[i]] = np.eye(obs.n_i)
    output = obs.C @ selector - (obs.C_out @ U + obs.C @ cs.P[i].T @ T)

    residuals = {
        'dynamics': float(np.linalg.norm(dynamics)),
        'input': float(np.linalg.norm(input_residual)),
        'output': float(np.linalg.norm(output)),
    }
    logger.debug(f"Observer {i + 1} condition residuals: {residuals}")
    return residuals


def slowest_observer_rate(observers) -> float:
    """min over observers of −(spectral abscissa of the error dynamics)"""
    return min(-spectral_abscissa(obs.A) for obs in observers)


def observer_error_trajectory(
    cs,
    hd,
    obs: FunctionalObserver,
    horizon: float,
    step: float,
    seed: int = 0,
    hold: float = 1.0,
    consistent: bool = False,
):
    """Co-simulate Ξ and the observer under random inputs; returns (times, ψ_i − C_iξ_i).

    The observer starts at rest, or at U_iξ(0) when ``consistent``.
    """
    realization = hierarchical_realization(cs, hd)
    i = obs.cluster
    T = realization.T
    dim, order = realization.dim, obs.order

    y_map = obs.C @ cs.P[i].T @ T
    v_map = cs.interaction_rows(i) @ T
    A = np.zeros((dim + order, dim + order))
    A[:dim, :dim] = realization.A
    A[dim:, :dim] = obs.B_interaction @ v_map
    A[dim:, dim:] = obs.A

    local_cols = slice(sum(cs.r[:i]), sum(cs.r[:i + 1]))
    observer_local = np.zeros((order, realization.B_local.shape[1]))
    observer_local[:, local_cols] = obs.B_local_input
    input_map = np.vstack([
        realization.input_map,
        np.hstack([observer_local, obs.B_global_input]),
    ])

    rng = np.random.default_rng(seed)
    xi0 = rng.standard_normal(dim)
    if realization.error_slice is not None:
        xi0[realization.error_slice] = 0.0
    z0 = observer_target(cs, hd, i) @ xi0 if consistent else np.zeros(order)
    n_holds = int(np.ceil(horizon / hold)) + 1
    inputs = piecewise_constant(rng.standard_normal((n_holds, input_map.shape[1])), hold)

    trajectory = simulate(A, input_map, inputs, np.concatenate([xi0, z0]), horizon, step)
    xi, z = trajectory.states[:, :dim], trajectory.states[:, dim:]
    selector = np.zeros((obs.n_i, dim))
    selector[:, realization.slices[i]] = np.eye(obs.n_i)
    error = z @ obs.C_out.T + xi @ y_map.T - xi @ (obs.C @ selector).T
    return trajectory.times, error
