import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.linalg import block_diag

from common.errors import InvalidInputError
from config.settings import settings
from simulation.integrator import piecewise_constant, simulate

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HierarchicalRealization:
    """State-space form of Ξ with state [ξ_1 … ξ_N, ξ_0 (, e)].

    ``B_local`` drives the stacked local inputs û_1 … û_N, ``B_global``
    the global input û_0; x = T ξ.
    """
    A: np.ndarray
    B_local: np.ndarray
    B_global: np.ndarray
    T: np.ndarray
    slices: List[slice]
    global_slice: slice
    error_slice: Optional[slice] = None

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @property
    def input_map(self) -> np.ndarray:
        return np.hstack([self.B_local, self.B_global])


def hierarchical_realization(cs, hd) -> HierarchicalRealization:
    N = cs.N
    n_i = [Pi.shape[1] for Pi in cs.P]
    n_global = cs.P0.shape[1]
    starts = np.cumsum([0] + n_i)
    slices = [slice(int(starts[i]), int(starts[i + 1])) for i in range(N)]
    global_slice = slice(int(starts[-1]), int(starts[-1]) + n_global)
    dim = global_slice.stop
    error_slice = None
    if hd.robust:
        error_slice = slice(dim, dim + cs.n)
        dim += cs.n

    A = np.zeros((dim, dim))
    for i in range(N):
        A[slices[i], slices[i]] = hd.Ai_hat[i]
        A[global_slice, slices[i]] = hd.Ri_hat[i]
    A[global_slice, global_slice] = hd.A0_hat
    if error_slice is not None:
        for i in range(N):
            A[slices[i], error_slice] = hd.Ei_hat[i]
            A[error_slice, slices[i]] = hd.Fi_hat[i]
        A[global_slice, error_slice] = hd.E0_hat
        A[error_slice, global_slice] = hd.F0_hat
        A[error_slice, error_slice] = hd.Ae_hat

    B_local = np.zeros((dim, sum(cs.r)))
    B_local[:global_slice.start] = block_diag(*cs.B)
    B_global = np.zeros((dim, N))
    B_global[global_slice] = cs.B0

    blocks = list(cs.P) + [cs.P0] + ([np.eye(cs.n)] if error_slice is not None else [])
    T = np.hstack(blocks)
    return HierarchicalRealization(A, B_local, B_global, T, slices, global_slice, error_slice)


def _plant_input_map(cs) -> np.ndarray:
    """Original system driven by [û_1 … û_N, û_0]: ẋ = Ax + diag(B_i)(û + E_0û_0)"""
    diag_B = block_diag(*cs.B)
    return np.hstack([diag_B, diag_B @ cs.E0])


def replay_error(cs, hd, xi0: np.ndarray, inputs, horizon: float, step: float,
                 with_error_state: bool = True, x0: Optional[np.ndarray] = None) -> float:
    """max_t ‖x(t) − Tξ(t)‖ for one co-simulation of the plant and Ξ"""
    realization = hierarchical_realization(cs, hd)
    xi0 = np.asarray(xi0, dtype=float)
    consistent = realization.T @ xi0
    if x0 is None:
        x0 = consistent
    else:
        x0 = np.asarray(x0, dtype=float)
        mismatch = float(np.linalg.norm(x0 - consistent))
        if mismatch > 1e-9 * max(1.0, np.linalg.norm(x0)):
            raise InvalidInputError(f"initial split does not reproduce x(0) (mismatch {mismatch:.3e})", mismatch)

    n, dim = cs.n, realization.dim
    A = block_diag(cs.A, realization.A)
    input_map = np.vstack([_plant_input_map(cs), realization.input_map])
    trajectory = simulate(A, input_map, inputs, np.concatenate([x0, xi0]), horizon, step)

    T = realization.T
    if realization.error_slice is not None and not with_error_state:
        T = T[:, :realization.error_slice.start]
        states = trajectory.states[:, n:n + realization.error_slice.start]
    else:
        states = trajectory.states[:, n:n + dim]
    error = trajectory.states[:, :n] - states @ T.T
    return float(np.max(np.linalg.norm(error, axis=1)))


def verify_superposition(
    cs,
    hd,
    horizon: float = None,
    step: float = None,
    trials: int = 20,
    seed: int = 0,
    hold: float = 1.0,
    with_error_state: bool = True,
) -> float:
    """Largest superposition error over randomized co-simulations.

    Each trial draws ξ(0) (e(0) = 0 for a robust decomposition) and
    normally distributed inputs held for ``hold`` seconds.
    """
    horizon = settings.SIM_HORIZON if horizon is None else horizon
    step = settings.SIM_STEP if step is None else step
    realization = hierarchical_realization(cs, hd)
    width = realization.input_map.shape[1]
    n_holds = int(np.ceil(horizon / hold)) + 1
    rng = np.random.default_rng(seed)

    worst = 0.0
    for trial in range(trials):
        xi0 = rng.standard_normal(realization.dim)
        if realization.error_slice is not None:
            xi0[realization.error_slice] = 0.0
        inputs = piecewise_constant(rng.standard_normal((n_holds, width)), hold)
        error = replay_error(cs, hd, xi0, inputs, horizon, step, with_error_state)
        logger.debug(f"Superposition trial {trial + 1}: max error {error:.3e}")
        worst = max(worst, error)
    label = 'augmented' if hd.robust and with_error_state else 'plain'
    logger.info(f"Superposition replay ({label}) over {trials} trials: max error {worst:.3e}")
    return worst
