"""Glocal controller: one global subcontroller broadcasting to per-cluster local subcontrollers."""
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg
from scipy.linalg import block_diag

from common.errors import WiringError
from common.linalg import orthogonal_complement, schur_split
from config.settings import settings
from decomposition.superposition import hierarchical_realization
from simulation.integrator import simulate
from simulation.spectral import deflated_abscissa, max_unmatched_distance, spectral_abscissa, spectrum
from subspace.controllable import controllable_subspace
from .functional_observer import FunctionalObserver, build_functional_observer
from .lqr_observer import DynamicController, LoopWeights, lqr_observer_controller

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GlocalController:
    """K_0 plus one (K_i, Φ_i) pair per cluster; û_0 is broadcast to every Φ_i"""
    K0: DynamicController
    Ks: Tuple[DynamicController, ...]
    observers: Tuple[FunctionalObserver, ...]

    @property
    def N(self) -> int:
        return len(self.Ks)

    @property
    def order(self) -> int:
        return self.K0.order + sum(K.order + obs.order for K, obs in zip(self.Ks, self.observers))

    def local_only(self) -> 'GlocalController':
        K0 = DynamicController.zero(self.K0.n_outputs, self.K0.n_inputs, name='global (off)')
        return replace(self, K0=K0)

    def global_only(self) -> 'GlocalController':
        Ks = tuple(DynamicController.zero(K.n_outputs, K.n_inputs, name=f'local {i + 1} (off)')
                   for i, K in enumerate(self.Ks))
        return replace(self, Ks=Ks)

    def with_local(self, i: int, K: DynamicController) -> 'GlocalController':
        Ks = list(self.Ks)
        Ks[i] = K
        return replace(self, Ks=tuple(Ks))


@dataclass(frozen=True, eq=False)
class ClosedLoop:
    """Plant, K_0 and all (Φ_i, K_i) as one autonomous system ż = A z.

    ``blocks`` maps a block name ('plant', 'K0', 'phi1', 'xhat1', 'K1', …)
    to its slice of the state; ``directions`` spans the structural
    marginal modes no output feedback can move.
    """
    A: np.ndarray
    blocks: Dict[str, slice]
    labels: List[str]
    directions: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def abscissa(self) -> float:
        return spectral_abscissa(self.A)

    def deflated_abscissa(self) -> float:
        return deflated_abscissa(self.A, self.directions if self.directions.size else None)

    def spectrum(self) -> np.ndarray:
        return spectrum(self.A)

    def initial_state(self, x0: np.ndarray) -> np.ndarray:
        """Plant at x0; observers and controllers at rest"""
        z0 = np.zeros(self.dim)
        z0[self.blocks['plant']] = np.asarray(x0, dtype=float)
        return z0

    def simulate(self, x0: np.ndarray, horizon: float = None, step: float = None):
        return simulate(self.A, x0=self.initial_state(x0), horizon=horizon, step=step, labels=self.labels)


def global_measurement(cs) -> np.ndarray:
    """Map x ↦ y_0 = C_0P_0†x with P_0† = (P_0ᵀP_0)⁻¹P_0ᵀ.

    y_0 holds the cluster averages of the component outputs, not the sums
    C_0P_0ᵀx; on x = P_0ξ_0 it returns C_0ξ_0.
    """
    return cs.C0 @ linalg.pinv(cs.P0)


def marginal_unobservable(A: np.ndarray, C: np.ndarray, deflate_tol: float = None) -> np.ndarray:
    """Basis of the unobservable subspace of (A, C) restricted to Re λ ≥ −deflate_tol"""
    deflate_tol = settings.DEFLATE_TOL if deflate_tol is None else deflate_tol
    n = A.shape[0]
    unobservable = orthogonal_complement(controllable_subspace(A.T, C.T).Q)
    if unobservable.shape[1] == 0:
        return np.zeros((n, 0))
    _, Z, k = schur_split(unobservable.T @ A @ unobservable, -deflate_tol, right=True)
    return unobservable @ Z[:, :k]


def _check_wiring(cs, controller: GlocalController) -> None:
    if controller.N != cs.N or len(controller.observers) != cs.N:
        raise WiringError('cluster count', (cs.N,), (controller.N, len(controller.observers)))
    K0 = controller.K0
    expected = (cs.B0.shape[1], cs.C0.shape[0])
    if (K0.n_outputs, K0.n_inputs) != expected:
        raise WiringError('global subcontroller (outputs, inputs)', expected, (K0.n_outputs, K0.n_inputs))
    for i, (K, obs) in enumerate(zip(controller.Ks, controller.observers)):
        expected = (cs.B[i].shape[1], cs.C[i].shape[0])
        if (K.n_outputs, K.n_inputs) != expected:
            raise WiringError(f'local subcontroller {i + 1} (outputs, inputs)', expected, (K.n_outputs, K.n_inputs))
        if obs.n_i != cs.P[i].shape[1] or obs.cluster != i:
            raise WiringError(f'observer {i + 1} state', (cs.P[i].shape[1],), (obs.n_i,))


def _layout(cs, controller: GlocalController) -> Tuple[Dict[str, slice], List[str]]:
    blocks, labels = {}, []

    def add(name: str, size: int, names: Optional[Sequence[str]] = None):
        start = len(labels)
        blocks[name] = slice(start, start + size)
        labels.extend(names if names is not None else [f'{name}_{j + 1}' for j in range(size)])

    add('plant', cs.n, cs.state_labels())
    add('K0', controller.K0.order)
    for i, (K, obs) in enumerate(zip(controller.Ks, controller.observers)):
        add(f'phi{i + 1}', obs.n_i)
        add(f'xhat{i + 1}', obs.n_i)
        add(f'K{i + 1}', K.order)
    return blocks, labels


def assemble_glocal(cs, hd, controller: GlocalController) -> ClosedLoop:
    """Closed loop of the clustered plant with the glocal controller.

    ẋ = Ax + diag(B_i)(û + E_0û_0); K_0 reads y_0 = C_0P_0†x; Φ_i reads
    v_i = M_ext,i x, û_i and the broadcast û_0; K_i reads ψ_i.
    """
    _check_wiring(cs, controller)
    blocks, labels = _layout(cs, controller)
    A = np.zeros((len(labels), len(labels)))
    plant = blocks['plant']
    K0 = controller.K0
    k0 = blocks['K0']
    diag_B = cs.input_matrix()
    columns = np.cumsum((0,) + tuple(B.shape[1] for B in cs.B))

    A[plant, plant] = cs.A
    A[plant, k0] = diag_B @ cs.E0 @ K0.C_K
    A[k0, plant] = K0.B_K @ global_measurement(cs)
    A[k0, k0] = K0.A_K

    for i, (K, obs) in enumerate(zip(controller.Ks, controller.observers)):
        phi, xhat, ki = blocks[f'phi{i + 1}'], blocks[f'xhat{i + 1}'], blocks[f'K{i + 1}']
        z = slice(phi.start, xhat.stop)
        A[plant, ki] = diag_B[:, columns[i]:columns[i + 1]] @ K.C_K

        A[z, plant] = obs.B_interaction @ cs.interaction_rows(i)
        A[z, z] = obs.A
        A[z, k0] = obs.B_global_input @ K0.C_K
        A[z, ki] = obs.B_local_input @ K.C_K

        A[ki, plant] = K.B_K @ obs.C @ cs.P[i].T
        A[ki, z] = K.B_K @ obs.C_out
        A[ki, ki] = K.A_K

    directions = structural_directions(cs, blocks, len(labels))
    loop = ClosedLoop(A=A, blocks=blocks, labels=labels, directions=directions)
    logger.debug(f"Assembled glocal loop of dimension {loop.dim} with {directions.shape[1]} structural modes")
    return loop


def structural_directions(cs, blocks: Dict[str, slice], dim: int) -> np.ndarray:
    """Marginal modes of the plant no output reaches, lifted to the closed-loop state.

    A plant direction w appears as x = w, φ_i = x̂_i = P_iᵀw and zero
    controller states; that span is invariant under every glocal loop.
    """
    W = marginal_unobservable(cs.A, cs.output_matrix())
    Z = np.zeros((dim, W.shape[1]))
    Z[blocks['plant']] = W
    for i in range(cs.N):
        Z[blocks[f'phi{i + 1}']] = cs.P[i].T @ W
        Z[blocks[f'xhat{i + 1}']] = cs.P[i].T @ W
    return Z


def lifted_closed_loop(cs, hd, controller: GlocalController) -> ClosedLoop:
    """Closed loop of the hierarchical system Ξ with K_0 and K_i acting on exact outputs"""
    realization = hierarchical_realization(cs, hd)
    K0 = controller.K0
    dim = realization.dim
    sizes = [dim, K0.order] + [K.order for K in controller.Ks]
    starts = np.cumsum([0] + sizes)
    blocks = {'xi': slice(starts[0], starts[1]), 'K0': slice(starts[1], starts[2])}
    for i in range(cs.N):
        blocks[f'K{i + 1}'] = slice(starts[i + 2], starts[i + 3])
    total = int(starts[-1])
    xi, k0 = blocks['xi'], blocks['K0']

    columns = np.cumsum((0,) + tuple(B.shape[1] for B in cs.B))
    y0_map = global_measurement(cs) @ realization.T
    measurements = [y0_map]

    A = np.zeros((total, total))
    A[xi, xi] = realization.A
    A[xi, k0] = realization.B_global @ K0.C_K
    A[k0, xi] = K0.B_K @ y0_map
    A[k0, k0] = K0.A_K
    for i, K in enumerate(controller.Ks):
        ki = blocks[f'K{i + 1}']
        selector = np.zeros((cs.C[i].shape[1], dim))
        selector[:, realization.slices[i]] = np.eye(cs.C[i].shape[1])
        yi_map = cs.C[i] @ selector
        measurements.append(yi_map)
        A[xi, ki] = realization.B_local[:, columns[i]:columns[i + 1]] @ K.C_K
        A[ki, xi] = K.B_K @ yi_map
        A[ki, ki] = K.A_K

    W = marginal_unobservable(realization.A, np.vstack(measurements))
    directions = np.zeros((total, W.shape[1]))
    directions[xi] = W
    labels = [f'xi_{j + 1}' for j in range(dim)] + [f'ctrl_{j + 1}' for j in range(total - dim)]
    return ClosedLoop(A=A, blocks=blocks, labels=labels, directions=directions)


def observer_error_spectrum(controller: GlocalController) -> np.ndarray:
    return np.concatenate([spectrum(obs.A) for obs in controller.observers]) if controller.observers \
        else np.zeros(0, dtype=complex)


def separation_gap(cs, hd, controller: GlocalController) -> float:
    """Largest distance from a closed-loop eigenvalue to the lifted-loop and observer-error spectra"""
    physical = assemble_glocal(cs, hd, controller).spectrum()
    lifted = lifted_closed_loop(cs, hd, controller).spectrum()
    reference = np.concatenate([lifted, observer_error_spectrum(controller)])
    gap = max_unmatched_distance(reference, physical)
    logger.debug(f"Separation gap {gap:.3e} over {physical.size} closed-loop eigenvalues")
    return gap


def design_local(cs, hd, i: int, weights: LoopWeights = None) -> DynamicController:
    """K_i on (Â_i, B_i, C_i) with Q_i = I_{r_i}⊗diag(q_θ, q_ω)"""
    weights = weights or LoopWeights()
    r_i = cs.B[i].shape[1]
    Qo, Ro = weights.observer_weights(cs.P[i].shape[1], cs.C[i].shape[0])
    return lqr_observer_controller(
        hd.Ai_hat[i], cs.B[i], cs.C[i],
        weights.state_weight(cs.r[i], cs.n0), weights.input_weight(r_i), Qo, Ro,
        name=f'local {i + 1}',
    )


def robust_global_model(cs, rd) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(A, B, C) of the downstream block augmented with the error state"""
    n_global = cs.P0.shape[1]
    A = np.block([[rd.A0_hat, rd.E0_hat], [rd.F0_hat, rd.Ae_hat]])
    B = np.vstack([cs.B0, np.zeros((cs.n, cs.B0.shape[1]))])
    C = np.hstack([cs.C0, global_measurement(cs)])
    logger.debug(f"Robust global model of dimension {n_global + cs.n}")
    return A, B, C


def observable_quotient(A: np.ndarray, B: np.ndarray, C: np.ndarray):
    """(QᵀAQ, QᵀB, CQ, Q) with Q spanning the complement of the marginal unobservable subspace.

    The output of (A, B, C) depends on the quotient coordinates Qᵀx only, so
    a controller designed there serves the full model without copying its
    marginal modes.
    """
    W = marginal_unobservable(A, C)
    Q = orthogonal_complement(W) if W.shape[1] else np.eye(A.shape[0])
    return Q.T @ A @ Q, Q.T @ B, C @ Q, Q


def design_global(cs, hd, weights: LoopWeights = None) -> DynamicController:
    """K_0 on (Â_0, B_0, C_0), or on the error-augmented model for a robust decomposition.

    The design model is first reduced by its marginal unobservable modes.
    """
    weights = weights or LoopWeights()
    N = cs.B0.shape[1]
    n_global = cs.P0.shape[1]
    Q0 = weights.state_weight(cs.N, cs.n0)
    if hd.robust:
        A, B, C = robust_global_model(cs, hd)
        Q = block_diag(Q0, settings.ERROR_WEIGHT * np.eye(cs.n))
        name = 'global (robust)'
    else:
        A, B, C, Q = hd.A0_hat, cs.B0, cs.C0, Q0
        name = 'global'
    A_q, B_q, C_q, basis = observable_quotient(A, B, C)
    Qo, Ro = weights.observer_weights(A_q.shape[0], C_q.shape[0])
    controller = lqr_observer_controller(A_q, B_q, C_q, basis.T @ Q @ basis, weights.input_weight(N), Qo, Ro,
                                         name=name)
    logger.info(f"{name.capitalize()} subcontroller of order {controller.order} "
                f"({A.shape[0] - A_q.shape[0]} marginal unobservable modes removed"
                + (f"; downstream block {n_global}, error state {cs.n})" if hd.robust else ")"))
    return controller


def design_glocal(
    cs,
    hd,
    weights: LoopWeights = None,
    global_weights: LoopWeights = None,
    local_weights: Sequence[LoopWeights] = None,
) -> GlocalController:
    """Design every loop independently: K_0, then (Φ_i, K_i) per cluster"""
    weights = weights or LoopWeights()
    global_weights = global_weights or weights
    local_weights = list(local_weights) if local_weights is not None else [weights] * cs.N
    observers = tuple(build_functional_observer(cs, hd, i) for i in range(cs.N))
    Ks = tuple(design_local(cs, hd, i, local_weights[i]) for i in range(cs.N))
    K0 = design_global(cs, hd, global_weights)
    controller = GlocalController(K0=K0, Ks=Ks, observers=observers)
    logger.info(f"Glocal controller for {cs.N} clusters: total order {controller.order}")
    return controller


def verify_robust_global_loop(cs, rd, K0: DynamicController) -> float:
    """Deflated abscissa of K_0 in feedback with the error-augmented downstream model"""
    A, B, C = robust_global_model(cs, rd)
    if (K0.n_outputs, K0.n_inputs) != (B.shape[1], C.shape[0]):
        raise WiringError('robust global subcontroller (outputs, inputs)', (B.shape[1], C.shape[0]),
                          (K0.n_outputs, K0.n_inputs))
    n = A.shape[0]
    loop = np.block([[A, B @ K0.C_K], [K0.B_K @ C, K0.A_K]])
    W = marginal_unobservable(A, C)
    directions = np.vstack([W, np.zeros((K0.order, W.shape[1]))])
    abscissa = deflated_abscissa(loop, directions if W.shape[1] else None)
    logger.info(f"Robust global loop: deflated abscissa {abscissa:.3e} ({W.shape[1]} structural modes, n={n})")
    return abscissa
