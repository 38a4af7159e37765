import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag

from common.errors import AssumptionViolationError, InvalidParameterError
from .clusters import ClusterSet
from .network import NetworkSystem

logger = logging.getLogger(__name__)

# Tolerance for comparing component I/O matrices inside one cluster
_IO_MATCH_TOL = 1e-12


def embedding_matrices(
    clusters: Sequence[Sequence[int]], n0: int, n_components: int
) -> Tuple[np.ndarray, List[np.ndarray]]:
    """Broadcast matrix P_0 and embeddings P_i for clusters in the given state order.

    Column j·n0..(j+1)·n0 of P_0 stacks I_n0 at every member of cluster j;
    P_i stacks the unit blocks of its members in increasing order.
    """
    n = n_components * n0
    P0 = np.zeros((n, len(clusters) * n0))
    Ps = []
    for j, cluster in enumerate(clusters):
        Pi = np.zeros((n, len(cluster) * n0))
        for position, k in enumerate(cluster):
            rows = slice(k * n0, (k + 1) * n0)
            P0[rows, j * n0:(j + 1) * n0] = np.eye(n0)
            Pi[rows, position * n0:(position + 1) * n0] = np.eye(n0)
        Ps.append(Pi)
    return P0, Ps


def _check_identical_io(net: NetworkSystem, cs: ClusterSet, strict: bool) -> None:
    for index, cluster in enumerate(cs):
        head = net.components[cluster[0]]
        for k in cluster[1:]:
            other = net.components[k]
            for name in ('B', 'C'):
                if not np.allclose(getattr(head, name), getattr(other, name), rtol=0.0, atol=_IO_MATCH_TOL):
                    error = AssumptionViolationError(index, (cluster[0], k), name)
                    if strict:
                        raise error
                    logger.warning(f"{error}; global I/O matrices use component {cluster[0] + 1}")
                    return


@dataclass(frozen=True, eq=False)
class ClusteredSystem:
    """Network rewritten in cluster order with its broadcast and embedding matrices.

    ``order[j]`` is the original index of the component stored in block j.
    Per-cluster quantities are indexed 0..N-1 in cluster-set order.
    """
    network: NetworkSystem
    cluster_set: ClusterSet
    order: np.ndarray
    A: np.ndarray
    P0: np.ndarray
    P: Tuple[np.ndarray, ...]
    B0: np.ndarray
    C0: np.ndarray
    E0: np.ndarray
    B: Tuple[np.ndarray, ...]
    C: Tuple[np.ndarray, ...]
    A_local: Tuple[np.ndarray, ...]
    L_local: Tuple[np.ndarray, ...]
    M_ext: np.ndarray
    r: Tuple[int, ...]
    n0: int
    q: int
    offsets: Tuple[int, ...] = field(default=())

    @property
    def N(self) -> int:
        return len(self.r)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def n_i(self) -> Tuple[int, ...]:
        return tuple(r * self.n0 for r in self.r)

    @property
    def n0_i(self) -> Tuple[int, ...]:
        return tuple(self.n0 for _ in self.r)

    @property
    def global_dim(self) -> int:
        return self.P0.shape[1]

    def cluster_slice(self, i: int) -> slice:
        """State rows of cluster i in the reordered global state"""
        start = self.offsets[i] * self.n0
        return slice(start, start + self.r[i] * self.n0)

    def interaction_rows(self, i: int) -> np.ndarray:
        """Neighbour interaction map of cluster i: v_i = M_ext,i x"""
        start = self.offsets[i] * self.q
        return self.M_ext[start:start + self.r[i] * self.q]

    def local_block(self, i: int) -> np.ndarray:
        """P_iᵀ A P_i"""
        return self.P[i].T @ self.A @ self.P[i]

    def input_matrix(self) -> np.ndarray:
        """diag(B_i): one actuator column per component, in cluster order"""
        return block_diag(*self.B)

    def output_matrix(self) -> np.ndarray:
        return block_diag(*self.C)

    def state_permutation(self) -> np.ndarray:
        """Π with x_clustered = Π x_original"""
        n0 = self.n0
        Pi = np.zeros((self.n, self.n))
        for j, k in enumerate(self.order):
            Pi[j * n0:(j + 1) * n0, k * n0:(k + 1) * n0] = np.eye(n0)
        return Pi

    def state_labels(self) -> List[str]:
        original = self.network.state_labels()
        n0 = self.n0
        return [original[k * n0 + s] for k in self.order for s in range(n0)]


def clustered_system(net: NetworkSystem, cs: ClusterSet, strict: bool = True) -> ClusteredSystem:
    """Reorder the network by clusters and build P_0, P_i, B_0, C_0 and the local model split.

    Components of one cluster must share B and C. With ``strict=False`` a
    mismatch is only logged, which is enough for the existence conditions
    since they involve A, P_0 and P_i alone.
    """
    if cs.n_components != net.N0:
        raise InvalidParameterError('clusters', cs.n_components, f'network has {net.N0} components')
    _check_identical_io(net, cs, strict)

    n0, q = net.n0, net.q
    order = np.array([k for cluster in cs for k in cluster], dtype=int)
    r = tuple(len(cluster) for cluster in cs)
    offsets = tuple(int(o) for o in np.cumsum((0,) + r[:-1]))

    state_index = np.concatenate([np.arange(k * n0, (k + 1) * n0) for k in order])
    signal_index = np.concatenate([np.arange(k * q, (k + 1) * q) for k in order])
    A = net.state_matrix()[np.ix_(state_index, state_index)]
    M = net.interconnection.M[np.ix_(signal_index, state_index)]

    contiguous = [range(offsets[i], offsets[i] + r[i]) for i in range(len(r))]
    P0, Ps = embedding_matrices(contiguous, n0, net.N0)

    heads = [net.components[cluster[0]] for cluster in cs]
    B0 = block_diag(*[c.B for c in heads])
    C0 = block_diag(*[c.C for c in heads])
    E0 = block_diag(*[np.ones((size, 1)) for size in r])
    Bs = tuple(block_diag(*[head.B] * size) for head, size in zip(heads, r))
    Cs = tuple(block_diag(*[head.C] * size) for head, size in zip(heads, r))

    self_blocks = np.zeros_like(M)
    local_blocks = []
    for j, k in enumerate(order):
        rows = slice(j * q, (j + 1) * q)
        cols = slice(j * n0, (j + 1) * n0)
        self_blocks[rows, cols] = M[rows, cols]
        component = net.components[k]
        local_blocks.append(component.A + component.L @ M[rows, cols])
    M_ext = M - self_blocks

    A_local = tuple(block_diag(*local_blocks[offsets[i]:offsets[i] + r[i]]) for i in range(len(r)))
    L_local = tuple(
        block_diag(*[net.components[k].L for k in order[offsets[i]:offsets[i] + r[i]]])
        for i in range(len(r))
    )

    for array in (A, P0, B0, C0, E0, M_ext, *Ps, *Bs, *Cs, *A_local, *L_local):
        array.setflags(write=False)

    logger.debug(f"Clustered system: n={A.shape[0]}, N={len(r)}, cluster sizes {list(r)}")
    return ClusteredSystem(
        network=net, cluster_set=cs, order=order, A=A, P0=P0, P=tuple(Ps),
        B0=B0, C0=C0, E0=E0, B=Bs, C=Cs, A_local=A_local, L_local=L_local,
        M_ext=M_ext, r=r, n0=n0, q=q, offsets=offsets,
    )


def broadcast_check(cs: ClusteredSystem) -> Tuple[float, float]:
    """Frobenius defects of P_0B_0 = diag(B_i)E_0 and C_0P_0ᵀ = E_0ᵀdiag(C_i)"""
    input_defect = np.linalg.norm(cs.P0 @ cs.B0 - cs.input_matrix() @ cs.E0)
    output_defect = np.linalg.norm(cs.C0 @ cs.P0.T - cs.E0.T @ cs.output_matrix())
    return float(input_defect), float(output_defect)
