import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from common.errors import InvalidTopologyError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Interconnection:
    """Interaction map v = M x with per-component blocks M_[k,l] of size q×n0"""
    M: np.ndarray
    n_components: int
    n0: int
    q: int
    neighborhoods: Tuple[FrozenSet[int], ...]
    graph: Optional[nx.Graph] = None

    def __post_init__(self):
        M = np.array(self.M, dtype=float, ndmin=2)
        expected = (self.n_components * self.q, self.n_components * self.n0)
        if M.shape != expected:
            raise InvalidTopologyError(f"interaction matrix has shape {M.shape}, expected {expected}")
        if len(self.neighborhoods) != self.n_components:
            raise InvalidTopologyError("one neighborhood per component is required")
        M.setflags(write=False)
        object.__setattr__(self, 'M', M)

        for k in range(self.n_components):
            allowed = set(self.neighborhoods[k]) | {k}
            for l in range(self.n_components):
                if l not in allowed and np.any(self.block(k, l) != 0.0):
                    raise InvalidTopologyError(
                        f"block M[{k + 1},{l + 1}] is nonzero but {l + 1} is not a neighbor of {k + 1}",
                        edge=(k, l),
                    )

    def block(self, k: int, l: int) -> np.ndarray:
        return self.M[k * self.q:(k + 1) * self.q, l * self.n0:(l + 1) * self.n0]

    def self_coupling(self) -> np.ndarray:
        """Block-diagonal part diag(M_[k,k])"""
        D = np.zeros_like(self.M)
        for k in range(self.n_components):
            D[k * self.q:(k + 1) * self.q, k * self.n0:(k + 1) * self.n0] = self.block(k, k)
        return D

    def neighbor_coupling(self) -> np.ndarray:
        """M with its self-coupling blocks removed"""
        return self.M - self.self_coupling()

    @classmethod
    def from_matrix(cls, M: np.ndarray, n_components: int, n0: int, q: int) -> 'Interconnection':
        """Infer neighborhoods from the nonzero off-diagonal blocks of M"""
        M = np.asarray(M, dtype=float)
        neighborhoods = []
        for k in range(n_components):
            rows = M[k * q:(k + 1) * q]
            neighbors = {
                l for l in range(n_components)
                if l != k and np.any(rows[:, l * n0:(l + 1) * n0] != 0.0)
            }
            neighborhoods.append(frozenset(neighbors))
        return cls(M=M, n_components=n_components, n0=n0, q=q, neighborhoods=tuple(neighborhoods))


def _weight_table(edges: Iterable[Sequence[float]], n_components: int) -> Dict[Tuple[int, int], float]:
    weights: Dict[Tuple[int, int], float] = {}
    for edge in edges:
        if len(edge) != 3:
            raise InvalidTopologyError(f"edge {edge!r} must be (k, l, weight)")
        k, l, alpha = int(edge[0]), int(edge[1]), float(edge[2])
        if not (0 <= k < n_components and 0 <= l < n_components):
            raise InvalidTopologyError(f"edge ({k + 1}, {l + 1}) references an unknown component", edge=(k, l))
        if k == l:
            raise InvalidTopologyError(f"self-loop at component {k + 1}", edge=(k, l))
        if not np.isfinite(alpha) or alpha <= 0:
            raise InvalidTopologyError(f"edge ({k + 1}, {l + 1}) has nonpositive weight {alpha}", edge=(k, l))
        for key in ((k, l), (l, k)):
            if key in weights and weights[key] != alpha:
                raise InvalidTopologyError(
                    f"asymmetric weights on edge ({k + 1}, {l + 1}): {weights[key]} vs {alpha}",
                    edge=(k, l),
                )
        weights[(k, l)] = alpha
    return weights


def diffusive_coupling(edges: Iterable[Sequence[float]], n_components: int, n0: int = 2) -> Interconnection:
    """Angle-difference coupling v_[k] = Σ_l α_[k,l](θ_[k] − θ_[l]).

    Edges are 0-based (k, l, α) triples; listing both directions is allowed
    when the weights agree.
    """
    weights = _weight_table(edges, n_components)

    graph = nx.Graph()
    graph.add_nodes_from(range(n_components))
    for (k, l), alpha in weights.items():
        graph.add_edge(k, l, weight=alpha)

    laplacian = nx.laplacian_matrix(graph, nodelist=list(range(n_components)), weight='weight').toarray()
    angle_selector = np.zeros((1, n0))
    angle_selector[0, 0] = 1.0
    M = np.kron(laplacian, angle_selector)

    neighborhoods = tuple(frozenset(graph.neighbors(k)) for k in range(n_components))
    logger.debug(f"Diffusive coupling over {graph.number_of_edges()} edges, {n_components} components")
    return Interconnection(M=M, n_components=n_components, n0=n0, q=1,
                           neighborhoods=neighborhoods, graph=graph)


def complete_topology(n_components: int, weight: float = 1.0) -> list:
    """Edge list of the complete graph on n_components nodes (0-based)"""
    return [(k, l, weight) for k, l in nx.complete_graph(n_components).edges()]
