import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from common.errors import InvalidParameterError
from config.settings import settings
from .clusters import ClusterSet
from .components import second_order_component
from .interconnection import complete_topology, diffusive_coupling
from .network import NetworkSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Perturbation:
    """Uniform relative perturbation of inertia and damping, δ ∈ [−magnitude, magnitude]"""
    magnitude: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.magnitude < 1.0:
            raise InvalidParameterError('magnitude', self.magnitude, 'must lie in [0, 1)')

    def draw(self, n_components: int) -> np.ndarray:
        """(n_components, 2) array of (δm, δd), drawn component by component"""
        rng = np.random.default_rng(self.seed)
        return rng.uniform(-self.magnitude, self.magnitude, size=(n_components, 2))


def _group_parameters(n0: int, parameters, group_sizes) -> list:
    table = []
    for (m, d), size in zip(parameters, group_sizes):
        table.extend([(m, d)] * (size * n0))
    return table


def benchmark_network(
    n0: int = 1,
    perturb: Optional[Perturbation] = None,
    coupling: float = None,
) -> Tuple[NetworkSystem, ClusterSet]:
    """Nine-component second-order network replicated n0 times.

    Groups of 3·n0, 2·n0 and 4·n0 components share the inertia/damping pairs
    of ``settings.BENCHMARK_PARAMETERS``; every pair of components is coupled
    with weight ``coupling``. Returns the network and its homogeneous
    clusters. A perturbation scales m and d of each component by (1 + δ)
    while the actuator channel keeps the group's nominal inertia.
    """
    if int(n0) != n0 or n0 < 1:
        raise InvalidParameterError('n0', n0, 'replication factor must be a positive integer')
    n0 = int(n0)
    coupling = settings.COUPLING_WEIGHT if coupling is None else coupling
    parameters = _group_parameters(n0, settings.BENCHMARK_PARAMETERS, settings.BENCHMARK_GROUP_SIZES)
    n_components = len(parameters)

    deltas = perturb.draw(n_components) if perturb is not None else np.zeros((n_components, 2))
    components = tuple(
        second_order_component(m * (1.0 + dm), d * (1.0 + dd), input_inertia=m)
        for (m, d), (dm, dd) in zip(parameters, deltas)
    )
    interconnection = diffusive_coupling(complete_topology(n_components, coupling), n_components)

    bounds = np.cumsum([0] + [size * n0 for size in settings.BENCHMARK_GROUP_SIZES])
    clusters = ClusterSet.from_lists(
        [range(bounds[g], bounds[g + 1]) for g in range(len(bounds) - 1)], n_components
    )
    if perturb is not None:
        logger.info(f"Benchmark n0={n0}: {n_components} components, "
                    f"perturbation ±{perturb.magnitude:g} (seed {perturb.seed})")
    else:
        logger.info(f"Benchmark n0={n0}: {n_components} components")
    return NetworkSystem(components, interconnection), clusters


def replicated_benchmark_network(n0: int = 1, coupling: float = None) -> Tuple[NetworkSystem, ClusterSet]:
    """n0 blocks of nine components, block b scaled by 1 + 0.5·b/n0.

    Every block carries its own parameter triple, so the homogeneous cluster
    set has 3·n0 clusters of sizes 3, 2, 4 per block.
    """
    if int(n0) != n0 or n0 < 1:
        raise InvalidParameterError('n0', n0, 'replication factor must be a positive integer')
    n0 = int(n0)
    coupling = settings.COUPLING_WEIGHT if coupling is None else coupling
    components = []
    clusters = []
    for block in range(n0):
        scale = 1.0 + 0.5 * block / n0
        offset = len(components)
        for (m, d), size in zip(settings.BENCHMARK_PARAMETERS, settings.BENCHMARK_GROUP_SIZES):
            clusters.append(range(offset, offset + size))
            components.extend(second_order_component(m * scale, d * scale) for _ in range(size))
            offset += size
    n_components = len(components)
    interconnection = diffusive_coupling(complete_topology(n_components, coupling), n_components)
    return NetworkSystem(tuple(components), interconnection), ClusterSet.from_lists(clusters, n_components)


def random_network(
    n_components: int,
    seed: int = 0,
    edge_probability: float = 0.5,
    damping_classes: Sequence[float] = (0.2, 0.3, 0.4),
    inertia_classes: Sequence[float] = (1.0,),
    max_tries: int = 100,
) -> NetworkSystem:
    """Connected random network of second-order components.

    Each component draws its damping from ``damping_classes`` and its inertia
    from ``inertia_classes``; every edge gets a weight from {1, 2}. The graph
    is redrawn until it is connected.
    """
    if n_components < 1:
        raise InvalidParameterError('n_components', n_components, 'must be positive')
    if not len(inertia_classes) or min(inertia_classes) <= 0:
        raise InvalidParameterError('inertia_classes', inertia_classes, 'needs at least one positive inertia')
    rng = np.random.default_rng(seed)
    for attempt in range(max_tries):
        graph = nx.gnp_random_graph(n_components, edge_probability, seed=int(rng.integers(2 ** 31)))
        if nx.is_connected(graph):
            break
    else:
        raise InvalidParameterError('edge_probability', edge_probability,
                                    f'no connected graph after {max_tries} draws')
    edges = [(k, l, float(rng.integers(1, 3))) for k, l in graph.edges()]
    dampings = rng.choice(np.asarray(damping_classes, dtype=float), size=n_components)
    inertias = rng.choice(np.asarray(inertia_classes, dtype=float), size=n_components)
    components = tuple(second_order_component(float(m), float(d)) for m, d in zip(inertias, dampings))
    logger.debug(f"Random network: {n_components} components, {len(edges)} edges after {attempt + 1} draws")
    return NetworkSystem(components, diffusive_coupling(edges, n_components))
