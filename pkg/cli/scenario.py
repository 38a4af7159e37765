import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

from clustering import algorithm2
from common.errors import ScenarioError
from config.settings import settings
from network_model import (
    ClusterSet,
    NetworkSystem,
    Perturbation,
    benchmark_network,
    load_cluster_set,
    load_network,
)

logger = logging.getLogger(__name__)

REGIMES = ('free', 'local-only', 'global-only', 'glocal')


@dataclass
class Scenario:
    """Everything one CLI invocation needs: network, clusters, controller and simulation plan.

    ``clusters`` is a file path, 'auto', 'singletons', or None for the
    clusters carried by the network source.
    """
    network_file: Optional[str] = None
    benchmark_n0: Optional[int] = None
    perturb: float = 0.0
    seed: int = 0
    clusters: Optional[str] = None
    robust: bool = False
    horizon: float = settings.SIM_HORIZON
    step: float = settings.SIM_STEP
    out: str = settings.OUTPUT_DIR
    regimes: Tuple[str, ...] = REGIMES
    disturbance_cluster: int = 1
    disturbance: float = 1.0
    extended: bool = False
    _network: Optional[Tuple[NetworkSystem, Optional[ClusterSet]]] = field(default=None, repr=False)

    def __post_init__(self):
        if (self.network_file is None) == (self.benchmark_n0 is None):
            raise ScenarioError("exactly one of a network file or --benchmark N0 is required")
        if self.network_file is not None and not Path(self.network_file).exists():
            raise ScenarioError(f"network file not found: {self.network_file}")
        if self.clusters not in (None, 'auto', 'singletons') and not Path(self.clusters).exists():
            raise ScenarioError(f"cluster file not found: {self.clusters}")
        if self.network_file is not None and self.perturb:
            raise ScenarioError("--perturb applies to the built-in benchmark only")
        if not self.step > 0 or self.horizon < self.step:
            raise ScenarioError(f"invalid simulation plan: horizon {self.horizon}, step {self.step}")
        unknown = [r for r in self.regimes if r not in REGIMES]
        if unknown:
            raise ScenarioError(f"unknown regimes {unknown}; choose from {list(REGIMES)}")

    @property
    def output_dir(self) -> Path:
        path = Path(self.out)
        path.mkdir(parents=True, exist_ok=True)
        return path

    @property
    def is_perturbed(self) -> bool:
        return self.benchmark_n0 is not None and self.perturb > 0.0

    def network(self) -> Tuple[NetworkSystem, Optional[ClusterSet]]:
        """Network and the clusters shipped with it (benchmark groups or the file's clusters)"""
        if self._network is None:
            if self.network_file is not None:
                self._network = load_network(self.network_file)
            else:
                try:
                    perturbation = Perturbation(self.perturb, self.seed) if self.perturb else None
                except ValueError as exc:
                    raise ScenarioError(str(exc)) from exc
                self._network = benchmark_network(self.benchmark_n0, perturbation)
        return self._network

    def cluster_set(self) -> ClusterSet:
        """Clusters for the later stages; 'auto' refines the equal-I/O groups until an exact decomposition exists"""
        net, shipped = self.network()
        if self.clusters == 'singletons':
            return ClusterSet.singletons(net.N0)
        if self.clusters == 'auto':
            return auto_clusters(net)
        if self.clusters is not None:
            cs = load_cluster_set(self.clusters)
            if cs.n_components != net.N0:
                raise ScenarioError(f"cluster file covers {cs.n_components} components, network has {net.N0}")
            return cs
        if shipped is None:
            logger.info("No clusters given; grouping components by input/output matrices")
            return io_groups(net)
        return shipped


def io_groups(net: NetworkSystem) -> ClusterSet:
    """Coarsest clusters whose members share B and C"""
    groups = []
    for k, component in enumerate(net.components):
        for group in groups:
            head = net.components[group[0]]
            if head.B.shape == component.B.shape and head.C.shape == component.C.shape \
                    and (head.B == component.B).all() and (head.C == component.C).all():
                group.append(k)
                break
        else:
            groups.append([k])
    return ClusterSet.from_lists(groups, net.N0)


def auto_clusters(net: NetworkSystem) -> ClusterSet:
    """Equal-I/O groups refined by the extended clustering (local and global invariance, reachability)"""
    groups = io_groups(net)
    if len(groups) < 2:
        return groups
    found, trace = algorithm2(net.state_matrix(), groups)
    logger.info(f"Auto clusters: {len(groups)} equal-I/O groups refined to {len(found)} clusters ({trace.reason})")
    return found
