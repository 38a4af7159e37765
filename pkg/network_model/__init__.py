from .components import ComponentModel, second_order_component
from .interconnection import Interconnection, diffusive_coupling, complete_topology
from .clusters import ClusterSet
from .network import NetworkSystem
from .benchmark import Perturbation, benchmark_network, replicated_benchmark_network, random_network
from .clustered_system import ClusteredSystem, clustered_system, embedding_matrices, broadcast_check
from .network_io import (
    load_network,
    save_network,
    network_to_dict,
    network_from_dict,
    load_cluster_set,
    save_cluster_set,
    cluster_set_to_dict,
    cluster_set_from_dict,
)

__all__ = [
    'ComponentModel', 'second_order_component',
    'Interconnection', 'diffusive_coupling', 'complete_topology',
    'ClusterSet', 'NetworkSystem',
    'Perturbation', 'benchmark_network', 'replicated_benchmark_network', 'random_network',
    'ClusteredSystem', 'clustered_system', 'embedding_matrices', 'broadcast_check',
    'load_network', 'save_network', 'network_to_dict', 'network_from_dict',
    'load_cluster_set', 'save_cluster_set', 'cluster_set_to_dict', 'cluster_set_from_dict',
]
