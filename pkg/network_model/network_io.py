"""JSON network and cluster-set files. Component indices are 1-based on disk."""
import json
import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from common.errors import InvalidParameterError
from .clusters import ClusterSet
from .components import ComponentModel, second_order_component
from .interconnection import Interconnection, diffusive_coupling
from .network import NetworkSystem

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _component_to_dict(component: ComponentModel) -> dict:
    if component.parameters is not None:
        m, d = component.parameters
        entry = {'m': m, 'd': d}
        actuator = -1.0 / component.B[1, 0]
        if not np.isclose(actuator, m, rtol=1e-15, atol=0.0):
            entry['input_inertia'] = float(actuator)
        return entry
    return {name: getattr(component, name).tolist() for name in ('A', 'L', 'B', 'C')}


def _component_from_dict(entry: dict, index: int) -> ComponentModel:
    if 'm' in entry:
        return second_order_component(float(entry['m']), float(entry.get('d', 0.0)),
                                      input_inertia=entry.get('input_inertia'))
    missing = [name for name in ('A', 'L', 'B', 'C') if name not in entry]
    if missing:
        raise InvalidParameterError('components', index + 1, f'missing matrices {missing}')
    return ComponentModel(A=entry['A'], L=entry['L'], B=entry['B'], C=entry['C'])


def network_to_dict(net: NetworkSystem, clusters: Optional[ClusterSet] = None) -> dict:
    data = {'components': [_component_to_dict(c) for c in net.components]}
    graph = net.interconnection.graph
    if graph is not None:
        data['edges'] = [[k + 1, l + 1, float(w)] for k, l, w in sorted(graph.edges(data='weight'))]
    else:
        data['M'] = net.interconnection.M.tolist()
    if clusters is not None:
        data['clusters'] = clusters.to_one_based()
    return data


def network_from_dict(data: dict) -> Tuple[NetworkSystem, Optional[ClusterSet]]:
    if 'components' not in data:
        raise InvalidParameterError('network', sorted(data), "missing 'components'")
    components = tuple(_component_from_dict(entry, k) for k, entry in enumerate(data['components']))
    n_components = len(components)
    n0, q = components[0].n0, components[0].q

    if 'M' in data:
        interconnection = Interconnection.from_matrix(np.asarray(data['M'], dtype=float), n_components, n0, q)
    else:
        edges = [(int(k) - 1, int(l) - 1, float(alpha)) for k, l, alpha in data.get('edges', [])]
        interconnection = diffusive_coupling(edges, n_components, n0=n0)

    clusters = None
    if data.get('clusters') is not None:
        clusters = ClusterSet.from_one_based(data['clusters'], n_components)
    return NetworkSystem(components, interconnection), clusters


def load_network(path: PathLike) -> Tuple[NetworkSystem, Optional[ClusterSet]]:
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    net, clusters = network_from_dict(data)
    logger.info(f"Loaded network with {net.N0} components from {path}")
    return net, clusters


def save_network(net: NetworkSystem, path: PathLike, clusters: Optional[ClusterSet] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(network_to_dict(net, clusters), f, indent=2)
    return path


def cluster_set_to_dict(cs: ClusterSet) -> dict:
    return {'n_components': cs.n_components, 'clusters': cs.to_one_based()}


def cluster_set_from_dict(data: dict) -> ClusterSet:
    return ClusterSet.from_one_based(data['clusters'], data.get('n_components'))


def load_cluster_set(path: PathLike) -> ClusterSet:
    with open(path, 'r', encoding='utf-8') as f:
        return cluster_set_from_dict(json.load(f))


def save_cluster_set(cs: ClusterSet, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(cluster_set_to_dict(cs), f, indent=2)
    return path
