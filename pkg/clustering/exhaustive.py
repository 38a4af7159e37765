"""Brute-force search over refinements of a cluster set (small networks only)."""
import itertools
import logging
from typing import Iterator, List, Sequence

import numpy as np

from common.errors import InvalidParameterError
from network_model.clusters import ClusterSet
from network_model.clustered_system import embedding_matrices
from subspace.existence import local_condition

logger = logging.getLogger(__name__)

MAX_COMPONENTS = 8


def set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[head]] + partition
        for j in range(len(partition)):
            yield partition[:j] + [[head] + partition[j]] + partition[j + 1:]


def refinements(cs: ClusterSet) -> Iterator[ClusterSet]:
    """Every cluster set that is a partition of ``cs``"""
    per_cluster = [list(set_partitions(list(cluster))) for cluster in cs]
    for choice in itertools.product(*per_cluster):
        clusters = [tuple(part) for partition in choice for part in partition]
        yield ClusterSet(tuple(clusters), cs.n_components).canonical()


def is_locally_admissible(A: np.ndarray, cs: ClusterSet, tol: float = None) -> bool:
    n0 = A.shape[0] // cs.n_components
    P0, Ps = embedding_matrices(cs.clusters, n0, cs.n_components)
    return all(local_condition(A, P0, Pi, tol)[0] for Pi in Ps)


def admissible_refinements(A: np.ndarray, initial: ClusterSet, tol: float = None) -> List[ClusterSet]:
    """Refinements of ``initial`` whose clusters all satisfy local invariance"""
    if initial.n_components > MAX_COMPONENTS:
        raise InvalidParameterError('n_components', initial.n_components,
                                    f'exhaustive search is limited to {MAX_COMPONENTS} components')
    found = [cs for cs in refinements(initial) if is_locally_admissible(A, cs, tol)]
    logger.debug(f"{len(found)} admissible refinements of {initial}")
    return found


def minimal_admissible(A: np.ndarray, initial: ClusterSet, tol: float = None) -> ClusterSet:
    """Admissible refinement with the fewest clusters"""
    return min(admissible_refinements(A, initial, tol), key=len)
