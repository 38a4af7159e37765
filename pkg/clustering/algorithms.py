import logging
from typing import List, Tuple

import numpy as np

from common.errors import RefinementError
from common.linalg import range_basis
from config.settings import settings
from network_model.clusters import ClusterSet
from network_model.clustered_system import embedding_matrices
from subspace.existence import global_condition, local_condition, reachability_from_others
from .partition import PartitionTrace

logger = logging.getLogger(__name__)


def _state_size(A: np.ndarray, cs: ClusterSet) -> int:
    n0, remainder = divmod(A.shape[0], cs.n_components)
    if remainder:
        raise RefinementError(0, f"state dimension {A.shape[0]} is not a multiple of {cs.n_components}")
    return n0


def first_offending(A: np.ndarray, cs: ClusterSet, tol: float = None, rank_tol: float = None):
    """Lowest-index cluster violating local invariance, with its controllable basis"""
    n0 = _state_size(A, cs)
    P0, Ps = embedding_matrices(cs.clusters, n0, cs.n_components)
    for i, Pi in enumerate(Ps):
        holds, defect, reach = local_condition(A, P0, Pi, tol, rank_tol)
        if not holds:
            logger.debug(f"Cluster {i + 1} violates local invariance (defect {defect:.2e})")
            return i, reach
    return None, None


def _group_rows(basis: np.ndarray, components: List[int], n0: int, tol: float) -> List[int]:
    """Greedy labels: components whose row blocks agree within tol share a label"""
    blocks = {k: basis[k * n0:(k + 1) * n0] for k in components}
    scale = max([1.0] + [np.linalg.norm(block) for block in blocks.values()])
    representatives: List[np.ndarray] = []
    labels = []
    for k in components:
        for label, representative in enumerate(representatives):
            if np.linalg.norm(blocks[k] - representative) <= tol * scale:
                labels.append(label)
                break
        else:
            representatives.append(blocks[k])
            labels.append(len(representatives) - 1)
    return labels


def _split(A: np.ndarray, cs: ClusterSet, i: int, reach, n0: int, row_tol: float, rank_tol: float) -> ClusterSet:
    # orthonormalize in lumped coordinates so that states of one class keep identical rows
    E, X = reach.frame()
    inside = np.zeros(E.shape[0], dtype=bool)
    for k in cs[i]:
        inside[k * n0:(k + 1) * n0] = True
    X = np.array(X)
    X[np.abs(E[inside]).sum(axis=0) > 0.0] = 0.0
    basis = E @ range_basis(X, rank_tol)

    outside = [k for k in range(cs.n_components) if k not in cs[i]]
    labels = dict(zip(outside, _group_rows(basis, outside, n0, row_tol)))

    clusters = [cs[i]]
    for j, cluster in enumerate(cs):
        if j == i:
            continue
        parts = {}
        for k in cluster:
            parts.setdefault(labels[k], []).append(k)
        clusters.extend(tuple(part) for part in parts.values())
    refined = ClusterSet(tuple(clusters), cs.n_components).canonical()
    if len(refined) == len(cs):
        raise RefinementError(i, "row comparison does not split any cluster")
    return refined


def refine(A: np.ndarray, cs: ClusterSet, i: int, tol: float = None, rank_tol: float = None) -> ClusterSet:
    """Split the clusters other than i by the rows of the projected controllability matrix.

    Rows of 𝓡(A, P_i) restricted to components outside cluster i are
    compared block by block; equal blocks stay together, and the grouping
    is intersected with the current clusters.
    """
    row_tol = settings.ROW_TOL if tol is None else tol
    rank_tol = settings.RANK_TOL if rank_tol is None else rank_tol
    n0 = _state_size(A, cs)
    P0, Ps = embedding_matrices(cs.clusters, n0, cs.n_components)
    holds, _, reach = local_condition(A, P0, Ps[i], rank_tol=rank_tol)
    if holds:
        raise RefinementError(i, "local invariance already holds; nothing to refine")
    return _split(A, cs, i, reach, n0, row_tol, rank_tol)


def algorithm1(A: np.ndarray, initial: ClusterSet, tol: float = None) -> Tuple[ClusterSet, PartitionTrace]:
    """Refine ``initial`` until every cluster satisfies local invariance"""
    row_tol = settings.ROW_TOL if tol is None else tol
    rank_tol = settings.RANK_TOL
    trace = PartitionTrace.start(initial)
    if len(initial) < 2:
        logger.warning("Clustering needs at least two initial clusters; returning the input unchanged")
        trace.reason = 'single initial cluster'
        return initial, trace

    n0 = _state_size(A, initial)
    cs = initial
    while True:
        i, reach = first_offending(A, cs, rank_tol=rank_tol)
        if i is None:
            trace.reason = 'local invariance holds for every cluster'
            break
        cs = _split(A, cs, i, reach, n0, row_tol, rank_tol)
        trace.record(cs, i, 'refine')
        logger.debug(f"Refined on cluster {i + 1}: {cs}")
    logger.info(f"Clustering finished with {len(cs)} clusters after {trace.refinements} refinements")
    return cs, trace


def _reachability_failures(A: np.ndarray, cs: ClusterSet) -> List[int]:
    n0 = _state_size(A, cs)
    P0, Ps = embedding_matrices(cs.clusters, n0, cs.n_components)
    return [j for j in range(len(cs)) if not reachability_from_others(A, P0, Ps, j)[0]]


def algorithm2(A: np.ndarray, initial: ClusterSet, tol: float = None) -> Tuple[ClusterSet, PartitionTrace]:
    """Clustering that also enforces reachability of every cluster from the others.

    Clusters failing reachability are split into singletons and local
    refinement is rerun; the loop stops when no splittable cluster fails.
    """
    cs, trace = algorithm1(A, initial, tol)
    if len(initial) < 2:
        return cs, trace

    while True:
        failing = _reachability_failures(A, cs)
        splittable = [j for j in failing if len(cs[j]) > 1]
        if not failing:
            trace.reason = 'local invariance and reachability hold for every cluster'
            break
        if not splittable:
            trace.reason = 'only singleton clusters fail reachability'
            break
        clusters = []
        for j, cluster in enumerate(cs):
            clusters.extend(((k,) for k in cluster) if j in splittable else [cluster])
        cs = ClusterSet(tuple(clusters), cs.n_components).canonical()
        trace.record(cs, splittable[0], 'split')
        logger.debug(f"Split clusters {[j + 1 for j in splittable]} into singletons")
        cs, rerun = algorithm1(A, cs, tol)
        trace.extend(rerun)

    n0 = _state_size(A, cs)
    P0, _ = embedding_matrices(cs.clusters, n0, cs.n_components)
    holds, defect = global_condition(A, P0)
    if not holds:
        logger.warning(f"Global invariance fails on {cs} (defect {defect:.2e}); falling back to singletons")
        cs = ClusterSet.singletons(cs.n_components)
        trace.record(cs, None, 'fallback')
        trace.reason = 'fallback to singletons'
    logger.info(f"Extended clustering finished with {len(cs)} clusters")
    return cs, trace
