import logging

import numpy as np
import pytest

from clustering import (
    admissible_refinements,
    algorithm1,
    algorithm2,
    first_offending,
    is_locally_admissible,
    is_partition_of,
    minimal_admissible,
    refine,
    set_partitions,
)
from common.errors import InvalidParameterError, PartitionMismatchError, RefinementError
from network_model import ClusterSet, clustered_system, random_network, replicated_benchmark_network
from subspace import existence_check


def _halves(n_components):
    split = (n_components + 1) // 2
    return ClusterSet.from_lists([range(split), range(split, n_components)], n_components)


def _halves_by_inertia(net):
    """Halves further split so that every cluster holds a single inertia (equal B)"""
    parts = {}
    for cluster in _halves(net.N0):
        for k in cluster:
            parts.setdefault((cluster, net.components[k].parameters[0]), []).append(k)
    return ClusterSet.from_lists(parts.values(), net.N0)


def test_algorithm1_recovers_benchmark_groups(benchmark):
    net, expected = benchmark
    bipartition = ClusterSet.from_lists([range(5), range(5, 9)], 9)
    found, trace = algorithm1(net.state_matrix(), bipartition)
    assert found.same_partition(expected)
    assert found.to_one_based() == [[1, 2, 3], [4, 5], [6, 7, 8, 9]]
    assert trace.refinements <= 2
    assert trace.is_refinement_chain()
    assert trace.steps[0] is bipartition
    assert trace.to_dict()['steps'][1]['offending_cluster'] == 2


def test_first_offending_and_refine(benchmark):
    net, _ = benchmark
    A = net.state_matrix()
    bipartition = ClusterSet.from_lists([range(5), range(5, 9)], 9)
    i, reach = first_offending(A, bipartition)
    assert i == 1
    assert reach.dim > 0
    refined = refine(A, bipartition, 1)
    assert is_partition_of(refined, bipartition)
    assert len(refined) > 2


def test_refine_refuses_admissible_cluster(cs):
    net = cs.network
    with pytest.raises(RefinementError):
        refine(net.state_matrix(), cs.cluster_set, 0)


def test_algorithm1_single_cluster_is_returned(caplog):
    net = random_network(4, seed=0)
    whole = ClusterSet.whole(4)
    with caplog.at_level(logging.WARNING):
        found, trace = algorithm1(net.state_matrix(), whole)
    assert found is whole
    assert trace.reason == 'single initial cluster'
    assert 'at least two' in caplog.text


@pytest.mark.parametrize("n0", [2, 5, 6])
def test_algorithm1_on_replicated_benchmark(n0):
    net, expected = replicated_benchmark_network(n0)
    found, trace = algorithm1(net.state_matrix(), _halves(net.N0))
    assert found.same_partition(expected)
    assert trace.is_refinement_chain()


@pytest.mark.parametrize("seed", range(50))
def test_algorithm2_output_admits_decomposition(seed):
    rng = np.random.default_rng(seed)
    n_components = int(rng.integers(4, 13))
    net = random_network(n_components, seed=seed, inertia_classes=(1.0, 2.0))
    initial = _halves_by_inertia(net)
    found, trace = algorithm2(net.state_matrix(), initial)
    assert is_partition_of(found, initial)
    assert trace.is_refinement_chain()
    report = existence_check(clustered_system(net, found))
    assert report.overall


@pytest.mark.parametrize("seed", range(12))
def test_algorithm1_is_minimal_on_small_networks(seed):
    n_components = 4 + seed % 3
    net = random_network(n_components, seed=100 + seed, inertia_classes=(1.0, 2.0))
    A = net.state_matrix()
    initial = _halves_by_inertia(net)
    found, _ = algorithm1(A, initial)
    assert is_locally_admissible(A, found)
    candidates = admissible_refinements(A, initial)
    assert any(candidate.same_partition(found) for candidate in candidates)
    # every admissible refinement refines the one found
    for candidate in candidates:
        assert is_partition_of(candidate, found)
    assert len(found) == len(minimal_admissible(A, initial))


def test_partition_relation():
    coarse = ClusterSet.from_lists([[0, 1, 2], [3]], 4)
    fine = ClusterSet.from_lists([[0], [1, 2], [3]], 4)
    assert is_partition_of(fine, coarse)
    assert not is_partition_of(coarse, fine)
    with pytest.raises(PartitionMismatchError):
        is_partition_of(fine, ClusterSet.singletons(5))


def test_set_partitions_count():
    assert len(list(set_partitions([0, 1, 2, 3]))) == 15
    assert len(list(set_partitions([]))) == 1


def test_exhaustive_search_is_bounded():
    net = random_network(9, seed=0)
    with pytest.raises(InvalidParameterError):
        admissible_refinements(net.state_matrix(), _halves(9))
