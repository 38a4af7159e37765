import logging
import time

import numpy as np
import pytest

from common.errors import InvalidInputError
from network_model import (
    ClusterSet,
    NetworkSystem,
    Perturbation,
    benchmark_network,
    clustered_system,
    diffusive_coupling,
    embedding_matrices,
    random_network,
    replicated_benchmark_network,
    second_order_component,
)
from subspace import (
    OrthonormalBasis,
    check_conditions,
    controllable_subspace,
    equitable_partition,
    existence_check,
    inclusion_defect,
    invariance_defect,
    reachability_condition,
    subspace_leq,
)


def test_controllable_subspace_of_chain():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    full = controllable_subspace(A, np.array([[0.0], [1.0]]))
    partial = controllable_subspace(A, np.array([[1.0], [0.0]]))
    assert full.dim == 2
    assert partial.dim == 1
    assert full.orthogonality_defect() < 1e-14
    assert invariance_defect(A, partial) < 1e-14


def test_controllable_subspace_shape_check():
    with pytest.raises(InvalidInputError):
        controllable_subspace(np.eye(3), np.ones((2, 1)))


def test_inclusion():
    e1, e2 = np.eye(3)[:, :1], np.eye(3)[:, 1:2]
    plane = np.eye(3)[:, :2]
    assert subspace_leq(e1, plane)
    assert not subspace_leq(plane, e1)
    assert inclusion_defect(e2, e1) == pytest.approx(1.0)


def test_benchmark_clusters_admit_decomposition(cs):
    start = time.perf_counter()
    report = existence_check(cs)
    elapsed = time.perf_counter() - start
    assert report.overall
    assert all(report.local_flags)
    assert report.global_flag
    assert max(report.local_defects) < 1e-8
    assert elapsed < 1.0


def test_bipartition_fails_on_second_cluster(benchmark):
    net, _ = benchmark
    bipartition = ClusterSet.from_lists([range(5), range(5, 9)], 9)
    report = existence_check(clustered_system(net, bipartition, strict=False))
    assert not report.overall
    assert report.local_flags == [True, False]
    assert report.offending_clusters == [1]
    assert not report.global_flag
    data = report.to_dict()
    assert data['clusters'][1]['local']['holds'] is False
    assert 'FAILS' in report.summary()


def test_singletons_always_admit_decomposition():
    net = random_network(6, seed=2)
    report = existence_check(clustered_system(net, ClusterSet.singletons(6)))
    assert report.overall


def test_single_cluster_reports_no_reachability(caplog):
    net = random_network(5, seed=1)
    P0, Ps = embedding_matrices([range(5)], net.n0, 5)
    report = check_conditions(net.state_matrix(), P0, Ps)
    assert report.reachability_flags == [False]
    assert report.reachability_notes[0]

    cs = clustered_system(net, ClusterSet.whole(5))
    with caplog.at_level(logging.WARNING):
        assert reachability_condition(cs, 0) is False
    assert 'only one cluster' in caplog.text


def test_benchmark_clusters_reach_each_other(cs):
    report = existence_check(cs)
    assert report.reachability_flags == [True, True, True]


def test_perturbed_benchmark_has_no_exact_decomposition():
    net, clusters = benchmark_network(1, Perturbation(0.2, seed=0))
    assert not existence_check(clustered_system(net, clusters)).overall


def _staircase_pair(seed):
    """Random (A, B) with a controllable part of known dimension, hidden by an orthogonal change of basis"""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    n_c = int(rng.integers(1, n + 1))
    m = int(rng.integers(1, 3))
    A = rng.standard_normal((n, n))
    A[n_c:, :n_c] = 0.0
    B = np.zeros((n, m))
    B[:n_c] = rng.standard_normal((n_c, m))
    T, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return T @ A @ T.T, T @ B, n_c


@pytest.mark.parametrize("seed", range(30))
def test_krylov_dimension_matches_controllability_matrix_rank(seed):
    A, B, n_c = _staircase_pair(seed)
    n = A.shape[0]
    blocks = [B / np.linalg.norm(B)]
    for _ in range(n - 1):
        block = A @ blocks[-1]
        blocks.append(block / np.linalg.norm(block))
    krylov = np.hstack(blocks)
    brute = np.linalg.matrix_rank(krylov, tol=1e-10 * np.linalg.norm(krylov, 2))

    basis = controllable_subspace(A, B)
    assert basis.dim == brute == n_c
    assert controllable_subspace(A, B, lump=False).dim == n_c
    assert invariance_defect(A, basis) < 1e-8
    assert subspace_leq(B, basis)
    assert basis.orthogonality_defect() < 1e-12


def test_equitable_partition_of_benchmark_matches_groups(benchmark):
    net, expected = benchmark
    A = net.state_matrix()
    P0, _ = embedding_matrices(expected.clusters, net.n0, net.N0)
    labels = equitable_partition(A, P0)
    # angle and velocity states of each group form one class apiece
    assert len(set(labels)) == 2 * len(expected)
    for cluster in expected:
        states = [k * net.n0 + s for k in cluster for s in range(net.n0)]
        assert len(set(labels[states])) == 2


@pytest.mark.parametrize("n0", [5, 6])
def test_replicated_benchmark_groups_admit_decomposition(n0):
    net, expected = replicated_benchmark_network(n0)
    cs = clustered_system(net, expected)
    report = existence_check(cs)
    assert report.overall
    assert max(report.local_defects) < 1e-8

    span = np.hstack([cs.P[1], cs.P0])
    reach = controllable_subspace(cs.A, cs.P[1])
    assert inclusion_defect(reach, OrthonormalBasis.of(span)) < 1e-10
    assert reach.dim <= np.linalg.matrix_rank(span)


def test_benchmark_is_invariant_under_swaps_inside_groups(benchmark):
    net, expected = benchmark
    A, B = net.state_matrix(), net.input_matrix()
    order = list(range(net.N0))
    for cluster in expected:
        order[cluster[0]], order[cluster[-1]] = order[cluster[-1]], order[cluster[0]]
    perm = np.kron(np.eye(net.N0)[order], np.eye(net.n0))
    np.testing.assert_allclose(perm @ A @ perm.T, A, atol=1e-14)
    np.testing.assert_allclose(perm @ B @ np.eye(net.N0)[order].T, B, atol=1e-14)


def test_existence_is_unchanged_by_relabelling_components(benchmark):
    net, expected = benchmark
    order = np.random.default_rng(4).permutation(net.N0)
    perm = np.kron(np.eye(net.N0)[order], np.eye(net.n0))
    inverse = np.argsort(order)
    relabelled = ClusterSet.from_lists([[int(inverse[k]) for k in cluster] for cluster in expected], net.N0)
    P0, Ps = embedding_matrices(relabelled.clusters, net.n0, net.N0)
    report = check_conditions(perm @ net.state_matrix() @ perm.T, P0, Ps)
    assert report.overall
    assert max(report.local_defects) < 1e-8


def test_disconnected_identical_clusters_are_not_reachable():
    components = tuple(second_order_component(1.0, 0.3) for _ in range(4))
    net = NetworkSystem(components, diffusive_coupling([(0, 1, 1.0), (2, 3, 1.0)], 4))
    report = existence_check(clustered_system(net, ClusterSet.from_lists([[0, 1], [2, 3]], 4)))
    assert all(report.local_flags)
    assert report.global_flag
    assert report.reachability_flags == [False, False]
