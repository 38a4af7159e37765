import logging

import numpy as np
import pytest

from common.errors import AssumptionViolationError, InvalidParameterError, InvalidTopologyError
from network_model import (
    ClusterSet,
    Interconnection,
    Perturbation,
    benchmark_network,
    broadcast_check,
    clustered_system,
    diffusive_coupling,
    load_network,
    random_network,
    replicated_benchmark_network,
    save_network,
    second_order_component,
)


def test_second_order_component_matrices():
    c = second_order_component(2.0, 0.3)
    assert np.allclose(c.A, [[0.0, 1.0], [0.0, -0.15]])
    assert np.allclose(c.L, [[0.0], [-0.5]])
    assert np.allclose(c.B, [[0.0], [-0.5]])
    assert np.allclose(c.C, [[0.0, 1.0]])
    assert c.parameters == (2.0, 0.3)


def test_second_order_component_rejects_bad_parameters():
    with pytest.raises(InvalidParameterError):
        second_order_component(0.0, 0.1)
    with pytest.raises(InvalidParameterError):
        second_order_component(1.0, -0.1)
    with pytest.raises(InvalidParameterError):
        second_order_component(float('nan'), 0.1)


def test_diffusive_coupling_rejects_bad_edges():
    with pytest.raises(InvalidTopologyError):
        diffusive_coupling([(0, 0, 1.0)], 2)
    with pytest.raises(InvalidTopologyError):
        diffusive_coupling([(0, 1, -1.0)], 2)
    with pytest.raises(InvalidTopologyError):
        diffusive_coupling([(0, 1, 1.0), (1, 0, 2.0)], 2)
    with pytest.raises(InvalidTopologyError):
        diffusive_coupling([(0, 5, 1.0)], 2)


def test_interconnection_enforces_neighborhoods():
    with pytest.raises(InvalidTopologyError):
        Interconnection(M=np.ones((2, 4)), n_components=2, n0=2, q=1,
                        neighborhoods=(frozenset(), frozenset()))


def test_benchmark_state_matrix():
    net, clusters = benchmark_network(1)
    A = net.state_matrix()
    assert net.N0 == 9 and A.shape == (18, 18)
    assert clusters.to_one_based() == [[1, 2, 3], [4, 5], [6, 7, 8, 9]]
    # component 1: m=3, d=0.4, eight neighbours of weight 1
    assert A[1, 0] == pytest.approx(-8.0 / 3.0)
    assert A[1, 1] == pytest.approx(-0.4 / 3.0)
    assert A[1, 2] == pytest.approx(1.0 / 3.0)
    assert A[1, 3] == 0.0
    # rigid rotation is an equilibrium
    assert np.allclose(A @ np.kron(np.ones(9), [1.0, 0.0]), 0.0)


def test_benchmark_replication_sizes():
    net, clusters = benchmark_network(2)
    assert net.N0 == 18
    assert clusters.sizes == [6, 4, 8]
    with pytest.raises(InvalidParameterError):
        benchmark_network(0)


def test_perturbation_keeps_nominal_actuator():
    with pytest.raises(InvalidParameterError):
        Perturbation(1.0)
    net, clusters = benchmark_network(1, Perturbation(0.2, seed=0))
    nominal, _ = benchmark_network(1)
    for k in range(9):
        assert np.array_equal(net.components[k].B, nominal.components[k].B)
        m, d = net.components[k].parameters
        m0, d0 = nominal.components[k].parameters
        assert abs(m / m0 - 1.0) <= 0.2 and abs(d / d0 - 1.0) <= 0.2
    again, _ = benchmark_network(1, Perturbation(0.2, seed=0))
    assert np.array_equal(net.state_matrix(), again.state_matrix())


def test_replicated_benchmark_has_one_group_per_block():
    net, clusters = replicated_benchmark_network(2)
    assert net.N0 == 18
    assert len(clusters) == 6
    assert clusters.sizes == [3, 2, 4, 3, 2, 4]


def test_cluster_set_validation():
    with pytest.raises(InvalidParameterError):
        ClusterSet.from_lists([[0, 1], [1, 2]], 3)
    with pytest.raises(InvalidParameterError):
        ClusterSet.from_lists([[0], [2]], 3)
    with pytest.raises(InvalidParameterError):
        ClusterSet.from_lists([[0, 1], []], 2)
    cs = ClusterSet.from_one_based([[3, 1], [2]])
    assert cs.clusters == ((0, 2), (1,))
    assert str(cs) == '{{1,3}, {2}}'
    assert cs.cluster_of(2) == 0


def test_local_split_identity(benchmark, perturbed_cs):
    net, clusters = benchmark
    for system in (clustered_system(net, clusters), perturbed_cs):
        for i in range(system.N):
            lhs = system.P[i].T @ system.A
            rhs = system.A_local[i] @ system.P[i].T + system.L_local[i] @ system.interaction_rows(i)
            assert np.allclose(lhs, rhs, atol=1e-14)


def test_broadcast_identities(cs):
    input_defect, output_defect = broadcast_check(cs)
    assert input_defect == 0.0
    assert output_defect == 0.0
    assert cs.P0.shape == (18, 6)
    assert np.array_equal(cs.P0.T @ cs.P0, np.diag([3, 3, 2, 2, 4, 4]).astype(float))


def test_clustered_system_reorders_states():
    net = random_network(4, seed=3)
    cs = clustered_system(net, ClusterSet.from_lists([[2, 0], [1, 3]], 4))
    Pi = cs.state_permutation()
    assert list(cs.order) == [0, 2, 1, 3]
    assert np.allclose(cs.A, Pi @ net.state_matrix() @ Pi.T)
    assert cs.state_labels()[:4] == ['theta_1', 'omega_1', 'theta_3', 'omega_3']


def test_mixed_cluster_violates_identical_io(benchmark, caplog):
    net, _ = benchmark
    bipartition = ClusterSet.from_lists([range(5), range(5, 9)], 9)
    with pytest.raises(AssumptionViolationError) as info:
        clustered_system(net, bipartition)
    assert info.value.cluster == 0
    with caplog.at_level(logging.WARNING):
        cs = clustered_system(net, bipartition, strict=False)
    assert cs.N == 2
    assert 'different B matrices' in caplog.text


def test_random_network_is_connected_and_reproducible():
    a = random_network(8, seed=11)
    b = random_network(8, seed=11)
    assert np.array_equal(a.state_matrix(), b.state_matrix())
    laplacian = a.interconnection.M[:, ::2]
    assert np.sum(np.abs(np.linalg.eigvalsh(laplacian)) < 1e-9) == 1


def test_network_file_keeps_clusters_and_actuators(tmp_path):
    net, clusters = benchmark_network(1, Perturbation(0.1, seed=4))
    path = save_network(net, tmp_path / 'net.json', clusters)
    loaded, loaded_clusters = load_network(path)
    assert loaded_clusters.same_partition(clusters)
    assert np.allclose(loaded.state_matrix(), net.state_matrix(), rtol=0.0, atol=1e-15)
    assert np.allclose(loaded.input_matrix(), net.input_matrix(), rtol=0.0, atol=1e-15)
