import json

import numpy as np
import pytest

from cli import (
    Scenario,
    auto_clusters,
    cluster_spreads,
    cmd_bench,
    initial_disturbance,
    io_groups,
    loglog_slope,
    simulate_regime,
)
from cli.bench import merged_pair
from clustering import algorithm1, is_partition_of
from common.errors import ScenarioError
from config.settings import settings
from main import run
from monitoring.bench_monitor import BenchMonitor
from network_model import benchmark_network, clustered_system
from subspace import existence_check
from verify_benchmark import check_benchmark


def _read(path):
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


@pytest.fixture
def bipartition_file(tmp_path):
    path = tmp_path / 'bipartition.json'
    path.write_text(json.dumps({'clusters': [[1, 2, 3, 4, 5], [6, 7, 8, 9]]}))
    return str(path)


def test_check_benchmark(tmp_path):
    assert run(['check', '--benchmark', '1', '--out', str(tmp_path)]) == 0
    report = _read(tmp_path / 'existence.json')
    assert report['overall'] is True
    assert report['clusters_checked'] == [[1, 2, 3], [4, 5], [6, 7, 8, 9]]


def test_check_bipartition_fails(tmp_path, bipartition_file):
    code = run(['check', '--benchmark', '1', '--clusters', bipartition_file, '--out', str(tmp_path)])
    assert code == 1
    report = _read(tmp_path / 'existence.json')
    assert report['clusters'][0]['local']['holds'] is True
    assert report['clusters'][1]['local']['holds'] is False
    assert report['robust_leakage'] > 0.0


def test_check_perturbed_benchmark_fails(tmp_path):
    assert run(['check', '--benchmark', '1', '--perturb', '0.2', '--out', str(tmp_path)]) == 1


def test_cluster_from_bipartition(tmp_path, bipartition_file):
    code = run(['cluster', '--benchmark', '1', '--clusters', bipartition_file, '--out', str(tmp_path)])
    assert code == 0
    assert _read(tmp_path / 'clusters.json')['clusters'] == [[1, 2, 3], [4, 5], [6, 7, 8, 9]]
    trace = _read(tmp_path / 'clustering_trace.json')
    assert trace['steps'][0]['action'] == 'initial'
    assert trace['steps'][-1]['clusters'] == [[1, 2, 3], [4, 5], [6, 7, 8, 9]]


def test_decompose_writes_blocks(tmp_path):
    assert run(['decompose', '--benchmark', '1', '--out', str(tmp_path)]) == 0
    data = _read(tmp_path / 'decomposition.json')
    assert data['robust'] is False
    assert np.asarray(data['A0_hat']).shape == (6, 6)


def test_design_needs_robust_for_perturbed_benchmark(tmp_path):
    assert run(['design', '--benchmark', '1', '--perturb', '0.2', '--out', str(tmp_path)]) == 2
    assert run(['design', '--benchmark', '1', '--perturb', '0.2', '--robust', '--out', str(tmp_path)]) == 0
    summary = _read(tmp_path / 'design.json')
    assert summary['robust'] is True
    assert summary['closed_loop']['deflated_abscissa'] < 0.0
    assert summary['robust_global_loop_abscissa'] < 0.0
    assert (tmp_path / 'controllers' / 'local_3.json').exists()


def test_free_response_keeps_other_clusters_synchronized(tmp_path):
    code = run(['simulate', '--benchmark', '1', '--free', '--disturbance-cluster', '1',
                '--horizon', '10', '--step', '0.01', '--out', str(tmp_path)])
    assert code == 0
    summary = _read(tmp_path / 'simulation_summary.json')
    assert list(summary) == ['free']
    spreads = summary['free']['cluster_spread']
    assert spreads['1'] > 1e-3
    assert spreads['2'] <= 1e-6
    assert spreads['3'] <= 1e-6
    header = (tmp_path / 'trajectory_free.csv').read_text().splitlines()[0]
    assert header.startswith('time,theta_1,omega_1,theta_2')


def test_unknown_disturbance_cluster(tmp_path):
    code = run(['simulate', '--benchmark', '1', '--free', '--disturbance-cluster', '7', '--out', str(tmp_path)])
    assert code == 2


def test_regimes_on_benchmark(cs, hd, controller):
    x0 = initial_disturbance(cs, 0, 1.0)
    assert x0[1] == 1.0 and np.count_nonzero(x0) == 1
    plant, spreads = simulate_regime(cs, hd, controller, 'glocal', x0, 1200.0, 0.02)
    omega = plant.states[:, 1::2]
    assert np.max(np.abs(omega[-1])) <= 1e-4 * np.max(np.abs(omega))
    assert plant.labels[:2] == ['theta_1', 'omega_1']
    assert set(spreads) == {1, 2, 3}


def test_cluster_spreads(cs):
    states = np.zeros((2, cs.n))
    states[1, 0] = 2.0
    spreads = cluster_spreads(cs, states)
    assert spreads == {1: 2.0, 2: 0.0, 3: 0.0}


def test_scenario_validation(tmp_path):
    with pytest.raises(ScenarioError):
        Scenario()
    with pytest.raises(ScenarioError):
        Scenario(network_file=str(tmp_path / 'missing.json'))
    with pytest.raises(ScenarioError):
        Scenario(benchmark_n0=1, step=0.1, horizon=0.01)
    with pytest.raises(ScenarioError):
        Scenario(benchmark_n0=1, regimes=('sideways',))
    with pytest.raises(ScenarioError):
        Scenario(benchmark_n0=1, perturb=1.5, out=str(tmp_path)).network()


def test_auto_clusters_group_equal_actuators():
    net, expected = benchmark_network(1)
    assert io_groups(net).same_partition(expected)
    assert Scenario(benchmark_n0=1, clusters='auto').cluster_set().same_partition(expected)
    assert Scenario(benchmark_n0=1, clusters='singletons').cluster_set().is_trivial()


def test_auto_clusters_refine_groups_without_exact_decomposition():
    scenario = Scenario(benchmark_n0=1, perturb=0.2, clusters='auto')
    net, _ = scenario.network()
    found = scenario.cluster_set()
    assert is_partition_of(found, io_groups(net))
    assert existence_check(clustered_system(net, found)).overall
    assert auto_clusters(net).same_partition(found)


def test_bench_single_size(tmp_path):
    design, clustering, slopes = cmd_bench([1], 1, out=tmp_path)
    assert len(design) == 1
    assert design.loc[0, 'states'] == 18
    assert design.loc[0, 'glocal_mean_s'] > 0.0
    assert design.loc[0, 'peak_rss_mb'] > 0.0
    assert list(clustering['regime']) == ['fixed', 'growing']
    assert list(clustering['clusters']) == [3, 3]
    assert list(clustering['clusters']) == list(clustering['expected'])
    assert np.isnan(slopes['glocal'])
    assert (tmp_path / 'bench_design.csv').exists()
    assert (tmp_path / 'bench_clustering.csv').exists()


def test_bench_rejects_nonpositive_sizes(tmp_path):
    assert run(['bench', '--n0', '0', '--out', str(tmp_path)]) == 2


def test_loglog_slope():
    assert loglog_slope([1, 2, 4], [1.0, 8.0, 64.0]) == pytest.approx(3.0)
    assert np.isnan(loglog_slope([1], [1.0]))


def test_bench_monitor_records_blocks():
    monitor = BenchMonitor()
    with monitor.measure('block') as result:
        sum(range(1000))
    assert result['seconds'] >= 0.0
    assert monitor.durations('block') == [result['seconds']]
    assert monitor.peak_memory_mb('block') > 0.0
    assert monitor.to_records()[0]['label'] == 'block'
    monitor.reset()
    assert monitor.durations('block') == []


def test_fixed_regime_starts_from_merged_groups():
    net, expected = benchmark_network(2)
    initial = merged_pair(expected)
    assert initial.sizes == [10, 8]
    found, _ = algorithm1(net.state_matrix(), initial)
    assert found.same_partition(expected)


@pytest.mark.slow
def test_glocal_design_outpaces_centralized_at_scale():
    design, clustering, slopes = cmd_bench([10, 25], 1)
    largest = design.iloc[-1]
    assert largest['glocal_mean_s'] < largest['centralized_mean_s']
    assert slopes['glocal'] < slopes['centralized']

    assert list(clustering['clusters']) == list(clustering['expected'])
    assert list(clustering['clusters']) == [3, 30, 3, 75]
    timings = clustering.pivot(index='n0', columns='regime', values='mean_s')
    assert (timings['growing'] > timings['fixed']).all()


def test_walkthrough_reports_unmatched_hankel_reference(monkeypatch, capsys):
    monkeypatch.setattr(settings, 'HANKEL_REFERENCE', (1.25, 100.0))
    assert check_benchmark(1, hankel_n0=1) is False
    out = capsys.readouterr().out
    assert 'FAIL' in out
    assert '100.0' in out
