"""Design and clustering timings against the benchmark size."""
import logging
from pathlib import Path
from typing import Dict, Sequence, Tuple

import numpy as np
import pandas as pd

from clustering import algorithm1
from config.settings import settings
from control import design_centralized, design_glocal
from decomposition import decompose
from monitoring.bench_monitor import BenchMonitor
from network_model import ClusterSet, benchmark_network, clustered_system, replicated_benchmark_network

logger = logging.getLogger(__name__)


def loglog_slope(sizes: Sequence[float], times: Sequence[float]) -> float:
    """Least-squares growth exponent of time against size; nan for fewer than two points"""
    sizes, times = np.asarray(sizes, dtype=float), np.asarray(times, dtype=float)
    if sizes.size < 2 or np.any(times <= 0.0):
        return float('nan')
    return float(np.polyfit(np.log(sizes), np.log(times), 1)[0])


def halves(n_components: int) -> ClusterSet:
    """Two-cluster starting point: first ⌈N0/2⌉ components and the rest"""
    split = (n_components + 1) // 2
    return ClusterSet.from_lists([range(split), range(split, n_components)], n_components)


def design_timings(n0_list: Sequence[int], repetitions: int, monitor: BenchMonitor) -> pd.DataFrame:
    rows = []
    for n0 in n0_list:
        net, clusters = benchmark_network(n0)
        cs = clustered_system(net, clusters)
        hd = decompose(cs)
        for _ in range(repetitions):
            with monitor.measure(f'glocal n0={n0}'):
                design_glocal(cs, hd)
            with monitor.measure(f'centralized n0={n0}'):
                design_centralized(cs)
        glocal = monitor.durations(f'glocal n0={n0}')
        centralized = monitor.durations(f'centralized n0={n0}')
        rows.append({
            'n0': n0,
            'states': cs.n,
            'glocal_mean_s': float(np.mean(glocal)),
            'glocal_std_s': float(np.std(glocal)),
            'centralized_mean_s': float(np.mean(centralized)),
            'centralized_std_s': float(np.std(centralized)),
            'peak_rss_mb': max(monitor.peak_memory_mb(f'glocal n0={n0}'),
                               monitor.peak_memory_mb(f'centralized n0={n0}')),
        })
        logger.info(f"n0={n0}: glocal {rows[-1]['glocal_mean_s']:.3f}s, "
                    f"centralized {rows[-1]['centralized_mean_s']:.3f}s")
    return pd.DataFrame(rows)


def merged_pair(expected: ClusterSet) -> ClusterSet:
    """Starting point with the first two clusters of ``expected`` merged"""
    return ClusterSet.from_lists([expected[0] + expected[1], *expected[2:]], expected.n_components)


def clustering_timings(n0_list: Sequence[int], repetitions: int, monitor: BenchMonitor) -> pd.DataFrame:
    """Regime (i): three clusters of growing size, refined from groups 1+2 | 3;
    regime (ii): 3·n0 clusters, refined from two halves
    """
    rows = []
    for n0 in n0_list:
        for regime, build in (('fixed', benchmark_network), ('growing', replicated_benchmark_network)):
            net, expected = build(n0)
            A = net.state_matrix()
            initial = merged_pair(expected) if regime == 'fixed' else halves(net.N0)
            label = f'clustering {regime} n0={n0}'
            for _ in range(repetitions):
                with monitor.measure(label):
                    found, trace = algorithm1(A, initial)
            if not found.same_partition(expected):
                logger.warning(f"Clustering regime {regime}, n0={n0}: found {len(found)} clusters, "
                               f"expected {len(expected)}")
            durations = monitor.durations(label)
            rows.append({
                'regime': regime,
                'n0': n0,
                'components': net.N0,
                'clusters': len(found),
                'expected': len(expected),
                'refinements': trace.refinements,
                'mean_s': float(np.mean(durations)),
                'std_s': float(np.std(durations)),
            })
    return pd.DataFrame(rows)


def cmd_bench(
    n0_list: Sequence[int] = None,
    repetitions: int = None,
    out: Path = None,
    clustering: bool = True,
) -> Tuple[pd.DataFrame, pd.DataFrame, Dict[str, float]]:
    """Timing tables for glocal vs centralized design and for clustering; writes CSVs under ``out``"""
    n0_list = list(settings.BENCH_N0 if n0_list is None else n0_list)
    repetitions = settings.BENCH_REPETITIONS if repetitions is None else repetitions
    monitor = BenchMonitor()

    design = design_timings(n0_list, repetitions, monitor)
    slopes = {
        'glocal': loglog_slope(design['states'], design['glocal_mean_s']),
        'centralized': loglog_slope(design['states'], design['centralized_mean_s']),
    }
    cluster_table = clustering_timings(n0_list, repetitions, monitor) if clustering else pd.DataFrame()
    logger.info(f"Growth exponents: glocal {slopes['glocal']:.2f}, centralized {slopes['centralized']:.2f}")

    if out is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        design.to_csv(out / 'bench_design.csv', index=False, float_format=settings.CSV_FLOAT_FORMAT)
        if clustering:
            cluster_table.to_csv(out / 'bench_clustering.csv', index=False, float_format=settings.CSV_FLOAT_FORMAT)
    return design, cluster_table, slopes
