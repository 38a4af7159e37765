from .scenario import Scenario, REGIMES, auto_clusters, io_groups
from .commands import (
    cmd_check,
    cmd_cluster,
    cmd_decompose,
    cmd_design,
    cmd_simulate,
    simulate_regime,
    initial_disturbance,
    cluster_spreads,
)
from .bench import cmd_bench, loglog_slope

__all__ = [
    'Scenario', 'REGIMES', 'auto_clusters', 'io_groups',
    'cmd_check', 'cmd_cluster', 'cmd_decompose', 'cmd_design', 'cmd_simulate',
    'simulate_regime', 'initial_disturbance', 'cluster_spreads',
    'cmd_bench', 'loglog_slope',
]
