"""Stage commands: check → cluster → decompose → design → simulate."""
import json
import logging
from pathlib import Path
from typing import Dict, Tuple

import numpy as np

from clustering import algorithm1, algorithm2
from common.errors import ScenarioError
from control import (
    GlocalController,
    assemble_glocal,
    design_glocal,
    save_glocal,
    verify_robust_global_loop,
)
from decomposition import (
    bookkeeping_residual,
    decompose,
    error_gain,
    robust_decompose,
    save_decomposition,
)
from network_model import ClusteredSystem, clustered_system, save_cluster_set
from simulation import Trajectory, simulate
from subspace import ExistenceReport, existence_check
from .scenario import Scenario

logger = logging.getLogger(__name__)


def _write_json(path: Path, data: dict) -> Path:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2)
    return path


def _clustered(scenario: Scenario, strict: bool = True) -> ClusteredSystem:
    net, _ = scenario.network()
    return clustered_system(net, scenario.cluster_set(), strict=strict)


def _decomposition(scenario: Scenario, cs: ClusteredSystem):
    return robust_decompose(cs) if scenario.robust else decompose(cs)


def cmd_check(scenario: Scenario) -> ExistenceReport:
    cs = _clustered(scenario, strict=False)
    report = existence_check(cs)
    data = report.to_dict()
    data['clusters_checked'] = cs.cluster_set.to_one_based()
    print(report.summary())
    if not report.overall:
        leakage = robust_decompose(cs).total_leakage
        data['robust_leakage'] = leakage
        logger.warning(f"No exact decomposition for {cs.cluster_set}; robust decomposition leaves "
                       f"leakage {leakage:.3e}. Rerun with --robust to design on the augmented model")
    _write_json(scenario.output_dir / 'existence.json', data)
    return report


def cmd_cluster(scenario: Scenario):
    net, _ = scenario.network()
    initial = scenario.cluster_set()
    A = net.state_matrix()
    run = algorithm2 if scenario.extended else algorithm1
    cs, trace = run(A, initial)
    print(f"Initial clusters: {initial}")
    print(f"Final clusters:   {cs}  ({trace.refinements} refinements; {trace.reason})")
    save_cluster_set(cs, scenario.output_dir / 'clusters.json')
    _write_json(scenario.output_dir / 'clustering_trace.json', trace.to_dict())
    return cs, trace


def cmd_decompose(scenario: Scenario):
    cs = _clustered(scenario)
    hd = _decomposition(scenario, cs)
    if scenario.robust:
        _, _, peak = error_gain(hd)
        logger.info(f"Bookkeeping residual {bookkeeping_residual(cs, hd):.2e}, error gain peak {peak:.3e}")
    save_decomposition(hd, scenario.output_dir / 'decomposition.json', cs.cluster_set)
    print(f"{'Robust' if hd.robust else 'Exact'} decomposition of {cs.N} clusters, "
          f"max residual {hd.max_residual:.2e}")
    return hd


def cmd_design(scenario: Scenario) -> GlocalController:
    cs = _clustered(scenario)
    report = existence_check(cs)
    if not report.overall and not scenario.robust:
        logger.error("Existence check failed; refusing to design without --robust")
        raise ScenarioError("existence check failed for the chosen clusters; use --robust")
    hd = _decomposition(scenario, cs)
    controller = design_glocal(cs, hd)
    loop = assemble_glocal(cs, hd, controller)

    summary = {
        'robust': hd.robust,
        'clusters': cs.cluster_set.to_one_based(),
        'global': {'order': controller.K0.order, 'design_abscissa': controller.K0.design_abscissa},
        'local': [{'cluster': i + 1, 'order': K.order, 'design_abscissa': K.design_abscissa}
                  for i, K in enumerate(controller.Ks)],
        'closed_loop': {
            'dimension': loop.dim,
            'abscissa': loop.abscissa(),
            'deflated_abscissa': loop.deflated_abscissa(),
            'structural_modes': int(loop.directions.shape[1]),
        },
    }
    if hd.robust:
        summary['robust_global_loop_abscissa'] = verify_robust_global_loop(cs, hd, controller.K0)
    save_glocal(controller, scenario.output_dir / 'controllers')
    _write_json(scenario.output_dir / 'design.json', summary)
    print(f"Glocal controller of order {controller.order}; closed-loop deflated abscissa "
          f"{summary['closed_loop']['deflated_abscissa']:.3e}")
    return controller


def initial_disturbance(cs: ClusteredSystem, cluster: int = 0, magnitude: float = 1.0) -> np.ndarray:
    """x(0) with the last state (ω for swing components) of the cluster's first member offset"""
    if not 0 <= cluster < cs.N:
        raise ScenarioError(f"disturbance cluster {cluster + 1} does not exist (N={cs.N})")
    x0 = np.zeros(cs.n)
    x0[cs.cluster_slice(cluster).start + cs.n0 - 1] = magnitude
    return x0


def cluster_spreads(cs: ClusteredSystem, states: np.ndarray) -> Dict[int, float]:
    """Largest difference between members of each cluster over all times, in clustered state order"""
    spreads = {}
    for i in range(cs.N):
        block = states[:, cs.cluster_slice(i)].reshape(states.shape[0], cs.r[i], cs.n0)
        spreads[i + 1] = float(np.max(np.ptp(block, axis=1))) if cs.r[i] > 1 else 0.0
    return spreads


def simulate_regime(cs: ClusteredSystem, hd, controller: GlocalController, regime: str,
                    x0: np.ndarray, horizon: float, step: float) -> Tuple[Trajectory, Dict[int, float]]:
    """Plant trajectory in original component order and per-cluster spreads"""
    if regime == 'free':
        states = simulate(cs.A, x0=x0, horizon=horizon, step=step)
    else:
        variant = {
            'local-only': controller.local_only,
            'global-only': controller.global_only,
            'glocal': lambda: controller,
        }[regime]()
        loop = assemble_glocal(cs, hd, variant)
        trajectory = loop.simulate(x0, horizon, step)
        states = trajectory.select(range(loop.blocks['plant'].start, loop.blocks['plant'].stop))
    spreads = cluster_spreads(cs, states.states)
    plant = states.project(cs.state_permutation().T, cs.network.state_labels())
    logger.info(f"Regime {regime}: peak |x| {plant.max_abs():.3e}, final |x| "
                f"{np.max(np.abs(plant.final_state)):.3e}")
    return plant, spreads


def cmd_simulate(scenario: Scenario) -> Dict[str, Tuple[Trajectory, Dict[int, float]]]:
    cs = _clustered(scenario)
    x0 = initial_disturbance(cs, scenario.disturbance_cluster - 1, scenario.disturbance)
    controller, hd = None, None
    if any(regime != 'free' for regime in scenario.regimes):
        hd = _decomposition(scenario, cs)
        controller = design_glocal(cs, hd)

    results, summary = {}, {}
    for regime in scenario.regimes:
        trajectory, spreads = simulate_regime(cs, hd, controller, regime, x0, scenario.horizon, scenario.step)
        path = trajectory.to_csv(scenario.output_dir / f"trajectory_{regime.replace('-', '_')}.csv")
        results[regime] = (trajectory, spreads)
        summary[regime] = {
            'file': path.name,
            'peak_abs': trajectory.max_abs(),
            'final_abs': float(np.max(np.abs(trajectory.final_state))),
            'cluster_spread': {str(k): v for k, v in spreads.items()},
        }
        print(f"{regime:>12}: final max |x| {summary[regime]['final_abs']:.3e} -> {path}")
    _write_json(scenario.output_dir / 'simulation_summary.json', summary)
    return results
