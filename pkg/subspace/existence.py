import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from config.settings import settings
from .controllable import OrthonormalBasis, controllable_subspace, inclusion_defect

logger = logging.getLogger(__name__)

SINGLE_CLUSTER_NOTE = 'only one cluster: no other clusters to reach from'


@dataclass
class ExistenceReport:
    """Verdicts of the invariance conditions per cluster.

    ``local_*`` refer to 𝓡(A, P_i) ⊆ im[P_i P_0], ``global_*`` to
    𝓡(A, P_0) ⊆ im P_0 and ``reachability_*`` to im P_iP_iᵀP_0 ⊆
    𝓡(A, [P_j]_{j≠i}). Defects are max column residuals in [0, 1].
    """
    local_flags: List[bool]
    local_defects: List[float]
    global_flag: bool
    global_defect: float
    tol: float
    reachability_flags: List[bool] = field(default_factory=list)
    reachability_defects: List[float] = field(default_factory=list)
    reachability_notes: List[str] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(self.local_flags) and self.global_flag

    @property
    def offending_clusters(self) -> List[int]:
        return [i for i, flag in enumerate(self.local_flags) if not flag]

    def to_dict(self) -> Dict:
        return {
            'overall': self.overall,
            'tol': self.tol,
            'global': {'holds': self.global_flag, 'defect': self.global_defect},
            'clusters': [
                {
                    'cluster': i + 1,
                    'local': {'holds': self.local_flags[i], 'defect': self.local_defects[i]},
                    'reachability': (
                        {
                            'holds': self.reachability_flags[i],
                            'defect': self.reachability_defects[i],
                            'note': self.reachability_notes[i],
                        }
                        if self.reachability_flags else None
                    ),
                }
                for i in range(len(self.local_flags))
            ],
        }

    def summary(self) -> str:
        lines = [f"Hierarchical decomposition exists: {'yes' if self.overall else 'no'}"]
        for i, (flag, defect) in enumerate(zip(self.local_flags, self.local_defects)):
            line = f"  cluster {i + 1}: local invariance {'holds' if flag else 'FAILS'} (defect {defect:.2e})"
            if self.reachability_flags:
                reach = 'holds' if self.reachability_flags[i] else 'fails'
                line += f", reachability {reach}"
                if self.reachability_notes[i]:
                    line += f" ({self.reachability_notes[i]})"
            lines.append(line)
        lines.append(
            f"  global invariance {'holds' if self.global_flag else 'FAILS'} (defect {self.global_defect:.2e})"
        )
        return '\n'.join(lines)


def local_condition(
    A: np.ndarray, P0: np.ndarray, Pi: np.ndarray, tol: float = None, rank_tol: float = None
) -> Tuple[bool, float, OrthonormalBasis]:
    """𝓡(A, P_i) ⊆ im[P_i P_0]; also returns the controllable basis"""
    tol = settings.INCLUSION_TOL if tol is None else tol
    reach = controllable_subspace(A, Pi, rank_tol)
    target = OrthonormalBasis.of(np.hstack([Pi, P0]), rank_tol)
    defect = inclusion_defect(reach, target)
    return defect <= tol, defect, reach


def global_condition(A: np.ndarray, P0: np.ndarray, tol: float = None, rank_tol: float = None) -> Tuple[bool, float]:
    """𝓡(A, P_0) ⊆ im P_0"""
    tol = settings.INCLUSION_TOL if tol is None else tol
    defect = inclusion_defect(controllable_subspace(A, P0, rank_tol), OrthonormalBasis.of(P0, rank_tol))
    return defect <= tol, defect


def reachability_from_others(
    A: np.ndarray, P0: np.ndarray, Ps: Sequence[np.ndarray], i: int, tol: float = None, rank_tol: float = None
) -> Tuple[bool, float, str]:
    """im P_iP_iᵀP_0 ⊆ 𝓡(A, [P_j]_{j≠i})"""
    tol = settings.INCLUSION_TOL if tol is None else tol
    if len(Ps) < 2:
        return False, float('nan'), SINGLE_CLUSTER_NOTE
    others = np.hstack([P for j, P in enumerate(Ps) if j != i])
    source = OrthonormalBasis.of(Ps[i] @ (Ps[i].T @ P0), rank_tol)
    defect = inclusion_defect(source, controllable_subspace(A, others, rank_tol))
    return defect <= tol, defect, ''


def check_conditions(
    A: np.ndarray,
    P0: np.ndarray,
    Ps: Sequence[np.ndarray],
    tol: float = None,
    rank_tol: float = None,
    reachability: bool = True,
) -> ExistenceReport:
    """Evaluate all conditions on raw matrices (any consistent state order)"""
    tol = settings.INCLUSION_TOL if tol is None else tol
    local_flags, local_defects = [], []
    for Pi in Ps:
        flag, defect, _ = local_condition(A, P0, Pi, tol, rank_tol)
        local_flags.append(flag)
        local_defects.append(defect)
    global_flag, global_defect = global_condition(A, P0, tol, rank_tol)
    report = ExistenceReport(local_flags, local_defects, global_flag, global_defect, tol)
    if reachability:
        for i in range(len(Ps)):
            flag, defect, note = reachability_from_others(A, P0, Ps, i, tol, rank_tol)
            report.reachability_flags.append(flag)
            report.reachability_defects.append(defect)
            report.reachability_notes.append(note)
    return report


def existence_check(cs, tol: float = None, rank_tol: float = None) -> ExistenceReport:
    """Existence of a hierarchical model decomposition for a ClusteredSystem"""
    report = check_conditions(cs.A, cs.P0, cs.P, tol, rank_tol)
    if report.overall:
        logger.info(f"Existence conditions hold for {cs.N} clusters")
    else:
        failing = [i + 1 for i in report.offending_clusters]
        logger.info(f"Existence conditions fail (clusters {failing}, global {report.global_flag})")
    return report


def reachability_condition(cs, i: int, tol: float = None, rank_tol: float = None) -> bool:
    flag, defect, note = reachability_from_others(cs.A, cs.P0, cs.P, i, tol, rank_tol)
    if note:
        logger.warning(f"Reachability of cluster {i + 1} reported false: {note}")
    else:
        logger.debug(f"Reachability of cluster {i + 1}: defect {defect:.2e}")
    return flag
