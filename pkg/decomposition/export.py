import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from .hierarchical import HierarchicalDecomposition
from .robust import RobustDecomposition

logger = logging.getLogger(__name__)


def decomposition_to_dict(hd: HierarchicalDecomposition, cluster_set=None) -> dict:
    data = {
        'robust': hd.robust,
        'A0_hat': hd.A0_hat.tolist(),
        'Ai_hat': [A.tolist() for A in hd.Ai_hat],
        'Ri_hat': [R.tolist() for R in hd.Ri_hat],
        'residuals': hd.residuals,
    }
    if cluster_set is not None:
        data['clusters'] = cluster_set.to_one_based()
    if isinstance(hd, RobustDecomposition):
        data.update({
            'Ae_hat': hd.Ae_hat.tolist(),
            'E0_hat': hd.E0_hat.tolist(),
            'F0_hat': hd.F0_hat.tolist(),
            'Fi_hat': [F.tolist() for F in hd.Fi_hat],
            'leakage_norms': hd.leakage_norms,
        })
    return data


def decomposition_from_dict(data: dict) -> HierarchicalDecomposition:
    common = dict(
        A0_hat=np.asarray(data['A0_hat'], dtype=float),
        Ai_hat=tuple(np.asarray(A, dtype=float) for A in data['Ai_hat']),
        Ri_hat=tuple(np.asarray(R, dtype=float) for R in data['Ri_hat']),
        residuals=dict(data.get('residuals', {})),
    )
    if not data.get('robust'):
        return HierarchicalDecomposition(**common)
    Ae_hat = np.asarray(data['Ae_hat'], dtype=float)
    return RobustDecomposition(
        **common,
        Ae_hat=Ae_hat,
        E0_hat=np.asarray(data['E0_hat'], dtype=float),
        Ei_hat=tuple(np.zeros((A.shape[0], Ae_hat.shape[0])) for A in common['Ai_hat']),
        F0_hat=np.asarray(data['F0_hat'], dtype=float),
        Fi_hat=tuple(np.asarray(F, dtype=float) for F in data['Fi_hat']),
        leakage_norms=dict(data.get('leakage_norms', {})),
    )


def save_decomposition(hd: HierarchicalDecomposition, path: Union[str, Path], cluster_set=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(decomposition_to_dict(hd, cluster_set), f, indent=2)
    logger.info(f"Decomposition written to {path}")
    return path


def load_decomposition(path: Union[str, Path]) -> HierarchicalDecomposition:
    with open(path, 'r', encoding='utf-8') as f:
        return decomposition_from_dict(json.load(f))
