import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from common.errors import WiringError
from .functional_observer import build_functional_observer
from .glocal import GlocalController
from .lqr_observer import DynamicController

logger = logging.getLogger(__name__)


def _matrix(values, rows: int = None, cols: int = None) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.size == 0:
        return np.zeros((rows or 0, cols or 0))
    return np.atleast_2d(array)


def controller_to_dict(K: DynamicController) -> dict:
    data = {
        'name': K.name,
        'order': K.order,
        'n_inputs': K.n_inputs,
        'n_outputs': K.n_outputs,
        'A_K': K.A_K.tolist(),
        'B_K': K.B_K.tolist(),
        'C_K': K.C_K.tolist(),
        'design_abscissa': K.design_abscissa if np.isfinite(K.design_abscissa) else None,
    }
    if K.K is not None:
        data['K'] = K.K.tolist()
        data['H'] = K.H.tolist()
    return data


def controller_from_dict(data: dict) -> DynamicController:
    order, n_inputs, n_outputs = int(data['order']), int(data['n_inputs']), int(data['n_outputs'])
    A_K = _matrix(data['A_K'], order, order)
    B_K = _matrix(data['B_K'], order, n_inputs)
    C_K = _matrix(data['C_K'], n_outputs, order)
    for what, matrix, expected in (('A_K', A_K, (order, order)), ('B_K', B_K, (order, n_inputs)),
                                   ('C_K', C_K, (n_outputs, order))):
        if matrix.shape != expected:
            raise WiringError(f"{data.get('name') or 'controller'} {what}", expected, matrix.shape)
    abscissa = data.get('design_abscissa')
    return DynamicController(
        A_K=A_K, B_K=B_K, C_K=C_K,
        K=np.asarray(data['K'], dtype=float) if 'K' in data else None,
        H=np.asarray(data['H'], dtype=float) if 'H' in data else None,
        design_abscissa=float('-inf') if abscissa is None else float(abscissa),
        name=data.get('name', ''),
    )


def save_controller(K: DynamicController, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(controller_to_dict(K), f, indent=2)
    logger.debug(f"Saved controller '{K.name}' to {path}")
    return path


def load_controller(path: Union[str, Path]) -> DynamicController:
    with open(path, 'r', encoding='utf-8') as f:
        return controller_from_dict(json.load(f))


def save_glocal(controller: GlocalController, directory: Union[str, Path]) -> Path:
    """One file per subcontroller: global.json, local_1.json, …"""
    directory = Path(directory)
    save_controller(controller.K0, directory / 'global.json')
    for i, K in enumerate(controller.Ks):
        save_controller(K, directory / f'local_{i + 1}.json')
    logger.info(f"Saved glocal controller ({controller.N} local loops) to {directory}")
    return directory


def load_glocal(directory: Union[str, Path], cs, hd) -> GlocalController:
    """Reload subcontrollers and rebuild the functional observers from the decomposition"""
    directory = Path(directory)
    K0 = load_controller(directory / 'global.json')
    Ks = []
    for i in range(cs.N):
        path = directory / f'local_{i + 1}.json'
        if not path.exists():
            raise WiringError(f'local subcontroller {i + 1} file', (cs.N,), (i,))
        Ks.append(load_controller(path))
    observers = tuple(build_functional_observer(cs, hd, i) for i in range(cs.N))
    return GlocalController(K0=K0, Ks=tuple(Ks), observers=observers)
