import logging
from typing import Callable, Optional, Sequence, Union

import numpy as np

from common.errors import DivergenceError, InvalidInputError, InvalidParameterError
from config.settings import settings
from .trajectory import Trajectory

logger = logging.getLogger(__name__)

InputSignal = Union[None, np.ndarray, Callable[[float], np.ndarray]]


def rk4_propagators(A: np.ndarray, step: float):
    """One classical RK4 step for ẋ = Ax + b with b held constant: x⁺ = Φx + Γb"""
    n = A.shape[0]
    hA = step * A
    hA2 = hA @ hA
    hA3 = hA2 @ hA
    identity = np.eye(n)
    Phi = identity + hA + hA2 / 2.0 + hA3 / 6.0 + hA3 @ hA / 24.0
    Gamma = step * (identity + hA / 2.0 + hA2 / 6.0 + hA3 / 24.0)
    return Phi, Gamma


def _sample_inputs(u: InputSignal, times: np.ndarray, width: int) -> np.ndarray:
    if u is None or width == 0:
        return np.zeros((len(times), width))
    if callable(u):
        samples = np.array([np.atleast_1d(u(t)) for t in times], dtype=float)
    else:
        samples = np.asarray(u, dtype=float)
        if samples.ndim == 1:
            samples = np.tile(samples, (len(times), 1))
    if samples.shape != (len(times), width):
        raise InvalidInputError(f"input samples have shape {samples.shape}, expected {(len(times), width)}")
    return samples


def piecewise_constant(values: np.ndarray, hold: float) -> Callable[[float], np.ndarray]:
    """u(t) = values[floor(t / hold)], clamped to the last row"""
    values = np.atleast_2d(values)

    def signal(t: float) -> np.ndarray:
        index = min(int(np.floor(t / hold + 1e-9)), len(values) - 1)
        return values[index]

    return signal


def simulate(
    A: np.ndarray,
    input_map: Optional[np.ndarray] = None,
    u: InputSignal = None,
    x0: Optional[np.ndarray] = None,
    horizon: float = None,
    step: float = None,
    labels: Optional[Sequence[str]] = None,
) -> Trajectory:
    """Fixed-step RK4 integration of ẋ = Ax + input_map·u(t).

    ``u`` may be a callable of time, one constant vector, or one row per
    grid point; it is held constant over each step.
    """
    step = settings.SIM_STEP if step is None else step
    horizon = settings.SIM_HORIZON if horizon is None else horizon
    if not step > 0:
        raise InvalidParameterError('step', step, 'must be positive')
    if horizon < step:
        raise InvalidParameterError('horizon', horizon, f'must be at least one step ({step})')

    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    input_map = np.zeros((n, 0)) if input_map is None else np.atleast_2d(np.asarray(input_map, dtype=float))
    if input_map.shape[0] != n:
        raise InvalidInputError(f"input map has {input_map.shape[0]} rows, state has {n}")
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).reshape(-1).copy()
    if x.shape != (n,):
        raise InvalidInputError(f"initial state has size {x.size}, expected {n}")

    n_steps = int(round(horizon / step))
    times = step * np.arange(n_steps + 1)
    forcing = _sample_inputs(u, times, input_map.shape[1]) @ input_map.T

    Phi, Gamma = rk4_propagators(A, step)
    states = np.empty((n_steps + 1, n))
    states[0] = x
    for k in range(n_steps):
        x = Phi @ x + Gamma @ forcing[k]
        if not np.all(np.isfinite(x)):
            raise DivergenceError(times[k + 1])
        states[k + 1] = x

    logger.debug(f"Simulated {n} states over {n_steps} steps of {step:g} s")
    return Trajectory(times, states, list(labels) if labels is not None else [])
