from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from common.errors import InvalidParameterError


def _frozen(matrix) -> np.ndarray:
    array = np.array(matrix, dtype=float, ndmin=2)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ComponentModel:
    """Linear component: ẋ = A x + L v + B u, y = C x"""
    A: np.ndarray
    L: np.ndarray
    B: np.ndarray
    C: np.ndarray
    parameters: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        A = _frozen(self.A)
        L = _frozen(self.L)
        B = _frozen(self.B)
        C = _frozen(self.C)
        n0 = A.shape[0]
        if A.shape != (n0, n0):
            raise InvalidParameterError('A', A.shape, 'state matrix must be square')
        if L.shape[0] != n0:
            raise InvalidParameterError('L', L.shape, f'expected {n0} rows')
        if B.shape != (n0, 1):
            raise InvalidParameterError('B', B.shape, f'expected ({n0}, 1)')
        if C.shape != (1, n0):
            raise InvalidParameterError('C', C.shape, f'expected (1, {n0})')
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'L', L)
        object.__setattr__(self, 'B', B)
        object.__setattr__(self, 'C', C)

    @property
    def n0(self) -> int:
        return self.A.shape[0]

    @property
    def q(self) -> int:
        return self.L.shape[1]


def second_order_component(m: float, d: float, input_inertia: Optional[float] = None) -> ComponentModel:
    """Swing-type component m·θ̈ + d·θ̇ + v + u = 0 with state [θ, ω] and output ω.

    ``input_inertia`` overrides the inertia seen by the actuator channel B;
    it defaults to ``m``.
    """
    if not np.isfinite(m) or m <= 0:
        raise InvalidParameterError('m', m, 'inertia must be positive')
    if not np.isfinite(d) or d < 0:
        raise InvalidParameterError('d', d, 'damping must be nonnegative')
    actuator = m if input_inertia is None else input_inertia
    if actuator <= 0:
        raise InvalidParameterError('input_inertia', actuator, 'inertia must be positive')

    A = np.array([[0.0, 1.0], [0.0, -d / m]])
    L = np.array([[0.0], [-1.0 / m]])
    B = np.array([[0.0], [-1.0 / actuator]])
    C = np.array([[0.0, 1.0]])
    return ComponentModel(A=A, L=L, B=B, C=C, parameters=(float(m), float(d)))
