from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import block_diag

from common.errors import InvalidParameterError, InvalidTopologyError
from .components import ComponentModel
from .interconnection import Interconnection


@dataclass(frozen=True, eq=False)
class NetworkSystem:
    """Interconnected components with global state matrix diag(A_k) + diag(L_k)·M"""
    components: Tuple[ComponentModel, ...]
    interconnection: Interconnection

    def __post_init__(self):
        components = tuple(self.components)
        if not components:
            raise InvalidParameterError('components', 0, 'network needs at least one component')
        n0, q = components[0].n0, components[0].q
        for k, component in enumerate(components):
            if component.n0 != n0 or component.q != q:
                raise InvalidParameterError(
                    'components', k + 1,
                    f'signal dimensions ({component.n0}, {component.q}) differ from ({n0}, {q})',
                )
        net = self.interconnection
        if (net.n_components, net.n0, net.q) != (len(components), n0, q):
            raise InvalidTopologyError(
                f"interconnection sized for {net.n_components} components of ({net.n0}, {net.q}), "
                f"network has {len(components)} of ({n0}, {q})"
            )
        object.__setattr__(self, 'components', components)

    @property
    def N0(self) -> int:
        return len(self.components)

    @property
    def n0(self) -> int:
        return self.components[0].n0

    @property
    def q(self) -> int:
        return self.components[0].q

    @property
    def n(self) -> int:
        return self.N0 * self.n0

    def state_matrix(self) -> np.ndarray:
        A = block_diag(*[c.A for c in self.components])
        return A + self.interaction_matrix() @ self.interconnection.M

    def interaction_matrix(self) -> np.ndarray:
        return block_diag(*[c.L for c in self.components])

    def input_matrix(self) -> np.ndarray:
        return block_diag(*[c.B for c in self.components])

    def output_matrix(self) -> np.ndarray:
        return block_diag(*[c.C for c in self.components])

    def component_slice(self, k: int) -> slice:
        return slice(k * self.n0, (k + 1) * self.n0)

    def state_labels(self):
        """θ/ω labels for second-order components, x<j> otherwise (1-based)"""
        names = ['theta', 'omega'] if self.n0 == 2 else [f'x{j + 1}' for j in range(self.n0)]
        return [f'{name}_{k + 1}' for k in range(self.N0) for name in names]
