"""Exception hierarchy shared by every stage of the pipeline."""
from typing import Any, Dict, List, Optional, Sequence, Tuple


class GlocalError(Exception):
    """Base class for all domain errors raised by this package"""


class InvalidParameterError(GlocalError, ValueError):
    def __init__(self, name: str, value: Any, reason: str):
        self.name = name
        self.value = value
        super().__init__(f"invalid {name}={value!r}: {reason}")


class InvalidTopologyError(GlocalError, ValueError):
    def __init__(self, message: str, edge: Optional[Tuple[int, int]] = None):
        self.edge = edge
        super().__init__(message)


class AssumptionViolationError(GlocalError):
    """Input/output matrices differ inside one cluster"""

    def __init__(self, cluster: int, pair: Tuple[int, int], matrix: str):
        self.cluster = cluster
        self.pair = pair
        self.matrix = matrix
        super().__init__(
            f"cluster {cluster + 1}: components {pair[0] + 1} and {pair[1] + 1} "
            f"have different {matrix} matrices"
        )


class ExistenceViolationError(GlocalError):
    """No exact hierarchical decomposition for the given clusters"""

    def __init__(self, residuals: Dict[str, float], tol: float):
        self.residuals = residuals
        self.tol = tol
        worst = max(residuals, key=residuals.get)
        super().__init__(
            f"decomposition residual {worst}={residuals[worst]:.3e} exceeds {tol:.1e}"
        )


class RefinementError(GlocalError):
    def __init__(self, cluster: int, message: str):
        self.cluster = cluster
        super().__init__(f"cluster {cluster + 1}: {message}")


class PartitionMismatchError(GlocalError, ValueError):
    def __init__(self, fine_size: int, coarse_size: int):
        self.fine_size = fine_size
        self.coarse_size = coarse_size
        super().__init__(
            f"cluster sets cover different components ({fine_size} vs {coarse_size})"
        )


class SynthesisError(GlocalError):
    def __init__(self, message: str, eigenvalues: Optional[Sequence[complex]] = None):
        self.eigenvalues = list(eigenvalues) if eigenvalues is not None else []
        super().__init__(message)


class PreconditionError(GlocalError):
    def __init__(self, matrix: str, abscissa: float):
        self.matrix = matrix
        self.abscissa = abscissa
        super().__init__(
            f"{matrix} is not stable (spectral abscissa {abscissa:.3e}); "
            "observer convergence is not guaranteed"
        )


class DivergenceError(GlocalError):
    def __init__(self, time: float):
        self.time = time
        super().__init__(f"non-finite state encountered at t={time:.6g}")


class InvalidInputError(GlocalError, ValueError):
    def __init__(self, message: str, mismatch: Optional[float] = None):
        self.mismatch = mismatch
        super().__init__(message)


class SpectrumError(GlocalError):
    def __init__(self, message: str, eigenvalue: Optional[complex] = None):
        self.eigenvalue = eigenvalue
        super().__init__(message)


class WiringError(GlocalError):
    def __init__(self, what: str, expected: Tuple[int, ...], actual: Tuple[int, ...]):
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what}: expected shape {expected}, got {actual}")


class ScenarioError(GlocalError):
    pass


class HankelMismatchError(GlocalError):
    def __init__(self, unmatched: List[float], band: float, closest: Dict[float, float] = None):
        self.unmatched = unmatched
        self.band = band
        self.closest = closest or {}
        super().__init__(
            f"reference Hankel values without a computed match within ±{band}: {unmatched} "
            f"(closest computed: {self.closest})"
        )
