from .trajectory import Trajectory
from .integrator import simulate, piecewise_constant, rk4_propagators
from .spectral import spectral_abscissa, deflated_abscissa, spectrum, contains_spectrum, max_unmatched_distance
from .gramians import (
    lyapunov_solve,
    hankel_singular_values,
    HankelResult,
    compare_to_reference,
    ReferenceComparison,
)

__all__ = [
    'Trajectory', 'simulate', 'piecewise_constant', 'rk4_propagators',
    'spectral_abscissa', 'deflated_abscissa', 'spectrum', 'contains_spectrum', 'max_unmatched_distance',
    'lyapunov_solve', 'hankel_singular_values', 'HankelResult',
    'compare_to_reference', 'ReferenceComparison',
]
