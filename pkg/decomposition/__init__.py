from .hierarchical import HierarchicalDecomposition, decompose, retrofit_decompose, decomposition_residuals
from .robust import RobustDecomposition, robust_decompose, bookkeeping_residual, error_gain
from .superposition import HierarchicalRealization, hierarchical_realization, replay_error, verify_superposition
from .export import decomposition_to_dict, decomposition_from_dict, save_decomposition, load_decomposition

__all__ = [
    'HierarchicalDecomposition', 'decompose', 'retrofit_decompose', 'decomposition_residuals',
    'RobustDecomposition', 'robust_decompose', 'bookkeeping_residual', 'error_gain',
    'HierarchicalRealization', 'hierarchical_realization', 'replay_error', 'verify_superposition',
    'decomposition_to_dict', 'decomposition_from_dict', 'save_decomposition', 'load_decomposition',
]
