from .controllable import (
    OrthonormalBasis,
    controllable_subspace,
    equitable_partition,
    subspace_leq,
    inclusion_defect,
    invariance_defect,
)
from .existence import (
    ExistenceReport,
    check_conditions,
    existence_check,
    reachability_condition,
    local_condition,
    global_condition,
)

__all__ = [
    'OrthonormalBasis', 'controllable_subspace', 'equitable_partition',
    'subspace_leq', 'inclusion_defect', 'invariance_defect',
    'ExistenceReport', 'check_conditions', 'existence_check', 'reachability_condition',
    'local_condition', 'global_condition',
]
