from .riccati import RiccatiSolution, solve_care, care_residual
from .lqr_observer import DynamicController, LoopWeights, lqr_observer_controller, design_centralized
from .functional_observer import (
    FunctionalObserver,
    build_functional_observer,
    verify_observer_conditions,
    observer_target,
    observer_error_trajectory,
    slowest_observer_rate,
)
from .glocal import (
    GlocalController,
    ClosedLoop,
    assemble_glocal,
    structural_directions,
    marginal_unobservable,
    global_measurement,
    lifted_closed_loop,
    observer_error_spectrum,
    separation_gap,
    design_local,
    design_global,
    design_glocal,
    robust_global_model,
    verify_robust_global_loop,
)
from .controller_io import (
    controller_to_dict,
    controller_from_dict,
    save_controller,
    load_controller,
    save_glocal,
    load_glocal,
)

__all__ = [
    'RiccatiSolution', 'solve_care', 'care_residual',
    'DynamicController', 'LoopWeights', 'lqr_observer_controller', 'design_centralized',
    'FunctionalObserver', 'build_functional_observer', 'verify_observer_conditions', 'observer_target',
    'observer_error_trajectory', 'slowest_observer_rate',
    'GlocalController', 'ClosedLoop', 'assemble_glocal', 'structural_directions', 'marginal_unobservable',
    'global_measurement', 'lifted_closed_loop', 'observer_error_spectrum', 'separation_gap',
    'design_local', 'design_global', 'design_glocal', 'robust_global_model', 'verify_robust_global_loop',
    'controller_to_dict', 'controller_from_dict', 'save_controller', 'load_controller',
    'save_glocal', 'load_glocal',
]
