from .errors import (
    GlocalError,
    InvalidParameterError,
    InvalidTopologyError,
    AssumptionViolationError,
    ExistenceViolationError,
    RefinementError,
    PartitionMismatchError,
    SynthesisError,
    PreconditionError,
    DivergenceError,
    InvalidInputError,
    SpectrumError,
    WiringError,
    ScenarioError,
    HankelMismatchError,
)

__all__ = [
    'GlocalError', 'InvalidParameterError', 'InvalidTopologyError',
    'AssumptionViolationError', 'ExistenceViolationError', 'RefinementError',
    'PartitionMismatchError', 'SynthesisError', 'PreconditionError',
    'DivergenceError', 'InvalidInputError', 'SpectrumError', 'WiringError',
    'ScenarioError', 'HankelMismatchError',
]
