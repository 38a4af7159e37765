from .partition import is_partition_of, PartitionTrace
from .algorithms import refine, algorithm1, algorithm2, first_offending
from .exhaustive import set_partitions, refinements, admissible_refinements, minimal_admissible, is_locally_admissible

__all__ = [
    'is_partition_of', 'PartitionTrace',
    'refine', 'algorithm1', 'algorithm2', 'first_offending',
    'set_partitions', 'refinements', 'admissible_refinements', 'minimal_admissible', 'is_locally_admissible',
]
