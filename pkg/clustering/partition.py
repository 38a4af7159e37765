from dataclasses import dataclass, field
from typing import List, Optional

from common.errors import PartitionMismatchError
from network_model.clusters import ClusterSet


def is_partition_of(fine: ClusterSet, coarse: ClusterSet) -> bool:
    """Every cluster of ``fine`` lies inside one cluster of ``coarse``"""
    if fine.n_components != coarse.n_components:
        raise PartitionMismatchError(fine.n_components, coarse.n_components)
    coarse_sets = [set(cluster) for cluster in coarse]
    return all(any(set(cluster) <= target for target in coarse_sets) for cluster in fine)


@dataclass
class PartitionTrace:
    """Cluster sets visited by a clustering run.

    ``offending[t]`` is the index (in ``steps[t - 1]``) of the cluster that
    triggered step t, ``actions[t]`` says how it was handled.
    """
    steps: List[ClusterSet] = field(default_factory=list)
    offending: List[Optional[int]] = field(default_factory=list)
    actions: List[str] = field(default_factory=list)
    reason: str = ''

    @classmethod
    def start(cls, initial: ClusterSet) -> 'PartitionTrace':
        return cls(steps=[initial], offending=[None], actions=['initial'])

    def record(self, cs: ClusterSet, offending: Optional[int], action: str) -> None:
        self.steps.append(cs)
        self.offending.append(offending)
        self.actions.append(action)

    def extend(self, other: 'PartitionTrace') -> None:
        """Append another run that started from this trace's last step"""
        for cs, index, action in zip(other.steps[1:], other.offending[1:], other.actions[1:]):
            self.record(cs, index, action)

    @property
    def final(self) -> ClusterSet:
        return self.steps[-1]

    @property
    def refinements(self) -> int:
        return self.actions.count('refine')

    def is_refinement_chain(self) -> bool:
        return all(is_partition_of(b, a) for a, b in zip(self.steps, self.steps[1:]))

    def to_dict(self) -> dict:
        return {
            'reason': self.reason,
            'steps': [
                {
                    'clusters': cs.to_one_based(),
                    'offending_cluster': None if index is None else index + 1,
                    'action': action,
                }
                for cs, index, action in zip(self.steps, self.offending, self.actions)
            ],
        }
