from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple

from common.errors import InvalidParameterError


@dataclass(frozen=True)
class ClusterSet:
    """Partition of components {0..n_components-1} into nonempty clusters.

    Clusters keep the order they were given in; members are sorted.
    """
    clusters: Tuple[Tuple[int, ...], ...]
    n_components: int

    def __post_init__(self):
        normalized = tuple(tuple(sorted(int(k) for k in cluster)) for cluster in self.clusters)
        seen = set()
        for index, cluster in enumerate(normalized):
            if not cluster:
                raise InvalidParameterError('clusters', index + 1, 'cluster is empty')
            for k in cluster:
                if not 0 <= k < self.n_components:
                    raise InvalidParameterError('clusters', k + 1, 'component index out of range')
                if k in seen:
                    raise InvalidParameterError('clusters', k + 1, 'component assigned to two clusters')
                seen.add(k)
        if len(seen) != self.n_components:
            missing = sorted(set(range(self.n_components)) - seen)
            raise InvalidParameterError('clusters', [k + 1 for k in missing], 'components not covered')
        object.__setattr__(self, 'clusters', normalized)

    @classmethod
    def from_lists(cls, clusters: Iterable[Iterable[int]], n_components: int = None) -> 'ClusterSet':
        clusters = [list(cluster) for cluster in clusters]
        if n_components is None:
            n_components = sum(len(cluster) for cluster in clusters)
        return cls(clusters=tuple(tuple(cluster) for cluster in clusters), n_components=n_components)

    @classmethod
    def from_one_based(cls, clusters: Iterable[Iterable[int]], n_components: int = None) -> 'ClusterSet':
        return cls.from_lists(([k - 1 for k in cluster] for cluster in clusters), n_components)

    @classmethod
    def singletons(cls, n_components: int) -> 'ClusterSet':
        return cls(clusters=tuple((k,) for k in range(n_components)), n_components=n_components)

    @classmethod
    def whole(cls, n_components: int) -> 'ClusterSet':
        return cls(clusters=(tuple(range(n_components)),), n_components=n_components)

    def __len__(self) -> int:
        return len(self.clusters)

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return iter(self.clusters)

    def __getitem__(self, index: int) -> Tuple[int, ...]:
        return self.clusters[index]

    @property
    def sizes(self) -> List[int]:
        return [len(cluster) for cluster in self.clusters]

    def cluster_of(self, component: int) -> int:
        for index, cluster in enumerate(self.clusters):
            if component in cluster:
                return index
        raise KeyError(component)

    def canonical(self) -> 'ClusterSet':
        """Same partition with clusters ordered by their smallest member"""
        return ClusterSet(tuple(sorted(self.clusters, key=lambda c: c[0])), self.n_components)

    def same_partition(self, other: 'ClusterSet') -> bool:
        return set(self.clusters) == set(other.clusters) and self.n_components == other.n_components

    def is_trivial(self) -> bool:
        return len(self.clusters) == self.n_components

    def to_one_based(self) -> List[List[int]]:
        return [[k + 1 for k in cluster] for cluster in self.clusters]

    def replace(self, index: int, parts: Sequence[Sequence[int]]) -> 'ClusterSet':
        """Cluster set with cluster ``index`` replaced by ``parts`` in place"""
        clusters = list(self.clusters)
        clusters[index:index + 1] = [tuple(part) for part in parts]
        return ClusterSet(tuple(clusters), self.n_components)

    def __str__(self) -> str:
        return '{' + ', '.join('{' + ','.join(str(k + 1) for k in c) + '}' for c in self.clusters) + '}'
