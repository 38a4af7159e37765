from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from config.settings import settings


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled state trajectory, one row of ``states`` per time"""
    times: np.ndarray
    states: np.ndarray
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, 'labels', [f'x{j + 1}' for j in range(self.states.shape[1])])

    @property
    def step(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def signal(self, label: str) -> np.ndarray:
        return self.states[:, self.labels.index(label)]

    def project(self, matrix: np.ndarray, labels: Optional[Sequence[str]] = None) -> 'Trajectory':
        """Trajectory of matrix @ x(t)"""
        values = self.states @ np.asarray(matrix).T
        return Trajectory(self.times, values, list(labels) if labels is not None else [])

    def select(self, columns: Sequence[int]) -> 'Trajectory':
        columns = list(columns)
        return Trajectory(self.times, self.states[:, columns], [self.labels[j] for j in columns])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.states))) if self.states.size else 0.0

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.states, columns=self.labels)
        frame.insert(0, 'time', self.times)
        return frame

    def to_csv(self, path: Union[str, Path], every: int = 1) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().iloc[::every].to_csv(path, index=False, float_format=settings.CSV_FLOAT_FORMAT)
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> 'Trajectory':
        frame = pd.read_csv(path, float_precision='round_trip')
        labels = [c for c in frame.columns if c != 'time']
        return cls(frame['time'].to_numpy(), frame[labels].to_numpy(), labels)
