"""Recorded spin trajectories."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class SampleTrace:
    """Spin states sampled along a run.

    ``states[t, i]`` is the ±1 spin of node ``i`` at ``times[t]``.  Clocked
    runs use the sweep index as time; autonomous runs use simulated time in
    the same unit as their time constants.
    """

    times: np.ndarray
    states: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        self.states = np.asarray(self.states, dtype=np.int8)
        if self.times.ndim != 1 or self.states.ndim != 2:
            raise ValueError("times must be 1-D and states 2-D")
        if self.times.shape[0] != self.states.shape[0]:
            raise ValueError(
                f"{self.times.shape[0]} times but {self.states.shape[0]} state rows"
            )
        if self.times.shape[0] > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    @property
    def n_samples(self) -> int:
        return self.states.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.states.shape[1]

    def signal(self, node: int) -> np.ndarray:
        """Spin of one node as float64, for numeric work."""
        return self.states[:, node].astype(np.float64)
