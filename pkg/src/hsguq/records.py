"""Result containers shared by the method drivers and the analysis code."""

from dataclasses import dataclass, field

import numpy as np

from .solver import Grid


@dataclass
class HyperbolicityEvent:
    """A state left (or was found outside) the hyperbolicity set."""

    step: int
    time: float
    cell: int
    node: int
    kind: str
    detail: str = ""


@dataclass
class LimiterRecord:
    """Applied limiter values, one array of per-cell ``theta`` per limiter pass."""

    steps: list = field(default_factory=list)
    times: list = field(default_factory=list)
    thetas: list = field(default_factory=list)

    def add(self, step, time, theta):
        theta = np.asarray(theta, dtype=float)
        if np.any((theta < 0.0) | (theta > 1.0)):
            raise ValueError("limiter values must lie in [0, 1]")
        self.steps.append(int(step))
        self.times.append(float(time))
        self.thetas.append(theta.copy())

    def __len__(self):
        return len(self.steps)

    def as_array(self):
        """Rows ``(step, time, cell, theta)`` for every cell of every pass."""
        if not self.steps:
            return np.zeros((0, 4))
        rows = []
        for n, t, th in zip(self.steps, self.times, self.thetas):
            cells = np.arange(th.size)
            rows.append(np.column_stack([np.full(th.size, n), np.full(th.size, t), cells, th]))
        return np.vstack(rows)


@dataclass
class RunResult:
    """Outcome of one method run: statistics at the final time plus diagnostics."""

    method: str
    model: str
    K: int
    grid: Grid
    time: float
    mean: np.ndarray
    std: np.ndarray
    components: tuple
    status: str = "completed"
    steps: int = 0
    limiter: LimiterRecord = None
    events: list = field(default_factory=list)
    wall_time: float = 0.0
    fingerprint: str = ""
    coeffs: np.ndarray = None
    message: str = ""

    def __post_init__(self):
        I, d = self.grid.cells, len(self.components)
        self.mean = np.asarray(self.mean, dtype=float)
        self.std = np.asarray(self.std, dtype=float)
        if self.mean.shape != (I, d) or self.std.shape != (I, d):
            raise ValueError(f"mean/std must have shape {(I, d)}")
        if np.any(self.std < 0):
            raise ValueError("negative standard deviation")

    @property
    def completed(self):
        return self.status == "completed"
