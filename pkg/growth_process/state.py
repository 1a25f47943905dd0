from dataclasses import dataclass

import numpy as np
import pandas as pd


@dataclass(frozen=True, eq=False)
class GrowthState:
    """
    Состояние процесса роста: counts[v] - число частиц в вершине v после
    step шагов.
    """

    counts: np.ndarray
    step: int = 0

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64).reshape(-1)
        if np.any(counts < 0):
            raise ValueError("Числа частиц должны быть неотрицательны")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self):
        return int(self.counts.sum())


@dataclass(frozen=True, eq=False)
class GrowthTrajectory:
    """
    Траектория процесса роста.

    Поля:
        steps: номера сохранённых шагов (с прореживанием, всегда с 0 и последним).
        counts: матрица состояний в эти моменты, по строке на шаг.
        increments: вершина, получившая частицу, на каждом шаге 1..n_steps.
    """

    steps: np.ndarray
    counts: np.ndarray
    increments: np.ndarray

    @property
    def n_steps(self):
        return int(self.increments.size)

    @property
    def initial(self):
        return GrowthState(self.counts[0], 0)

    @property
    def final(self):
        return GrowthState(self.counts[-1], int(self.steps[-1]))

    def to_frame(self):
        frame = pd.DataFrame(
            self.counts, columns=[f"v_{v}" for v in range(self.counts.shape[1])]
        )
        frame.insert(0, "step", self.steps)
        return frame


class TrajectoryRecorder:
    """Накопитель прореженной траектории."""

    def __init__(self, x0, n_steps, thin):
        if thin < 1:
            raise ValueError("Шаг прореживания должен быть положительным")
        self.thin = thin
        self.n_steps = n_steps
        self.steps = [0]
        self.rows = [np.array(x0, dtype=np.int64)]
        self.increments = np.empty(n_steps, dtype=np.int64)

    def record(self, step, vertex, counts):
        self.increments[step - 1] = vertex
        if step % self.thin == 0 or step == self.n_steps:
            self.steps.append(step)
            self.rows.append(counts.copy())

    def build(self):
        return GrowthTrajectory(
            steps=np.array(self.steps, dtype=np.int64),
            counts=np.vstack(self.rows),
            increments=self.increments,
        )
