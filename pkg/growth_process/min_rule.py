import logging

import numpy as np

from graph_core.exceptions import BadSize

from .state import GrowthState, TrajectoryRecorder

logger = logging.getLogger(__name__)


def cyclic_sums(counts):
    """u_i = x_{i−1} + x_i + x_{i+1} с циклическими индексами."""
    return np.roll(counts, 1) + counts + np.roll(counts, -1)


def simulate_min_rule(m, x0, n_steps, rng, thin=1):
    """
    Предельный вариант роста на цикле C_m: частица добавляется в вершину с
    минимальной суммой u_i, при равенстве - равновероятно среди минимумов.
    """
    if m < 3:
        raise BadSize("Для правила минимума нужен цикл с m >= 3", m=m)
    counts = (
        np.zeros(m, dtype=np.int64) if x0 is None else np.array(GrowthState(x0).counts)
    )
    if counts.size != m:
        raise ValueError(f"Начальное состояние на {counts.size} вершинах, нужно {m}")

    sums = cyclic_sums(counts)
    recorder = TrajectoryRecorder(counts, n_steps, thin)
    for step in range(1, n_steps + 1):
        candidates = np.flatnonzero(sums == sums.min())
        vertex = int(candidates[rng.integers(candidates.size)])
        counts[vertex] += 1
        sums[[(vertex - 1) % m, vertex, (vertex + 1) % m]] += 1
        recorder.record(step, vertex, counts)

    logger.debug(f"Правило минимума на C_{m}: {n_steps} шагов")
    return recorder.build()


def min_rule_tail(trajectory, m, window):
    """
    Сводка хвоста траектории правила минимума: активные вершины последних
    window шагов, их попарная несмежность на цикле и наибольшая разность
    конечных чисел частиц в активных вершинах.
    """
    active = sorted({int(v) for v in trajectory.increments[-window:]})
    adjacent = any((u - v) % m in (1, m - 1) for u in active for v in active if u != v)
    final = trajectory.counts[-1][active]
    return {
        "active": active,
        "non_adjacent": not adjacent,
        "max_difference": int(final.max() - final.min()) if active else 0,
    }
