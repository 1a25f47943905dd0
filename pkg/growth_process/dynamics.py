import logging

import numpy as np
from scipy.special import softmax

from .state import GrowthState, TrajectoryRecorder

logger = logging.getLogger(__name__)


def growth_exponents(graph, alpha, beta, counts):
    """Показатели αx_v + βΣ_{u∼v}x_u для всех вершин."""
    counts = np.asarray(counts, dtype=float)
    return alpha * counts + beta * (graph.adjacency @ counts)


def growth_step_distribution(graph, alpha, beta, state):
    """
    Вероятности добавить частицу в вершину v:
    exp(αx_v + βΣ_{u∼v}x_u) / Σ_w exp(αx_w + βΣ_{u∼w}x_u).
    Максимум вычитается до экспоненты (scipy.special.softmax).
    """
    if state.counts.size != graph.n:
        raise ValueError(f"Состояние на {state.counts.size} вершинах, в графе {graph.n}")
    return softmax(growth_exponents(graph, alpha, beta, state.counts))


def choose_vertex(exponents, uniform):
    """
    Вершина по обратной функции распределения: первая v, у которой
    накопленный вес превышает uniform·(полный вес).
    """
    weights = np.exp(exponents - exponents.max())
    cumulative = np.cumsum(weights)
    index = np.searchsorted(cumulative, uniform * cumulative[-1], side="right")
    return min(int(index), exponents.size - 1)


def simulate_growth(graph, alpha, beta, x0, n_steps, rng, thin=1, uniforms=None):
    """
    Траектория процесса роста за n_steps шагов.

    Каждый шаг использует ровно одно равномерное число (обратная функция
    распределения), поэтому две цепи на общем потоке uniforms связаны.
    Показатели пересчитываются инкрементально: после добавления в v к
    показателю v прибавляется α, к показателям соседей v - β.
    """
    x0 = GrowthState(x0).counts if x0 is not None else np.zeros(graph.n, dtype=np.int64)
    if x0.size != graph.n:
        raise ValueError(f"Начальное состояние на {x0.size} вершинах, в графе {graph.n}")
    if n_steps < 0:
        raise ValueError("Число шагов должно быть неотрицательным")
    if uniforms is None:
        uniforms = rng.random(n_steps)

    counts = np.array(x0, dtype=np.int64)
    exponents = growth_exponents(graph, alpha, beta, counts)
    adjacency = graph.adjacency
    recorder = TrajectoryRecorder(counts, n_steps, thin)
    for step in range(1, n_steps + 1):
        vertex = choose_vertex(exponents, uniforms[step - 1])
        counts[vertex] += 1
        exponents += beta * adjacency[vertex]
        exponents[vertex] += alpha
        recorder.record(step, vertex, counts)

    logger.debug(f"Рост на {graph.label}: α={alpha}, β={beta}, {n_steps} шагов")
    return recorder.build()
