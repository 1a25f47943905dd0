import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from django.conf import settings
from scipy import sparse
from scipy.sparse.linalg import spsolve
from scipy.special import logsumexp, softmax

from .exceptions import InvalidCtmcParams, StateSpaceTooLarge
from .params import check_occupancy
from .rates import log_rates_from_field

logger = logging.getLogger(__name__)

GLOBAL_BALANCE_LIMIT = 10**5


def _require_cap(params):
    if params.cap is None:
        raise InvalidCtmcParams("Нужна модель с ограничением N")


def enumerate_states(params):
    """
    Все состояния {0..N}^V в лексикографическом порядке (последняя вершина
    меняется быстрее всего).

    Исключения:
        StateSpaceTooLarge: (N+1)^n больше STATE_SPACE_LIMIT.
    """
    _require_cap(params)
    base = params.cap + 1
    size = base**params.n
    if size > settings.STATE_SPACE_LIMIT:
        raise StateSpaceTooLarge(
            f"(N+1)^n = {size} превышает {settings.STATE_SPACE_LIMIT}",
            size=size,
        )
    shape = (base,) * params.n
    return np.stack(np.unravel_index(np.arange(size), shape), axis=1).astype(np.int64)


def log_weights(params, states):
    """W(x) для каждой строки states."""
    states = np.asarray(states, dtype=float)
    pair_sum = np.einsum("ij,jk,ik->i", states, params.graph.adjacency, states) / 2
    return params.alpha / 2 * np.sum(states * (states - 1), axis=1) + params.beta * pair_sum


@dataclass(frozen=True, eq=False)
class StationaryLaw:
    """
    Точное стационарное распределение μ^{(N)} ∝ e^{W} на {0..N}^V.

    Поля:
        states: матрица состояний.
        probabilities: вероятности состояний.
        log_Z: логарифм нормирующей константы Σ e^{W(x)}.
        total_variation: расстояние по вариации до решения уравнений
            глобального баланса (None, если проверка не выполнялась).
    """

    params: object
    states: np.ndarray
    probabilities: np.ndarray
    log_Z: float
    total_variation: float = None

    def probability_of(self, x):
        x = check_occupancy(self.params, x)
        index = np.ravel_multi_index(tuple(x), (self.params.cap + 1,) * self.params.n)
        return float(self.probabilities[index])

    def expectation(self, values):
        return float(self.probabilities @ np.asarray(values, dtype=float))

    def to_frame(self):
        frame = pd.DataFrame(self.states, columns=[f"x_{v}" for v in range(self.params.n)])
        frame["probability"] = self.probabilities
        return frame


def solve_global_balance(params, states=None):
    """
    Стационарное распределение из уравнений глобального баланса πQ = 0,
    Σπ = 1 для разреженного генератора Q ограниченной цепи.
    """
    states = enumerate_states(params) if states is None else states
    size, n = states.shape
    base = params.cap + 1
    strides = base ** np.arange(n - 1, -1, -1)
    index = np.arange(size)
    field = states @ params.graph.adjacency
    births, deaths = log_rates_from_field(params, states, field)

    rows, cols, values = [], [], []
    for v in range(n):
        for sign, logs in ((1, births[:, v]), (-1, deaths[:, v])):
            allowed = np.isfinite(logs)
            rows.append(index[allowed])
            cols.append(index[allowed] + sign * strides[v])
            values.append(np.exp(logs[allowed]))
    rows, cols, values = np.concatenate(rows), np.concatenate(cols), np.concatenate(values)
    generator = sparse.coo_matrix((values, (rows, cols)), shape=(size, size)).tocsr()
    generator = generator - sparse.diags(np.asarray(generator.sum(axis=1)).ravel())

    system = generator.T.tolil()
    system[size - 1, :] = np.ones(size)
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    solution = spsolve(system.tocsc(), rhs)
    return solution / solution.sum()


def stationary_finite(params, cross_check=True):
    """
    Точное стационарное распределение цепи с ограничением N: перебор
    состояний, W(x) и нормировка через logsumexp. При cross_check и не
    более GLOBAL_BALANCE_LIMIT состояний результат сверяется с решением
    уравнений глобального баланса.
    """
    states = enumerate_states(params)
    weights = log_weights(params, states)
    log_Z = float(logsumexp(weights))
    probabilities = np.exp(weights - log_Z)

    total_variation = None
    if cross_check and states.shape[0] <= GLOBAL_BALANCE_LIMIT:
        solved = solve_global_balance(params, states)
        total_variation = float(0.5 * np.abs(solved - probabilities).sum())
        logger.info(
            f"Стационарный закон на {params.graph.label}, N={params.cap}: "
            f"{states.shape[0]} состояний, TV={total_variation:.3e}"
        )
    return StationaryLaw(
        params=params,
        states=states,
        probabilities=probabilities,
        log_Z=log_Z,
        total_variation=total_variation,
    )


def conditional_site_law(params, x, v):
    """
    Условный закон x_v при заданных остальных координатах:
    p_k ∝ exp(αk(k−1)/2 + kβ(Ax)_v), k = 0..N. Значение x[v] не используется.
    """
    _require_cap(params)
    x = np.asarray(x, dtype=float)
    return site_law_for_field(params, float(params.graph.adjacency[v] @ x))


def site_law_for_field(params, field_value):
    k = np.arange(params.cap + 1)
    return softmax(params.alpha * k * (k - 1) / 2 + k * params.beta * field_value)


def ising_log_weights(graph, beta, spins):
    """
    Логарифмы весов модели Изинга для y ∈ {−1, 1}^V, соответствующей N = 1
    при y_v = 2x_v − 1: взаимодействие β/4 по рёбрам и поле β·d_v/4
    (на 2-регулярных графах однородное поле β/2). Константа опущена.
    """
    spins = np.atleast_2d(np.asarray(spins, dtype=float))
    pair_sum = np.einsum("ij,jk,ik->i", spins, graph.adjacency, spins) / 2
    return beta / 4 * pair_sum + spins @ (beta * graph.degrees / 4)
