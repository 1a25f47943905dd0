import logging
import math
from dataclasses import dataclass

import numpy as np

from config.parallel import ordered_map
from config.rng import make_rng

from .configuration import PointConfig
from .density import log_papangelou_ratio, log_unnormalized_density

logger = logging.getLogger(__name__)

BIRTH_PROBABILITY = 0.5


@dataclass(frozen=True, eq=False)
class BirthDeathResult:
    """
    Итог цепи рождения и гибели.

    Поля:
        config: конфигурация после n_moves шагов.
        trace: |x| после каждого trace_every-го шага.
        births_proposed, births_accepted, deaths_proposed, deaths_accepted:
            счётчики предложений; предложение гибели в пустой
            конфигурации считается отклонённым.
    """

    config: PointConfig
    trace: np.ndarray
    n_moves: int
    births_proposed: int
    births_accepted: int
    deaths_proposed: int
    deaths_accepted: int

    @property
    def acceptance_rates(self):
        return {
            "birth": self.births_accepted / max(self.births_proposed, 1),
            "death": self.deaths_accepted / max(self.deaths_proposed, 1),
        }

    def to_dict(self):
        return {
            "n_moves": self.n_moves,
            "n_points": len(self.config),
            "acceptance_rates": self.acceptance_rates,
            "geweke_z": geweke_z(self.trace),
        }


class _ChainState:
    """
    Текущая конфигурация цепи: точки и числа соседей ν(x_k, x),
    поддерживаемые при каждом рождении и гибели.
    """

    def __init__(self, params, dimension, points=None, capacity=256):
        self.R2 = params.R * params.R
        self.rule = params.rule
        self.points = np.empty((capacity, dimension))
        self.counts = np.zeros(capacity, dtype=np.int64)
        self.size = 0
        for point in np.empty((0, dimension)) if points is None else points:
            self.insert(point, self.neighbours(point))

    def neighbours(self, u):
        squared = np.sum((self.points[: self.size] - u) ** 2, axis=1)
        return np.nonzero(squared <= self.R2)[0]

    def log_birth_ratio(self, near):
        counts = self.counts[near]
        return float(
            self.rule.log_beta(near.size)
            + np.sum(self.rule.log_beta(counts + 1) - self.rule.log_beta(counts))
        )

    def log_death_ratio(self, index, near):
        """log f(x) / f(x без x_index); near - соседи x_index без неё самой."""
        counts = self.counts[near]
        with np.errstate(invalid="ignore"):
            value = float(
                self.rule.log_beta(near.size)
                + np.sum(self.rule.log_beta(counts) - self.rule.log_beta(counts - 1))
            )
        return value if not math.isnan(value) else math.inf

    def insert(self, u, near):
        if self.size == self.points.shape[0]:
            self.points = np.concatenate([self.points, np.empty_like(self.points)])
            self.counts = np.concatenate([self.counts, np.zeros_like(self.counts)])
        self.counts[near] += 1
        self.points[self.size] = u
        self.counts[self.size] = near.size
        self.size += 1

    def remove(self, index, near):
        self.counts[near] -= 1
        last = self.size - 1
        self.points[index] = self.points[last]
        self.counts[index] = self.counts[last]
        self.size = last

    def death_neighbours(self, index):
        near = self.neighbours(self.points[index])
        return near[near != index]


def sample_bd_mcmc(params, domain, n_moves, rng, initial=None, trace_every=1):
    """
    Метрополис-Гастингс рождения и гибели. С вероятностью ½ предлагается
    равномерная точка u и принимается с вероятностью
    min(1, |D|·λ(u; x)/(n+1)); иначе удаляется равномерно выбранная x_i с
    вероятностью min(1, n/(|D|·λ(x_i; x без x_i))). Инвариантный закон -
    процесс с плотностью Π β_{ν(x_k, x)} относительно единичного пуассоновского.
    """
    if n_moves < 1:
        raise ValueError("n_moves должно быть не меньше 1")
    volume = domain.volume
    log_volume = math.log(volume)
    state = _ChainState(params, domain.dimension, None if initial is None else initial.points)
    trace = []
    births = [0, 0]
    deaths = [0, 0]

    for move in range(1, n_moves + 1):
        if rng.random() < BIRTH_PROBABILITY:
            births[0] += 1
            u = domain.sample_uniform(rng)
            near = state.neighbours(u)
            log_accept = log_volume + state.log_birth_ratio(near) - math.log(state.size + 1)
            if log_accept >= 0 or rng.random() < math.exp(log_accept):
                state.insert(u, near)
                births[1] += 1
        else:
            deaths[0] += 1
            if state.size:
                index = int(rng.integers(state.size))
                near = state.death_neighbours(index)
                log_accept = math.log(state.size) - log_volume - state.log_death_ratio(index, near)
                if log_accept >= 0 or rng.random() < math.exp(log_accept):
                    state.remove(index, near)
                    deaths[1] += 1
        if move % trace_every == 0:
            trace.append(state.size)

    result = BirthDeathResult(
        config=PointConfig(state.points[: state.size].copy(), domain),
        trace=np.array(trace, dtype=np.int64),
        n_moves=n_moves,
        births_proposed=births[0],
        births_accepted=births[1],
        deaths_proposed=deaths[0],
        deaths_accepted=deaths[1],
    )
    logger.info(
        f"Цепь рождения и гибели: {n_moves} шагов, {len(result.config)} точек, "
        f"принятие {result.acceptance_rates}"
    )
    return result


def kernel_balance_residual(params, domain, config, u):
    """
    |log(f(x)·P(x → x∪u)) − log(f(x∪u)·P(x∪u → x))| для явных формул
    предложения и принятия; 0, если обе стороны равны нулю.
    """
    n = len(config)
    volume = domain.volume
    log_f = log_unnormalized_density(params, config)
    log_f_up = log_unnormalized_density(params, config.with_point(u))
    log_ratio = log_papangelou_ratio(params, config, u)

    forward = math.log(BIRTH_PROBABILITY) - math.log(volume) + min(
        0.0, math.log(volume) + log_ratio - math.log(n + 1)
    )
    backward = math.log(1 - BIRTH_PROBABILITY) - math.log(n + 1) + min(
        0.0, math.log(n + 1) - math.log(volume) - log_ratio
    )
    lhs, rhs = log_f + forward, log_f_up + backward
    if lhs == -math.inf and rhs == -math.inf:
        return 0.0
    return abs(lhs - rhs)


def geweke_z(trace, first=0.1, last=0.5):
    """
    Диагностика сходимости по следу |x|: сравнение среднего первых 10% и
    последних 50% следа; дисперсии средних оцениваются методом групповых
    средних.
    """
    trace = np.asarray(trace, dtype=float)
    head = trace[: int(first * trace.size)]
    tail = trace[trace.size - int(last * trace.size):]
    if head.size < 2 or tail.size < 2:
        return math.nan
    difference = head.mean() - tail.mean()
    spread = math.sqrt(_batch_mean_variance(head) + _batch_mean_variance(tail))
    if spread == 0:
        return 0.0 if difference == 0 else math.copysign(math.inf, difference)
    return float(difference / spread)


def _batch_mean_variance(values):
    batches = max(2, int(math.sqrt(values.size)))
    means = np.array([chunk.mean() for chunk in np.array_split(values, batches)])
    return float(means.var(ddof=1) / batches)


def _chain_task(task):
    params, domain, n_moves, seed, chain, trace_every = task
    return sample_bd_mcmc(params, domain, n_moves, make_rng(seed, chain), trace_every=trace_every)


def run_chains(params, domain, n_moves, seed, n_chains, trace_every=1, workers=1):
    """
    Независимые цепи на потоках make_rng(seed, chain); результаты в порядке
    номеров цепей.
    """
    tasks = [(params, domain, n_moves, seed, chain, trace_every) for chain in range(n_chains)]
    return ordered_map(_chain_task, tasks, workers=workers)
