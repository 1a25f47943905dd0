import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidCtmcParams, NotNormalized
from .stationary import enumerate_states, site_law_for_field, stationary_finite

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-9
ORDER_TOL = 1e-12


@dataclass(frozen=True)
class DominanceResult:
    """
    dominates: Σ_{i>=k} p_i <= Σ_{i>=k} q_i для всех k (q доминирует p).
    premise: p_i q_j <= p_j q_i для всех j < i (условие отношения правдоподобия).
    """

    dominates: bool
    premise: bool

    def __bool__(self):
        return self.dominates


def stochastic_dominance(p, q):
    """
    Проверка стохастического доминирования q над p на {0..K}.

    Исключения:
        NotNormalized: сумма p или q отличается от 1 больше чем на 1e-9.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError("Законы должны иметь одинаковый носитель")
    for name, law in (("p", p), ("q", q)):
        if abs(law.sum() - 1.0) > NORMALIZATION_TOL:
            raise NotNormalized(f"Закон {name} не нормирован: сумма {law.sum()!r}")

    p_tail = np.cumsum(p[::-1])[::-1]
    q_tail = np.cumsum(q[::-1])[::-1]
    dominates = bool(np.all(p_tail <= q_tail + ORDER_TOL))

    cross = np.outer(p, q)
    lower = np.tril_indices(p.size, k=-1)
    left, right = cross[lower], cross.T[lower]
    premise = bool(np.all(left <= right * (1 + 1e-9) + ORDER_TOL))
    return DominanceResult(dominates=dominates, premise=premise)


def _comparable_pairs(params, v, include_equal=False):
    """
    Пары сравнимых (z <= y покоординатно) конфигураций на V без v;
    возвращает значения поля (Az)_v и (Ay)_v для каждой пары.
    """
    others = enumerate_states(params)
    others = others[others[:, v] == 0]
    fields = others @ params.graph.adjacency[v]
    below = np.all(others[:, None, :] <= others[None, :, :], axis=2)
    if not include_equal:
        np.fill_diagonal(below, False)
    z, y = np.nonzero(below)
    return fields[z], fields[y]


@dataclass(frozen=True)
class MonotonicityReport:
    pairs_checked: int
    dominance_failures: int
    premise_failures: int

    @property
    def holds(self):
        return self.dominance_failures == 0 and self.premise_failures == 0

    def to_dict(self):
        return {
            "pairs_checked": self.pairs_checked,
            "dominance_failures": self.dominance_failures,
            "premise_failures": self.premise_failures,
            "holds": self.holds,
        }


def _check_pairs(lower_params, upper_params, include_equal=False):
    checked = dominance_failures = premise_failures = 0
    cache = {}
    for v in range(lower_params.n):
        lower_fields, upper_fields = _comparable_pairs(lower_params, v, include_equal)
        for key in zip(lower_fields.tolist(), upper_fields.tolist()):
            if key not in cache:
                cache[key] = stochastic_dominance(
                    site_law_for_field(lower_params, key[0]),
                    site_law_for_field(upper_params, key[1]),
                )
            result = cache[key]
            checked += 1
            dominance_failures += not result.dominates
            premise_failures += not result.premise
    return MonotonicityReport(checked, dominance_failures, premise_failures)


def verify_monotonicity(params):
    """
    Монотонность условных законов при β >= 0: для каждой вершины v и каждой
    пары сравнимых конфигураций z <= y на остальных вершинах закон x_v при z
    стохастически меньше закона при y; отдельно проверяется условие
    p_i q_j <= p_j q_i.
    """
    report = _check_pairs(params, params)
    logger.info(f"Монотонность на {params.graph.label}: {report.to_dict()}")
    return report


def occupancy_covariances(law):
    """Матрица Cov(x_u, x_v) по точному стационарному закону."""
    states = law.states.astype(float)
    means = law.probabilities @ states
    second = states.T @ (law.probabilities[:, None] * states)
    return second - np.outer(means, means)


def increasing_statistics(n, threshold=None):
    """
    Набор возрастающих функций состояния: Σx_v, max_v x_v и индикатор
    x >= threshold покоординатно (по умолчанию threshold - все единицы).
    """
    threshold = np.ones(n, dtype=int) if threshold is None else np.asarray(threshold)
    return {
        "sum": lambda states: states.sum(axis=1),
        "max": lambda states: states.max(axis=1),
        "threshold": lambda states: np.all(states >= threshold, axis=1).astype(float),
    }


def verify_beta_dominance(params1, params2, statistics=None, threshold=None):
    """
    Проверка упорядоченности μ_{β_1} <= μ_{β_2} при β_1 <= β_2 на уровне
    средних возрастающих функций (точный перебор) и условия Холли для
    условных законов.

    Возвращает:
        dict: expectations - по каждой статистике (E_1, E_2, упорядочены ли),
        holley_premise - выполнено ли условие Холли, ordered - итог.
    """
    same_model = (
        params1.alpha == params2.alpha
        and params1.graph == params2.graph
        and params1.cap == params2.cap
        and params1.variant == params2.variant
    )
    if not same_model:
        raise InvalidCtmcParams("Модели должны отличаться только параметром β")
    if params1.beta > params2.beta:
        raise InvalidCtmcParams("Требуется β_1 <= β_2", beta1=params1.beta, beta2=params2.beta)

    statistics = statistics or increasing_statistics(params1.n, threshold)
    lower = stationary_finite(params1, cross_check=False)
    upper = stationary_finite(params2, cross_check=False)
    expectations = {}
    for name, function in statistics.items():
        e1 = lower.expectation(function(lower.states))
        e2 = upper.expectation(function(upper.states))
        expectations[name] = {
            "lower": e1,
            "upper": e2,
            "ordered": e1 <= e2 + ORDER_TOL * max(1.0, abs(e2)),
        }
    holley = _check_pairs(params1, params2, include_equal=True)
    ordered = all(item["ordered"] for item in expectations.values()) and holley.holds
    logger.info(
        f"Доминирование по β на {params1.graph.label}: β={params1.beta}..{params2.beta}, "
        f"упорядочено: {ordered}"
    )
    return {
        "expectations": expectations,
        "holley_premise": holley.holds,
        "ordered": ordered,
    }
