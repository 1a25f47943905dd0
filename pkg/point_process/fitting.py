import itertools
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .density import log_density_from_counts, neighbour_counts
from .normalizing import log_Z_from_counts, reference_counts
from .rules import FiniteTable

logger = logging.getLogger(__name__)


def estimate_N_pp(config, R):
    """N̂ = max_k ν(x_k, x); 0 для пустой конфигурации."""
    counts = neighbour_counts(config, R)
    return int(counts.max()) if counts.size else 0


@dataclass(frozen=True, eq=False)
class PpFit:
    """
    Результат сеточной МП-оценки конечной таблицы.

    Поля:
        N_hat: оценка N.
        table: лучшая таблица (β_0, ..., β_N̂).
        log_likelihood: log f(x) − log Ẑ в лучшей точке.
        candidates: таблица всех кандидатов с log Ẑ и его ошибкой.
    """

    N_hat: int
    table: tuple
    log_likelihood: float
    candidates: pd.DataFrame

    def to_dict(self):
        best = self.candidates.loc[self.candidates["log_likelihood"].idxmax()]
        return {
            "N_hat": self.N_hat,
            "beta_hat": list(self.table),
            "log_likelihood": self.log_likelihood,
            "log_Z": float(best["log_Z"]),
            "log_Z_se": float(best["log_Z_se"]),
            "experimental": True,
        }


def fit_finite_table(config, domain, R, grid, n_samples, rng):
    """
    Экспериментальная МП-оценка таблицы (β_0, ..., β_N̂) перебором по сетке.

    Параметры:
    - grid: последовательность из N̂ + 1 наборов значений, по одному на
      каждую координату β_j; кандидаты - их декартово произведение.
    - n_samples: объём пуассоновской выборки для log Z; выборка общая для
      всех кандидатов, поэтому шум Ẑ коррелирован по сетке.
    """
    N_hat = estimate_N_pp(config, R)
    if len(grid) != N_hat + 1:
        raise ValueError(f"Сетка должна задавать {N_hat + 1} координат, получено {len(grid)}")
    logger.warning("МП-оценка точечного процесса экспериментальная: шум log Z входит в правдоподобие")

    observed = neighbour_counts(config, R)
    reference = reference_counts(domain, R, n_samples, rng)
    rows = []
    for table in itertools.product(*grid):
        if not table[0] > 0 or min(table) < 0:
            continue
        rule = FiniteTable(tuple(table))
        estimate = log_Z_from_counts(rule, reference)
        log_f = log_density_from_counts(rule, observed)
        rows.append(
            {
                **{f"beta_{j}": value for j, value in enumerate(rule.table)},
                "log_Z": estimate.value,
                "log_Z_se": estimate.se,
                "log_likelihood": log_f - estimate.value,
            }
        )
    candidates = pd.DataFrame(rows)
    if candidates.empty:
        raise ValueError("На сетке нет допустимых кандидатов")
    best = candidates.loc[candidates["log_likelihood"].idxmax()]
    table = tuple(float(best[f"beta_{j}"]) for j in range(N_hat + 1))
    logger.info(f"Сеточная оценка: N̂={N_hat}, β̂={table}, кандидатов {len(candidates)}")
    return PpFit(
        N_hat=N_hat,
        table=table,
        log_likelihood=float(best["log_likelihood"]),
        candidates=candidates,
    )


def poisson_count_summary(sizes, expected):
    """
    Среднее и дисперсия |x| по независимым цепям и их стандартные ошибки
    для сравнения с Poisson(expected).
    """
    sizes = np.asarray(sizes, dtype=float)
    n = sizes.size
    return {
        "mean": float(sizes.mean()),
        "variance": float(sizes.var(ddof=1)),
        "mean_se": float(np.sqrt(expected / n)),
        "variance_se": float(np.sqrt((expected + 2 * expected**2) / (n - 1))),
        "expected": float(expected),
    }
