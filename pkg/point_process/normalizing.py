import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .density import log_density_from_counts, neighbour_counts

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100


@dataclass(frozen=True)
class LogZEstimate:
    """
    Оценка log Z по выборке единичного пуассоновского процесса.

    Поля:
        value: log среднего весов Π β_{ν}.
        se: складной нож (jackknife) для log-среднего.
        n_samples: объём выборки.
        nonzero: число конфигураций с ненулевым весом.
    """

    value: float
    se: float
    n_samples: int
    nonzero: int

    def to_dict(self):
        return {
            "log_Z": self.value,
            "se": self.se,
            "n_samples": self.n_samples,
            "nonzero": self.nonzero,
        }


def reference_counts(domain, R, n_samples, rng):
    """
    Выборка конфигураций пуассоновского процесса единичной интенсивности
    в области; для каждой возвращаются числа соседей ν(x_k, x). Один и тот же
    набор используется для всех кандидатов β (общие случайные числа).
    """
    counts = []
    for size in rng.poisson(domain.volume, size=n_samples):
        counts.append(neighbour_counts(domain.sample_uniform(rng, int(size)), R))
    return counts


def log_Z_from_counts(rule, counts):
    """
    log Z = log E[Π_k β_{ν(x_k, x)}] по готовой пуассоновской выборке и
    jackknife-ошибка логарифма среднего.
    """
    n = len(counts)
    log_weights = np.array([log_density_from_counts(rule, c) for c in counts])
    nonzero = int(np.count_nonzero(np.isfinite(log_weights)))
    if nonzero == 0:
        return LogZEstimate(-math.inf, math.inf, n, 0)

    value = float(logsumexp(log_weights) - math.log(n))
    # leave-one-out: log(Σ_{j≠i} w_j) через вычитание в исходной шкале
    shift = np.max(log_weights)
    scaled = np.exp(log_weights - shift)
    total = scaled.sum()
    remainder = np.maximum(total - scaled, 0.0)
    if np.any(remainder == 0):
        return LogZEstimate(value, math.inf, n, nonzero)
    leave_one_out = np.log(remainder) + shift - math.log(n - 1)
    se = math.sqrt((n - 1) / n * np.sum((leave_one_out - leave_one_out.mean()) ** 2))
    return LogZEstimate(value, float(se), n, nonzero)


def estimate_log_Z(params, domain, n_samples, rng):
    """
    Оценка log Z нормировочной константы плотности Π β_{ν(x_k, x)}
    относительно единичного пуассоновского процесса (множитель e^{−|D|}
    входит в Z): среднее весов по n_samples пуассоновским конфигурациям.
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"Нужно не меньше {MIN_SAMPLES} выборок, получено {n_samples}")
    estimate = log_Z_from_counts(params.rule, reference_counts(domain, params.R, n_samples, rng))
    logger.info(
        f"log Z = {estimate.value:.6g} ± {estimate.se:.3g} "
        f"({estimate.nonzero}/{n_samples} ненулевых весов)"
    )
    return estimate


def hard_core_log_Z_1d(beta0, R, length):
    """
    Точное log Z для процесса с жёсткими ядрами (β_0, 0, 0, ...) на отрезке
    длины length <= 2R, где помещается не больше двух точек:
    Z = e^{−L}(1 + β_0·L + β_0²·(L − R)_+² / 2).
    """
    if length > 2 * R:
        raise ValueError("Формула верна только при длине отрезка не больше 2R")
    gap = max(length - R, 0.0)
    return -length + math.log1p(beta0 * length + beta0**2 * gap**2 / 2)
