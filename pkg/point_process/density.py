import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from .exceptions import PointAlreadyPresent


def _points(config):
    return config.points if hasattr(config, "points") else np.asarray(config, dtype=float)


def neighbour_counts(config, R):
    """
    ν(x_k, x) для каждой точки конфигурации: число других точек на
    расстоянии не больше R (сама точка не считается).
    """
    points = _points(config)
    if points.shape[0] < 2:
        return np.zeros(points.shape[0], dtype=np.int64)
    close = squareform(pdist(points)) <= R
    np.fill_diagonal(close, False)
    return close.sum(axis=1)


def pair_count(config, R):
    """s(x) = ½ Σ_k ν(x_k, x) - число пар соседей."""
    return int(neighbour_counts(config, R).sum()) // 2


def log_density_from_counts(rule, counts):
    return float(np.sum(rule.log_beta(counts))) if len(counts) else 0.0


def log_unnormalized_density(params, config):
    """
    log Π_k β_{ν(x_k, x)} относительно единичного пуассоновского процесса;
    −inf для запрещённой конфигурации.
    """
    return log_density_from_counts(params.rule, neighbour_counts(config, params.R))


def log_papangelou_ratio(params, config, u):
    """
    log f(x ∪ {u}) / f(x) = log β_{ν(u,x)} + Σ_{x_k ∼ u} [log β_{ν_k+1} − log β_{ν_k}].
    Для запрещённой исходной конфигурации возвращает −inf.

    Исключения:
        PointAlreadyPresent: u уже входит в x.
    """
    points = _points(config)
    u = np.asarray(u, dtype=float)
    if points.shape[0] == 0:
        return float(params.rule.log_beta(0))
    distances = cdist(u[None, :], points)[0]
    if np.any(distances == 0):
        raise PointAlreadyPresent("Точка уже входит в конфигурацию", point=u)
    counts = neighbour_counts(points, params.R)
    before = params.rule.log_beta(counts)
    if not np.all(np.isfinite(before)):
        return -np.inf
    near = distances <= params.R
    after = params.rule.log_beta(counts[near] + 1)
    return float(params.rule.log_beta(int(near.sum())) + np.sum(after - before[near]))


def papangelou_ratio(params, config, u):
    """Условная интенсивность Папангелу λ(u; x); 0, если вставка запрещена."""
    return float(np.exp(log_papangelou_ratio(params, config, u)))
