import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist

from spatial_core.geometry import NeighbourGrid

logger = logging.getLogger(__name__)

GAMMA_CHUNK = 512


@dataclass(frozen=True)
class TCounts:
    """
    t-статистики: counts[j] = #{i : ν(x_i, x(i−1)) = j}, j = 0..N;
    overflow - число точек, у которых предшествующих соседей больше N.
    """

    counts: np.ndarray
    overflow: int

    @property
    def total(self):
        return int(self.counts.sum()) + self.overflow


@dataclass(frozen=True, eq=False)
class CsaStatistics:
    """
    Достаточные статистики наблюдения x(ℓ) для правдоподобия CSA.

    Поля:
        t: (t_0, ..., t_N).
        gamma: матрица (N+1) x ℓ, gamma[j, k] - оценка Γ_{j,k}.
        gamma_se: стандартные ошибки Монте-Карло той же формы.
        mc_samples: число равномерных точек на столбец.
        volume: |D|.
    """

    t: np.ndarray
    gamma: np.ndarray
    gamma_se: np.ndarray
    mc_samples: int
    volume: float
    overflow: int = 0

    @property
    def N(self):
        return self.t.size - 1

    @property
    def length(self):
        return self.gamma.shape[1]


def prior_neighbour_counts(seq, R):
    """
    ν(x_i, x(i−1)) для каждой точки последовательности (сетка с ячейкой R).
    """
    grid = NeighbourGrid(R, seq.domain.dimension, capacity=max(len(seq), 1))
    counts = np.empty(len(seq), dtype=int)
    for i, point in enumerate(seq.points):
        counts[i] = grid.count(point)
        grid.insert(point)
    return counts


def t_statistics(seq, R, N):
    counts = prior_neighbour_counts(seq, R)
    tallies = np.bincount(counts[counts <= N], minlength=N + 1)
    return TCounts(counts=tallies, overflow=int(np.count_nonzero(counts > N)))


def estimate_N(seq, R):
    """N̂ = max_i ν(x_i, x(i−1)) - МП-оценка числа ненулевых параметров."""
    if len(seq) == 0:
        raise ValueError("Для оценки N нужна хотя бы одна точка")
    return int(prior_neighbour_counts(seq, R).max())


def estimate_rsa_radius(seq):
    """
    Оценка радиуса для модели RSA (N = 0): минимальное расстояние от точки
    до точек, поступивших раньше неё.
    """
    if len(seq) < 2:
        raise ValueError("Нужно хотя бы две точки")
    return float(pdist(seq.points).min())


def gamma_columns(points, domain, R, N, n_columns, mc_n, rng):
    """
    Оценки Γ_{j,k} для k = 0..n_columns−1 по общим равномерным точкам u.

    Для каждой u и каждого k считается ν(u, x(k)) накопленной суммой по
    индикаторам ‖u − x_i‖ <= R, так что одни и те же mc_n точек дают
    несмещённые оценки для всех столбцов.
    """
    hits = np.zeros((N + 1, n_columns))
    prefix = points[: max(n_columns - 1, 0)]
    for start in range(0, mc_n, GAMMA_CHUNK):
        size = min(GAMMA_CHUNK, mc_n - start)
        samples = domain.sample_uniform(rng, size)
        counts = np.zeros((size, n_columns), dtype=int)
        if prefix.shape[0]:
            near = cdist(samples, prefix, "sqeuclidean") <= R * R
            counts[:, 1:] = np.cumsum(near, axis=1)
        for j in range(N + 1):
            hits[j] += np.count_nonzero(counts == j, axis=0)

    fraction = hits / mc_n
    gamma = domain.volume * fraction
    gamma_se = domain.volume * np.sqrt(fraction * (1.0 - fraction) / mc_n)
    return gamma, gamma_se


def gamma_statistics(seq, domain, R, N, mc_n, rng):
    """
    Монте-Карло оценки Γ_{j,k} = |{u ∈ D : ν(u, x(k)) = j}|, 0 <= k <= ℓ−1.

    Γ_{0,0} = |D| и Γ_{j,k} = 0 при k < j получаются точно.
    """
    if mc_n < 1:
        raise ValueError("mc_n должно быть положительным")
    return gamma_columns(seq.points, domain, R, N, len(seq), mc_n, rng)


def exact_gamma_1d(points, domain, R, N, n_columns):
    """
    Точные значения Γ_{j,k} для d = 1 по точкам излома x_i ± R.

    Между соседними точками излома ν(u, x(k)) постоянно, поэтому интеграл
    равен сумме длин отрезков с нужным числом соседей.
    """
    points = np.asarray(points, dtype=float).reshape(-1)
    lower, upper = float(domain.lower[0]), float(domain.upper[0])
    gamma = np.zeros((N + 1, n_columns))
    for k in range(n_columns):
        prefix = points[:k]
        breaks = np.clip(np.concatenate([[lower, upper], prefix - R, prefix + R]), lower, upper)
        breaks = np.unique(breaks)
        lengths = np.diff(breaks)
        middles = (breaks[:-1] + breaks[1:]) / 2
        counts = np.count_nonzero(np.abs(middles[:, None] - prefix[None, :]) <= R, axis=1)
        for j in range(N + 1):
            gamma[j, k] = lengths[counts == j].sum()
    return gamma


def compute_statistics(seq, domain, R, mc_n, rng, N=None):
    """
    t- и Γ-статистики наблюдения. Если N не задано, берётся N̂.
    """
    if N is None:
        N = estimate_N(seq, R)
    t = t_statistics(seq, R, N)
    gamma, gamma_se = gamma_statistics(seq, domain, R, N, mc_n, rng)
    logger.debug(f"Статистики: ℓ={len(seq)}, N={N}, t={t.counts.tolist()}")
    return CsaStatistics(
        t=t.counts,
        gamma=gamma,
        gamma_se=gamma_se,
        mc_samples=mc_n,
        volume=domain.volume,
        overflow=t.overflow,
    )

