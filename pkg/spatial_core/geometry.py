import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, InvalidDomain, PointOutsideDomain


@dataclass(frozen=True, eq=False)
class Domain:
    """
    Замкнутый параллелепипед [lower, upper] в R^d, стороны параллельны осям.

    Поля:
        lower, upper: массивы длины d, lower[i] < upper[i].
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size == 0:
            raise InvalidDomain(
                "Границы области должны быть массивами одинаковой длины d >= 1",
                lower=lower,
                upper=upper,
            )
        if not np.all(lower < upper):
            raise InvalidDomain("Требуется lower[i] < upper[i]", lower=lower, upper=upper)
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unit_cube(cls, dimension=2):
        return cls(np.zeros(dimension), np.ones(dimension))

    @classmethod
    def rescaled_cube(cls, dimension, m):
        """
        Куб m^{1/d}·[0,1]^d объёма m - область растущей последовательности D_m.
        """
        side = float(m) ** (1.0 / dimension)
        return cls(np.zeros(dimension), np.full(dimension, side))

    @property
    def dimension(self):
        return self.lower.size

    @property
    def sides(self):
        return self.upper - self.lower

    @property
    def volume(self):
        return float(np.prod(self.sides))

    def contains(self, points):
        """
        Проверка принадлежности замкнутому параллелепипеду.
        Для одной точки возвращает bool, для массива (n, d) - массив bool.
        """
        points = np.asarray(points, dtype=float)
        check_dimension(points, self.dimension)
        inside = np.all((points >= self.lower) & (points <= self.upper), axis=-1)
        return bool(inside) if inside.ndim == 0 else inside

    def sample_uniform(self, rng, size=None):
        if size is None:
            return self.lower + self.sides * rng.random(self.dimension)
        return self.lower + self.sides * rng.random((size, self.dimension))

    def to_dict(self):
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}


def volume(domain):
    return domain.volume


def check_dimension(points, dimension):
    points = np.asarray(points)
    if points.shape[-1:] != (dimension,):
        raise DimensionMismatch(
            f"Ожидалась размерность {dimension}, получено {points.shape}",
            shape=points.shape,
        )


@dataclass(frozen=True, eq=False)
class PointSeq:
    """
    Упорядоченная последовательность точек x(ℓ) = (x_1, ..., x_ℓ) в порядке
    поступления. Все точки лежат в области domain.
    """

    points: np.ndarray
    domain: Domain = field(repr=False)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float).reshape(-1, self.domain.dimension)
        if points.size and not np.all(self.domain.contains(points)):
            raise PointOutsideDomain("Последовательность выходит за пределы области")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self):
        return self.points.shape[0]

    def prefix(self, k):
        """Первые k точек x(k)."""
        return self.points[:k]


def neighbour_count(x, config, R):
    """
    Число соседей ν(x, X) = #{y ∈ X : ‖x − y‖ ≤ R}; граница включается.

    Параметры:
    - x: точка длины d.
    - config: массив (n, d) или пустая коллекция.
    - R: радиус взаимодействия, R > 0.
    """
    x = np.asarray(x, dtype=float)
    config = np.asarray(config, dtype=float)
    if config.size == 0:
        return 0
    config = config.reshape(-1, x.size) if config.ndim == 1 else config
    check_dimension(config, x.size)
    squared = np.sum((config - x) ** 2, axis=1)
    return int(np.count_nonzero(squared <= R * R))


class NeighbourGrid:
    """
    Равномерная сетка с ячейкой стороны R для подсчёта соседей.
    Точки добавляются по одной; count(x) просматривает 3^d соседних ячеек
    и совпадает с полным перебором neighbour_count.
    """

    def __init__(self, R, dimension, capacity=1024):
        self.R = float(R)
        self.dimension = dimension
        self._points = np.empty((capacity, dimension))
        self._size = 0
        self._cells = {}
        self._offsets = [
            np.array(offset)
            for offset in np.ndindex(*(3,) * dimension)
        ]

    def __len__(self):
        return self._size

    @property
    def points(self):
        return self._points[: self._size]

    def _cell(self, x):
        return tuple(int(c) for c in np.floor(x / self.R))

    def insert(self, x):
        x = np.asarray(x, dtype=float)
        check_dimension(x, self.dimension)
        if self._size == self._points.shape[0]:
            self._points = np.concatenate([self._points, np.empty_like(self._points)])
        self._points[self._size] = x
        self._cells.setdefault(self._cell(x), []).append(self._size)
        self._size += 1

    def neighbours(self, x):
        """Индексы точек сетки на расстоянии не больше R от x."""
        x = np.asarray(x, dtype=float)
        check_dimension(x, self.dimension)
        base = np.array(self._cell(x)) - 1
        candidates = []
        for offset in self._offsets:
            candidates.extend(self._cells.get(tuple(base + offset), ()))
        if not candidates:
            return np.empty(0, dtype=int)
        candidates = np.asarray(candidates)
        squared = np.sum((self._points[candidates] - x) ** 2, axis=1)
        return candidates[squared <= self.R * self.R]

    def count(self, x):
        return int(self.neighbours(x).size)


def ball_volume(dimension, R):
    """Объём шара v_d R^d."""
    return math.pi ** (dimension / 2) / math.gamma(dimension / 2 + 1) * R**dimension
