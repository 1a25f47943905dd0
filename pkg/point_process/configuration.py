from dataclasses import dataclass, field

import numpy as np

from spatial_core.exceptions import PointOutsideDomain
from spatial_core.geometry import Domain, check_dimension

from .exceptions import DuplicatePoint, PointAlreadyPresent


@dataclass(frozen=True, eq=False)
class PointConfig:
    """
    Неупорядоченная конфигурация попарно различных точек в области.
    Порядок строк points значения не имеет.
    """

    points: np.ndarray
    domain: Domain = field(repr=False)

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1, self.domain.dimension)
        if points.size and not np.all(self.domain.contains(points)):
            raise PointOutsideDomain("Конфигурация выходит за пределы области")
        if points.shape[0] > 1 and np.unique(points, axis=0).shape[0] != points.shape[0]:
            raise DuplicatePoint("Точки конфигурации должны быть попарно различны")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    @classmethod
    def empty(cls, domain):
        return cls(np.empty((0, domain.dimension)), domain)

    def __len__(self):
        return self.points.shape[0]

    def contains_point(self, u):
        u = np.asarray(u, dtype=float)
        check_dimension(u, self.domain.dimension)
        return bool(len(self) and np.any(np.all(self.points == u, axis=1)))

    def with_point(self, u):
        """x ∪ {u}."""
        if self.contains_point(u):
            raise PointAlreadyPresent("Точка уже входит в конфигурацию", point=u)
        return PointConfig(np.vstack([self.points, np.asarray(u, dtype=float)]), self.domain)

    def without(self, index):
        """x без точки с номером index."""
        return PointConfig(np.delete(self.points, index, axis=0), self.domain)
