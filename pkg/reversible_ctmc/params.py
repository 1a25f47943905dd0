import math
from dataclasses import dataclass

import numpy as np

from graph_core.graph import Graph

from .exceptions import InvalidCtmcParams, InvalidOccupancy


@dataclass(frozen=True)
class CtmcParams:
    """
    Параметры обратимого процесса рождения и гибели на графе.

    Поля:
        alpha, beta: вещественные параметры взаимодействия.
        graph: граф G.
        variant: X_RATES - рождение e^{αx_v+β(Ax)_v}, гибель 1;
            Y_RATES - рождение e^{αx_v}, гибель e^{−β(Ax)_v}.
        cap: необязательное ограничение N на число частиц в вершине.
    """

    X_RATES = "X"
    Y_RATES = "Y"

    VARIANTS = [
        (X_RATES, "Рождение e^{αx_v+β(Ax)_v}, гибель 1"),
        (Y_RATES, "Рождение e^{αx_v}, гибель e^{−β(Ax)_v}"),
    ]

    alpha: float
    beta: float
    graph: Graph
    variant: str = X_RATES
    cap: int = None

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise InvalidCtmcParams("α и β должны быть конечными", alpha=self.alpha, beta=self.beta)
        if self.variant not in dict(self.VARIANTS):
            raise InvalidCtmcParams(f"Неизвестный вариант интенсивностей: {self.variant}")
        if self.cap is not None and int(self.cap) < 1:
            raise InvalidCtmcParams("Ограничение N должно быть не меньше 1", cap=self.cap)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if self.cap is not None:
            object.__setattr__(self, "cap", int(self.cap))

    @property
    def n(self):
        return self.graph.n

    def with_beta(self, beta):
        return CtmcParams(self.alpha, beta, self.graph, self.variant, self.cap)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "graph": self.graph.label,
            "variant": self.variant,
            "cap": self.cap,
        }


def check_occupancy(params, x):
    """Проверяет состояние и возвращает его как массив целых."""
    x = np.asarray(x)
    if x.shape != (params.n,):
        raise InvalidOccupancy(f"Ожидалось состояние на {params.n} вершинах", shape=x.shape)
    if not np.all(x == np.round(x)) or np.any(x < 0):
        raise InvalidOccupancy("Числа частиц должны быть неотрицательными целыми", x=x)
    x = x.astype(np.int64)
    if params.cap is not None and np.any(x > params.cap):
        raise InvalidOccupancy(f"Превышено ограничение N={params.cap}", x=x)
    return x
