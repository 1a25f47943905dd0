from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParams


@dataclass(frozen=True)
class CsaParams:
    """
    Параметры непрерывной модели CSA.

    Поля:
        R: радиус взаимодействия.
        beta: (β_1, ..., β_N), все строго положительны. β_0 = 1 не хранится
            (нормировка для идентифицируемости), β_k = 0 при k > N.
    """

    R: float
    beta: tuple = ()

    def __post_init__(self):
        beta = tuple(float(b) for b in self.beta)
        if not self.R > 0:
            raise InvalidParams("Радиус взаимодействия должен быть положительным", R=self.R)
        if any(not b > 0 or not np.isfinite(b) for b in beta):
            raise InvalidParams("Все β_k при 1 <= k <= N должны быть положительны", beta=beta)
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "beta", beta)

    @property
    def N(self):
        return len(self.beta)

    @property
    def rates(self):
        """Таблица (β_0 = 1, β_1, ..., β_N)."""
        return np.array((1.0,) + self.beta)

    def rate(self, k):
        if k == 0:
            return 1.0
        return self.beta[k - 1] if k <= self.N else 0.0

    @property
    def max_rate(self):
        return float(self.rates.max())

    @classmethod
    def from_table(cls, R, table):
        """
        Строит параметры по таблице (β_0, β_1, ...): таблица делится на β_0,
        нули в хвосте отбрасываются.
        """
        table = [float(b) for b in table]
        while table and table[-1] == 0:
            table.pop()
        if not table or table[0] <= 0:
            raise InvalidParams("Нужен β_0 > 0", table=table)
        return cls(R=R, beta=tuple(b / table[0] for b in table[1:]))
