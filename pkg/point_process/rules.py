import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidRule

logger = logging.getLogger(__name__)

GROWTH_CHECK_RANGE = 1000


class RateRule:
    """
    Правило интенсивностей m -> β_m >= 0, m = 0, 1, 2, ...

    Наследники реализуют log_beta для целочисленного массива m; нулевым
    интенсивностям соответствует −inf.
    """

    CONSTANT = "constant"
    TABLE = "table"
    STRAUSS = "strauss"
    CUSTOM = "custom"

    KINDS = [
        (CONSTANT, "Постоянная интенсивность (пуассоновский процесс)"),
        (TABLE, "Конечная таблица β_0..β_N"),
        (STRAUSS, "Процесс Штрауса"),
        (CUSTOM, "Пользовательское правило"),
    ]

    kind = None

    def log_beta(self, m):
        raise NotImplementedError

    def beta(self, m):
        with np.errstate(over="ignore"):
            return np.exp(self.log_beta(m))

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantBeta(RateRule):
    value: float

    kind = RateRule.CONSTANT

    def __post_init__(self):
        if not (self.value > 0 and np.isfinite(self.value)):
            raise InvalidRule("Требуется β > 0", beta=self.value)
        object.__setattr__(self, "value", float(self.value))

    def log_beta(self, m):
        return np.full(np.shape(m), np.log(self.value))

    def to_dict(self):
        return {"kind": self.kind, "beta": self.value}


@dataclass(frozen=True)
class FiniteTable(RateRule):
    """
    Таблица (β_0, ..., β_N), β_0 > 0, β_m >= 0; β_m = 0 при m > N.
    Таблица из одного β_0 задаёт процесс с жёсткими ядрами.
    """

    table: tuple

    kind = RateRule.TABLE

    def __post_init__(self):
        table = tuple(float(b) for b in self.table)
        if not table or not table[0] > 0:
            raise InvalidRule("Требуется β_0 > 0", table=table)
        if any(not (b >= 0 and np.isfinite(b)) for b in table):
            raise InvalidRule("Все β_m должны быть неотрицательны и конечны", table=table)
        object.__setattr__(self, "table", table)

    @property
    def N(self):
        return len(self.table) - 1

    def log_beta(self, m):
        m = np.asarray(m, dtype=np.int64)
        with np.errstate(divide="ignore"):
            logs = np.log(np.array(self.table + (0.0,)))
        return logs[np.minimum(m, self.N + 1)]

    def to_dict(self):
        return {"kind": self.kind, "table": list(self.table)}


@dataclass(frozen=True)
class Strauss(RateRule):
    """
    Процесс Штрауса: β_i = a·γ^{i/2}, a > 0, 0 < γ < 1. Плотность
    пропорциональна a^{|x|}·γ^{s(x)}, s(x) - число пар соседей.
    """

    a: float
    gamma: float

    kind = RateRule.STRAUSS

    def __post_init__(self):
        if not self.a > 0:
            raise InvalidRule("Требуется a > 0", a=self.a)
        if not 0 < self.gamma < 1:
            raise InvalidRule("Требуется 0 < γ < 1", gamma=self.gamma)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "gamma", float(self.gamma))

    def log_beta(self, m):
        return np.log(self.a) + np.asarray(m, dtype=float) / 2 * np.log(self.gamma)

    def to_dict(self):
        return {"kind": self.kind, "a": self.a, "gamma": self.gamma}


@dataclass(frozen=True)
class CustomRule(RateRule):
    """
    Произвольное правило function(m) -> β_m. Допустимо только вместе с
    сертификатом (C, α), α < 1, гарантирующим β_m <= C·m^α.
    """

    function: object
    certificate: tuple = None
    name: str = "custom"

    kind = RateRule.CUSTOM

    def log_beta(self, m):
        values = np.vectorize(self.function, otypes=[float])(np.asarray(m))
        with np.errstate(divide="ignore"):
            return np.log(values)

    def to_dict(self):
        return {"kind": self.kind, "name": self.name, "certificate": self.certificate}


@dataclass(frozen=True)
class PpParams:
    """
    Параметры точечного процесса CSA: радиус R и правило β_m.
    """

    R: float
    rule: RateRule

    def __post_init__(self):
        if not self.R > 0:
            raise InvalidRule("Радиус взаимодействия должен быть положительным", R=self.R)
        if not isinstance(self.rule, RateRule):
            raise InvalidRule("Неизвестное правило интенсивностей", rule=self.rule)
        object.__setattr__(self, "R", float(self.R))

    def beta_m(self, m):
        return float(self.rule.beta(np.asarray(m)))

    def to_dict(self):
        return {"R": self.R, "rule": self.rule.to_dict()}


@dataclass(frozen=True)
class RuleVerdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def validate_params(params):
    """
    Проверка корректной определённости процесса: плотность интегрируема,
    если β_m <= C·m^α при α < 1. Таблица, Штраус и постоянная
    интенсивность проходят всегда; пользовательское правило отклоняется
    без сертификата (C, α) или если сертификат нарушается при
    m <= GROWTH_CHECK_RANGE.
    """
    rule = params.rule
    if not isinstance(rule, CustomRule):
        return RuleVerdict(True)
    if rule.certificate is None:
        return RuleVerdict(False, "нет сертификата подлинейного роста (C, α)")
    C, alpha = rule.certificate
    if not alpha < 1:
        return RuleVerdict(False, f"показатель роста α = {alpha} не меньше 1")
    m = np.arange(GROWTH_CHECK_RANGE + 1)
    values = rule.beta(m)
    if not values[0] > 0 or np.any(values < 0):
        return RuleVerdict(False, "требуется β_0 > 0 и β_m >= 0")
    bound = C * np.maximum(m, 1).astype(float) ** alpha
    violated = np.nonzero(values > bound)[0]
    if violated.size:
        return RuleVerdict(False, f"β_m > C·m^α при m = {int(violated[0])}")
    return RuleVerdict(True)


def parse_rule(text):
    """
    Разбор правила из строки: "constant:2.0", "table:1,1000,10000",
    "strauss:2.0,0.5".
    """
    kind, _, arguments = text.partition(":")
    try:
        values = [float(item) for item in arguments.split(",") if item.strip()]
    except ValueError as error:
        raise InvalidRule(f"Некорректные числа в правиле {text!r}") from error
    if kind == RateRule.CONSTANT and len(values) == 1:
        return ConstantBeta(values[0])
    if kind == RateRule.TABLE and values:
        return FiniteTable(tuple(values))
    if kind == RateRule.STRAUSS and len(values) == 2:
        return Strauss(*values)
    raise InvalidRule(f"Неизвестное правило {text!r}")
