from config.exceptions import ToolkitError


class InvalidCtmcParams(ToolkitError):
    """Некорректные α, β, вариант интенсивностей или ограничение N."""


class InvalidOccupancy(ToolkitError):
    """Состояние вне Z_+^V или превышает ограничение N."""


class Disconnected(ToolkitError):
    """Классификация определена только для связных графов."""


class StateSpaceTooLarge(ToolkitError):
    """(N+1)^n превышает предел точного перебора состояний."""


class NotNormalized(ToolkitError):
    """Сумма вероятностей отличается от единицы больше чем на 1e-9."""
