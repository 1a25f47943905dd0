from config.exceptions import ToolkitError


class InvalidParams(ToolkitError):
    """Параметры модели нарушают ограничения R > 0, β_k > 0."""


class JammedBeforeTarget(ToolkitError):
    """
    Серия отказов превысила порог раньше, чем набрано нужное число точек:
    допустимых положений практически не осталось.
    """


class NonIdentifiable(ToolkitError):
    """t_j = 0 для некоторого 1 <= j <= N̂: данных недостаточно для оценки β_j."""

    def __init__(self, j, **context):
        super().__init__(f"Параметр β_{j} неидентифицируем: t_{j} = 0", j=j, **context)
        self.j = j


class DivergentEstimate(ToolkitError):
    """t_1 = ℓ − 1 при N̂ = 1: формально β̂ = ∞."""


class NonFiniteLikelihood(ToolkitError):
    """Знаменатель правдоподобия неположителен - статистики повреждены."""


class ConvergenceFailure(ToolkitError):
    """Невязка уравнений правдоподобия не достигла требуемой точности."""
