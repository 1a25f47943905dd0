from config.exceptions import ToolkitError


class InvalidRule(ToolkitError):
    """Правило интенсивностей β_m нарушает свои ограничения."""


class DuplicatePoint(ToolkitError):
    """В конфигурации есть совпадающие точки."""


class PointAlreadyPresent(ToolkitError):
    """Добавляемая точка уже входит в конфигурацию."""
