from config.exceptions import ToolkitError


class InvalidDomain(ToolkitError):
    """Границы области не образуют невырожденный параллелепипед."""


class DimensionMismatch(ToolkitError):
    """Размерности точек не совпадают."""


class PointOutsideDomain(ToolkitError):
    """Точка не принадлежит области."""
