from config.exceptions import ToolkitError


class InvalidGraph(ToolkitError):
    """Петли, вершины вне диапазона или нераспознанное описание графа."""


class BadSize(ToolkitError):
    """Размер меньше минимального для семейства графов."""


class EmptyGraph(ToolkitError):
    """У графа нет рёбер."""


class TooLarge(ToolkitError):
    """Число вершин превышает предел точных комбинаторных алгоритмов."""


class PowerIterationFailure(ToolkitError):
    """Степенной метод не сошёлся за отведённое число итераций."""
