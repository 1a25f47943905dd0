import logging
import math

import networkx as nx
import numpy as np

from .exceptions import EmptyGraph, PowerIterationFailure, TooLarge
from .graph import COMPLETE, CYCLE, PATH, STAR

logger = logging.getLogger(__name__)

SPECTRUM_LIMIT = 12


def closed_form_lambda1(graph):
    """
    Точное λ_1 для графов из семейств: цикл - 2, звезда K_{1,m} - √m,
    путь из n вершин - 2cos(π/(n+1)), полный граф K_n - n−1.
    Для прочих графов возвращает None.
    """
    if graph.family is None or graph.number_of_edges == 0:
        return None
    kind, size = graph.family
    if kind == CYCLE:
        return 2.0
    if kind == STAR:
        return math.sqrt(size)
    if kind == PATH:
        return 2 * math.cos(math.pi / (size + 1))
    if kind == COMPLETE:
        return float(size - 1)
    return None


def _needs_shift(graph):
    # у двудольной компоненты −λ_1 тоже собственное значение
    return any(
        nx.is_bipartite(graph.nx_graph.subgraph(component))
        for component in nx.connected_components(graph.nx_graph)
    )


def power_iteration(matrix, tol=1e-10, max_iter=100_000):
    """
    Старшее собственное значение неотрицательной симметричной матрицы.
    Старт из вектора единиц, остановка по невязке ‖Mx − λx‖ <= tol·|λ|.
    """
    n = matrix.shape[0]
    x = np.full(n, 1.0 / math.sqrt(n))
    value = 0.0
    for iteration in range(max_iter):
        y = matrix @ x
        value = float(x @ y)
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0, iteration
        x = y / norm
        residual = np.linalg.norm(matrix @ x - value * x)
        if residual <= tol * max(abs(value), 1.0):
            return float(x @ (matrix @ x)), iteration + 1
    raise PowerIterationFailure(
        f"Степенной метод не сошёлся за {max_iter} итераций", last_value=value
    )


def characteristic_polynomial(graph):
    """
    Коэффициенты характеристического многочлена матрицы смежности
    (от старшей степени), вычисленные точно в целых числах методом
    Фаддеева–Леверье.
    """
    n = graph.n
    adjacency = np.asarray(graph.adjacency, dtype=int).astype(object)
    identity = np.eye(n, dtype=int).astype(object)
    coefficients = [1]
    current = np.zeros((n, n), dtype=int).astype(object)
    for k in range(1, n + 1):
        current = adjacency @ current + coefficients[-1] * identity
        trace = int(np.trace(adjacency @ current))
        coefficients.append(-trace // k)
    return coefficients


def characteristic_spectrum(graph):
    """
    Спектр λ_1 >= λ_2 >= ... матрицы смежности по корням характеристического
    многочлена; только для n <= 12, используется для перекрёстной проверки.
    """
    if graph.n > SPECTRUM_LIMIT:
        raise TooLarge(
            f"Спектр через многочлен считается только при n <= {SPECTRUM_LIMIT}",
            n=graph.n,
        )
    if graph.n == 1:
        return np.zeros(1)
    roots = np.roots(np.array(characteristic_polynomial(graph), dtype=float))
    return np.sort(roots.real)[::-1]


def lambda1(graph, tol=1e-10, use_closed_form=False):
    """
    Перронов корень λ_1(G) матрицы смежности.

    Степенной метод со стартом из вектора единиц; если в графе есть
    двудольная компонента, итерации идут для A + Δ·I (Δ - максимальная
    степень) и сдвиг затем вычитается. При n <= 12 результат сверяется с
    корнями характеристического многочлена.

    Параметры:
    - use_closed_form: для графов из семейств вернуть точное значение.

    Исключения:
        EmptyGraph: у графа нет рёбер.
    """
    if graph.number_of_edges == 0:
        raise EmptyGraph(f"У графа {graph.label} нет рёбер")
    if use_closed_form:
        exact = closed_form_lambda1(graph)
        if exact is not None:
            return exact

    matrix = np.array(graph.adjacency)
    shift = float(graph.max_degree) if _needs_shift(graph) else 0.0
    if shift:
        matrix += shift * np.eye(graph.n)
    value, iterations = power_iteration(matrix, tol=tol)
    value -= shift
    logger.debug(f"λ_1({graph.label}) = {value:.12g} за {iterations} итераций")

    if graph.n <= SPECTRUM_LIMIT:
        reference = float(characteristic_spectrum(graph)[0])
        if abs(reference - value) > 1e-6 * max(1.0, value):
            logger.warning(
                f"λ_1({graph.label}): степенной метод {value:.12g}, многочлен {reference:.12g}"
            )
    return value
