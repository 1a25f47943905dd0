import logging
from itertools import combinations

import networkx as nx
from django.conf import settings

from .exceptions import TooLarge

logger = logging.getLogger(__name__)


def _check_cap(graph, cap):
    cap = settings.GRAPH_EXACT_CAP if cap is None else cap
    if graph.n > cap:
        raise TooLarge(
            f"Точный перебор ограничен {cap} вершинами, в графе {graph.n}",
            n=graph.n,
            cap=cap,
        )


def maximum_independent_set(graph, cap=None):
    """
    Наибольшее независимое множество как наибольшая клика дополнения
    (точный метод ветвей и границ networkx.max_weight_clique).
    """
    _check_cap(graph, cap)
    complement = nx.complement(graph.nx_graph)
    clique, _ = nx.max_weight_clique(complement, weight=None)
    return frozenset(clique)


def independence_number(graph, cap=None):
    """κ(G) - мощность наибольшего множества попарно несмежных вершин."""
    kappa = len(maximum_independent_set(graph, cap=cap))
    logger.debug(f"κ({graph.label}) = {kappa}")
    return kappa


def maximal_cliques(graph, cap=None):
    """
    Все максимальные клики (алгоритм Брона–Кербоша с выбором опорной вершины,
    networkx.find_cliques). Порядок: по возрастанию отсортированных вершин.
    """
    _check_cap(graph, cap)
    cliques = [frozenset(clique) for clique in nx.find_cliques(graph.nx_graph)]
    return sorted(cliques, key=lambda clique: sorted(clique))


def is_clique(graph, vertices):
    return all(graph.are_adjacent(u, v) for u, v in combinations(vertices, 2))


def is_maximal_clique(graph, vertices):
    """
    Клика, которую нельзя расширить ни одной вершиной, смежной со всеми её вершинами.
    """
    vertices = set(vertices)
    if not vertices or not is_clique(graph, vertices):
        return False
    return not any(
        all(graph.are_adjacent(w, v) for v in vertices)
        for w in range(graph.n)
        if w not in vertices
    )
