import logging
from functools import cached_property
from pathlib import Path

import networkx as nx
import numpy as np

from .exceptions import BadSize, InvalidGraph

logger = logging.getLogger(__name__)

CYCLE = "cycle"
STAR = "star"
PATH = "path"
COMPLETE = "complete"

FAMILY_MINIMUM = {CYCLE: 3, STAR: 1, PATH: 1, COMPLETE: 1}


class Graph:
    """
    Конечный простой неориентированный граф с вершинами 0..n−1.

    Атрибуты:
        n: число вершин.
        edges: упорядоченный кортеж рёбер (u, v), u < v.
        family: пара (вид, размер), если граф построен make_family, иначе None.

    После создания граф не изменяется; матрица смежности, степени и
    связность вычисляются один раз.
    """

    def __init__(self, n, edges=(), family=None):
        n = int(n)
        if n < 1:
            raise InvalidGraph("Граф должен содержать хотя бы одну вершину", n=n)
        normalized = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidGraph(f"Петля в вершине {u}", vertex=u)
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"Ребро ({u}, {v}) вне диапазона вершин 0..{n - 1}")
            normalized.add((min(u, v), max(u, v)))

        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(normalized)
        self._graph = nx.freeze(graph)
        self.n = n
        self.edges = tuple(sorted(normalized))
        self.family = family

    def __repr__(self):
        return f"Graph({self.label})"

    def __eq__(self, other):
        return isinstance(other, Graph) and (self.n, self.edges) == (other.n, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges))

    @classmethod
    def from_networkx(cls, graph, family=None):
        graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return cls(graph.number_of_nodes(), graph.edges(), family=family)

    @property
    def nx_graph(self):
        """Замороженное представление networkx."""
        return self._graph

    @property
    def label(self):
        if self.family is not None:
            return f"{self.family[0]}:{self.family[1]}"
        return f"edges(n={self.n}, m={len(self.edges)})"

    @property
    def number_of_edges(self):
        return len(self.edges)

    @cached_property
    def adjacency(self):
        matrix = nx.to_numpy_array(self._graph, nodelist=list(range(self.n)), dtype=float)
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def neighbour_lists(self):
        return tuple(tuple(sorted(self._graph.adj[v])) for v in range(self.n))

    @cached_property
    def degrees(self):
        degrees = np.array([self._graph.degree[v] for v in range(self.n)], dtype=int)
        degrees.setflags(write=False)
        return degrees

    @property
    def min_degree(self):
        return int(self.degrees.min())

    @property
    def max_degree(self):
        return int(self.degrees.max())

    @cached_property
    def is_connected(self):
        return nx.is_connected(self._graph)

    def are_adjacent(self, u, v):
        return self._graph.has_edge(u, v)

    def to_dict(self):
        return {
            "label": self.label,
            "n": self.n,
            "edges": [list(edge) for edge in self.edges],
        }


def make_family(kind, size):
    """
    Графы из примеров: цикл C_n, звезда K_{1,m} (size = число листьев m),
    путь из size вершин, полный граф K_n.
    """
    if kind not in FAMILY_MINIMUM:
        raise InvalidGraph(f"Неизвестное семейство графов: {kind}", kind=kind)
    size = int(size)
    if size < FAMILY_MINIMUM[kind]:
        raise BadSize(
            f"Для семейства {kind} нужен размер не меньше {FAMILY_MINIMUM[kind]}",
            kind=kind,
            size=size,
        )
    builders = {
        CYCLE: nx.cycle_graph,
        STAR: nx.star_graph,
        PATH: nx.path_graph,
        COMPLETE: nx.complete_graph,
    }
    return Graph.from_networkx(builders[kind](size), family=(kind, size))


def read_edge_list(path, n=None):
    """
    Читает граф из файла рёбер: одна пара "u v" (или "u,v") на строку,
    всё после '#' - комментарий. Вершины нумеруются с нуля; если n не задано,
    оно равно наибольшему номеру плюс один.
    """
    lines = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].replace(",", " ").strip()
        if line:
            lines.append(line)
    if not lines:
        raise InvalidGraph(f"Файл рёбер {path} не содержит рёбер")
    try:
        pairs = np.loadtxt(lines, dtype=int, ndmin=2)
    except ValueError as error:
        raise InvalidGraph(f"Некорректный файл рёбер {path}: {error}") from error
    if pairs.shape[1] != 2:
        raise InvalidGraph(f"Ожидались две колонки в {path}, получено {pairs.shape[1]}")
    if n is None:
        n = int(pairs.max()) + 1
    logger.debug(f"Прочитан граф из {path}: {n} вершин, {pairs.shape[0]} строк")
    return Graph(n, pairs.tolist())


def parse_graph_spec(text):
    """
    Разбирает описание графа: "cycle:7", "star:4", "path:5", "complete:3"
    или "edges:<путь к файлу рёбер>".
    """
    kind, separator, value = str(text).partition(":")
    if not separator or not value:
        raise InvalidGraph(f"Ожидалось описание вида kind:size, получено {text!r}")
    kind = kind.strip().lower()
    if kind == "edges":
        return read_edge_list(value)
    try:
        size = int(value)
    except ValueError as error:
        raise InvalidGraph(f"Размер графа должен быть целым: {text!r}") from error
    return make_family(kind, size)
