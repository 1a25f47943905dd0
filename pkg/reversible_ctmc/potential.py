import numpy as np

from .params import check_occupancy
from .rates import log_rate


def _edge_sum(graph, x):
    """Σ по неупорядоченным рёбрам {u, w} произведений x_u x_w."""
    x = np.asarray(x, dtype=float)
    return float(x @ graph.adjacency @ x) / 2


def potential_S(params, x):
    return float(check_occupancy(params, x).sum())


def potential_Q(params, x):
    """Q(x) = −(α/2)Σ x_v² − βΣ_{u∼w} x_u x_w."""
    x = check_occupancy(params, x)
    return -params.alpha / 2 * float(x @ x) - params.beta * _edge_sum(params.graph, x)


def potential_W(params, x):
    """
    W(x) = (α/2)Σ x_v(x_v − 1) + βΣ_{u∼w} x_u x_w, каждое ребро один раз.
    e^{W} - обратимая мера для обоих вариантов интенсивностей.
    """
    x = check_occupancy(params, x)
    return params.alpha / 2 * float(x @ (x - 1)) + params.beta * _edge_sum(params.graph, x)


def check_detailed_balance(params, x, v, log_rate_fn=log_rate):
    """
    Невязка уравнения детального баланса для перехода x → x + e_v в
    логарифмической шкале: |W(x) + log r(x, y) − W(y) − log r(y, x)|.

    Параметры:
    - log_rate_fn: функция log r(params, x, y); подменяется в тестах,
      чтобы проверить, что нарушение баланса обнаруживается.
    """
    x = check_occupancy(params, x)
    if params.cap is not None and x[v] >= params.cap:
        raise ValueError(f"Рождение в вершине {v} запрещено ограничением N")
    y = x.copy()
    y[v] += 1
    forward = potential_W(params, x) + log_rate_fn(params, x, y)
    backward = potential_W(params, y) + log_rate_fn(params, y, x)
    return abs(forward - backward)
