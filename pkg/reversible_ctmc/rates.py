import numpy as np

from .params import CtmcParams, check_occupancy


def log_rates_from_field(params, x, field):
    """
    Логарифмы интенсивностей рождения и гибели при известном поле field = Ax.
    Отсутствующим переходам соответствует −inf.
    """
    x = np.asarray(x)
    if params.variant == CtmcParams.X_RATES:
        births = params.alpha * x + params.beta * field
        deaths = np.where(x > 0, 0.0, -np.inf)
    else:
        births = params.alpha * x.astype(float)
        deaths = np.where(x > 0, -params.beta * field, -np.inf)
    if params.cap is not None:
        births = np.where(x >= params.cap, -np.inf, births)
    return births, deaths


def log_rates(params, x):
    """Логарифмы интенсивностей (рождения, гибели) по всем вершинам."""
    x = check_occupancy(params, x)
    return log_rates_from_field(params, x, params.graph.adjacency @ x)


def rates(params, x):
    """
    Все переходы из состояния x с ненулевой интенсивностью.

    Возвращает:
        list[(tuple, float)]: сначала рождения по вершинам, затем гибели.
    """
    x = check_occupancy(params, x)
    births, deaths = log_rates(params, x)
    transitions = []
    for sign, logs in ((1, births), (-1, deaths)):
        for v in np.flatnonzero(np.isfinite(logs)):
            target = x.copy()
            target[v] += sign
            transitions.append((tuple(int(c) for c in target), float(np.exp(logs[v]))))
    return transitions


def log_rate(params, x, y):
    """log r(x, y) для соседних состояний; −inf, если переход невозможен."""
    x = check_occupancy(params, x)
    y = np.asarray(y, dtype=np.int64)
    diff = y - x
    changed = np.flatnonzero(diff)
    if changed.size != 1 or abs(diff[changed[0]]) != 1:
        return -np.inf
    v = changed[0]
    births, deaths = log_rates(params, x)
    return float(births[v] if diff[v] == 1 else deaths[v])
