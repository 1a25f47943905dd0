import logging
import math
from dataclasses import dataclass, field

import pandas as pd
from django.conf import settings

from config.parallel import ordered_map
from config.rng import make_rng
from graph_core.combinatorics import is_maximal_clique

from .dynamics import simulate_growth
from .exceptions import WindowTooLarge

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalisationReport:
    """
    Итог проверки локализации.

    Поля:
        final_set: вершины, получавшие частицы в последних window шагах.
        is_maximal_clique: является ли final_set максимальной кликой.
        ratio_estimates: (v, u) -> log(X_v/X_u) в конце траектории для v ≠ u из final_set.
        window: длина окна.
    """

    final_set: frozenset
    is_maximal_clique: bool
    window: int
    ratio_estimates: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "final_set": sorted(self.final_set),
            "is_maximal_clique": self.is_maximal_clique,
            "window": self.window,
            "ratio_estimates": {
                f"{v},{u}": value for (v, u), value in sorted(self.ratio_estimates.items())
            },
        }


def default_window(n_steps):
    return max(1, math.ceil(settings.LOCALISATION_WINDOW_FRACTION * n_steps))


def detect_localisation(trajectory, graph, window=None):
    """
    Эвристика локализации по последнему окну приращений.

    Исключения:
        WindowTooLarge: окно не короче траектории.
    """
    n_steps = trajectory.n_steps
    window = default_window(n_steps) if window is None else int(window)
    if window < 1:
        raise ValueError("Окно должно быть положительным")
    if window >= n_steps:
        raise WindowTooLarge(
            f"Окно {window} не меньше длины траектории {n_steps}",
            window=window,
            n_steps=n_steps,
        )

    final_set = frozenset(int(v) for v in trajectory.increments[-window:])
    counts = trajectory.counts[-1]
    ratios = {
        (v, u): math.log(counts[v] / counts[u])
        for v in sorted(final_set)
        for u in sorted(final_set)
        if v != u
    }
    report = LocalisationReport(
        final_set=final_set,
        is_maximal_clique=is_maximal_clique(graph, final_set),
        window=window,
        ratio_estimates=ratios,
    )
    logger.debug(f"Локализация на {graph.label}: {sorted(final_set)}")
    return report


def _localisation_task(task):
    graph, alpha, beta, x0, n_steps, seed, index, window = task
    trajectory = simulate_growth(graph, alpha, beta, x0, n_steps, make_rng(seed, index), thin=n_steps or 1)
    report = detect_localisation(trajectory, graph, window=window)
    return {
        "seed_index": index,
        "final_set": " ".join(str(v) for v in sorted(report.final_set)),
        "size": len(report.final_set),
        "is_maximal_clique": report.is_maximal_clique,
    }


def ensemble_localisation(graph, alpha, beta, n_steps, seed, n_seeds, x0=None, window=None, workers=1):
    """
    Ансамбль траекторий с независимыми потоками (seed, i): для каждой
    траектории - конечное множество и признак максимальной клики.

    Возвращает:
        (runs, rate): таблица по траекториям и доля траекторий, у которых
        конечное множество - максимальная клика.
    """
    tasks = [
        (graph, alpha, beta, x0, n_steps, seed, index, window)
        for index in range(n_seeds)
    ]
    runs = pd.DataFrame(
        ordered_map(_localisation_task, tasks, workers=workers),
        columns=["seed_index", "final_set", "size", "is_maximal_clique"],
    )
    rate = float(runs["is_maximal_clique"].mean()) if len(runs) else float("nan")
    logger.info(f"Ансамбль на {graph.label}: доля локализаций на клике {rate:.3f}")
    return runs, rate
