import logging

import pandas as pd

from config.parallel import ordered_map
from config.rng import make_rng
from graph_core.graph import parse_graph_spec
from reversible_ctmc.classification import classify
from reversible_ctmc.params import CtmcParams
from reversible_ctmc.simulation import simulate_ctmc

logger = logging.getLogger(__name__)

CLASSIFY_COLUMNS = ["alpha", "beta", "verdict", "case", "lambda1", "kappa", "critical_beta"]
SIMULATION_COLUMNS = ["outcome", "t_reached", "events", "origin_visits"]


def sweep_columns(simulate):
    return CLASSIFY_COLUMNS + (SIMULATION_COLUMNS if simulate else [])


def _sweep_cell(task):
    graph, alpha, beta, variant, simulation, seed, cell = task
    result = classify(alpha, beta, graph, variant=variant)
    row = {name: result.to_dict()[name] for name in CLASSIFY_COLUMNS}
    if simulation is not None:
        t_max, event_cap = simulation
        params = CtmcParams(alpha, beta, graph, variant=variant)
        trajectory = simulate_ctmc(params, None, t_max, event_cap, make_rng(seed, cell), thin=event_cap)
        summary = trajectory.summary()
        row.update({name: summary[name] for name in SIMULATION_COLUMNS})
    return row


def run_sweep(config, workers=1):
    """
    Классификация на сетке (α, β): строка на ячейку в порядке α, затем β.
    Ячейка с номером i использует поток make_rng(seed, i), поэтому таблица
    не зависит от числа процессов.
    """
    graph = parse_graph_spec(config["graph"])
    simulation = (config["t_max"], config["event_cap"]) if config["simulate"] else None
    tasks = [
        (graph, alpha, beta, config["variant"], simulation, config["seed"], cell)
        for cell, (alpha, beta) in enumerate(
            (alpha, beta) for alpha in config["alphas"] for beta in config["betas"]
        )
    ]
    logger.info(f"Сетка на {graph.label}: {len(tasks)} ячеек, процессов {workers}")
    rows = ordered_map(_sweep_cell, tasks, workers=workers)
    return pd.DataFrame(rows, columns=sweep_columns(config["simulate"]))
