"""
Обработчики команд. Каждый принимает разрешённую конфигурацию, корневой
генератор и число процессов и возвращает (артефакты, отчёт): артефакты -
словарь {имя файла: DataFrame или dict}, отчёт - краткий dict для stdout.
"""

import numpy as np
import pandas as pd

from csa_sequential.likelihood import fit_mle
from csa_sequential.params import CsaParams
from csa_sequential.sampler import sample_csa
from csa_sequential.statistics import prior_neighbour_counts
from graph_core.graph import parse_graph_spec
from growth_process.dynamics import simulate_growth
from growth_process.localisation import default_window, detect_localisation
from growth_process.min_rule import min_rule_tail, simulate_min_rule
from point_process.rules import PpParams, parse_rule, validate_params
from point_process.sampler import sample_bd_mcmc
from reversible_ctmc.classification import classify
from reversible_ctmc.params import CtmcParams
from reversible_ctmc.simulation import simulate_ctmc
from reversible_ctmc.stationary import stationary_finite
from spatial_core.geometry import Domain, PointSeq
from spatial_core.io import points_frame, read_points_csv

from .models import ExperimentRun
from .sweep import run_sweep


def _domain(upper, dimension):
    if upper is None:
        return Domain.unit_cube(dimension)
    return Domain(np.zeros(len(upper)), np.asarray(upper, dtype=float))


def _ctmc_params(config, cap=None):
    return CtmcParams(
        config["alpha"],
        config["beta"],
        parse_graph_spec(config["graph"]),
        variant=config["variant"],
        cap=cap,
    )


def simulate_csa_handler(config, rng, workers):
    params = CsaParams.from_table(config["radius"], config["beta"])
    domain = _domain(config.get("domain"), config["dimension"])
    seq = sample_csa(params, domain, config["points"], rng, streak=config.get("streak"))
    counts = prior_neighbour_counts(seq, params.R)
    summary = {
        "n_points": len(seq),
        "max_prior_neighbours": int(counts.max()),
        "N": params.N,
    }
    return {"points.csv": points_frame(seq.points), "summary.json": summary}, summary


def fit_csa_handler(config, rng, workers):
    points = read_points_csv(config["input"])
    domain = _domain(config.get("domain"), points.shape[1])
    seq = PointSeq(points, domain)
    fit = fit_mle(seq, domain, config["radius"], config["mc_samples"], rng, tol=config["tol"])
    payload = {**fit.to_dict(), "seed": config["seed"], "method": fit.method}
    return {"fit.json": payload}, {"N_hat": fit.N_hat, "beta_hat": fit.beta_hat.tolist()}


def simulate_growth_handler(config, rng, workers):
    graph = parse_graph_spec(config["graph"])
    trajectory = simulate_growth(
        graph, config["alpha"], config["beta"], None, config["steps"], rng, thin=config["thin"]
    )
    report = detect_localisation(trajectory, graph, window=config.get("window"))
    return (
        {"trajectory.csv": trajectory.to_frame(), "localisation.json": report.to_dict()},
        report.to_dict(),
    )


def simulate_min_rule_handler(config, rng, workers):
    trajectory = simulate_min_rule(config["m"], None, config["steps"], rng, thin=config["thin"])
    window = config.get("window") or default_window(config["steps"])
    tail = min_rule_tail(trajectory, config["m"], window)
    tail["window"] = window
    return {"trajectory.csv": trajectory.to_frame(), "tail.json": tail}, tail


def classify_ctmc_handler(config, rng, workers):
    result = classify(
        config["alpha"], config["beta"], parse_graph_spec(config["graph"]), variant=config["variant"]
    )
    return {"classification.json": result.to_dict()}, result.to_dict()


def simulate_ctmc_handler(config, rng, workers):
    params = _ctmc_params(config, cap=config.get("cap"))
    trajectory = simulate_ctmc(
        params, None, config["t_max"], config["event_cap"], rng, thin=config["thin"]
    )
    summary = trajectory.summary()
    return {"trajectory.csv": trajectory.to_frame(), "summary.json": summary}, summary


def stationary_finite_handler(config, rng, workers):
    law = stationary_finite(_ctmc_params(config, cap=config["cap"]))
    summary = {
        "n_states": int(law.states.shape[0]),
        "log_Z": law.log_Z,
        "total_variation": law.total_variation,
    }
    return {"stationary.csv": law.to_frame(), "summary.json": summary}, summary


def sample_pp_handler(config, rng, workers):
    rule = parse_rule(config["rule"])
    params = PpParams(config["radius"], rule)
    verdict = validate_params(params)
    domain = _domain(config.get("domain"), 2)
    result = sample_bd_mcmc(params, domain, config["moves"], rng, trace_every=config["trace_every"])
    sidecar = {
        "rule": rule.kind,
        "params": params.to_dict(),
        "well_defined": verdict.ok,
        "n_moves": result.n_moves,
        "seed": config["seed"],
        **result.to_dict(),
    }
    trace = pd.DataFrame(
        {
            "move": np.arange(1, result.trace.size + 1) * config["trace_every"],
            "n_points": result.trace,
        }
    )
    artifacts = {
        "points.csv": points_frame(result.config.points),
        "sample.json": sidecar,
        "trace.csv": trace,
    }
    return artifacts, result.to_dict()


def sweep_handler(config, rng, workers):
    frame = run_sweep(config, workers=workers)
    report = {"cells": len(frame)}
    if len(frame):
        report["verdicts"] = frame["verdict"].value_counts().sort_index().to_dict()
    return {"sweep.csv": frame}, report


HANDLERS = {
    ExperimentRun.SIMULATE_CSA: simulate_csa_handler,
    ExperimentRun.FIT_CSA: fit_csa_handler,
    ExperimentRun.SIMULATE_GROWTH: simulate_growth_handler,
    ExperimentRun.SIMULATE_MIN_RULE: simulate_min_rule_handler,
    ExperimentRun.CLASSIFY_CTMC: classify_ctmc_handler,
    ExperimentRun.SIMULATE_CTMC: simulate_ctmc_handler,
    ExperimentRun.STATIONARY_FINITE: stationary_finite_handler,
    ExperimentRun.SAMPLE_PP: sample_pp_handler,
    ExperimentRun.SWEEP: sweep_handler,
}
