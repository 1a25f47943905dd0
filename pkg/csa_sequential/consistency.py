import logging
import math

import numpy as np
import pandas as pd

from config.exceptions import ToolkitError
from config.parallel import ordered_map
from config.rng import make_rng
from spatial_core.geometry import Domain

from .jamming import estimate_jamming
from .likelihood import fit_mle
from .sampler import sample_csa

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 2
TOO_FEW_POINTS = "TooFewPoints"


def run_columns(N):
    return (
        ["m", "seed_index", "ell", "error", "N_hat", "max_residual"]
        + [f"beta_{j}" for j in range(1, N + 1)]
    )


def _fit_task(task):
    params, domain, ell, seed, stream, mc_n, tol, streak = task
    rng = make_rng(seed, *stream)
    row = {"m": stream[0], "seed_index": stream[1], "ell": ell}
    if ell < MIN_FIT_POINTS:
        row.update(error=TOO_FEW_POINTS)
        return row
    try:
        seq = sample_csa(params, domain, ell, rng, streak=streak)
        fit = fit_mle(seq, domain, params.R, mc_n, rng, tol=tol)
    except ToolkitError as error:
        row.update(error=type(error).__name__)
        return row
    row.update(
        error="",
        N_hat=fit.N_hat,
        max_residual=float(np.max(np.abs(fit.residuals))) if fit.residuals.size else 0.0,
    )
    for j in range(1, params.N + 1):
        row[f"beta_{j}"] = float(fit.beta_hat[j - 1]) if j <= fit.N_hat else float("nan")
    return row


def mle_consistency(
    params,
    scales,
    seed,
    n_seeds=20,
    mu_fraction=0.5,
    dimension=2,
    mc_n=2000,
    tol=1e-6,
    jamming_runs=3,
    streak=None,
    workers=1,
):
    """
    Эксперимент на состоятельность МП-оценок в растущих областях D_m объёма m.

    Плотность заполнения θ̂ оценивается по jamming_runs прогонам в единичном
    кубе, затем для каждого m и каждого повтора выбирается ℓ_m = ⌊μ θ̂ m⌋
    точек (μ = mu_fraction) и подгоняются β. Неудачная подгонка и ℓ_m < 2
    дают строку с именем ошибки в столбце error.

    Возвращает:
        (runs, summary, theta): таблица отдельных подгонок, сводка по m с
        медианой относительной ошибки и использованная оценка θ̂.
    """
    unit = Domain.unit_cube(dimension)
    theta = float(
        np.mean(
            [
                estimate_jamming(params, unit, make_rng(seed, 0, run), streak=streak)
                for run in range(jamming_runs)
            ]
        )
    )
    logger.info(f"Состоятельность: θ̂={theta:.3f}, μ={mu_fraction * theta:.3f}")

    tasks = []
    for m in scales:
        domain = Domain.rescaled_cube(dimension, m)
        ell = math.floor(mu_fraction * theta * m)
        if ell < MIN_FIT_POINTS:
            logger.warning(f"Масштаб m={m}: ℓ_m={ell} < {MIN_FIT_POINTS}, подгонка пропускается")
        for index in range(n_seeds):
            tasks.append((params, domain, ell, seed, (m, index + 1), mc_n, tol, streak))

    runs = pd.DataFrame(ordered_map(_fit_task, tasks, workers=workers), columns=run_columns(params.N))
    ok = runs[runs["error"] == ""]
    summary_rows = []
    for m in scales:
        subset = ok[ok["m"] == m]
        row = {"m": m, "fits": len(subset), "failures": int((runs["m"] == m).sum() - len(subset))}
        for j in range(1, params.N + 1):
            truth = params.beta[j - 1]
            errors = (subset[f"beta_{j}"] - truth).abs() / truth
            row[f"median_rel_error_{j}"] = float(errors.median()) if len(errors) else float("nan")
        summary_rows.append(row)
    return runs, pd.DataFrame(summary_rows), theta
