import logging
import math

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from spatial_core.geometry import Domain

from .sampler import sample_csa
from .statistics import gamma_columns, t_statistics

logger = logging.getLogger(__name__)


def limit_residuals(params, gamma, m):
    """
    Невязки предельной системы уравнений правдоподобия в истинном β:
    ρ_j − ∫_0^μ β_j γ_j(λ) / (γ_0(λ) + Σ_i β_i γ_i(λ)) dλ,
    где γ_j(λ) ≈ Γ_{j,⌊λm⌋}/m, интеграл - по формуле трапеций на сетке λ_k = k/m.

    Параметры:
    - gamma: матрица Γ_{j,k}, k = 0..ℓ.
    Возвращает пару (интегралы по j = 1..N, сетка λ).
    """
    beta = np.asarray(params.beta)
    lambdas = np.arange(gamma.shape[1]) / m
    denominators = gamma[0] + beta @ gamma[1:]
    integrands = beta[:, None] * gamma[1:] / denominators
    return trapezoid(integrands, lambdas, axis=1), lambdas


def empirical_limit_profile(params, base_domain, scales, mu, rng, mc_n=2000, streak=None):
    """
    Нормированные статистики t_j/m и Γ_{j,ℓ_m}/m на растущих областях
    D_m = m^{1/d} D_1 при ℓ_m = ⌊μ m⌋ и невязки предельной системы.
    mc_n задаёт число точек Монте-Карло на единицу объёма: на D_m берётся
    ⌈mc_n·m⌉ точек.

    Возвращает:
        pandas.DataFrame: столбцы m, ell, mc_n, rho_j, gamma_j (j = 0..N),
        residual_j (j = 1..N).
    """
    scales = list(scales)
    if any(b <= a for a, b in zip(scales, scales[1:])):
        raise ValueError("Масштабы должны строго возрастать")

    streams = rng.spawn(len(scales))
    rows = []
    for m, stream in zip(scales, streams):
        domain = Domain(
            base_domain.lower * m ** (1 / base_domain.dimension),
            base_domain.upper * m ** (1 / base_domain.dimension),
        )
        scale = float(m)
        ell = math.floor(mu * scale)
        seq = sample_csa(params, domain, ell, stream, streak=streak)
        t = t_statistics(seq, params.R, params.N)
        samples = math.ceil(mc_n * scale)
        gamma, _ = gamma_columns(seq.points, domain, params.R, params.N, ell + 1, samples, stream)
        row = {"m": m, "ell": ell, "mc_n": samples}
        for j in range(params.N + 1):
            row[f"rho_{j}"] = t.counts[j] / scale
            row[f"gamma_{j}"] = gamma[j, -1] / scale
        if params.N:
            integrals, _ = limit_residuals(params, gamma, scale)
            for j in range(1, params.N + 1):
                row[f"residual_{j}"] = t.counts[j] / scale - integrals[j - 1]
        rows.append(row)
        logger.info(f"Профиль: m={m}, ℓ_m={ell}")
    return pd.DataFrame(rows)
