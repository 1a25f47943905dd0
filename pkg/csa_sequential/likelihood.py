import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

from .exceptions import (
    ConvergenceFailure,
    DivergentEstimate,
    NonFiniteLikelihood,
    NonIdentifiable,
)
from .statistics import compute_statistics

logger = logging.getLogger(__name__)

BRACKET_LIMIT = 60.0


def _denominators(stats, beta):
    beta = np.asarray(beta, dtype=float)
    denominators = stats.gamma[0] + beta @ stats.gamma[1:]
    if np.any(denominators <= 0) or not np.all(np.isfinite(denominators)):
        raise NonFiniteLikelihood(
            "Неположительный знаменатель правдоподобия",
            minimum=float(denominators.min()),
        )
    return denominators


def _check_beta(stats, beta):
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if beta.size != stats.N:
        raise ValueError(f"Ожидалось {stats.N} параметров β, получено {beta.size}")
    if np.any(beta <= 0):
        raise ValueError("Все β_j должны быть положительны")
    return beta


def log_likelihood(stats, beta):
    """
    L(β) = Σ_j t_j log β_j − Σ_{k=1}^{ℓ} log(Γ_{0,k−1} + Σ_j β_j Γ_{j,k−1}).

    Первое слагаемое второй суммы равно log|D|.
    """
    beta = _check_beta(stats, beta)
    denominators = _denominators(stats, beta)
    return float(stats.t[1:] @ np.log(beta) - np.log(denominators).sum())


def _weights(stats, beta):
    """w[j, k] = β_j Γ_{j,k} / (Γ_{0,k} + Σ_i β_i Γ_{i,k})."""
    denominators = _denominators(stats, beta)
    return beta[:, None] * stats.gamma[1:] / denominators


def score(stats, beta):
    """
    Невязки уравнений правдоподобия
    t_j − Σ_k β_j Γ_{j,k−1} / (Γ_{0,k−1} + Σ_i β_i Γ_{i,k−1}), j = 1..N.

    Это же градиент L по θ = log β.
    """
    beta = _check_beta(stats, beta)
    return stats.t[1:] - _weights(stats, beta).sum(axis=1)


@dataclass(frozen=True, eq=False)
class MleFit:
    """
    Результат подгонки.

    Поля:
        R, N_hat: радиус и оценка числа параметров.
        beta_hat: (β̂_1, ..., β̂_N̂).
        residuals: невязки уравнений правдоподобия в β̂.
        statistics: использованные t- и Γ-статистики.
        method: "none", "bisection" или "trust-exact".
    """

    R: float
    N_hat: int
    beta_hat: np.ndarray
    residuals: np.ndarray
    statistics: object
    method: str
    log_likelihood: float

    def to_dict(self):
        return {
            "R": self.R,
            "N_hat": self.N_hat,
            "beta_hat": self.beta_hat.tolist(),
            "residuals": self.residuals.tolist(),
            "t": self.statistics.t.tolist(),
            "gamma_mc_se": self.statistics.gamma_se.tolist(),
            "mc_n": self.statistics.mc_samples,
            "log_likelihood": self.log_likelihood,
        }


def _fit_single(stats, tol):
    """
    N̂ = 1: невязка строго убывает по β, корень ищется методом Брента
    на отрезке по log β, расширяемом до смены знака.
    """
    def residual(theta):
        return float(score(stats, [math.exp(theta)])[0])

    low, high = -1.0, 1.0
    while residual(low) <= 0:
        low -= 2.0
        if low < -BRACKET_LIMIT:
            raise ConvergenceFailure("Не удалось найти нижнюю границу для β")
    while residual(high) >= 0:
        high += 2.0
        if high > BRACKET_LIMIT:
            raise DivergentEstimate("Невязка положительна при любом β: β̂ = ∞")
    theta = brentq(residual, low, high, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return np.array([math.exp(theta)])


def _fit_multiple(stats, tol):
    """
    N̂ > 1: максимизация L по θ = log β. L вогнута по θ, градиент - вектор
    невязок, гессиан −Σ_k (diag(w_k) − w_k w_kᵀ).
    """
    def objective(theta):
        return -log_likelihood(stats, np.exp(theta))

    def gradient(theta):
        return -score(stats, np.exp(theta))

    def hessian(theta):
        weights = _weights(stats, np.exp(theta))
        return np.diag(weights.sum(axis=1)) - weights @ weights.T

    start = np.zeros(stats.N)
    result = minimize(
        objective,
        start,
        jac=gradient,
        hess=hessian,
        method="trust-exact",
        options={"gtol": tol / 10, "maxiter": 1000},
    )
    theta = result.x
    # доводка методом Ньютона до критерия по максимуму невязки
    for _ in range(50):
        residuals = score(stats, np.exp(theta))
        if np.max(np.abs(residuals)) <= tol / 10:
            break
        theta = theta + np.linalg.solve(hessian(theta), residuals)
    return np.exp(theta)


def fit_statistics(stats, tol=1e-6, R=None):
    """
    МП-оценка β по готовым статистикам с N = N̂.

    Исключения:
        NonIdentifiable(j): t_j = 0 для некоторого 1 <= j <= N̂.
        DivergentEstimate: N̂ = 1 и t_1 = ℓ − 1.
        ConvergenceFailure: невязка не опустилась ниже tol.
    """
    N_hat = stats.N
    length = stats.length
    for j in range(1, N_hat + 1):
        if stats.t[j] == 0:
            raise NonIdentifiable(j)

    if N_hat == 0:
        beta_hat, method = np.empty(0), "none"
    elif N_hat == 1:
        if stats.t[1] == length - 1:
            raise DivergentEstimate(
                "t_1 = ℓ − 1: наблюдение соответствует пределу β̂ = ∞",
                t1=int(stats.t[1]),
                length=length,
            )
        beta_hat, method = _fit_single(stats, tol), "bisection"
    else:
        beta_hat, method = _fit_multiple(stats, tol), "trust-exact"

    residuals = score(stats, beta_hat) if N_hat else np.empty(0)
    if residuals.size and np.max(np.abs(residuals)) > tol:
        raise ConvergenceFailure(
            "Невязка уравнений правдоподобия превышает допуск",
            residuals=residuals,
            tol=tol,
        )
    return MleFit(
        R=R,
        N_hat=N_hat,
        beta_hat=beta_hat,
        residuals=residuals,
        statistics=stats,
        method=method,
        log_likelihood=log_likelihood(stats, beta_hat),
    )


def fit_mle(seq, domain, R, mc_n, rng, tol=1e-6):
    """
    МП-оценка параметров (β_1, ..., β_N̂) по наблюдению x(ℓ), ℓ >= 2.
    N̂ вычисляется по данным, Γ-статистики - методом Монте-Карло.
    """
    if len(seq) < 2:
        raise ValueError("Для подгонки нужно ℓ >= 2")
    stats = compute_statistics(seq, domain, R, mc_n, rng)
    fit = fit_statistics(stats, tol=tol, R=R)
    logger.info(f"МП-оценка: N̂={fit.N_hat}, β̂={fit.beta_hat.tolist()} ({fit.method})")
    return fit
