import logging

import numpy as np
from django.conf import settings
from scipy.spatial.distance import cdist

from spatial_core.geometry import PointSeq

from .exceptions import JammedBeforeTarget

logger = logging.getLogger(__name__)

BATCH_SIZE = 256


def _counts_against(candidates, points, R):
    if points.shape[0] == 0:
        return np.zeros(candidates.shape[0], dtype=int)
    return np.count_nonzero(cdist(candidates, points, "sqeuclidean") <= R * R, axis=1)


def _acceptance_probability(params, counts):
    rates = params.rates
    capped = np.minimum(counts, params.N)
    return np.where(counts <= params.N, rates[capped], 0.0) / params.max_rate


def _advance_streak(inadmissible, carry, streak):
    """
    Продлевает серию подряд идущих недопустимых предложений.

    Возвращает:
        (carry, jammed_at): длина серии в конце отрезка и индекс, на котором
        серия достигла streak (None, если не достигла).
    """
    if inadmissible.size == 0:
        return carry, None
    index = np.arange(inadmissible.size)
    last_admissible = np.maximum.accumulate(np.where(inadmissible, -1, index))
    runs = np.where(last_admissible >= 0, index - last_admissible, carry + index + 1)
    reached = np.flatnonzero(runs >= streak)
    if reached.size:
        return int(runs[reached[0]]), int(reached[0])
    return int(runs[-1]), None


def accept_reject(params, domain, rng, target_len=None, streak=None):
    """
    Схема принятия-отклонения: равномерные точки Y_i в D принимаются с
    вероятностью β_{ν(Y_i, X(k))}/C, C = max_k β_k.

    Процесс останавливается, когда принято target_len точек, либо когда
    streak предложений подряд попали в недопустимые положения (ν > N, скорость
    равна нулю). Отказ в допустимом положении серию обнуляет: при малых
    β_0/C он говорит о редком принятии, а не о заполнении области.

    Возвращает:
        (points, jammed, proposals): массив принятых точек, признак остановки
        по серии отказов и общее число предложенных точек.
    """
    streak = streak or settings.CSA_REJECTION_STREAK
    R = params.R
    capacity = target_len or 1024
    accepted = np.empty((capacity, domain.dimension))
    size = 0
    rejections = 0
    proposals = 0

    while target_len is None or size < target_len:
        candidates = domain.sample_uniform(rng, BATCH_SIZE)
        uniforms = rng.random(BATCH_SIZE)
        counts = _counts_against(candidates, accepted[:size], R)
        start = 0
        while start < BATCH_SIZE and (target_len is None or size < target_len):
            probabilities = _acceptance_probability(params, counts[start:])
            hits = np.flatnonzero(uniforms[start:] < probabilities)
            stop = hits[0] if hits.size else BATCH_SIZE - start
            rejections, jammed_at = _advance_streak(
                probabilities[:stop] == 0, rejections, streak
            )
            if jammed_at is not None:
                proposals += jammed_at + 1
                return accepted[:size].copy(), True, proposals
            proposals += stop
            if hits.size == 0:
                break

            index = start + stop
            rejections = 0
            proposals += 1
            if size == accepted.shape[0]:
                accepted = np.concatenate([accepted, np.empty_like(accepted)])
            point = candidates[index]
            accepted[size] = point
            size += 1
            tail = candidates[index + 1:]
            counts[index + 1:] += np.sum((tail - point) ** 2, axis=1) <= R * R
            start = index + 1

    return accepted[:size].copy(), False, proposals


def sample_csa(params, domain, target_len, rng, streak=None):
    """
    Точная выборка последовательности длины target_len из непрерывной модели CSA.

    Исключения:
        JammedBeforeTarget: серия отказов достигла порога раньше цели.
    """
    logger.info(
        f"Выборка CSA: R={params.R}, β={params.beta}, ℓ={target_len}, |D|={domain.volume}"
    )
    points, jammed, proposals = accept_reject(
        params, domain, rng, target_len=target_len, streak=streak
    )
    if jammed:
        logger.warning(
            f"Область заполнена после {len(points)} точек из {target_len}"
        )
        raise JammedBeforeTarget(
            f"Принято {len(points)} точек из {target_len} до серии отказов",
            accepted=len(points),
            target_len=target_len,
        )
    logger.info(f"Выборка завершена: {proposals} предложений")
    return PointSeq(points, domain)
