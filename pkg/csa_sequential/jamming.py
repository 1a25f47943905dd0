import logging

from .sampler import accept_reject

logger = logging.getLogger(__name__)


def estimate_jamming(params, domain, rng, streak=None):
    """
    Оценка плотности заполнения θ: процесс принятия-отклонения идёт до серии
    из streak недопустимых предложений подряд, результат - число принятых
    точек на единицу объёма.
    """
    points, _, proposals = accept_reject(params, domain, rng, streak=streak)
    density = len(points) / domain.volume
    logger.info(
        f"Заполнение: {len(points)} точек за {proposals} предложений, θ̂={density:.4f}"
    )
    return density
