import logging
from concurrent.futures import ProcessPoolExecutor

logger = logging.getLogger(__name__)


def ordered_map(fn, items, workers=1):
    """
    Применяет fn к элементам items и возвращает результаты в исходном порядке.

    При workers > 1 задачи выполняются в пуле процессов; fn должна быть
    функцией верхнего уровня модуля, а её аргументы - сериализуемыми.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    logger.debug(f"Параллельный запуск {len(items)} задач на {workers} процессах")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
