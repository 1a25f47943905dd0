"""
Генераторы случайных чисел с воспроизводимым разбиением на потоки.

Используется счётчиковый генератор Philox. Поток задаётся сидом и кортежем
целых индексов (например, номер ячейки сетки и номер повтора), поэтому
результат не зависит от порядка выполнения задач.
"""

import numpy as np


def make_rng(seed, *stream):
    """
    Возвращает np.random.Generator для потока (seed, *stream).

    Параметры:
    - seed: неотрицательное целое до 2**64 - 1.
    - stream: индексы подпотока; пустой кортеж означает корневой поток.
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(int(i) for i in stream))
    return np.random.Generator(np.random.Philox(sequence))
