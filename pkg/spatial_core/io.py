import json

import numpy as np
import pandas as pd


def read_points_csv(path):
    """
    Читает точки из CSV: одна точка на строку, заголовок x1..xd обязателен,
    строки, начинающиеся с '#', пропускаются.

    Возвращает:
        np.ndarray формы (n, d) в порядке строк файла.
    """
    frame = pd.read_csv(path, comment="#")
    columns = [f"x{i + 1}" for i in range(frame.shape[1])]
    if list(frame.columns) != columns:
        raise ValueError(f"Ожидался заголовок {','.join(columns)}, получен {list(frame.columns)}")
    return frame.to_numpy(dtype=float)


def points_frame(points):
    points = np.asarray(points, dtype=float)
    dimension = points.shape[1] if points.ndim == 2 else 0
    return pd.DataFrame(points, columns=[f"x{i + 1}" for i in range(dimension)])


def write_csv(frame, path, header_comment=None):
    """
    Записывает таблицу в CSV (разделитель ',', десятичная точка, LF).
    Необязательная первая строка-комментарий '# ...' несёт метаданные запуска.
    """
    with open(path, "w", encoding="utf-8", newline="") as handle:
        if header_comment is not None:
            handle.write(f"# {json.dumps(header_comment, sort_keys=True)}\n")
        frame.to_csv(handle, index=False, lineterminator="\n", float_format="%.17g")


def write_points_csv(points, path, header_comment=None):
    write_csv(points_frame(points), path, header_comment=header_comment)
