import json
from pathlib import Path

import pandas as pd
from django.conf import settings
from rest_framework.utils.encoders import JSONEncoder

from spatial_core.io import write_csv


def output_directory(command, seed, output=None):
    """Каталог эксперимента: явный output или OUTPUT_ROOT/<command>-<seed>."""
    path = Path(output) if output else Path(settings.OUTPUT_ROOT) / f"{command}-{seed}"
    path.mkdir(parents=True, exist_ok=True)
    return path


def metadata(config):
    return {"config": config, "version": settings.TOOLKIT_VERSION}


def dumps(payload):
    return json.dumps(payload, cls=JSONEncoder, sort_keys=True, indent=2, ensure_ascii=False)


def write_json(payload, path, config):
    """JSON-артефакт с ключами config и version."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(dumps({**payload, **metadata(config)}))
        handle.write("\n")


def write_artifacts(artifacts, directory, config):
    """
    Записывает артефакты {имя файла: содержимое}: таблицы pandas - в CSV с
    первой строкой-комментарием, словари - в JSON.
    """
    written = []
    for name, content in artifacts.items():
        path = Path(directory) / name
        if isinstance(content, pd.DataFrame):
            write_csv(content, path, header_comment=metadata(config))
        else:
            write_json(content, path, config)
        written.append(path)
    return written
