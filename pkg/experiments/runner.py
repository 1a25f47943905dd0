import json
import logging
from dataclasses import dataclass, field

from django.conf import settings
from django.utils import timezone
from rest_framework.exceptions import ValidationError

from config.exceptions import ConfigError, ToolkitError
from config.rng import make_rng

from .artifacts import dumps, output_directory, write_artifacts, write_json
from .handlers import HANDLERS
from .models import ExperimentRun
from .serializers import COMMAND_SERIALIZERS

logger = logging.getLogger(__name__)


@dataclass
class RunOutcome:
    """
    Итог запуска: код завершения (0, 2 или 3), отчёт для stdout, записанные
    файлы и запись ExperimentRun.
    """

    run: ExperimentRun
    exit_code: int
    report: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    error: dict = None

    @property
    def ok(self):
        return self.exit_code == 0


def load_config_file(path):
    """
    Читает JSON-конфигурацию {command, seed, parameters, output}.

    Исключения:
        ConfigError: файл не найден или не является JSON-объектом.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as error:
        raise ConfigError(f"Не удалось прочитать конфигурацию {path}: {error}") from error
    if not isinstance(data, dict):
        raise ConfigError(f"Конфигурация {path} должна быть JSON-объектом")
    return data


def resolve_config(command, parameters, seed=None):
    """
    Проверка параметров сериализатором команды.

    Исключения:
        ConfigError: неизвестная команда, нет обязательных ключей или значения
            некорректны.
    """
    serializer_class = COMMAND_SERIALIZERS.get(command)
    if serializer_class is None:
        raise ConfigError(f"Неизвестная команда {command!r}", command=command)
    data = dict(parameters)
    if seed is not None:
        data["seed"] = seed
    serializer = serializer_class(data=data)
    try:
        serializer.is_valid(raise_exception=True)
    except ValidationError as error:
        raise ConfigError(
            f"Некорректная конфигурация {command}: {json.dumps(error.detail, ensure_ascii=False)}",
            detail=error.detail,
        ) from error
    return {"command": command, **serializer.validated_data}


def _fail(run, error, directory=None):
    run.status = ExperimentRun.FAILED
    run.exit_code = error.exit_code
    run.error = str(error)
    run.finished_at = timezone.now()
    run.save()
    report = error.as_dict()
    if directory is not None:
        write_json({"error": report}, directory / "error.json", run.config)
    logger.error(f"Запуск {run.command} завершился ошибкой: {dumps(report)}")
    return RunOutcome(run=run, exit_code=error.exit_code, error=report)


def run_experiment(command, parameters, seed=None, output=None, workers=None):
    """
    Выполняет команду: проверка конфигурации, запуск обработчика с
    генератором make_rng(seed), запись артефактов в каталог эксперимента.
    Ошибки модулей не пробрасываются, а превращаются в код завершения и
    структурированный отчёт.
    """
    workers = settings.PARALLEL_WORKERS if workers is None else workers
    run = ExperimentRun.objects.create(
        command=command if command in HANDLERS else "",
        config=json.loads(dumps(parameters)),
        version=settings.TOOLKIT_VERSION,
    )
    try:
        config = resolve_config(command, parameters, seed)
    except ConfigError as error:
        return _fail(run, error)

    run.config = config
    run.seed = config["seed"]
    directory = output_directory(command, config["seed"], output)
    run.output_dir = str(directory)
    run.save()
    logger.info(f"Запуск {command}, сид {config['seed']}, каталог {directory}")

    try:
        artifacts, report = HANDLERS[command](config, make_rng(config["seed"]), workers)
    except ToolkitError as error:
        return _fail(run, error, directory)
    except (ValueError, OSError) as error:
        return _fail(run, ToolkitError(str(error), command=command), directory)

    files = write_artifacts(artifacts, directory, config)
    run.status = ExperimentRun.SUCCEEDED
    run.exit_code = 0
    run.finished_at = timezone.now()
    run.save()
    logger.info(f"Запуск {command} завершён: {[path.name for path in files]}")
    return RunOutcome(run=run, exit_code=0, report=report, files=files)
