import logging

from django.core.management import BaseCommand, CommandError

from config.exceptions import ConfigError
from experiments.artifacts import dumps
from experiments.runner import load_config_file, run_experiment

logger = logging.getLogger(__name__)


class ExperimentCommand(BaseCommand):
    """
    Общая основа команд экспериментов: флаги --seed, --output, --workers и
    --config. Параметры команды перечислены в parameters как
    {имя: подсказка}; флаг --имя-через-дефис передаётся строкой и
    проверяется сериализатором. Флаги перекрывают значения из файла.
    """

    experiment = None
    parameters = {}

    def add_arguments(self, parser):
        parser.add_argument("--seed", type=int, help="Сид генератора (по умолчанию DEFAULT_SEED)")
        parser.add_argument("--output", help="Каталог артефактов (по умолчанию OUTPUT_ROOT/<команда>-<сид>)")
        parser.add_argument("--workers", type=int, help="Число процессов")
        parser.add_argument("--config", help="JSON-файл конфигурации")
        for name, help_text in self.parameters.items():
            parser.add_argument(f"--{name.replace('_', '-')}", dest=name, help=help_text)

    def resolve_command(self, file_config):
        return self.experiment

    def handle(self, *args, **options):
        try:
            file_config = load_config_file(options["config"]) if options["config"] else {}
        except ConfigError as error:
            raise CommandError(dumps(error.as_dict()), returncode=error.exit_code)

        command = self.resolve_command(file_config)
        parameters = dict(file_config.get("parameters", {}))
        parameters.update(
            {name: options[name] for name in self.parameters if options.get(name) is not None}
        )
        seed = options["seed"] if options["seed"] is not None else file_config.get("seed")
        output = options["output"] or file_config.get("output")

        outcome = run_experiment(command, parameters, seed=seed, output=output, workers=options["workers"])
        if not outcome.ok:
            raise CommandError(dumps(outcome.error), returncode=outcome.exit_code)
        self.stdout.write(dumps(outcome.report))
