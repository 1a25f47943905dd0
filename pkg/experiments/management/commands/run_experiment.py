from django.core.management import CommandError

from config.exceptions import ConfigError
from experiments.artifacts import dumps

from . import (
    classify_ctmc,
    fit_csa,
    sample_pp,
    simulate_csa,
    simulate_ctmc,
    simulate_growth,
    simulate_min_rule,
    stationary_finite,
    sweep,
)
from ._base import ExperimentCommand

ALL_PARAMETERS = {}
for module in (
    simulate_csa,
    fit_csa,
    simulate_growth,
    simulate_min_rule,
    classify_ctmc,
    simulate_ctmc,
    stationary_finite,
    sample_pp,
    sweep,
):
    ALL_PARAMETERS.update(module.Command.parameters)


class Command(ExperimentCommand):
    help = "Запуск эксперимента по JSON-конфигурации {command, seed, parameters, output}"

    parameters = ALL_PARAMETERS

    def resolve_command(self, file_config):
        command = file_config.get("command")
        if not command:
            error = ConfigError("Нужен --config с ключом command")
            raise CommandError(dumps(error.as_dict()), returncode=error.exit_code)
        return command
