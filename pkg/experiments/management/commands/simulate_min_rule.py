from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Правило минимума на цикле C_m"

    experiment = "simulate-min-rule"
    parameters = {
        "m": "Длина цикла",
        "steps": "Число шагов",
        "thin": "Шаг прореживания траектории",
        "window": "Окно сводки хвоста",
    }
