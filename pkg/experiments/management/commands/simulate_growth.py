from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Процесс роста на графе и проверка локализации"

    experiment = "simulate-growth"
    parameters = {
        "graph": "Граф: kind:size или edges:path",
        "alpha": "Параметр α",
        "beta": "Параметр β",
        "steps": "Число шагов",
        "thin": "Шаг прореживания траектории",
        "window": "Окно проверки локализации",
    }
