from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Точный стационарный закон цепи с ограничением N"

    experiment = "stationary-finite"
    parameters = {
        "graph": "Граф: kind:size или edges:path",
        "alpha": "Параметр α",
        "beta": "Параметр β",
        "variant": "Вариант интенсивностей X или Y",
        "cap": "Ограничение N",
    }
