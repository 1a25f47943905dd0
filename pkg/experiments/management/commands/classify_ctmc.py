from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Классификация процесса рождения и гибели на графе"

    experiment = "classify-ctmc"
    parameters = {
        "graph": "Граф: kind:size или edges:path",
        "alpha": "Параметр α",
        "beta": "Параметр β",
        "variant": "Вариант интенсивностей X или Y",
    }
