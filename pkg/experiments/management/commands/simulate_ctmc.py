from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Симуляция Гиллеспи процесса рождения и гибели"

    experiment = "simulate-ctmc"
    parameters = {
        "graph": "Граф: kind:size или edges:path",
        "alpha": "Параметр α",
        "beta": "Параметр β",
        "variant": "Вариант интенсивностей X или Y",
        "t_max": "Горизонт времени",
        "event_cap": "Предел числа скачков",
        "cap": "Ограничение N",
        "thin": "Шаг прореживания траектории",
    }
