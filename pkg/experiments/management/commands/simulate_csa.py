from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Выборка последовательности непрерывной модели CSA"

    experiment = "simulate-csa"
    parameters = {
        "radius": "Радиус взаимодействия R",
        "beta": "Таблица β_0,β_1,... через запятую",
        "points": "Число точек ℓ",
        "dimension": "Размерность d",
        "domain": "Верхний угол области через запятую",
        "streak": "Порог серии недопустимых предложений",
    }
