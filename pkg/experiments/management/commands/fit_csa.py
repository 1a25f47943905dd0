from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = "МП-оценка параметров CSA по CSV упорядоченных точек"

    experiment = "fit-csa"
    parameters = {
        "input": "CSV с точками x1..xd",
        "radius": "Радиус взаимодействия R",
        "mc_samples": "Число точек Монте-Карло на столбец Γ",
        "tol": "Допуск невязки уравнений правдоподобия",
        "domain": "Верхний угол области через запятую",
    }
