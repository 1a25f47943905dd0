from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Выборка точечного процесса CSA цепью рождения и гибели"

    experiment = "sample-pp"
    parameters = {
        "rule": "Правило: constant:β, table:β_0,...,β_N или strauss:a,γ",
        "radius": "Радиус взаимодействия R",
        "moves": "Число шагов цепи",
        "domain": "Верхний угол области через запятую",
        "trace_every": "Шаг записи следа |x|",
    }
