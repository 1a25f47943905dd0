from ._base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Классификация на сетке (α, β) для фазовой диаграммы"

    experiment = "sweep"
    parameters = {
        "graph": "Граф: kind:size или edges:path",
        "alphas": "Значения α: a,b,c или start:stop:num",
        "betas": "Значения β: a,b,c или start:stop:num",
        "variant": "Вариант интенсивностей X или Y",
        "simulate": "Запускать симуляцию в каждой ячейке",
        "t_max": "Горизонт симуляции",
        "event_cap": "Предел числа скачков",
    }
