from django.apps import AppConfig


class PointProcessConfig(AppConfig):
    name = "point_process"
    verbose_name = "Точечный процесс CSA: плотность, МСМК рождения и гибели"
