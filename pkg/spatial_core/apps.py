from django.apps import AppConfig


class SpatialCoreConfig(AppConfig):
    name = "spatial_core"
    verbose_name = "Геометрия: области, последовательности точек, соседи"
