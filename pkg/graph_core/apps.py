from django.apps import AppConfig


class GraphCoreConfig(AppConfig):
    name = "graph_core"
    verbose_name = "Графы: спектр, клики, независимые множества"
