from django.apps import AppConfig


class ReversibleCtmcConfig(AppConfig):
    name = "reversible_ctmc"
    verbose_name = "Обратимые процессы рождения и гибели на графе"
