from django.apps import AppConfig


class CsaSequentialConfig(AppConfig):
    name = "csa_sequential"
    verbose_name = "Непрерывная модель CSA: выборка, статистики, МП-оценки"
