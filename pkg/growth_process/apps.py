from django.apps import AppConfig


class GrowthProcessConfig(AppConfig):
    name = "growth_process"
    verbose_name = "Рост на графе: локализация и правило минимума"
