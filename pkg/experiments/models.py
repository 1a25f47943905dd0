from django.db import models


class ExperimentRun(models.Model):
    """
    Запись об одном запуске команды: разрешённая конфигурация, сид, исход и
    каталог артефактов. Время запуска хранится только здесь, в самих
    артефактах его нет.
    """

    RUNNING = "running"
    SUCCEEDED = "succeeded"
    FAILED = "failed"

    STATUSES = [
        (RUNNING, "Выполняется"),
        (SUCCEEDED, "Успешно"),
        (FAILED, "Ошибка"),
    ]

    SIMULATE_CSA = "simulate-csa"
    FIT_CSA = "fit-csa"
    SIMULATE_GROWTH = "simulate-growth"
    SIMULATE_MIN_RULE = "simulate-min-rule"
    CLASSIFY_CTMC = "classify-ctmc"
    SIMULATE_CTMC = "simulate-ctmc"
    STATIONARY_FINITE = "stationary-finite"
    SAMPLE_PP = "sample-pp"
    SWEEP = "sweep"

    COMMANDS = [
        (SIMULATE_CSA, "Выборка CSA"),
        (FIT_CSA, "МП-оценка CSA"),
        (SIMULATE_GROWTH, "Рост на графе"),
        (SIMULATE_MIN_RULE, "Правило минимума"),
        (CLASSIFY_CTMC, "Классификация цепи"),
        (SIMULATE_CTMC, "Симуляция цепи"),
        (STATIONARY_FINITE, "Стационарный закон ограниченной цепи"),
        (SAMPLE_PP, "Выборка точечного процесса"),
        (SWEEP, "Сетка классификации"),
    ]

    command = models.CharField(max_length=30, choices=COMMANDS, verbose_name="Команда")
    config = models.JSONField(default=dict, verbose_name="Конфигурация")
    seed = models.PositiveBigIntegerField(null=True, blank=True, verbose_name="Сид")
    status = models.CharField(
        max_length=15, choices=STATUSES, default=RUNNING, verbose_name="Статус"
    )
    exit_code = models.IntegerField(null=True, blank=True, verbose_name="Код завершения")
    output_dir = models.CharField(max_length=500, blank=True, verbose_name="Каталог артефактов")
    version = models.CharField(max_length=20, verbose_name="Версия")
    error = models.TextField(blank=True, verbose_name="Ошибка")
    created_at = models.DateTimeField(auto_now_add=True, verbose_name="Время запуска")
    finished_at = models.DateTimeField(null=True, blank=True, verbose_name="Время завершения")

    def __str__(self):
        return f"{self.command} (сид {self.seed}, {self.get_status_display()})"

    class Meta:
        verbose_name = "Запуск эксперимента"
        verbose_name_plural = "Запуски экспериментов"
        ordering = ["-created_at"]
