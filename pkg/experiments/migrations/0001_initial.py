from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="ExperimentRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "command",
                    models.CharField(
                        choices=[
                            ("simulate-csa", "Выборка CSA"),
                            ("fit-csa", "МП-оценка CSA"),
                            ("simulate-growth", "Рост на графе"),
                            ("simulate-min-rule", "Правило минимума"),
                            ("classify-ctmc", "Классификация цепи"),
                            ("simulate-ctmc", "Симуляция цепи"),
                            ("stationary-finite", "Стационарный закон ограниченной цепи"),
                            ("sample-pp", "Выборка точечного процесса"),
                            ("sweep", "Сетка классификации"),
                        ],
                        max_length=30,
                        verbose_name="Команда",
                    ),
                ),
                ("config", models.JSONField(default=dict, verbose_name="Конфигурация")),
                (
                    "seed",
                    models.PositiveBigIntegerField(blank=True, null=True, verbose_name="Сид"),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("running", "Выполняется"),
                            ("succeeded", "Успешно"),
                            ("failed", "Ошибка"),
                        ],
                        default="running",
                        max_length=15,
                        verbose_name="Статус",
                    ),
                ),
                (
                    "exit_code",
                    models.IntegerField(blank=True, null=True, verbose_name="Код завершения"),
                ),
                (
                    "output_dir",
                    models.CharField(blank=True, max_length=500, verbose_name="Каталог артефактов"),
                ),
                ("version", models.CharField(max_length=20, verbose_name="Версия")),
                ("error", models.TextField(blank=True, verbose_name="Ошибка")),
                (
                    "created_at",
                    models.DateTimeField(auto_now_add=True, verbose_name="Время запуска"),
                ),
                (
                    "finished_at",
                    models.DateTimeField(blank=True, null=True, verbose_name="Время завершения"),
                ),
            ],
            options={
                "verbose_name": "Запуск эксперимента",
                "verbose_name_plural": "Запуски экспериментов",
                "ordering": ["-created_at"],
            },
        ),
    ]
