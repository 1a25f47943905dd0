import math
from pathlib import Path

import numpy as np
from django.conf import settings
from rest_framework import serializers

from config.exceptions import ToolkitError
from graph_core.graph import parse_graph_spec
from point_process.rules import parse_rule
from reversible_ctmc.params import CtmcParams

from .models import ExperimentRun

MAX_SEED = 2**63 - 1


def default_seed():
    return settings.DEFAULT_SEED


class PositiveFloatField(serializers.FloatField):
    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if not value > 0:
            self.fail("min_value", min_value=0)
        return value


class CountField(serializers.IntegerField):
    """
    Целое, допускающее запись с плавающей точкой: "1e6" -> 1000000.
    """

    def to_internal_value(self, data):
        if isinstance(data, str):
            try:
                number = float(data)
            except ValueError:
                self.fail("invalid")
            if not math.isfinite(number) or number != int(number):
                self.fail("invalid")
            data = int(number)
        return super().to_internal_value(data)


class FloatListField(serializers.ListField):
    """
    Список чисел: JSON-массив или строка "1,1000,10000".
    """

    child = serializers.FloatField()

    def to_internal_value(self, data):
        if isinstance(data, str):
            data = [item for item in data.split(",") if item.strip()]
        return super().to_internal_value(data)


class GridField(FloatListField):
    """
    Значения сетки: список, строка "a,b,c" или диапазон "start:stop:num"
    (num равноотстоящих точек, концы включены). Пустая строка - пустая сетка.
    """

    def to_internal_value(self, data):
        if isinstance(data, str) and data.count(":") == 2:
            try:
                start, stop, num = data.split(":")
                return [float(v) for v in np.linspace(float(start), float(stop), int(num))]
            except ValueError:
                self.fail("not_a_list", input_type="str")
        return super().to_internal_value(data)


class GraphField(serializers.CharField):
    """Описание графа "kind:size" или "edges:path"; граф строится при проверке."""

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        try:
            parse_graph_spec(value)
        except ToolkitError as error:
            raise serializers.ValidationError(str(error))
        return value


class RuleField(serializers.CharField):
    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        try:
            parse_rule(value)
        except ToolkitError as error:
            raise serializers.ValidationError(str(error))
        return value


class ExperimentSerializer(serializers.Serializer):
    seed = serializers.IntegerField(min_value=0, max_value=MAX_SEED, default=default_seed)


class SimulateCsaSerializer(ExperimentSerializer):
    """
    beta - таблица (β_0, β_1, ...), нормируется на β_0; domain - верхний угол
    параллелепипеда [0, domain] (по умолчанию единичный куб).
    """

    radius = PositiveFloatField()
    beta = FloatListField(min_length=1)
    points = CountField(min_value=1)
    dimension = serializers.IntegerField(min_value=1, default=2)
    domain = FloatListField(required=False)
    streak = CountField(min_value=1, required=False)

    def validate(self, attrs):
        domain = attrs.get("domain")
        if domain is not None and len(domain) != attrs["dimension"]:
            raise serializers.ValidationError({"domain": "Длина domain должна равняться dimension"})
        return attrs


class FitCsaSerializer(ExperimentSerializer):
    input = serializers.CharField()
    radius = PositiveFloatField()
    mc_samples = CountField(min_value=1, default=2000)
    tol = PositiveFloatField(default=1e-6)
    domain = FloatListField(required=False)

    def validate_input(self, value):
        if not Path(value).is_file():
            raise serializers.ValidationError(f"Файл {value} не найден")
        return value


class SimulateGrowthSerializer(ExperimentSerializer):
    graph = GraphField()
    alpha = serializers.FloatField()
    beta = serializers.FloatField()
    steps = CountField(min_value=1)
    thin = CountField(min_value=1, default=1)
    window = CountField(min_value=1, required=False)


class SimulateMinRuleSerializer(ExperimentSerializer):
    m = serializers.IntegerField(min_value=3)
    steps = CountField(min_value=1)
    thin = CountField(min_value=1, default=1)
    window = CountField(min_value=1, required=False)


class CtmcModelSerializer(ExperimentSerializer):
    graph = GraphField()
    alpha = serializers.FloatField()
    beta = serializers.FloatField()
    variant = serializers.ChoiceField(choices=CtmcParams.VARIANTS, default=CtmcParams.X_RATES)


class ClassifyCtmcSerializer(CtmcModelSerializer):
    pass


class SimulateCtmcSerializer(CtmcModelSerializer):
    t_max = PositiveFloatField()
    event_cap = CountField(min_value=1, default=10**6)
    cap = CountField(min_value=1, required=False)
    thin = CountField(min_value=1, default=1)


class StationaryFiniteSerializer(CtmcModelSerializer):
    cap = CountField(min_value=1)


class SamplePpSerializer(ExperimentSerializer):
    rule = RuleField()
    radius = PositiveFloatField()
    moves = CountField(min_value=1)
    domain = FloatListField(required=False)
    trace_every = CountField(min_value=1, default=1)


class SweepSerializer(ExperimentSerializer):
    """
    Сетка (α, β) для классификации; при simulate в каждой ячейке
    дополнительно запускается симуляция цепи на собственном потоке.
    """

    graph = GraphField()
    alphas = GridField()
    betas = GridField()
    variant = serializers.ChoiceField(choices=CtmcParams.VARIANTS, default=CtmcParams.X_RATES)
    simulate = serializers.BooleanField(default=False)
    t_max = PositiveFloatField(default=100.0)
    event_cap = CountField(min_value=1, default=10**5)


COMMAND_SERIALIZERS = {
    ExperimentRun.SIMULATE_CSA: SimulateCsaSerializer,
    ExperimentRun.FIT_CSA: FitCsaSerializer,
    ExperimentRun.SIMULATE_GROWTH: SimulateGrowthSerializer,
    ExperimentRun.SIMULATE_MIN_RULE: SimulateMinRuleSerializer,
    ExperimentRun.CLASSIFY_CTMC: ClassifyCtmcSerializer,
    ExperimentRun.SIMULATE_CTMC: SimulateCtmcSerializer,
    ExperimentRun.STATIONARY_FINITE: StationaryFiniteSerializer,
    ExperimentRun.SAMPLE_PP: SamplePpSerializer,
    ExperimentRun.SWEEP: SweepSerializer,
}


class ExperimentRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = ExperimentRun
        fields = "__all__"
