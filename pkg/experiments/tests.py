import json
import tempfile
from io import StringIO
from pathlib import Path

import pandas as pd
from django.core.management import CommandError, call_command
from django.test import TestCase, override_settings

from csa_sequential.statistics import prior_neighbour_counts
from reversible_ctmc.classification import Verdict
from spatial_core.geometry import Domain, PointSeq
from spatial_core.io import read_points_csv

from .models import ExperimentRun
from .serializers import ExperimentRunSerializer
from .sweep import CLASSIFY_COLUMNS


class BaseExperimentTests(TestCase):
    """
    Базовый класс: временный каталог артефактов и вызов команд.
    """

    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.root = Path(directory.name)
        settings_override = override_settings(OUTPUT_ROOT=self.root)
        settings_override.enable()
        self.addCleanup(settings_override.disable)

    def call(self, name, **options):
        out = StringIO()
        call_command(name, stdout=out, **options)
        return json.loads(out.getvalue())

    def call_failing(self, name, **options):
        with self.assertRaises(CommandError) as context:
            call_command(name, stdout=StringIO(), **options)
        return context.exception

    @classmethod
    def read_json(cls, path):
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)

    @classmethod
    def read_table(cls, path):
        return pd.read_csv(path, comment="#")

    def assert_same_files(self, first, second):
        names = sorted(path.name for path in first.iterdir())
        self.assertEqual(names, sorted(path.name for path in second.iterdir()))
        for name in names:
            self.assertEqual((first / name).read_bytes(), (second / name).read_bytes(), msg=name)


class ClassifyCommandTests(BaseExperimentTests):
    """
    Тесты команды классификации и общих правил запуска.
    """

    def test_star_verdict(self):
        report = self.call("classify_ctmc", graph="star:4", alpha="-1", beta="0.4")
        self.assertEqual(report["verdict"], Verdict.POSITIVE_RECURRENT)
        self.assertEqual(report["lambda1"], 2.0)

        payload = self.read_json(self.root / "classify-ctmc-20240717" / "classification.json")
        self.assertEqual(payload["verdict"], Verdict.POSITIVE_RECURRENT)
        self.assertEqual(payload["config"]["graph"], "star:4")
        self.assertIn("version", payload)

        run = ExperimentRun.objects.get()
        self.assertEqual(run.status, ExperimentRun.SUCCEEDED)
        self.assertEqual(run.exit_code, 0)
        self.assertEqual(ExperimentRunSerializer(run).data["command"], "classify-ctmc")

    def test_missing_key_is_config_error(self):
        error = self.call_failing("classify_ctmc", graph="star:4", alpha="-1")
        self.assertEqual(error.returncode, 2)
        run = ExperimentRun.objects.get()
        self.assertEqual(run.status, ExperimentRun.FAILED)
        self.assertEqual(run.exit_code, 2)

    def test_bad_graph_is_config_error(self):
        error = self.call_failing("classify_ctmc", graph="cycle:2", alpha="-1", beta="0.4")
        self.assertEqual(error.returncode, 2)

    def test_model_error_exit_code(self):
        edges = self.root / "edges.txt"
        edges.write_text("# две компоненты\n0 1\n2 3\n", encoding="utf-8")
        output = self.root / "disconnected"
        error = self.call_failing(
            "classify_ctmc", graph=f"edges:{edges}", alpha="-1", beta="0.2", output=str(output)
        )
        self.assertEqual(error.returncode, 3)
        report = self.read_json(output / "error.json")
        self.assertEqual(report["error"]["error"], "Disconnected")

    def test_config_file_and_flag_override(self):
        path = self.root / "experiment.json"
        path.write_text(
            json.dumps(
                {
                    "command": "classify-ctmc",
                    "seed": 3,
                    "parameters": {"graph": "star:4", "alpha": -1, "beta": 0.4},
                }
            ),
            encoding="utf-8",
        )
        self.assertEqual(
            self.call("run_experiment", config=str(path))["verdict"], Verdict.POSITIVE_RECURRENT
        )
        overridden = self.call("run_experiment", config=str(path), beta="0.6")
        self.assertEqual(overridden["verdict"], Verdict.TRANSIENT_EXPLOSIVITY_UNKNOWN)
        self.assertTrue((self.root / "classify-ctmc-3" / "classification.json").exists())

    def test_config_file_errors(self):
        self.assertEqual(self.call_failing("run_experiment").returncode, 2)
        self.assertEqual(self.call_failing("run_experiment", config=str(self.root / "none.json")).returncode, 2)
        path = self.root / "unknown.json"
        path.write_text(json.dumps({"command": "plot", "parameters": {}}), encoding="utf-8")
        self.assertEqual(self.call_failing("run_experiment", config=str(path)).returncode, 2)


class SimulationCommandTests(BaseExperimentTests):
    """
    Тесты команд симуляции и их артефактов.
    """

    def test_csa_clustered_sample(self):
        self.call("simulate_csa", radius="0.01", beta="1,1000,10000", points="1000", seed=1)
        path = self.root / "simulate-csa-1" / "points.csv"
        points = read_points_csv(path)
        self.assertEqual(points.shape, (1000, 2))
        counts = prior_neighbour_counts(PointSeq(points, Domain.unit_cube(2)), 0.01)
        self.assertLessEqual(counts.max(), 2)
        with open(path, encoding="utf-8") as handle:
            header = json.loads(handle.readline()[2:])
        self.assertEqual(header["config"]["points"], 1000)

    def test_fit_from_simulated_points(self):
        self.call("simulate_csa", radius="0.05", beta="1,5", points="200", seed=2)
        points = self.root / "simulate-csa-2" / "points.csv"
        report = self.call("fit_csa", input=str(points), radius="0.05", mc_samples="500", seed=2)
        self.assertEqual(report["N_hat"], 1)
        payload = self.read_json(self.root / "fit-csa-2" / "fit.json")
        for key in ("R", "N_hat", "beta_hat", "residuals", "t", "gamma_mc_se", "seed", "mc_n"):
            self.assertIn(key, payload)
        self.assertLessEqual(abs(payload["residuals"][0]), 1e-6)

    def test_fit_missing_input(self):
        error = self.call_failing("fit_csa", input=str(self.root / "missing.csv"), radius="0.05")
        self.assertEqual(error.returncode, 2)
        self.assertIn("input", json.loads(str(error))["context"]["detail"])
        run = ExperimentRun.objects.get()
        self.assertEqual(run.status, ExperimentRun.FAILED)
        self.assertIsNotNone(run.finished_at)

    def test_growth_and_min_rule(self):
        self.call("simulate_growth", graph="path:3", alpha="1", beta="1", steps="2000", thin="10", seed=4)
        trajectory = self.read_table(self.root / "simulate-growth-4" / "trajectory.csv")
        self.assertEqual(list(trajectory.columns), ["step", "v_0", "v_1", "v_2"])
        self.assertEqual(trajectory["step"].iloc[-1], 2000)
        self.assertIn("final_set", self.read_json(self.root / "simulate-growth-4" / "localisation.json"))

        tail = self.call("simulate_min_rule", m="4", steps="2000", seed=4)
        self.assertIn("non_adjacent", tail)
        self.assertTrue((self.root / "simulate-min-rule-4" / "trajectory.csv").exists())

    def test_ctmc_trajectory(self):
        report = self.call(
            "simulate_ctmc", graph="star:4", alpha="-1", beta="0.4", t_max="50", seed=5
        )
        self.assertEqual(report["outcome"], "CompletedHorizon")
        trajectory = self.read_table(self.root / "simulate-ctmc-5" / "trajectory.csv")
        self.assertEqual(list(trajectory.columns), ["t", "x_0", "x_1", "x_2", "x_3", "x_4"])

    def test_stationary_law(self):
        report = self.call("stationary_finite", graph="path:2", alpha="-1", beta="0.5", cap="2")
        self.assertLessEqual(report["total_variation"], 1e-10)
        table = self.read_table(self.root / "stationary-finite-20240717" / "stationary.csv")
        self.assertEqual(len(table), 9)
        self.assertAlmostEqual(table["probability"].sum(), 1.0)

    def test_point_process_sidecar(self):
        self.call("sample_pp", rule="strauss:50,0.5", radius="0.05", moves="2e3", seed=6)
        sidecar = self.read_json(self.root / "sample-pp-6" / "sample.json")
        for key in ("rule", "params", "n_moves", "seed", "acceptance_rates"):
            self.assertIn(key, sidecar)
        self.assertEqual(sidecar["n_moves"], 2000)
        points = read_points_csv(self.root / "sample-pp-6" / "points.csv")
        self.assertEqual(points.shape[0], sidecar["n_points"])

    def test_bad_count_is_config_error(self):
        error = self.call_failing("sample_pp", rule="strauss:50,0.5", radius="0.05", moves="2.5")
        self.assertEqual(error.returncode, 2)

    def test_same_seed_same_bytes(self):
        for name, options in (
            ("simulate_ctmc", {"graph": "cycle:4", "alpha": "-0.5", "beta": "0.2", "t_max": "20"}),
            ("sample_pp", {"rule": "table:40,10", "radius": "0.1", "moves": "500"}),
            ("simulate_growth", {"graph": "cycle:5", "alpha": "1", "beta": "0.5", "steps": "500"}),
        ):
            first, second = self.root / f"{name}-a", self.root / f"{name}-b"
            self.call(name, seed=7, output=str(first), **options)
            self.call(name, seed=7, output=str(second), **options)
            self.assert_same_files(first, second)


class SweepCommandTests(BaseExperimentTests):
    """
    Тесты сетки классификации.
    """

    def test_star_phase_boundary(self):
        self.call("sweep", graph="star:4", alphas="-2:-0.5:4", betas="0:2:9")
        table = self.read_table(self.root / "sweep-20240717" / "sweep.csv")
        self.assertEqual(len(table), 36)
        for row in table.itertuples():
            recurrent = row.verdict == Verdict.POSITIVE_RECURRENT
            self.assertEqual(recurrent, row.beta < -row.alpha / 2, msg=f"α={row.alpha}, β={row.beta}")
        independent = table[table["beta"] == 0]
        self.assertTrue((independent["case"] == "independent-alpha-negative").all())

    def test_empty_grid(self):
        self.call("sweep", graph="star:4", alphas="", betas="0,1")
        path = self.root / "sweep-20240717" / "sweep.csv"
        lines = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(len(lines), 2)
        self.assertTrue(lines[0].startswith("# "))
        self.assertEqual(lines[1], ",".join(CLASSIFY_COLUMNS))

    def test_parallel_matches_serial(self):
        options = {
            "graph": "path:3",
            "alphas": "-1,0",
            "betas": "-0.5,0.3",
            "simulate": "true",
            "t_max": "5",
            "event_cap": "10000",
        }
        serial, parallel = self.root / "serial", self.root / "parallel"
        self.call("sweep", seed=8, output=str(serial), workers=1, **options)
        self.call("sweep", seed=8, output=str(parallel), workers=2, **options)
        self.assert_same_files(serial, parallel)
        table = self.read_table(serial / "sweep.csv")
        self.assertIn("outcome", table.columns)
