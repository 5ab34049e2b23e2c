import csv
import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

SMALL = """\
grid.n_modes = 64
regularity.ell = 2
data.preset = analytic-bump
sweep.epsilons = {epsilons}
solver.dt = 5e-3
output.dir = {out}
"""


class CommandTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.out = Path(self.tmp.name) / "out"

    def experiment(self, epsilons="0.2", extra=""):
        path = Path(self.tmp.name) / "experiment.env"
        path.write_text(SMALL.format(epsilons=epsilons, out=self.out) + extra, encoding="utf-8")
        return str(path)

    def call(self, name, **options):
        stdout = StringIO()
        call_command(name, stdout=stdout, stderr=StringIO(), **options)
        return stdout.getvalue()

    def test_norms_prints_json(self):
        output = self.call("norms", config=self.experiment(), field="a0")
        summary = json.loads(output)
        self.assertIn("sobolev", summary)
        self.assertGreater(summary["analyticity_width"], 0.25)

    def test_missing_file(self):
        with self.assertRaisesMessage(CommandError, "ConfigError"):
            self.call("norms", config=str(Path(self.tmp.name) / "nowhere.env"), field="a0")

    def test_unknown_key(self):
        with self.assertRaisesMessage(CommandError, "unknown key"):
            self.call("validate", config=self.experiment(extra="solver.order = 4\n"))

    def test_sweep_writes_reports(self):
        """One eps: no rate can be fitted, the structural checks still run and pass."""
        output = self.call("sweep", config=self.experiment(), formats=["csv", "json"])
        self.assertIn("insufficient data", output)
        with open(self.out / "convergence.csv", encoding="utf-8") as handle:
            rows = list(csv.DictReader(handle))
        self.assertEqual(len(rows), 1)
        self.assertEqual(float(rows[0]["epsilon"]), 0.2)
        report = json.loads((self.out / "convergence.json").read_text(encoding="utf-8"))
        self.assertTrue(all(check["pass"] for check in report["checks"]))

    def test_sweep_out_overrides_output_dir(self):
        other = Path(self.tmp.name) / "elsewhere"
        self.call("sweep", config=self.experiment(), formats=["json"], out=str(other))
        self.assertTrue((other / "convergence.json").exists())
        self.assertFalse((self.out / "convergence.csv").exists())

    def test_sweep_failed_run_exits_nonzero(self):
        with self.assertRaises(CommandError) as caught:
            self.call("sweep", config=self.experiment(epsilons="0.2, 0.01"), formats=["json"])
        self.assertEqual(caught.exception.returncode, 1)
        self.assertIn("runs_completed", str(caught.exception))
        report = json.loads((self.out / "convergence.json").read_text(encoding="utf-8"))
        self.assertTrue(any("excluded" in flag for flag in report["flags"]))

    def test_solve_writes_row_and_trajectories(self):
        output = self.call("solve", config=self.experiment(), epsilon=0.2)
        self.assertIn("eps=0.2", output)
        document = json.loads((self.out / "solve_eps0.2.json").read_text(encoding="utf-8"))
        self.assertIsNone(document["row"]["failure"])
        self.assertTrue(document["config_hash"].startswith("sha256:"))
        with np.load(self.out / "solve_eps0.2.npz") as arrays:
            samples = len(arrays["times"])
            self.assertEqual(arrays["u"].shape, (samples, 64))
            self.assertEqual(arrays["phi"].shape, arrays["phi_limit"].shape)

    def test_solve_unresolved_epsilon(self):
        with self.assertRaises(CommandError) as caught:
            self.call("solve", config=self.experiment(), epsilon=0.01)
        self.assertEqual(caught.exception.returncode, 1)
        document = json.loads((self.out / "solve_eps0.01.json").read_text(encoding="utf-8"))
        self.assertIn("ResolutionError", document["row"]["failure"])
