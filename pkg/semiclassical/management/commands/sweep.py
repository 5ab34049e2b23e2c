from pathlib import Path

from django.conf import settings

from ...harness import run_sweep
from ...reports import FORMATS, emit_report
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Run the eps-sweep, fit convergence rates and write the convergence report."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--out", help="output directory (default: output.dir of the experiment)")
        parser.add_argument("--format", nargs="+", choices=FORMATS, default=list(FORMATS), dest="formats")
        parser.add_argument("--workers", type=int, default=settings.WKB_SWEEP_WORKERS)

    def run(self, config, **options):
        out = Path(options["out"] or config.output_dir)
        report = run_sweep(config, workers=options["workers"])
        for fmt in options["formats"]:
            path = emit_report(report, fmt, out)
            self.stdout.write(f"wrote {path}")
        for name, fit in report.slopes.items():
            if fit.usable:
                self.stdout.write(f"{name:13} slope {fit.slope:6.3f}  residual {fit.residual:.3f}")
            else:
                self.stdout.write(f"{name:13} {fit.status}")
        for flag in report.flags:
            self.stdout.write(self.style.WARNING(flag))
        self.report_checks(report.checks)
