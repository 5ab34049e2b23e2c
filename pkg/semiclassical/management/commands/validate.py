from pathlib import Path

from ...harness import validate
from ...reports import write_json
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Run the named consistency checks of the solvers and the norm machinery."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--out", help="write validation.json to this directory")

    def run(self, config, **options):
        report = validate(config)
        if options["out"]:
            path = write_json(report.as_dict(), Path(options["out"]) / "validation.json")
            self.stdout.write(f"wrote {path}")
        self.report_checks(report.checks)
