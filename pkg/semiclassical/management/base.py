import logging

from django.core.management.base import BaseCommand, CommandError

from ..exceptions import WKBError
from ..forms import load_config

logger = logging.getLogger(__name__)


class ExperimentCommand(BaseCommand):
    """Command reading one experiment file; library errors become CommandError."""

    def add_arguments(self, parser):
        parser.add_argument("--config", required=True, help="experiment file (key = value lines)")

    def handle(self, *args, **options):
        try:
            config = load_config(options.pop("config"))
            return self.run(config, **options)
        except WKBError as exc:
            logger.error("%s: %s", type(exc).__name__, exc)
            raise CommandError(f"{type(exc).__name__}: {exc}") from exc

    def run(self, config, **options):
        raise NotImplementedError

    def report_checks(self, checks):
        failures = [check for check in checks if not check.passed]
        for check in checks:
            style = self.style.SUCCESS if check.passed else self.style.ERROR
            status = "pass" if check.passed else "FAIL"
            self.stdout.write(style(f"{status:4} {check.name}: {check.value} (threshold {check.threshold}) {check.detail}"))
        if failures:
            names = ", ".join(check.name for check in failures)
            raise CommandError(f"{len(failures)} check(s) failed: {names}", returncode=1)
