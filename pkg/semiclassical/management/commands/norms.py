import json

from django.core.serializers.json import DjangoJSONEncoder

from ...forms import DATA_FIELDS
from ...harness import field_norms
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Print Sobolev and analytic norms of one initial field."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--field", choices=DATA_FIELDS, required=True)

    def run(self, config, **options):
        summary = field_norms(config, options["field"])
        self.stdout.write(json.dumps(summary, cls=DjangoJSONEncoder, indent=2))
