from dataclasses import asdict
from pathlib import Path

import numpy as np
from django.core.management.base import CommandError

from ...harness import prepare, run_single
from ...reports import created_now, write_json
from ..base import ExperimentCommand


def _coefficients(trajectory, name):
    return np.array([getattr(state, name).coeffs for state in trajectory.states])


class Command(ExperimentCommand):
    help = "Solve the NLS and the phase/amplitude system at one epsilon and compare with the WKB approximation."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--epsilon", type=float, required=True)
        parser.add_argument("--out", help="output directory (default: output.dir of the experiment)")

    def run(self, config, **options):
        eps = options["epsilon"]
        config = config.with_overrides(epsilons=[eps])
        out = Path(options["out"] or config.output_dir)
        experiment = prepare(config)
        run = run_single(experiment, eps)
        row = run.row
        stem = f"solve_eps{eps:g}"
        schedule = experiment.schedule
        write_json(
            {
                "config_hash": config.config_hash,
                "schedule": {"w0": schedule.w0, "M": schedule.M, "T": schedule.T},
                "row": asdict(row),
                "created": created_now(),
            },
            out / f"{stem}.json",
        )
        if not row.ok:
            raise CommandError(f"eps={eps:g} failed: {row.failure}", returncode=1)
        np.savez(
            out / f"{stem}.npz",
            times=experiment.limit.times,
            phi=_coefficients(run.grenier, "phi"),
            a=_coefficients(run.grenier, "a"),
            phi_limit=_coefficients(experiment.limit, "phi"),
            a_limit=_coefficients(experiment.limit, "a"),
            phi1=_coefficients(experiment.corrector, "phi"),
            a1=_coefficients(experiment.corrector, "a"),
            u=_coefficients(run.truth, "u"),
        )
        self.stdout.write(
            self.style.SUCCESS(
                f"eps={eps:g}: leading {row.leading:.3e}, corrected {row.corrected:.3e}, "
                f"wave function {row.wavefunction:.3e}, mass drift {row.mass_drift:.1e}"
            )
        )
