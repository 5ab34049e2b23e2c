"""
Convergence and validation reports and their CSV / JSON files.
"""

import csv
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from django.core.serializers.json import DjangoJSONEncoder
from django.utils import timezone
from django.utils.dateparse import parse_datetime

from .exceptions import ConfigError, ReportError

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "epsilon",
    "err_phi_leading",
    "err_a_leading",
    "err_phi_corrected",
    "err_a_corrected",
    "err_wf_L2",
    "err_wf_Linf",
    "err_rho_L1",
    "err_J_L1",
)
FORMATS = ("csv", "json")


def created_now():
    # millisecond precision survives a JSON round trip
    now = timezone.now()
    return now.replace(microsecond=now.microsecond // 1000 * 1000)


@dataclass
class SweepRow:
    """Errors of one eps run. Failed runs keep ``failure`` and no errors."""

    epsilon: float
    err_phi_leading: float = None
    err_a_leading: float = None
    err_phi_corrected: float = None
    err_a_corrected: float = None
    err_wf_L2: float = None
    err_wf_Linf: float = None
    err_rho_L1: float = None
    err_rho_Linf: float = None
    err_J_L1: float = None
    err_J_Linf: float = None
    err_wf_leading: float = None
    mass_drift: float = None
    r0: float = 0.0
    r1: float = 0.0
    a_priori_holds: bool = None
    density_bound_holds: bool = None
    failure: str = None

    @property
    def ok(self):
        return self.failure is None

    @property
    def leading(self):
        return self.err_phi_leading + self.err_a_leading

    @property
    def corrected(self):
        return self.err_phi_corrected + self.err_a_corrected

    @property
    def wavefunction(self):
        """L2 and Linf combined as max(L2, Linf)."""
        return max(self.err_wf_L2, self.err_wf_Linf)


@dataclass
class RateFit:
    slope: float = None
    intercept: float = None
    residual: float = None
    points: int = 0
    floored: bool = False
    status: str = "ok"

    @property
    def usable(self):
        return self.status == "ok"


@dataclass
class Check:
    name: str
    value: object
    threshold: object
    passed: bool
    detail: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "pass": bool(self.passed),
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data["name"], data["value"], data["threshold"], data["pass"], data.get("detail", ""))


@dataclass
class ConvergenceReport:
    config_hash: str
    grid: dict
    schedule: dict
    dt: float
    ell: float
    rows: list
    slopes: dict
    checks: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    created: object = field(default_factory=created_now)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda row: row.epsilon, reverse=True)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def as_dict(self):
        return {
            "config_hash": self.config_hash,
            "grid": dict(self.grid),
            "schedule": dict(self.schedule),
            "dt": self.dt,
            "ell": self.ell,
            "rows": [asdict(row) for row in self.rows],
            "slopes": {name: asdict(fit) for name, fit in self.slopes.items()},
            "checks": [check.as_dict() for check in self.checks],
            "flags": list(self.flags),
            "created": self.created,
        }

    @classmethod
    def from_dict(cls, data):
        row_names = {f.name for f in fields(SweepRow)}
        created = data.get("created")
        if isinstance(created, str):
            created = parse_datetime(created)
        return cls(
            config_hash=data["config_hash"],
            grid=data["grid"],
            schedule=data["schedule"],
            dt=data["dt"],
            ell=data["ell"],
            rows=[SweepRow(**{k: v for k, v in row.items() if k in row_names}) for row in data["rows"]],
            slopes={name: RateFit(**fit) for name, fit in data["slopes"].items()},
            checks=[Check.from_dict(check) for check in data.get("checks", [])],
            flags=list(data.get("flags", [])),
            created=created,
        )


@dataclass
class ValidationReport:
    config_hash: str
    checks: list
    created: object = field(default_factory=created_now)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failures(self):
        return [check for check in self.checks if not check.passed]

    def as_dict(self):
        return {
            "config_hash": self.config_hash,
            "checks": [check.as_dict() for check in self.checks],
            "passed": self.passed,
            "created": self.created,
        }


def _write(path, writer):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer(handle)
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc.strerror or exc}") from exc
    logger.info("wrote %s", path)
    return path


def write_json(document, path):
    return _write(
        Path(path),
        lambda handle: json.dump(document, handle, cls=DjangoJSONEncoder, indent=2, sort_keys=True),
    )


def write_csv(report, path):
    def writer(handle):
        out = csv.writer(handle)
        out.writerow(CSV_COLUMNS)
        for row in report.rows:
            values = asdict(row)
            out.writerow(["" if values[name] is None else repr(float(values[name])) for name in CSV_COLUMNS])

    return _write(Path(path), writer)


def emit_report(report, fmt="json", out_dir=None, stem="convergence"):
    """Write ``report`` as ``<stem>.csv`` or ``<stem>.json``; existing files are overwritten."""
    if fmt not in FORMATS:
        raise ConfigError(f"unsupported report format {fmt!r}; use csv or json", key="format")
    out_dir = Path(out_dir)
    if fmt == "csv":
        return write_csv(report, out_dir / f"{stem}.csv")
    return write_json(report.as_dict(), out_dir / f"{stem}.json")


def load_report(path):
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ReportError(f"cannot read report {path}: {exc}") from exc
    return ConvergenceReport.from_dict(data)
