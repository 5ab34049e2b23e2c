import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from decouple import Config, Csv, RepositoryEnv
from django import forms
from django.conf import settings

from .exceptions import ConfigError
from .nonlinearity import NonlinearitySpec
from .spectral import make_grid

logger = logging.getLogger(__name__)

PRESETS = ("analytic-bump", "constant")
DATA_FIELDS = ("phi0", "a0", "phi10", "a10")

# dotted file key -> form field
KEYS = {
    "grid.n_modes": "n_modes",
    "grid.length": "length",
    "regularity.ell": "ell",
    "weight.w0": "w0",
    "weight.M": "M",
    "weight.T": "T",
    "nonlinearity.alpha": "alpha",
    "nonlinearity.gamma": "gamma",
    "nonlinearity.lambda": "lam",
    "nonlinearity.sigma": "sigma",
    "data.preset": "preset",
    "data.phi0": "phi0",
    "data.a0": "a0",
    "data.phi10": "phi10",
    "data.a10": "a10",
    "data.perturbation": "perturbation",
    "sweep.epsilons": "epsilons",
    "solver.dt": "dt",
    "output.dir": "output_dir",
}
FIELD_KEYS = {name: key for key, name in KEYS.items()}

CASTS = {
    "grid.n_modes": int,
    "grid.length": float,
    "regularity.ell": float,
    "weight.w0": float,
    "weight.M": float,
    "weight.T": float,
    "nonlinearity.alpha": float,
    "nonlinearity.gamma": int,
    "nonlinearity.lambda": float,
    "nonlinearity.sigma": int,
    "data.preset": str,
    "data.phi0": json.loads,
    "data.a0": json.loads,
    "data.phi10": json.loads,
    "data.a10": json.loads,
    "data.perturbation": json.loads,
    "sweep.epsilons": Csv(cast=float),
    "solver.dt": float,
    "output.dir": str,
}


class ExperimentFileRepository(RepositoryEnv):
    """``key = value`` experiment file; malformed lines and unknown keys are errors."""

    def __init__(self, source, encoding="utf-8"):
        self.source = str(source)
        self.data = {}
        self.lines = {}
        try:
            with open(source, encoding=encoding) as file_:
                content = file_.readlines()
        except OSError as exc:
            raise ConfigError(f"cannot read {source}: {exc.strerror}") from exc

        for number, raw in enumerate(content, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError("expected 'key = value'", line=number)
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in KEYS:
                raise ConfigError("unknown key", key=key, line=number)
            if key in self.data:
                raise ConfigError(f"duplicate key, first set on line {self.lines[key]}", key=key, line=number)
            if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
                value = value[1:-1]
            self.data[key] = value
            self.lines[key] = number


def _coefficient_list(value):
    if value is None:
        return None
    if not isinstance(value, list) or not value:
        raise forms.ValidationError("expected a non-empty list of [index, re, im] triples")
    triples = []
    for entry in value:
        if not (isinstance(entry, list) and len(entry) == 3):
            raise forms.ValidationError(f"malformed entry {entry!r}; expected [index, re, im]")
        index, re, im = entry
        if isinstance(index, bool) or not isinstance(index, int):
            raise forms.ValidationError(f"mode index must be an integer, got {index!r}")
        if not all(isinstance(x, (int, float)) and math.isfinite(x) for x in (re, im)):
            raise forms.ValidationError(f"coefficient of mode {index} must be two finite numbers")
        triples.append((index, float(re), float(im)))
    return tuple(triples)


class ExperimentConfigForm(forms.Form):
    n_modes = forms.IntegerField(min_value=8)
    length = forms.FloatField(required=False)
    ell = forms.FloatField(required=False)
    w0 = forms.FloatField(required=False)
    M = forms.FloatField(required=False)
    T = forms.FloatField(required=False)
    alpha = forms.FloatField(required=False)
    gamma = forms.IntegerField(required=False, min_value=1)
    lam = forms.FloatField(required=False)
    sigma = forms.IntegerField(required=False, min_value=1)
    preset = forms.CharField(required=False)
    phi0 = forms.JSONField(required=False)
    a0 = forms.JSONField(required=False)
    phi10 = forms.JSONField(required=False)
    a10 = forms.JSONField(required=False)
    perturbation = forms.JSONField(required=False)
    epsilons = forms.JSONField(required=False)
    dt = forms.FloatField(required=False)
    output_dir = forms.CharField(required=False)

    def clean_n_modes(self):
        n_modes = self.cleaned_data["n_modes"]
        if n_modes % 2:
            raise forms.ValidationError("must be even")
        return n_modes

    def clean_length(self):
        length = self.cleaned_data.get("length")
        if length is None:
            return settings.WKB_DEFAULT_LENGTH
        if not length > 0:
            raise forms.ValidationError("must be positive")
        return length

    def clean_ell(self):
        ell = self.cleaned_data.get("ell")
        if ell is None:
            return settings.WKB_DEFAULT_ELL
        if not ell > 1:
            raise forms.ValidationError("must exceed 1")
        return ell

    def clean_w0(self):
        w0 = self.cleaned_data.get("w0")
        if w0 is None:
            return settings.WKB_DEFAULT_W0
        if not w0 > 0:
            raise forms.ValidationError("must be positive")
        return w0

    def clean_preset(self):
        preset = self.cleaned_data.get("preset") or None
        if preset is not None and preset not in PRESETS:
            raise forms.ValidationError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        return preset

    def clean_phi0(self):
        return _coefficient_list(self.cleaned_data.get("phi0"))

    def clean_a0(self):
        return _coefficient_list(self.cleaned_data.get("a0"))

    def clean_phi10(self):
        return _coefficient_list(self.cleaned_data.get("phi10"))

    def clean_a10(self):
        return _coefficient_list(self.cleaned_data.get("a10"))

    def clean_perturbation(self):
        value = self.cleaned_data.get("perturbation")
        if value is None:
            return ()
        if value and not isinstance(value[0], list):
            value = [value]
        entries = []
        for entry in value:
            if not (isinstance(entry, list) and len(entry) == 5):
                raise forms.ValidationError(f"malformed entry {entry!r}; expected [field, index, re, im, power]")
            name, index, re, im, power = entry
            if name not in ("phi0", "a0"):
                raise forms.ValidationError(f"perturbations apply to phi0 or a0, not {name!r}")
            if isinstance(index, bool) or not isinstance(index, int):
                raise forms.ValidationError(f"mode index must be an integer, got {index!r}")
            if not power > 0:
                raise forms.ValidationError("power must be positive")
            entries.append((name, index, float(re), float(im), float(power)))
        return tuple(entries)

    def clean_epsilons(self):
        value = self.cleaned_data.get("epsilons")
        if not value:
            return tuple(settings.WKB_DEFAULT_EPSILONS)
        for eps in value:
            if not 0 < eps <= 1:
                raise forms.ValidationError(f"epsilon {eps} outside (0, 1]")
        if any(b >= a for a, b in zip(value, value[1:])):
            raise forms.ValidationError("must be strictly decreasing")
        return tuple(float(eps) for eps in value)

    def clean_dt(self):
        dt = self.cleaned_data.get("dt")
        if dt is None:
            return settings.WKB_DEFAULT_DT
        if not dt > 0:
            raise forms.ValidationError("must be positive")
        return dt

    def clean(self):
        cleaned = super().clean()
        explicit = [name for name in DATA_FIELDS if cleaned.get(name)]
        if cleaned.get("preset") and explicit:
            raise forms.ValidationError(
                {"preset": "give either a preset or explicit coefficients, not both"}
            )
        if explicit and not (cleaned.get("phi0") and cleaned.get("a0")):
            raise forms.ValidationError({"a0": "explicit data needs both data.phi0 and data.a0"})
        if not explicit and not cleaned.get("preset"):
            cleaned["preset"] = settings.WKB_DEFAULT_PRESET

        n_modes = cleaned.get("n_modes")
        if n_modes:
            band = n_modes // 3
            for name in DATA_FIELDS:
                for index, _, _ in cleaned.get(name) or ():
                    if abs(index) > band:
                        raise forms.ValidationError({name: f"mode {index} outside the 2/3 band |j| <= {band}"})
            for name, index, *_ in cleaned.get("perturbation") or ():
                if abs(index) > band:
                    raise forms.ValidationError(
                        {"perturbation": f"mode {index} outside the 2/3 band |j| <= {band}"}
                    )

        M, T, w0 = cleaned.get("M"), cleaned.get("T"), cleaned.get("w0")
        if T is not None and M is None:
            raise forms.ValidationError({"T": "weight.T needs weight.M"})
        if M is not None and w0:
            if not M > 0:
                raise forms.ValidationError({"M": "must be positive"})
            if T is None:
                cleaned["T"] = 0.9 * w0 / M
            elif not 0 < T < w0 / M:
                raise forms.ValidationError({"T": f"must lie in (0, w0/M) = (0, {w0 / M:g})"})
        return cleaned


@dataclass(frozen=True)
class ExperimentConfig:
    n_modes: int
    length: float = 2 * math.pi
    ell: float = 2.0
    w0: float = 1.0
    M: float = None
    T: float = None
    alpha: float = 1.0
    gamma: int = 1
    lam: float = 1.0
    sigma: int = 1
    preset: str = None
    phi0: tuple = None
    a0: tuple = None
    phi10: tuple = None
    a10: tuple = None
    perturbation: tuple = ()
    epsilons: tuple = (0.2, 0.1, 0.05, 0.025, 0.0125)
    dt: float = 1e-3
    output_dir: str = None
    source: str = field(default=None, compare=False)

    @property
    def grid(self):
        return make_grid(self.n_modes, self.length)

    @property
    def nonlinearity(self):
        return NonlinearitySpec(alpha=self.alpha, gamma=self.gamma, lam=self.lam, sigma=self.sigma)

    @property
    def schedule_override(self):
        return self.M is not None

    def canonical(self):
        """Every parameter that affects results, as JSON-ready data."""
        data = asdict(self)
        data.pop("source")
        data.pop("output_dir")
        return data

    @property
    def config_hash(self):
        payload = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return "sha256:" + hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def with_overrides(self, **changes):
        data = json.loads(json.dumps(asdict(self)))
        data.update(changes)
        return build_config(data, source=self.source)


def build_config(values, source=None):
    """Validate a dict keyed by form field names."""
    form = ExperimentConfigForm(data=values)
    if not form.is_valid():
        name, errors = next(iter(form.errors.items()))
        key = FIELD_KEYS.get(name, name)
        raise ConfigError(errors[0], key=key)
    cleaned = dict(form.cleaned_data)
    if not cleaned.get("output_dir"):
        cleaned["output_dir"] = str(settings.WKB_OUTPUT_DIR)
    for name in ("alpha", "lam"):
        if cleaned.get(name) is None:
            cleaned[name] = 1.0
    for name in ("gamma", "sigma"):
        if cleaned.get(name) is None:
            cleaned[name] = 1
    return ExperimentConfig(source=source, **cleaned)


def load_config(path):
    """Read, type and validate an experiment file.

    Environment variables named like a dotted key override the file value.
    """
    repository = ExperimentFileRepository(path)
    reader = Config(repository)
    values = {}
    for key, name in KEYS.items():
        try:
            values[name] = reader(key, default=None, cast=_optional(CASTS[key]))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"cannot parse value: {exc}", key=key, line=repository.lines.get(key)) from exc
    try:
        config = build_config(values, source=str(path))
    except ConfigError as exc:
        if exc.key in repository.lines:
            raise ConfigError(exc.detail, key=exc.key, line=repository.lines[exc.key]) from exc
        raise
    logger.info("loaded experiment %s (%s)", Path(path).name, config.config_hash[:19])
    return config


def _optional(cast):
    def apply(value):
        if value is None:
            return None
        return cast(value)

    return apply
