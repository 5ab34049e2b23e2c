from ..forms import build_config


def make_config(**values):
    """Validated experiment on a small grid; keyword arguments are form field names."""
    defaults = {"n_modes": 32, "preset": "analytic-bump", "epsilons": [0.2, 0.1, 0.05], "dt": 5e-3}
    defaults.update(values)
    return build_config(defaults, source="test")
