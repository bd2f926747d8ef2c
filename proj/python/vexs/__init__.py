"""Variable-exponent nonlocal functionals."""

import json as _json

from ._core import (
    SCHEMA,
    ConfigError,
    DivergenceError,
    DomainError,
    ExponentField,
    QuadratureSpec,
    ScalarField,
    UnsupportedError,
    abs_power_sphere_integral,
    bbm,
    eps,
    hl_maximal,
    k_np,
    local_energy,
    luxemburg_norm,
    modular,
    nguyen,
)
from ._core import _run_scenario, _run_sweep

__all__ = [
    "SCHEMA",
    "ConfigError",
    "DivergenceError",
    "DomainError",
    "ExponentField",
    "QuadratureSpec",
    "ScalarField",
    "UnsupportedError",
    "abs_power_sphere_integral",
    "bbm",
    "eps",
    "hl_maximal",
    "k_np",
    "local_energy",
    "luxemburg_norm",
    "modular",
    "nguyen",
    "run_scenario",
    "run_sweep",
]


def run_sweep(kind, u, p, grid, quadrature=None):
    """Sweep a functional over a parameter grid; returns the report as a dict."""
    return _json.loads(_run_sweep(kind, u, p, list(grid), quadrature))


def run_scenario(scenario):
    """Run a scenario given as a dict or JSON text.

    Returns a dict with the decoded ``report``, the raw ``report_text``, the
    one-line ``summary`` and optional ``csv`` and ``plot`` text.
    """
    text = scenario if isinstance(scenario, str) else _json.dumps(scenario)
    out = _run_scenario(text)
    out["report_text"] = out["report"]
    out["report"] = _json.loads(out["report"])
    return out
