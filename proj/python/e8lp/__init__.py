"""E8 lattice data, modular forms, the eight-dimensional magic function and
linear programming bounds for sphere packing."""

import json
from fractions import Fraction

from . import _core
from ._core import (
    ConfigError,
    Error,
    ball_volume,
    default_degree,
    e8_gram,
    eigenbasis_values,
    lp_bound,
    packing_density,
    record_density,
    table2_bound,
)

__all__ = [
    "ConfigError",
    "Error",
    "ball_volume",
    "characteristic_polynomial_e8",
    "default_degree",
    "e8_gram",
    "eigenbasis_values",
    "lp_bound",
    "magic_value",
    "packing_density",
    "record_density",
    "reference_tables",
    "run",
    "table2_bound",
    "theta_counts",
]


def run(command, action="", **options):
    """Run a harness job, e.g. run("lattice", "info", target="e8").

    Returns (exit_code, report) with the report as a dict."""
    config = dict(options, command=command, action=action)
    out = json.loads(_core.run_json(json.dumps(config)))
    return out["exit_code"], out["report"]


def theta_counts(name, max_norm):
    """{squared length: number of vectors} for e8 or zN."""
    return {Fraction(int(p), int(q)): c for p, q, c in _core.theta_counts(name, max_norm)}


def characteristic_polynomial_e8():
    """Coefficients of det(tI - G), leading coefficient first."""
    return [Fraction(int(p), int(q)) for p, q in _core.characteristic_polynomial_e8()]


def magic_value(r, hat=False, bits=200):
    """f(r) or its Fourier transform as (float value, decimal string, error estimate)."""
    value, err = _core.magic_value(str(r), hat, bits)
    return float(value), value, float(err)


def reference_tables():
    """Embedded record densities and LP bounds for dimensions 1..36."""
    doc = json.loads(_core.reference_tables())
    return {
        "table1": {n: float(text) for n, text in doc["table1"]},
        "table2": {n: float(text) for n, text in doc["table2"]},
        "checksum": doc["checksum"],
    }
