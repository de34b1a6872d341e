"""Python front end for the ISP / content-provider pricing game library.

Scenarios are plain dicts in the same shape as the CLI's JSON files:
``{"kind": ..., "params": {...}}``.
"""
import json

from . import _core
from ._core import SolverFailure, ValidationError

__all__ = [
    "SolverFailure",
    "ValidationError",
    "calibrate_smooth",
    "field",
    "integrate",
    "oracle",
    "profit",
    "reproduce",
    "solve",
    "sweep",
    "transit",
    "utilities",
    "verify",
]


def _text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def solve(scenario, mode="derived"):
    return json.loads(_core.solve(_text(scenario), mode))


def verify(scenario, p1, p2, grid_step=None, eps=None):
    return json.loads(_core.verify(_text(scenario), p1, p2, grid_step, eps))


def oracle(scenario, grid_step=None, eps=None):
    return json.loads(_core.oracle(_text(scenario), grid_step, eps))


def profit(scenario):
    return json.loads(_core.profit(_text(scenario)))


def transit(scenario):
    return json.loads(_core.transit(_text(scenario)))


def utilities(scenario, p1, p2):
    return _core.utilities(_text(scenario), p1, p2)


def integrate(scenario, init, mode, dt, t_max):
    """Rows of (t, p1, p2, U1, U2)."""
    return _core.integrate(_text(scenario), init[0], init[1], mode, dt, t_max)


def field(scenario, lo, hi, res):
    """Rows of (p1, p2, dU1/dp1, dU2/dp2), right-side partials."""
    return _core.field(_text(scenario), lo, hi, res)


def sweep(scenario, param, start, stop, step, mode="derived"):
    """CSV text with a header row."""
    return _core.sweep(_text(scenario), param, start, stop, step, mode)


def calibrate_smooth(D_max, D_theta, d_max, d_theta):
    """Returns (alpha, p_max)."""
    return _core.calibrate_smooth(D_max, D_theta, d_max, d_theta)


def reproduce(target):
    """Returns (ok, table_text)."""
    return _core.reproduce(target)
