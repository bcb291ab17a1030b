"""Evaluate a scenario on its grid and collect the observables into a table.

Every grid point is evaluated independently and in grid order, so a given
scenario always produces the same numbers. Points where an observable is
undefined (stationary signal, zero resources, infinite LO for numeric
moments) are recorded as undefined instead of aborting the sweep.
"""
import math

import numpy as np

from .. import __version__
from ..circuits import CircuitPreset, build
from ..detection import (
    SensitivityPoint,
    central_difference,
    heisenberg_limit,
    intensity_signal_closed,
    ono_sensitivity,
    ono_sensitivity_infinite_lo,
    parity_closed,
    parity_numeric,
    parity_sensitivity,
    qcrb,
    shot_noise_limit,
    split_photons,
)
from ..errors import DomainError, NumericalError, StationaryPointError, UsageError
from ..gaussian import intensity_difference_moments
from .table import SweepTable

_UNDEFINED = (DomainError, StationaryPointError, NumericalError, ZeroDivisionError,
              OverflowError, ValueError)


def _safe(fn, *args):
    try:
        return fn(*args)
    except _UNDEFINED:
        return None


def resolve(scenario, point):
    """Full parameter set at one grid point, with ``(n_in, eta)`` mapped to ``(n_c, n_s)``."""
    params = {**CircuitPreset.DEFAULTS[scenario.preset], **scenario.parameters}
    params.update(point)
    if "eta" in params:
        n_c, n_s = split_photons(params["n_in"], params.pop("eta"))
        params["n_c"], params["n_s"] = n_c, n_s
    return params


def _preset(name, params, **override):
    keys = CircuitPreset.DEFAULTS[name]
    return CircuitPreset(name, {k: v for k, v in {**params, **override}.items() if k in keys})


def _budget(p):
    # keep the declared n_in so the product columns recompute exactly from it
    n_in = p.get("n_in", p["n_c"] + p["n_s"])
    n_lo = p.get("n_lo", 0.0)
    return n_in, n_in + n_lo


def _products(row, p, accounting):
    n_in, n_t = _budget(p)
    dphi = row.get("delta_phi")
    n_ref = n_in if accounting == "n_in" else n_t
    row["heisenberg_limit"] = _safe(heisenberg_limit, n_ref)
    row["shot_noise_limit"] = _safe(shot_noise_limit, n_ref)
    row["delta_phi_x_n_in"] = None if dphi is None else dphi * n_in
    row["delta_phi_x_sqrt_n_t"] = None if dphi is None else dphi * math.sqrt(n_t)
    return row


def _parity_row(p, numeric):
    n_c, n_s, phi_c, phi = p["n_c"], p["n_s"], p["phi_c"], p["phi"]
    row = {"signal": _safe(parity_closed, n_c, n_s, phi_c, phi)}
    if numeric:
        circ = build(_preset("parity_mzi", p))
        row["signal_numeric"] = parity_numeric(circ.output(), circ.detection_modes[0])
    point = _safe(parity_sensitivity, n_c, n_s, phi_c, phi)
    row["delta_phi"] = None if point is None else point.delta_phi
    row["qcrb"] = _safe(qcrb, n_c, n_s)
    return row


def _at_canonical_point(p):
    return (math.remainder(p["phi"] - math.pi, 2 * math.pi) == 0.0 and p["phi_c"] == 0.0
            and p["phi_lo"] == math.pi / 2 and p["control_phase"] == 0.0)


def _ono_closed(p):
    if math.isinf(p["n_lo"]):
        return ono_sensitivity_infinite_lo(p["n_c"], p["n_s"])
    return ono_sensitivity(p["n_c"], p["n_s"], p["n_lo"])


def ono_moments(p, phi=None):
    """Mean and variance of the detected photon-number difference."""
    pre = _preset("ono_hofmann", p, **({} if phi is None else {"phi": phi}))
    circ = build(pre)
    return intensity_difference_moments(circ.output(), *circ.detection_modes)


def _ono_numeric_delta_phi(p, mean, var):
    slope = central_difference(lambda x: ono_moments(p, x)[0], p["phi"])
    return SensitivityPoint.from_moments(p["phi"], mean, slope, var).delta_phi


def _intensity_row(p, numeric):
    n_c, n_s, n_lo = p["n_c"], p["n_s"], p["n_lo"]
    finite_lo = math.isfinite(n_lo)
    row = {"signal": _safe(intensity_signal_closed, n_c, n_s, p["phi_c"], p["phi"], n_lo, p["phi_lo"])
           if finite_lo else None}
    if numeric:
        mean = var = dphi = None
        if finite_lo:
            mean, var = ono_moments(p)
            dphi = _safe(_ono_numeric_delta_phi, p, mean, var)
        row.update(signal_numeric=mean, variance_numeric=var, delta_phi_numeric=dphi)
    closed = _safe(_ono_closed, p) if _at_canonical_point(p) else None
    row["delta_phi_closed"] = closed
    row["delta_phi"] = closed if closed is not None else row.get("delta_phi_numeric")
    row["qcrb"] = _safe(qcrb, n_c, n_s)
    return row


def conventional_signal(phi):
    """Normalised coherent-light fringe ``(n_b - n_a) / (n_a + n_b) = cos(phi)``."""
    return math.cos(phi)


def _conventional_row(p, numeric):
    # all input photons treated as coherent light
    n = p.get("n_in", p["n_c"] + p["n_s"])
    phi = p["phi"]
    row = {"signal": conventional_signal(phi)}
    if numeric:
        circ = build(CircuitPreset("parity_mzi", {"n_c": n, "phi": phi, "phi_c": p["phi_c"]}))
        mean, _ = intensity_difference_moments(circ.output(), 1, 0)
        row["signal_numeric"] = mean / n if n > 0 else None
    s = abs(math.sin(phi))
    row["delta_phi"] = 1 / (math.sqrt(n) * s) if n > 0 and s > 0 else None
    return row


_ROWS = {"parity": _parity_row, "intensity_difference": _intensity_row,
         "conventional_fringe": _conventional_row}


def run(scenario, numeric=None):
    """Evaluate ``scenario`` over its grid.

    Args:
        scenario: a validated :class:`~paritymzi.experiments.scenario.Scenario`.
        numeric: override ``scenario.numeric`` (whether to add the
            Gaussian-simulation ``*_numeric`` columns).

    Returns:
        SweepTable whose metadata echoes the scenario and the library version.
    """
    numeric = scenario.numeric if numeric is None else numeric
    names = [var for var, _ in scenario.axes]
    grids = [values for _, values in scenario.axes]
    row_fn = _ROWS[scenario.detection]
    columns = {}
    n_points = math.prod(len(g) for g in grids)
    for k, idx in enumerate(np.ndindex(*[len(g) for g in grids])):
        point = {n: float(g[i]) for n, g, i in zip(names, grids, idx)}
        try:
            p = resolve(scenario, point)
        except DomainError:
            row = {}
        else:
            row = _products(row_fn(p, numeric), p, scenario.resource_accounting)
        for name, value in row.items():
            columns.setdefault(name, [None] * n_points)[k] = value
    if not columns:
        raise UsageError("no grid point could be evaluated")
    metadata = {"scenario": scenario.to_dict(), "version": __version__, "numeric": bool(numeric)}
    return SweepTable(names, grids, columns, metadata)

