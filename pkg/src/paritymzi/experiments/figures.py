"""Named scenarios that regenerate the data behind each published figure.

A figure may hold several curves sharing one grid; their columns are merged
into a single table as ``<label>:<column>``.
"""
import math

from .. import __version__
from ..errors import UsageError
from .engine import run
from .scenario import Scenario, SweepAxis
from .table import SweepTable

N_IN = 10.0
N_LO = 100.0
POINTS_1D = 401
POINTS_2D = 101

_PHI = SweepAxis("phi", -math.pi, math.pi, POINTS_1D)
_ETAS = (("eta0", 0.0), ("eta1", 1.0), ("eta0.5", 0.5))


def _parity_curves(columns):
    curves = [
        (label, Scenario("parity_mzi", {"n_in": N_IN, "eta": eta, "phi_c": 0.0}, "parity",
                         (_PHI,), label=label), columns)
        for label, eta in _ETAS
    ]
    return curves


def _figure2():
    curves = _parity_curves(("signal", "signal_numeric"))
    conv = Scenario("parity_mzi", {"n_c": N_IN}, "conventional_fringe", (_PHI,), label="conventional")
    curves.append(("conventional", conv, ("signal", "signal_numeric")))
    return curves


def _figure3():
    return _parity_curves(("delta_phi", "delta_phi_x_n_in", "qcrb"))


def _figure4():
    sc = Scenario(
        "parity_mzi", {"n_in": N_IN, "phi": 0.0}, "parity",
        (SweepAxis("phi_c", -math.pi / 2, math.pi / 2, POINTS_2D), SweepAxis("eta", 0.0, 1.0, POINTS_2D)),
        label="contour", numeric=False,
    )
    return [("contour", sc, ("delta_phi", "delta_phi_x_n_in", "qcrb"))]


def _figure6():
    axis = SweepAxis("phi", 0.0, 2 * math.pi, POINTS_1D)
    return [
        (label, Scenario("ono_hofmann", {"n_in": N_IN, "eta": eta, "n_lo": N_LO, "phi_lo": math.pi / 2},
                         "intensity_difference", (axis,), label=label), ("signal", "signal_numeric"))
        for label, eta in _ETAS
    ]


def _ono_budget(label, axes, n_lo, columns, accounting="n_in"):
    params = {"phi": math.pi, "n_lo": n_lo, "phi_lo": math.pi / 2}
    if "n_in" not in [a.var for a in axes]:
        params["n_in"] = N_IN
    sc = Scenario("ono_hofmann", params, "intensity_difference", axes,
                  resource_accounting=accounting, label=label, numeric=False)
    return [(label, sc, columns)]


def _figure7():
    axis = SweepAxis("eta", 0.0, 1.0, POINTS_2D)
    return _ono_budget("infinite_lo", (axis,), math.inf, ("delta_phi", "qcrb"))


def _grid_n_in_eta():
    return (SweepAxis("n_in", 1.0, 10.0, POINTS_2D), SweepAxis("eta", 0.0, 1.0, POINTS_2D))


def _figure8():
    return _ono_budget("infinite_lo", _grid_n_in_eta(), math.inf, ("delta_phi", "delta_phi_x_n_in"))


def _figure9():
    return _ono_budget("lo100", _grid_n_in_eta(), N_LO,
                       ("delta_phi", "delta_phi_x_sqrt_n_t"), accounting="n_t")


FIGURES = {2: _figure2, 3: _figure3, 4: _figure4, 6: _figure6, 7: _figure7, 8: _figure8, 9: _figure9}


def figure_scenarios(number):
    """``[(label, scenario, columns), ...]`` for a figure number."""
    try:
        return FIGURES[int(number)]()
    except (KeyError, ValueError):
        raise UsageError(f"no preset for figure {number!r}; choose from {sorted(FIGURES)}") from None


def figure_table(number):
    """Run every curve of a figure and merge them into one table."""
    curves = figure_scenarios(number)
    columns, meta = {}, {}
    names = grids = None
    for label, sc, keep in curves:
        table = run(sc)
        if names is None:
            names, grids = table.axis_names, table.grids
        elif (table.axis_names, table.grids) != (names, grids):
            raise UsageError(f"curve {label!r} does not share the figure grid")
        for col in keep:
            columns[f"{label}:{col}"] = table.columns[col]
        meta[label] = sc.to_dict()
    return SweepTable(names, grids, columns,
                      {"figure": int(number), "curves": meta, "version": __version__})
