"""Declarative experiment descriptions and their flat key-value file format.

Grammar (one ``key = value`` per line, ``#`` starts a comment)::

    preset.name          parity_mzi | ono_hofmann
    preset.<param>       number expression; params: phi, phi_c, n_c, n_s
                         and for ono_hofmann n_lo, phi_lo, T, control_phase.
                         Alternatively n_in and eta (both required, no n_c/n_s).
                         n_lo may be inf; T may be none (exact LO displacement).
    detection            parity | intensity_difference | conventional_fringe
    sweep.<axis>.var     a preset parameter, eta or n_in
    sweep.<axis>.min     number expression
    sweep.<axis>.max     number expression
    sweep.<axis>.points  integer >= 2
    resource_accounting  n_in | n_t          (default n_in)
    output.format        csv | json          (default csv)
    output.path          file path           (optional)
    numeric              true | false        (default true; Gaussian-simulation columns)
    label                free text           (optional)

Axes are named ``x`` and optionally ``y``. Number expressions accept
arithmetic on literals and the names ``pi`` and ``inf``, e.g. ``-pi/2``.
"""
import ast
import math
import operator
from dataclasses import dataclass

import numpy as np

from ..circuits import CircuitPreset
from ..errors import UsageError

DETECTIONS = ("parity", "intensity_difference", "conventional_fringe")
ACCOUNTING = ("n_in", "n_t")
FORMATS = ("csv", "json")
AXIS_NAMES = ("x", "y")
DERIVED = ("n_in", "eta")

_NAMES = {"pi": math.pi, "inf": math.inf}
_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_number(text):
    """Evaluate a restricted arithmetic expression such as ``3*pi/4``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise UsageError(f"unsupported expression {text!r}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise UsageError(f"cannot parse number {text!r}") from None
    return ev(tree)


def grid(lo, hi, points):
    """Evenly spaced grid that hits both ends and the midpoint of symmetric ranges exactly."""
    i = np.arange(points)
    return (lo * (points - 1 - i) + hi * i) / (points - 1)


@dataclass(frozen=True)
class SweepAxis:
    var: str
    min: float
    max: float
    points: int

    def __post_init__(self):
        if int(self.points) != self.points or self.points < 2:
            raise UsageError(f"sweep over {self.var!r} needs at least 2 points, got {self.points!r}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise UsageError(f"sweep bounds for {self.var!r} must be finite")

    def values(self):
        return grid(self.min, self.max, int(self.points))


@dataclass(frozen=True)
class Scenario:
    preset: str
    parameters: dict
    detection: str
    sweep: tuple
    resource_accounting: str = "n_in"
    output_format: str = "csv"
    output_path: str = None
    label: str = ""
    numeric: bool = True

    def __post_init__(self):
        if self.detection not in DETECTIONS:
            raise UsageError(f"detection must be one of {DETECTIONS}, got {self.detection!r}")
        if self.resource_accounting not in ACCOUNTING:
            raise UsageError(f"resource_accounting must be one of {ACCOUNTING}")
        if self.output_format not in FORMATS:
            raise UsageError(f"output.format must be one of {FORMATS}")
        if not self.sweep:
            raise UsageError("scenario needs at least one sweep axis")
        allowed = set(CircuitPreset.DEFAULTS.get(self.preset, {})) | set(DERIVED)
        if self.preset not in CircuitPreset.NAMES:
            raise UsageError(f"unknown preset {self.preset!r}")
        unknown = set(self.parameters) - allowed
        if unknown:
            raise UsageError(f"unknown parameters for {self.preset}: {sorted(unknown)}")
        names = [a.var for a in self.sweep]
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate sweep variables {names}")
        for var in names:
            if var not in allowed:
                raise UsageError(f"cannot sweep {var!r}: not a parameter of {self.preset} or eta")
        both = set(self.parameters) | set(names)
        if both & set(DERIVED):
            if not set(DERIVED) <= both:
                raise UsageError("n_in and eta must be given together")
            if both & {"n_c", "n_s"}:
                raise UsageError("give either (n_c, n_s) or (n_in, eta), not both")
        if self.detection == "parity" and self.preset != "parity_mzi":
            raise UsageError("parity detection requires the parity_mzi preset")
        if self.detection == "intensity_difference" and self.preset != "ono_hofmann":
            raise UsageError("intensity_difference detection requires the ono_hofmann preset")

    @property
    def axes(self):
        return [(a.var, a.values()) for a in self.sweep]

    def to_dict(self):
        """Canonical flat key-value form (all values as strings)."""
        out = {"preset.name": self.preset}
        for k in sorted(self.parameters):
            out[f"preset.{k}"] = _fmt(self.parameters[k])
        out["detection"] = self.detection
        for name, a in zip(AXIS_NAMES, self.sweep):
            out[f"sweep.{name}.var"] = a.var
            out[f"sweep.{name}.min"] = _fmt(a.min)
            out[f"sweep.{name}.max"] = _fmt(a.max)
            out[f"sweep.{name}.points"] = str(int(a.points))
        out["resource_accounting"] = self.resource_accounting
        out["output.format"] = self.output_format
        if self.output_path is not None:
            out["output.path"] = str(self.output_path)
        if self.label:
            out["label"] = self.label
        out["numeric"] = "true" if self.numeric else "false"
        return out


def _fmt(v):
    if v is None:
        return "none"
    return repr(float(v))


def parse_scenario(text):
    """Build a :class:`Scenario` from the flat key-value text format."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in raw:
            raise UsageError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return scenario_from_dict(raw)


def scenario_from_dict(raw):
    raw = dict(raw)
    try:
        preset = raw.pop("preset.name")
        detection = raw.pop("detection")
    except KeyError as exc:
        raise UsageError(f"missing required key {exc.args[0]!r}") from None
    params = {}
    for key in [k for k in raw if k.startswith("preset.")]:
        name = key[len("preset."):]
        value = raw.pop(key)
        params[name] = None if name == "T" and value.lower() == "none" else parse_number(value)
    sweep = []
    for axis in AXIS_NAMES:
        keys = [f"sweep.{axis}.{f}" for f in ("var", "min", "max", "points")]
        present = [k in raw for k in keys]
        if not any(present):
            continue
        if not all(present):
            raise UsageError(f"sweep.{axis} needs var, min, max and points")
        var, lo, hi, pts = (raw.pop(k) for k in keys)
        points = parse_number(pts)
        if points != int(points):
            raise UsageError(f"sweep.{axis}.points must be an integer")
        sweep.append(SweepAxis(var, parse_number(lo), parse_number(hi), int(points)))
    if any(k.startswith("sweep.") for k in raw):
        raise UsageError(f"unknown sweep keys {sorted(k for k in raw if k.startswith('sweep.'))}")
    kwargs = {}
    for key, attr in (("resource_accounting", "resource_accounting"),
                      ("output.format", "output_format"),
                      ("output.path", "output_path"),
                      ("label", "label")):
        if key in raw:
            kwargs[attr] = raw.pop(key)
    if "numeric" in raw:
        flag = raw.pop("numeric").lower()
        if flag not in ("true", "false"):
            raise UsageError(f"numeric must be true or false, got {flag!r}")
        kwargs["numeric"] = flag == "true"
    if raw:
        raise UsageError(f"unknown keys {sorted(raw)}")
    return Scenario(preset, params, detection, tuple(sweep), **kwargs)


def load_scenario(path):
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
