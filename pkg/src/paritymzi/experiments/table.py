"""Sweep results and their CSV / JSON serialisation.

Grid points are stored row-major: the first axis varies slowest. Undefined
points are ``None`` in memory, ``NA`` in CSV and ``null`` in JSON. Non-finite
floats are never stored; they are turned into the undefined marker.

CSV layout: one ``# metadata: {json}`` line holding the axis names and the
metadata, a header with the axis names then
the column names, one row per grid point. Numbers are written in exponent form with 17 significant digits
so that both formats read back bit-for-bit.
"""
import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field

from ..errors import UsageError

NA = "NA"
META_PREFIX = "# metadata: "


class TableIOError(OSError):
    """Reading or writing a table failed; the message carries the path."""


def _clean(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


@dataclass
class SweepTable:
    axis_names: list
    grids: list
    columns: dict
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.axis_names) != len(self.grids):
            raise UsageError("one grid per axis required")
        self.grids = [[float(v) for v in g] for g in self.grids]
        for name, g in zip(self.axis_names, self.grids):
            if len(g) < 2:
                raise UsageError(f"axis {name!r} needs at least 2 points")
        n = self.size
        cols = {}
        for name, values in self.columns.items():
            values = [_clean(v) for v in values]
            if len(values) != n:
                raise UsageError(f"column {name!r} has {len(values)} values, grid has {n}")
            cols[name] = values
        self.columns = cols

    @property
    def shape(self):
        return tuple(len(g) for g in self.grids)

    @property
    def size(self):
        return math.prod(self.shape)

    def points(self):
        """Grid coordinates in storage order."""
        return list(itertools.product(*self.grids))

    def column(self, name, fill=math.nan):
        """Column as floats with undefined points replaced by ``fill``."""
        return [fill if v is None else v for v in self.columns[name]]

    def __eq__(self, other):
        if not isinstance(other, SweepTable):
            return NotImplemented
        return (self.axis_names == other.axis_names and self.grids == other.grids
                and self.columns == other.columns and self.metadata == other.metadata)


def _num(v):
    return NA if v is None else format(v, ".16e")


def to_csv(table):
    buf = io.StringIO()
    head = {"axes": list(table.axis_names), "metadata": table.metadata}
    buf.write(META_PREFIX + json.dumps(head, sort_keys=True, allow_nan=False) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(table.axis_names) + list(table.columns))
    names = list(table.columns)
    for k, coords in enumerate(table.points()):
        w.writerow([_num(c) for c in coords] + [_num(table.columns[n][k]) for n in names])
    return buf.getvalue()


def to_json(table):
    obj = {
        "axes": {"names": list(table.axis_names), "grids": table.grids},
        "columns": table.columns,
        "metadata": table.metadata,
    }
    return json.dumps(obj, indent=1, sort_keys=False, allow_nan=False) + "\n"


def from_csv(text):
    lines = text.splitlines()
    if not lines or not lines[0].startswith(META_PREFIX):
        raise UsageError("CSV table must start with a metadata line")
    head = json.loads(lines[0][len(META_PREFIX):])
    metadata = head["metadata"]
    rows = list(csv.reader(lines[1:]))
    header, body = rows[0], rows[1:]
    n_axes = len(head["axes"])
    axis_names, col_names = header[:n_axes], header[n_axes:]
    parsed = [[None if v == NA else float(v) for v in row] for row in body]
    grids = []
    for a in range(n_axes):
        grids.append(list(dict.fromkeys(row[a] for row in parsed)))
    columns = {name: [row[n_axes + i] for row in parsed] for i, name in enumerate(col_names)}
    return SweepTable(axis_names, grids, columns, metadata)


def from_json(text):
    obj = json.loads(text)
    return SweepTable(obj["axes"]["names"], obj["axes"]["grids"], obj["columns"], obj["metadata"])


def emit(table, fmt, path):
    """Write ``table`` to ``path`` as ``csv`` or ``json``."""
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt!r}")
    text = to_csv(table) if fmt == "csv" else to_json(table)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise TableIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_table(path):
    """Read a table written by :func:`emit`; the format is sniffed from the content."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise TableIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return from_json(text) if text.lstrip().startswith("{") else from_csv(text)
