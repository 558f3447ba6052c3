"""Text file formats for trajectories, lifts and fitted models.

Trajectory file::

    pga-traj 1
    layout SO3*2 S2
    <number of snapshots>
    <one snapshot per line, single-space separated>

Lift file::

    pga-lift 1
    layout SO3*2 S2
    scheme north2
    base <point_dim floats>
    <number of samples>
    <tangent_dim floats> <one integer branch index per S2/SO3 component>

Floats are written with Python's shortest round-trip ``repr``, so parsing a
serialized file gives back the identical bits. Models are stored as JSON.
"""

import csv
import json
import re

import numpy as np

from .exceptions import ValidationError
from .lift import LiftedTrajectory
from .manifold import SCHEMES, Layout, as_layout
from .pga import PgaModel
from .validation import check_snapshots

TRAJ_TAG = "pga-traj 1"
LIFT_TAG = "pga-lift 1"
MODEL_TAG = "pga-model"
MODEL_VERSION = 1

_FLOAT = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")
_INT = re.compile(r"^[+-]?\d+$")


class ParsedTrajectory:
    """Result of :func:`parse_trajectory`: layout, samples and projection count."""

    def __init__(self, layout, X, n_projected):
        self.layout = layout
        self.X = X
        self.n_projected = n_projected

    def __iter__(self):
        return iter((self.layout, self.X))


def format_float(x):
    """Shortest decimal string that parses back to the same float."""
    x = float(x)
    if not np.isfinite(x):
        raise ValidationError(f"cannot serialize non-finite value {x}")
    return repr(x)


def _format_row(values):
    return " ".join(format_float(v) for v in values)


def _lines(text):
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _line(lines, i, what):
    if i >= len(lines):
        raise ValidationError(f"line {i + 1}: unexpected end of file, expected {what}")
    return lines[i].strip()


def _parse_floats(tokens, lineno):
    for t in tokens:
        if not _FLOAT.match(t):
            raise ValidationError(f"line {lineno}: not a finite number: {t!r}")
    vals = np.array([float(t) for t in tokens])
    if not np.isfinite(vals).all():
        raise ValidationError(f"line {lineno}: number out of range")
    return vals


def _parse_count(lines, i):
    s = _line(lines, i, "snapshot count")
    if not re.match(r"^\d+$", s):
        raise ValidationError(f"line {i + 1}: bad snapshot count {s!r}")
    return int(s)


def _parse_layout(lines, i, scheme=None):
    s = _line(lines, i, "layout line")
    head, _, rest = s.partition(" ")
    if head != "layout" or not rest.strip():
        raise ValidationError(f"line {i + 1}: expected 'layout <TAG>[*count] ...'")
    try:
        return Layout.parse(rest, scheme or SCHEMES[0])
    except ValidationError as exc:
        raise ValidationError(f"line {i + 1}: {exc}") from None


def _parse_body(lines, start, count, width):
    if len(lines) != start + count:
        raise ValidationError(
            f"line {start + 1}: header announces {count} rows, file has {len(lines) - start}")
    rows = np.empty((count, width))
    for r in range(count):
        tokens = lines[start + r].split()
        lineno = start + r + 1
        if len(tokens) != width:
            raise ValidationError(f"line {lineno}: expected {width} fields, got {len(tokens)}")
        rows[r] = _parse_floats(tokens, lineno)
    return rows


def serialize_trajectory(X, layout):
    """Text of a trajectory file for snapshots ``X`` (rows) under ``layout``."""
    layout = as_layout(layout)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != layout.point_dim:
        raise ValidationError(f"snapshot width {X.shape[1]} does not match layout '{layout}'")
    out = [TRAJ_TAG, f"layout {layout}", str(X.shape[0])]
    out.extend(_format_row(row) for row in X)
    return "\n".join(out) + "\n"


def parse_trajectory(text, project=True):
    """Parse a trajectory file.

    S2 and SO3 components that break their invariant are replaced by their
    projection (``project=True``) and counted in ``n_projected``; with
    ``project=False`` they are rejected.

    Returns
    -------
    ParsedTrajectory
        Unpacks as ``layout, X``.
    """
    lines = _lines(text)
    if _line(lines, 0, "header") != TRAJ_TAG:
        raise ValidationError(f"line 1: expected header {TRAJ_TAG!r}")
    layout = _parse_layout(lines, 1)
    count = _parse_count(lines, 2)
    X = _parse_body(lines, 3, count, layout.point_dim)
    if count == 0:
        return ParsedTrajectory(layout, X, 0)
    X, n_projected = check_snapshots(X, layout, project=project)
    return ParsedTrajectory(layout, X, n_projected)


def serialize_lift(lift):
    """Text of a lift file."""
    layout = lift.layout
    out = [LIFT_TAG, f"layout {layout}", f"scheme {layout.scheme}",
           "base " + _format_row(lift.base), str(len(lift))]
    for t, b in zip(lift.tangents, lift.branches):
        fields = [_format_row(t)]
        if b.size:
            fields.append(" ".join(str(int(k)) for k in b))
        out.append(" ".join(fields))
    return "\n".join(out) + "\n"


def parse_lift(text):
    """Parse a lift file into a :class:`LiftedTrajectory`."""
    lines = _lines(text)
    if _line(lines, 0, "header") != LIFT_TAG:
        raise ValidationError(f"line 1: expected header {LIFT_TAG!r}")
    s = _line(lines, 2, "scheme line")
    m = re.match(r"^scheme (\S+)$", s)
    if m is None or m.group(1) not in SCHEMES:
        raise ValidationError("line 3: expected 'scheme north2' or 'scheme ambient3'")
    layout = _parse_layout(lines, 1, m.group(1))
    s = _line(lines, 3, "base line")
    tokens = s.split()
    if not tokens or tokens[0] != "base" or len(tokens) - 1 != layout.point_dim:
        raise ValidationError(f"line 4: expected 'base' and {layout.point_dim} numbers")
    base = _parse_floats(tokens[1:], 4)
    count = _parse_count(lines, 4)
    m_dim, n_curved = layout.tangent_dim, len(layout.curved)
    if len(lines) != 5 + count:
        raise ValidationError(
            f"line 6: header announces {count} rows, file has {len(lines) - 5}")
    tangents = np.empty((count, m_dim))
    branches = np.empty((count, n_curved), dtype=np.int64)
    for r in range(count):
        lineno = 6 + r
        tokens = lines[5 + r].split()
        if len(tokens) != m_dim + n_curved:
            raise ValidationError(
                f"line {lineno}: expected {m_dim + n_curved} fields, got {len(tokens)}")
        tangents[r] = _parse_floats(tokens[:m_dim], lineno)
        for c, t in enumerate(tokens[m_dim:]):
            if not _INT.match(t):
                raise ValidationError(f"line {lineno}: bad branch index {t!r}")
            branches[r, c] = int(t)
    return LiftedTrajectory(base=base, tangents=tangents, branches=branches, layout=layout)


def _floats(a):
    return [float(v) for v in np.asarray(a, dtype=float).ravel()]


def serialize_model(model):
    """JSON text of a :class:`PgaModel`."""
    doc = {
        "format": MODEL_TAG,
        "version": MODEL_VERSION,
        "layout": str(model.layout),
        "scheme": model.layout.scheme,
        "base": _floats(model.base),
        "shape": [int(model.U.shape[0]), int(model.V.shape[0]), int(model.rank)],
        "U": _floats(model.U),
        "singular_values": _floats(model.singular_values),
        "V": _floats(model.V),
        "all_singular_values": _floats(model.all_singular_values),
    }
    return json.dumps(doc, indent=1) + "\n"


def parse_model(text):
    """Inverse of :func:`serialize_model`."""
    try:
        doc = json.loads(text)
        if doc.get("format") != MODEL_TAG or doc.get("version") != MODEL_VERSION:
            raise ValidationError("not a pga-model version 1 file")
        layout = Layout.parse(doc["layout"], doc["scheme"])
        m, n, r = (int(v) for v in doc["shape"])
        return PgaModel(
            base=np.array(doc["base"], dtype=float),
            layout=layout,
            U=np.array(doc["U"], dtype=float).reshape(m, r),
            singular_values=np.array(doc["singular_values"], dtype=float),
            V=np.array(doc["V"], dtype=float).reshape(n, r),
            all_singular_values=np.array(doc["all_singular_values"], dtype=float),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed model file: {exc}") from None


def read_text(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_histogram_csv(path, hist):
    """CSV with columns ``bin_lo, bin_hi, count``."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_lo", "bin_hi", "count"])
        for lo, hi, c in hist.rows():
            w.writerow([repr(lo), repr(hi), c])


def write_angular_csv(path, records):
    """CSV with columns ``theta, error``."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta", "error"])
        for t, e in zip(records.theta.tolist(), records.error.tolist()):
            w.writerow([repr(t), repr(e)])
