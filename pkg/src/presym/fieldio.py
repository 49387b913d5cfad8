"""Plain-text formats: sampled fields, gauge paths and key/value configs.

``torusfield v1``: one header line
``torusfield v1; n=3; N=16; degree=2; shape=3x3`` followed by one row per grid
point, ``i1,...,in,c1,...,cq`` with the grid indices first and the flattened
component values (C order) after them.

``gaugepath v1``: a directory holding ``manifest.txt``::

    gaugepath v1; nodes=17; t0=0; t1=1
    fields=beta,alpha

and one torusfield file ``<field>_<idx:04d>.csv`` per field and node.

Config files are flat ``key = value`` lines where each value is JSON; ``#``
starts a comment.
"""

import json
import os
import tempfile

import numpy as np

from .errors import InputError
from .torus import TorusGrid

FIELD_MAGIC = "torusfield v1"
PATH_MAGIC = "gaugepath v1"


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file and ``os.replace``."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_header(line, magic):
    parts = [p.strip() for p in line.strip().split(";")]
    if not parts or parts[0] != magic:
        raise InputError(f"expected header starting with {magic!r}, got {line.strip()[:40]!r}")
    out = {}
    for p in parts[1:]:
        if not p:
            continue
        if "=" not in p:
            raise InputError(f"malformed header entry {p!r}")
        k, v = p.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def format_field(values, grid, degree):
    values = np.asarray(values, dtype=float)
    comp = values.shape[grid.n :]
    if values.shape[: grid.n] != grid.shape:
        raise InputError("values do not match the grid")
    shape = "x".join(str(c) for c in comp) if comp else "1"
    lines = [f"{FIELD_MAGIC}; n={grid.n}; N={grid.N}; degree={degree}; shape={shape}"]
    flat = values.reshape(grid.size, -1)
    idx = np.indices(grid.shape).reshape(grid.n, -1).T
    for i, row in zip(idx, flat):
        lines.append(",".join([str(int(a)) for a in i] + ["%.16e" % x for x in row]))
    return "\n".join(lines) + "\n"


def write_field(path, values, grid, degree):
    atomic_write(path, format_field(values, grid, degree))


def read_field(path):
    """``(grid, degree, values)`` from a torusfield file."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read field file {path}: {exc}") from exc
    lines = [l for l in text.splitlines() if l.strip() and not l.lstrip().startswith("#")]
    if not lines:
        raise InputError(f"empty field file {path}")
    head = _parse_header(lines[0], FIELD_MAGIC)
    try:
        n, N, degree = int(head["n"]), int(head["N"]), int(head["degree"])
        comp = tuple(int(c) for c in head.get("shape", "1").split("x"))
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad torusfield header in {path}") from exc
    if comp == (1,) and degree == 0:
        comp = ()
    grid = TorusGrid(n, N)
    q = int(np.prod(comp)) if comp else 1
    values = np.full((grid.size, q), np.nan)
    seen = np.zeros(grid.size, dtype=bool)
    for ln, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != n + q:
            raise InputError(f"{path}:{ln}: expected {n + q} columns, got {len(cells)}")
        try:
            idx = [int(c) for c in cells[:n]]
            vals = [float(c) for c in cells[n:]]
        except ValueError as exc:
            raise InputError(f"{path}:{ln}: {exc}") from exc
        if any(not 0 <= i < N for i in idx):
            raise InputError(f"{path}:{ln}: grid index out of range")
        flat = int(np.ravel_multi_index(idx, grid.shape))
        values[flat] = vals
        seen[flat] = True
    if not seen.all():
        raise InputError(f"{path}: {int((~seen).sum())} grid points missing")
    if not np.all(np.isfinite(values)):
        raise InputError(f"{path}: non-finite values")
    return grid, degree, values.reshape(grid.shape + comp)


def write_gauge_path(folder, times, fields, grid, degrees):
    """``fields`` maps a name to a list of per-node arrays; ``degrees`` maps it to the form degree."""
    times = np.asarray(times, dtype=float)
    names = list(fields)
    os.makedirs(folder, exist_ok=True)
    for name in names:
        if len(fields[name]) != len(times):
            raise InputError(f"field {name} has {len(fields[name])} nodes, expected {len(times)}")
        for i, v in enumerate(fields[name]):
            write_field(os.path.join(folder, f"{name}_{i:04d}.csv"), v, grid, degrees[name])
    manifest = f"{PATH_MAGIC}; nodes={len(times)}; t0={times[0]:.17g}; t1={times[-1]:.17g}\nfields={','.join(names)}\n"
    atomic_write(os.path.join(folder, "manifest.txt"), manifest)


def read_gauge_path(folder):
    """``(times, {name: [arrays]}, grid, {name: degree})`` from a gaugepath directory."""
    mpath = os.path.join(folder, "manifest.txt")
    try:
        with open(mpath) as fh:
            lines = [l for l in fh.read().splitlines() if l.strip()]
    except OSError as exc:
        raise InputError(f"cannot read {mpath}: {exc}") from exc
    head = _parse_header(lines[0], PATH_MAGIC)
    try:
        nodes = int(head["nodes"])
        t0, t1 = float(head.get("t0", 0.0)), float(head.get("t1", 1.0))
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad gaugepath manifest {mpath}") from exc
    names = []
    for l in lines[1:]:
        if l.startswith("fields="):
            names = [s.strip() for s in l.split("=", 1)[1].split(",") if s.strip()]
    if not names:
        raise InputError(f"{mpath}: no fields listed")
    times = np.linspace(t0, t1, nodes)
    out, degrees, grid = {}, {}, None
    for name in names:
        out[name] = []
        for i in range(nodes):
            g, deg, vals = read_field(os.path.join(folder, f"{name}_{i:04d}.csv"))
            if grid is not None and g != grid:
                raise InputError(f"field {name} node {i} is on a different grid")
            grid = g
            degrees[name] = deg
            out[name].append(vals)
    return times, out, grid, degrees


def parse_config(text, source="<config>"):
    """Flat ``key = JSON`` lines into a dict."""
    out = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{source}:{ln}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if not key.replace("_", "").isalnum():
            raise InputError(f"{source}:{ln}: bad key {key!r}")
        try:
            out[key] = json.loads(val)
        except json.JSONDecodeError:
            # bare words are accepted as strings
            out[key] = val
    return out


def read_config(path):
    try:
        with open(path) as fh:
            return parse_config(fh.read(), str(path))
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc


def format_config(cfg):
    return "".join(f"{k} = {json.dumps(v)}\n" for k, v in cfg.items())
