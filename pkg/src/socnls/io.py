"""File formats: binary field pairs, CSV tables, line-oriented result records.

Binary layout (little endian): magic "SOV2", int32 n, float64 half_length,
int32 winding_plus, int32 winding_minus, then the two complex64 component
arrays in row-major order.
"""
import csv
import os
import struct

import numpy as np

from .errors import ConfigError
from .grid2d import FieldPair2D, Grid2D

MAGIC = b"SOV2"
_HEADER = struct.Struct("<4sid ii")


def write_field(path, U, winding_plus=0, winding_minus=0):
    g = U.grid
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, g.n, g.half_length,
                              winding_plus, winding_minus))
        fh.write(np.ascontiguousarray(U.psi_plus, dtype="<c8").tobytes())
        fh.write(np.ascontiguousarray(U.psi_minus, dtype="<c8").tobytes())


def read_field(path):
    """Returns (FieldPair2D, winding_plus, winding_minus)."""
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        magic, n, half_length, wp, wm = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ConfigError(f"{path}: not a field file (bad magic {magic!r})")
        count = n * n
        data = np.frombuffer(fh.read(2 * count * 8), dtype="<c8")
    grid = Grid2D(half_length, n)
    plus = data[:count].reshape(n, n).astype(np.complex128)
    minus = data[count:].reshape(n, n).astype(np.complex128)
    return FieldPair2D(grid, plus, minus, check=False), wp, wm


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def read_csv(path):
    """Returns (header, rows as float arrays column-wise dict)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    cols = {name: np.array([row[i] for row in rows])
            for i, name in enumerate(header)}
    return header, cols


def write_field_csv(path, U):
    g = U.grid
    rows = []
    for i in range(g.n):
        for j in range(g.n):
            rows.append((g.x[i, j], g.y[i, j],
                         U.psi_plus[i, j].real, U.psi_plus[i, j].imag,
                         U.psi_minus[i, j].real, U.psi_minus[i, j].imag))
    write_csv(path, ["x", "y", "re_psi_plus", "im_psi_plus",
                     "re_psi_minus", "im_psi_minus"], rows)


def write_radial_csv(path, P):
    rows = zip(P.grid.r, P.v_plus.real, P.v_plus.imag,
               P.v_minus.real, P.v_minus.imag)
    write_csv(path, ["r", "re_v_plus", "im_v_plus",
                     "re_v_minus", "im_v_minus"], rows)


def _format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) or isinstance(v, np.floating):
        return format(float(v), ".17g")
    return str(v)


def format_record(record):
    """One record -> one line of space-separated key=value pairs (sorted)."""
    return " ".join(f"{k}={_format_value(record[k])}" for k in sorted(record))


def append_record(path, record):
    with open(path, "a") as fh:
        fh.write(format_record(record) + "\n")


def read_records(path):
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = {}
            for item in line.split(" "):
                k, _, v = item.partition("=")
                rec[k] = v
            records.append(rec)
    return records


def read_config(path):
    """Plain key=value configuration file; '#' starts a comment line."""
    config = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                k, _, v = line.partition("=")
                config[k.strip()] = v.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config


def resolve_outdir(flag_value=None):
    out = flag_value or os.environ.get("SOCNLS_OUTDIR") or "."
    os.makedirs(out, exist_ok=True)
    return out


def write_manifest(path, entries):
    """Sorted key=value manifest with library versions prepended."""
    from . import __version__

    full = dict(entries)
    full.setdefault("socnls_version", __version__)
    full.setdefault("numpy_version", np.__version__)
    with open(path, "w") as fh:
        for k in sorted(full):
            fh.write(f"{k}={_format_value(full[k])}\n")
