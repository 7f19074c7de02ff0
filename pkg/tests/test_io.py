"""Binary field files, CSV tables, result records and config parsing."""
import os

import numpy as np
import pytest

from socnls.errors import ConfigError
from socnls.grid2d import FieldPair2D, Grid2D
from socnls.io import (
    append_record,
    format_record,
    read_config,
    read_csv,
    read_field,
    read_records,
    resolve_outdir,
    write_csv,
    write_field,
    write_field_csv,
    write_manifest,
    write_radial_csv,
)
from socnls.radial import RadialGrid, seed_profile


def sample_pair(n=32, L=5.0):
    grid = Grid2D(L, n)
    rng = np.random.default_rng(1)
    mk = lambda: rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return FieldPair2D(grid, mk(), mk(), check=False)


def test_field_roundtrip(tmp_path):
    U = sample_pair()
    path = tmp_path / "field.sov"
    write_field(path, U, winding_plus=2, winding_minus=3)
    V, wp, wm = read_field(path)
    assert (wp, wm) == (2, 3)
    assert V.grid == U.grid
    # storage is complex64, so the roundtrip is float32-accurate
    assert np.abs(V.psi_plus - U.psi_plus).max() < 1e-6
    assert np.abs(V.psi_minus - U.psi_minus).max() < 1e-6


def test_field_bad_magic(tmp_path):
    path = tmp_path / "junk.sov"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    with pytest.raises(ConfigError):
        read_field(path)


def test_csv_roundtrip(tmp_path):
    path = tmp_path / "table.csv"
    write_csv(path, ["a", "b"], [(1.0, 2.5), (3.0, -4.0)])
    header, cols = read_csv(path)
    assert header == ["a", "b"]
    assert np.array_equal(cols["a"], [1.0, 3.0])
    assert np.array_equal(cols["b"], [2.5, -4.0])


def test_field_csv_shape(tmp_path):
    U = sample_pair(n=8)
    path = tmp_path / "field.csv"
    write_field_csv(path, U)
    header, cols = read_csv(path)
    assert header[:2] == ["x", "y"]
    assert cols["x"].size == 64
    assert np.allclose(cols["re_psi_plus"],
                       U.psi_plus.real.ravel(), atol=1e-12)


def test_radial_csv(tmp_path):
    P = seed_profile(0, RadialGrid(10.0, 50))
    path = tmp_path / "radial.csv"
    write_radial_csv(path, P)
    header, cols = read_csv(path)
    assert header[0] == "r"
    assert np.allclose(cols["re_v_plus"], P.v_plus.real)


def test_records_roundtrip(tmp_path):
    path = tmp_path / "results.log"
    append_record(path, {"rho": 0.5, "converged": True, "m": 0})
    append_record(path, {"rho": 1.0, "converged": False, "m": -1})
    recs = read_records(path)
    assert len(recs) == 2
    assert recs[0]["converged"] == "true"
    assert float(recs[0]["rho"]) == 0.5
    assert recs[1]["m"] == "-1"


def test_format_record_sorted_and_full_precision():
    line = format_record({"b": 1.0 / 3.0, "a": 2})
    assert line.startswith("a=2 b=0.33333333333333331")


def test_read_config(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# comment\nrho = 0.5\n\nm=0\n")
    cfg = read_config(path)
    assert cfg == {"rho": "0.5", "m": "0"}
    bad = tmp_path / "bad.conf"
    bad.write_text("no equals here\n")
    with pytest.raises(ConfigError):
        read_config(bad)
    with pytest.raises(ConfigError):
        read_config(tmp_path / "missing.conf")


def test_resolve_outdir(tmp_path, monkeypatch):
    target = tmp_path / "out"
    assert resolve_outdir(str(target)) == str(target)
    assert target.is_dir()
    monkeypatch.setenv("SOCNLS_OUTDIR", str(tmp_path / "envdir"))
    assert resolve_outdir() == str(tmp_path / "envdir")
    monkeypatch.delenv("SOCNLS_OUTDIR")
    assert resolve_outdir() == "."


def test_manifest(tmp_path):
    path = tmp_path / "manifest.txt"
    write_manifest(path, {"command": "semivortex", "rho": 0.5})
    text = path.read_text()
    assert "socnls_version=" in text
    assert "numpy_version=" in text
    assert "command=semivortex" in text
    keys = [line.split("=")[0] for line in text.strip().splitlines()]
    assert keys == sorted(keys)
