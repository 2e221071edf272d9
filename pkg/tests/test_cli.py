import csv

import numpy as np
import pytest

from conftest import make_grid
from ebcomp import Dims, load_raw, store_raw
from ebcomp.cli import main


@pytest.fixture
def field_file(tmp_path, rng):
    g = make_grid(rng, (24, 20))
    path = tmp_path / "field.f32"
    store_raw(g, path)
    return path, g


def run(*argv):
    return main([str(a) for a in argv])


def test_compress_decompress_verify(field_file, tmp_path, capsys):
    path, g = field_file
    archive = tmp_path / "field.csz"
    out = tmp_path / "back.f32"
    assert run("compress", path, "-d", 24, 20, "--eb", "1e-3", "-o", archive) == 0
    assert "CR=" in capsys.readouterr().out
    assert run("decompress", archive, "-o", out) == 0
    assert run("verify", path, out, "-d", 24, 20, "--eb", "1e-3") == 0
    line = capsys.readouterr().out.splitlines()[-1]
    assert "violations=0" in line
    back = load_raw(out, Dims((24, 20)))
    err = np.abs(back.data.astype(np.float64) - g.data.astype(np.float64))
    vrange = float(g.data.max()) - float(g.data.min())
    assert float(err.max()) <= 1e-3 * vrange


def test_default_archive_name(field_file, capsys):
    import os

    path, _ = field_file
    assert run("compress", path, "-d", 24, 20, "--eb", "1e-2") == 0
    assert os.path.exists(str(path) + ".csz")
    capsys.readouterr()


def test_verify_detects_violation(field_file, tmp_path, capsys):
    path, g = field_file
    bad = g.data.copy()
    bad[3, 4] += np.float32(1.0)
    from ebcomp import Grid

    bad_path = tmp_path / "bad.f32"
    store_raw(Grid(g.dims, bad), bad_path)
    assert run("verify", path, bad_path, "-d", 24, 20, "--eb", "1e-5") == 5
    assert "violations" in capsys.readouterr().out


def test_usage_errors_exit_2(field_file):
    path, _ = field_file
    with pytest.raises(SystemExit) as exc:
        run("compress", path, "--eb", "1e-3")  # missing dims
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run("compress", path, "-d", 24, 20, "--eb", "-1")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run("nonsense")
    assert exc.value.code == 2


def test_missing_file_exits_3(tmp_path, capsys):
    assert run("compress", tmp_path / "nope.f32", "-d", 8, "--eb", "1e-3") == 3
    assert run("info", tmp_path / "nope.csz") == 3
    capsys.readouterr()


def test_malformed_archive_exits_4(tmp_path, capsys):
    junk = tmp_path / "junk.csz"
    junk.write_bytes(b"not an archive at all")
    assert run("decompress", junk, "-o", tmp_path / "x.f32") == 4
    assert run("info", junk) == 4
    capsys.readouterr()


def test_wrong_dims_exit_4(field_file, capsys):
    path, _ = field_file
    assert run("compress", path, "-d", 24, 21, "--eb", "1e-3") == 4
    capsys.readouterr()


def test_info_prints_header(field_file, tmp_path, capsys):
    path, _ = field_file
    archive = tmp_path / "a.csz"
    run("compress", path, "-d", 24, 20, "--eb", "1e-3", "-o", archive,
        "--predictor", "lorenzo")
    capsys.readouterr()
    assert run("info", archive) == 0
    out = capsys.readouterr().out
    assert "dims [24, 20]" in out
    assert "predictor lorenzo" in out
    assert "pass2 on" in out


def test_compress_pins_take_effect(field_file, tmp_path, capsys):
    path, _ = field_file
    archive = tmp_path / "pinned.csz"
    assert (
        run(
            "compress", path, "-d", 24, 20, "--eb", "1e-3", "-o", archive,
            "--alpha", "1.25", "--variants", "natural", "natural",
            "--dim-order", 1, 0, "--pass2", "off",
        )
        == 0
    )
    capsys.readouterr()
    assert run("info", archive) == 0
    out = capsys.readouterr().out
    assert "alpha 1.25" in out
    assert "variants [natural natural]" in out
    assert "dim_order [1, 0]" in out
    assert "pass2 off" in out


def test_sweep_report(field_file, tmp_path, capsys):
    path, _ = field_file
    report = tmp_path / "report.csv"
    assert (
        run(
            "sweep", path, "-d", 24, 20, "--eb", "1e-2", "1e-3", "1e-4",
            "-o", report,
        )
        == 0
    )
    capsys.readouterr()
    rows = list(csv.DictReader(open(report)))
    # 2 predictors x 3 bounds x pass2 both
    assert len(rows) == 12
    assert {r["predictor"] for r in rows} == {"interp", "lorenzo"}
    for r in rows:
        # tiny grids can expand (fixed header/codebook overhead) but the
        # ratio must stay positive and verified
        assert float(r["cr"]) > 0.0
        assert float(r["max_abs_err"]) >= 0.0
    pass2_on = [r for r in rows if r["pass2"] == "True" and r["predictor"] == "interp"]
    pass2_off = [r for r in rows if r["pass2"] == "False" and r["predictor"] == "interp"]
    # the zero-run pass pays for itself on every bound here
    for on, off in zip(
        sorted(pass2_on, key=lambda r: r["eb_value"]),
        sorted(pass2_off, key=lambda r: r["eb_value"]),
    ):
        assert float(on["cr"]) > float(off["cr"])
    by_predictor = [r["predictor"] for r in rows]
    assert by_predictor == sorted(by_predictor)


def test_sweep_jsonl_to_stdout(field_file, capsys):
    import json

    path, _ = field_file
    assert (
        run(
            "sweep", path, "-d", 24, 20, "--eb", "1e-3", "--predictor", "interp",
            "--pass2", "on", "--report", "jsonl",
        )
        == 0
    )
    lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
    assert len(lines) == 1
    row = json.loads(lines[0])
    assert row["predictor"] == "interp"
    assert row["pass2"] is True
