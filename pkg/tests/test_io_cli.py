import json
import os

import numpy as np
import pytest

from pairlat import cli, io


# ---- io ------------------------------------------------------------------

@pytest.mark.parametrize("x", [0.1, 1 / 3, -2.5e-300, 1e300, np.pi, 5e-324])
def test_fmt_round_trips(x):
    assert float(io.fmt(x)) == x


def test_fmt_special_cases():
    assert io.fmt(-0.0) == "0"
    assert io.fmt(7) == "7" and io.fmt(np.int64(3)) == "3"
    assert io.fmt(1 - 2j) == "1-2j"
    assert complex(io.fmt(0.25 + 0.5j)) == 0.25 + 0.5j


def test_csv_and_json_text():
    text = io.csv_text(["a", "b"], [(1, 0.5), (2, -0.0)])
    assert text == "a,b\n1,0.5\n2,0\n"
    header, rows = io.read_csv(text)
    assert header == ["a", "b"] and rows == [["1", "0.5"], ["2", "0"]]
    js = json.loads(io.json_text({"b": np.float64(1.5), "a": [np.int32(2), np.inf], "c": 1j}))
    assert js == {"a": [2, "inf"], "b": 1.5, "c": {"im": 1.0, "re": 0.0}}


def test_atomic_write_replaces(tmp_path):
    p = tmp_path / "x.txt"
    io.atomic_write(p, "one")
    io.atomic_write(p, "two")
    assert p.read_text() == "two"
    assert os.listdir(tmp_path) == ["x.txt"]


def test_svg_from_csv():
    text = io.csv_text(["x", "y"], [(0, 1), (1, 3), (2, 2)])
    svg = io.svg_xy(text, "x", "y", "demo")
    assert svg.startswith("<svg") and "demo" in svg and svg.rstrip().endswith("</svg>")
    mat = io.csv_text(["z", "0.1", "0.2"], [(0.5, 1.0, 2.0), (1.0, 0.0, -1.0)])
    assert "<rect" in io.svg_matrix(mat, "map", "t2/t1", "z")


# ---- cli -----------------------------------------------------------------

def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_spectrum_two_sites(tmp_path, capsys):
    code, _ = run(["spectrum", "--n", "2", "--out", str(tmp_path)], capsys)
    assert code == 0
    header, rows = io.read_csv((tmp_path / "spectrum.csv").read_text())
    assert header == ["index", "energy", "ipr"]
    assert rows == [["0", "0", "1"]]
    meta = json.loads((tmp_path / "spectrum.json").read_text())
    assert meta["basis_size"] == 1


def test_spectrum_dump_state(tmp_path, capsys):
    code, _ = run(["spectrum", "--n", "8", "--t2", "0.5", "--select-energy", "0",
                   "--window", "0.5", "--dump-state", "--out", str(tmp_path)], capsys)
    assert code == 0
    _, rows = io.read_csv((tmp_path / "state.csv").read_text())
    amp = np.array([float(r[2]) for r in rows])
    assert len(rows) == 28 and abs(np.sum(amp ** 2) - 1) < 1e-12


def test_config_error_writes_nothing(tmp_path, capsys):
    code, out = run(["spectrum", "--n", "1", "--out", str(tmp_path)], capsys)
    assert code == 2 and "configuration error" in out.err
    assert os.listdir(tmp_path) == []


def test_unknown_toml_key(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text("bogus = 1\n")
    code, _ = run(["spectrum", "--config", str(cfg), "--out", str(tmp_path)], capsys)
    assert code == 2
    assert sorted(os.listdir(tmp_path)) == ["c.toml"]


def test_toml_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text("n = 50\nt2 = 0.3\n[spectrum]\nn = 4\n")
    out = tmp_path / "o"
    assert run(["spectrum", "--config", str(cfg), "--out", str(out)], capsys)[0] == 0
    meta = json.loads((out / "spectrum.json").read_text())
    assert meta["n_sites"] == 4 and meta["t2"] == 0.3
    assert run(["spectrum", "--config", str(cfg), "--n", "5", "--out", str(out)], capsys)[0] == 0
    assert json.loads((out / "spectrum.json").read_text())["n_sites"] == 5


def test_solver_error_exit_code(tmp_path, capsys):
    code, out = run(["spectrum", "--n", "6", "--select-energy", "40", "--out", str(tmp_path)],
                    capsys)
    assert code == 3 and "solver error" in out.err
    assert os.listdir(tmp_path) == []


def test_threads_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PAIRLAT_THREADS", "zero")
    assert run(["spectrum", "--n", "3", "--out", str(tmp_path)], capsys)[0] == 2
    monkeypatch.setenv("PAIRLAT_THREADS", "2")
    a = tmp_path / "a"
    assert run(["dos-map", "--n", "10", "--t2-points", "3", "--out", str(a)], capsys)[0] == 0
    monkeypatch.setenv("PAIRLAT_THREADS", "1")
    b = tmp_path / "b"
    assert run(["dos-map", "--n", "10", "--t2-points", "3", "--out", str(b)], capsys)[0] == 0
    for name in os.listdir(a):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_fig2c_single_point(tmp_path, capsys):
    code, _ = run(["fig2c", "--t2", "0.4", "--z", "1", "--out", str(tmp_path)], capsys)
    assert code == 0
    header, rows = io.read_csv((tmp_path / "fig2c.csv").read_text())
    assert header == ["z", "0.40000000000000002"]
    assert float(rows[0][1]) == 0.0


def test_winding_json(tmp_path, capsys):
    code, _ = run(["winding", "--t2", "0.8", "--z", "0.5", "2", "1", "--out", str(tmp_path)],
                  capsys)
    assert code == 0
    scan = json.loads((tmp_path / "winding.json").read_text())["scan"]
    assert [s["winding"] for s in scan] == [1, -1, None]
    assert scan[2]["gap_closed"]


def test_svg_flag(tmp_path, capsys):
    code, _ = run(["fig5", "--n", "12", "--t2", "0.4", "--svg", "--out", str(tmp_path)], capsys)
    assert code == 0
    svgs = [f for f in os.listdir(tmp_path) if f.endswith(".svg")]
    assert svgs and all((tmp_path / f).read_text().startswith("<svg") for f in svgs)


def test_fig5_deterministic(tmp_path, capsys):
    for d in ("a", "b"):
        assert run(["fig5", "--n", "15", "--out", str(tmp_path / d)], capsys)[0] == 0
    names = sorted(os.listdir(tmp_path / "a"))
    assert names == sorted(os.listdir(tmp_path / "b"))
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_stark_command(tmp_path, capsys):
    code, _ = run(["stark", "--t2", "0.05", "--n0", "20", "30", "--out", str(tmp_path)], capsys)
    assert code == 0
    meta = json.loads((tmp_path / "stark.json").read_text())
    assert meta["spread"] < meta["spread_bound"]
