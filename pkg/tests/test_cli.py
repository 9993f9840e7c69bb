import csv
import io
import json

import pytest
from click.testing import CliRunner

from rkhs_surface.cli import main
from rkhs_surface.surface import build_genus1


@pytest.fixture()
def runner():
    return CliRunner()


def test_verify_all_torus(runner):
    res = runner.invoke(main, ["verify"])
    assert res.exit_code == 0, res.output
    assert "[FAIL]" not in res.output
    assert "ok:" in res.output


def test_verify_all_genus0(runner):
    res = runner.invoke(main, ["verify", "--builtin", "genus0"])
    assert res.exit_code == 0, res.output
    assert "[FAIL]" not in res.output


def test_verify_forced_failure(runner):
    res = runner.invoke(
        main, ["verify", "--suite", "theta", "--tol-theta", "1e-30", "--tol-exact", "1e-30"]
    )
    assert res.exit_code == 1
    assert "[FAIL]" in res.output


def test_verify_bad_builtin(runner):
    res = runner.invoke(main, ["verify", "--builtin", "cone"])
    assert res.exit_code == 2
    assert "unknown builtin" in res.output


def test_verify_empty_measure_skips(runner, tmp_path):
    mfile = tmp_path / "empty.json"
    mfile.write_text(json.dumps({"atoms": [], "constant": 0.0}))
    res = runner.invoke(main, ["verify", "--measure", str(mfile)])
    assert res.exit_code == 0, res.output
    assert "[SKIP] suite herglotz: measure is empty" in res.output
    assert "[SKIP] suite cayley: measure is empty" in res.output


def test_verify_json_report(runner):
    res = runner.invoke(main, ["verify", "--suite", "surface", "--json"])
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert doc["suite"] == "surface"
    assert set(doc["env"]) == {"eps", "quad_n", "seed", "tol_theta", "tol_exact"}
    assert doc["checks"]
    for c in doc["checks"]:
        assert set(c) == {"id", "anchor", "residual", "tol", "pass"}
        assert c["pass"] is True


def test_verify_surface_file(runner, tmp_path):
    doc = build_genus1(1.0).to_document()
    sfile = tmp_path / "surf.json"
    sfile.write_text(json.dumps(doc))
    res = runner.invoke(main, ["verify", "--surface", str(sfile), "--suite", "surface"])
    assert res.exit_code == 0, res.output


def test_table_deterministic_and_csv(runner):
    first = runner.invoke(main, ["table"])
    second = runner.invoke(main, ["table"])
    assert first.exit_code == 0, first.output
    assert first.output == second.output
    rows = list(csv.reader(io.StringIO(first.output)))
    assert rows[0] == ["id", "quantity", "point", "point2", "value_re", "value_im"]
    assert len(rows) == 9
    names = [r[1] for r in rows[1:]]
    assert names == [
        "prime-form", "cauchy-kernel", "hardy-kernel", "lphi-kernel",
        "element", "herglotz", "multiplier", "resolvent",
    ]
    for r in rows[1:]:
        float(r[4]), float(r[5])


def test_table_needs_measure(runner, tmp_path):
    mfile = tmp_path / "empty.json"
    mfile.write_text(json.dumps({"atoms": [], "constant": 0.0}))
    res = runner.invoke(main, ["table", "--measure", str(mfile)])
    assert res.exit_code == 2
    assert "nonempty measure" in res.output


def test_bench_small(runner):
    res = runner.invoke(main, ["bench", "--points", "64"])
    assert res.exit_code == 0, res.output
    assert "genus 1" in res.output and "genus 2" in res.output


def test_bench_zero_points(runner):
    res = runner.invoke(main, ["bench", "--points", "0"])
    assert res.exit_code == 0
    assert "no points requested" in res.output
    as_json = runner.invoke(main, ["bench", "--points", "0", "--json"])
    assert json.loads(as_json.output)["rows"] == []


def test_eval_phi_and_schur(runner):
    res = runner.invoke(main, ["eval", "--what", "phi", "--point", "0.31+0.22j"])
    assert res.exit_code == 0, res.output
    assert res.output.startswith("phi(")
    res2 = runner.invoke(
        main, ["eval", "--what", "schur", "--point", "0.31+0.22j", "--json"]
    )
    assert res2.exit_code == 0, res2.output
    doc = json.loads(res2.output)
    assert doc[0]["what"] == "schur" and len(doc[0]["value"]) == 2


def test_eval_two_point_kernel(runner):
    res = runner.invoke(
        main,
        ["eval", "--what", "cauchy", "--point", "0.31+0.22j", "--point2", "0.67+0.34j"],
    )
    assert res.exit_code == 0, res.output
    missing = runner.invoke(main, ["eval", "--what", "cauchy", "--point", "0.31+0.22j"])
    assert missing.exit_code == 2
    assert "needs --point2" in missing.output


def test_eval_bad_point(runner):
    res = runner.invoke(main, ["eval", "--what", "phi", "--point", "zebra"])
    assert res.exit_code == 2
    assert "bad point" in res.output


def test_version(runner):
    res = runner.invoke(main, ["--version"])
    assert res.exit_code == 0
    assert "version" in res.output
