import csv
import io
import json

import pytest
from click.testing import CliRunner

from qkw.cli import main
from qkw.quiver import NAMED_QUIVERS


@pytest.fixture
def run():
    runner = CliRunner(mix_stderr=False) if "mix_stderr" in CliRunner.__init__.__code__.co_varnames else CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


def _results(out):
    return json.loads(out.stdout)["results"]


def test_kac_two_loop(run):
    res = run("kac", "--quiver", "2-loop", "--flavor", "nil1", "--box", "3")
    assert res.exit_code == 0
    rows = {tuple(r["dim_vector"]): r["coeffs"] for r in _results(res)}
    assert rows[(2,)] == ["1", "1"]
    assert rows[(3,)] == ["2", "2", "2"]


def test_kac_reads_quiver_file(run, tmp_path):
    path = tmp_path / "k.json"
    path.write_text(str(NAMED_QUIVERS["kronecker"]()))
    res = run("kac", "--quiver", str(path), "--box", "2", "--flavor", "plain")
    doc = json.loads(res.stdout)
    assert doc["command"] == "kac" and doc["box"] == [2, 2]
    order = [tuple(r["dim_vector"]) for r in doc["results"]]
    assert order == sorted(order, key=lambda v: (sum(v), v))
    assert {tuple(r["dim_vector"]): r["coeffs"] for r in doc["results"]}[(1, 1)] == ["1", "1"]


def test_output_is_deterministic(run):
    a = run("series", "--quiver", "jordan", "--box", "2")
    b = run("series", "--quiver", "jordan", "--box", "2")
    assert a.stdout == b.stdout


def test_series_counts(run):
    rows = _results(run("series", "--quiver", "jordan", "--box", "2", "--primes", "2"))
    lam = {r["series"]: r["lambda_counts"]["2"] for r in rows if r["dim_vector"] == [2] and "lambda_counts" in r}
    assert lam == {"P-plain": "10", "P-nil1": "28", "P-nil0": "28"}
    mu = [r for r in rows if r["series"] == "mu-fiber" and r["dim_vector"] == [2]]
    assert mu[0]["mu_fiber_counts"]["2"] == "88"


def test_nakajima_grid(run):
    rows = _results(run("nakajima", "--quiver", "jordan", "--box", "1", "--w", "1"))
    m = [r for r in rows if r["variant"] == "M" and r["v"] == [1]]
    assert m[0]["coeffs"] == ["0", "0", "1"]


def test_gkm(run):
    rows = _results(run("gkm", "--quiver", "2-loop", "--box", "6"))
    mult = [int(r["value"]) for r in rows if r["kind"] == "multiplicity"]
    assert mult == [1, 1, 2, 3, 6, 9]
    rows = _results(run("gkm", "--quiver", "a2", "--box", "2", "--w", "1,0"))
    hw = {tuple(r["dim_vector"]): r["value"] for r in rows if r["kind"] == "ch_highest_weight"}
    assert hw[(0, 0)] == hw[(1, 0)] == hw[(1, 1)] == "1"


def test_census(run):
    res = run("census", "--quiver", "jordan", "--box", "2", "--primes", "2,3", "--flavor", "plain")
    assert res.exit_code == 0
    rows = _results(res)
    assert all(r["status"] == "PASS" for r in rows)
    assert {(tuple(r["dim_vector"]), r["p"]): r["a_value"] for r in rows}[((2,), 3)] == 3


def test_census_capacity_is_an_error(run):
    res = run("census", "--quiver", "3-loop", "--box", "3", "--primes", "3", "--cap", "1000")
    assert res.exit_code != 0


def test_verify_jordan(run):
    res = run("verify", "--quiver", "jordan", "--primes", "2,3", "--box", "2")
    assert res.exit_code == 0
    rows = _results(res)
    assert all(r["status"] == "PASS" for r in rows)
    details = {r["subject"]: r["detail"] for r in rows if r["check"] == "oracle-lambda"}
    assert details["v=[2] p=2 plain"] == "oracle 10 formula 10"
    assert details["v=[2] p=2 nil0"] == "oracle 28 formula 28"


@pytest.mark.parametrize("text", ['{"vertices":["0"],"arrows":[["0","9"]]}', '{"vertices": ['])
def test_malformed_quiver(run, tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    res = run("kac", "--quiver", str(path))
    assert res.exit_code != 0
    assert "error" in res.stderr


def test_bad_primes(run):
    res = run("kac", "--quiver", "jordan", "--primes", "2,4")
    assert res.exit_code != 0


def test_csv_and_latex(run):
    out = run("kac", "--quiver", "jordan", "--box", "2", "--flavor", "plain", "--format", "csv").stdout
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0] == {"flavor": "plain", "dim_vector": "1", "coeffs": "0 1"}
    tex = run("kac", "--quiver", "jordan", "--box", "1", "--format", "latex").stdout
    assert tex.startswith(r"\begin{tabular}") and r"dim\_vector" in tex


def test_big_coefficients_roundtrip(run):
    rows = _results(run("kac", "--quiver", "3-loop", "--box", "4", "--flavor", "plain"))
    assert all(isinstance(c, str) and int(c) >= 0 for r in rows for c in r["coeffs"])
