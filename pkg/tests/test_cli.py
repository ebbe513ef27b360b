import json
import math

import pytest

from altbase.cli import main
from helpers import SQRT13

BASE13 = "(1+sqrt(13))/2,(5+sqrt(13))/6"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExpand:
    def test_greedy_digits(self, capsys):
        code, out, _ = run(
            capsys, "expand", "--base", BASE13, "--x", "(1+sqrt(5))/5",
            "--mode", "greedy", "--digits", "5",
        )
        assert code == 0
        assert "10102" in out

    def test_lazy_digits(self, capsys):
        code, out, _ = run(
            capsys, "expand", "--base", BASE13, "--x", "(1+sqrt(5))/5",
            "--mode", "lazy", "--digits", "5",
        )
        assert code == 0
        assert "01112" in out

    def test_zero(self, capsys):
        code, out, _ = run(capsys, "expand", "--base", BASE13, "--x", "0", "--digits", "5")
        assert code == 0
        assert "00000" in out

    def test_json_round_trip(self, capsys):
        code, out, _ = run(
            capsys, "expand", "--base", BASE13, "--x", "(1+sqrt(5))/5",
            "--digits", "5", "--json",
        )
        doc = json.loads(out)
        assert doc["schema_version"] == "1"
        assert doc["command"] == "expand"
        assert doc["payload"]["digits"] == [1, 0, 1, 0, 2]
        assert doc["base"][0] == pytest.approx((1 + SQRT13) / 2, rel=1e-16)


class TestDensity:
    def test_sqrt13_constants(self, capsys):
        code, out, _ = run(capsys, "density", "--base", BASE13, "--slot", "0", "--json")
        doc = json.loads(out)
        b0 = (1 + SQRT13) / 2
        assert doc["payload"]["K"] == 3
        assert doc["payload"]["C"] == pytest.approx(1 + 3 / b0**2, abs=1e-12)

    def test_binary_uniform(self, capsys):
        code, out, _ = run(capsys, "density", "--base", "2", "--json")
        doc = json.loads(out)
        assert doc["payload"]["K"] == 0
        assert doc["payload"]["C"] == 1.0

    def test_csv(self, capsys, tmp_path):
        path = tmp_path / "density.csv"
        code, _, _ = run(
            capsys, "density", "--base", "phi*phi", "--csv", str(path), "--samples", "64",
        )
        assert code == 0
        lines = path.read_text().splitlines()
        assert lines[0] == "x,density"
        assert len(lines) > 64


class TestMeasureFreqEntropy:
    def test_measure_known_interval(self, capsys):
        code, out, _ = run(
            capsys, "measure", "--base", BASE13, "--slot", "0",
            "--interval", "0,1/((1+sqrt(13))/2)", "--json",
        )
        doc = json.loads(out)
        assert doc["payload"]["value"] == pytest.approx((13 + SQRT13) / 26, abs=1e-9)

    def test_freq_with_empirical(self, capsys):
        code, out, _ = run(
            capsys, "freq", "--base", BASE13, "--digit", "0",
            "--empirical", "20000", "--x0", "0.4142135623730951", "--json",
        )
        doc = json.loads(out)
        assert doc["payload"]["frequency"] == pytest.approx(
            doc["payload"]["empirical"], abs=2e-2
        )

    def test_entropy(self, capsys):
        code, out, _ = run(capsys, "entropy", "--base", "2", "--json")
        assert json.loads(out)["payload"]["entropy"] == pytest.approx(math.log(2), abs=1e-12)


class TestCompare:
    def test_disagreement(self, capsys):
        code, out, _ = run(capsys, "compare", "--base", "phi,phi,sqrt(5)", "--json")
        doc = json.loads(out)
        assert doc["payload"]["coincide"] is False
        (lo, hi), = doc["payload"]["intervals"]
        assert lo == pytest.approx(0.7236067977, abs=1e-9)
        assert hi == pytest.approx(0.7888543820, abs=1e-9)

    def test_coincide(self, capsys):
        code, out, _ = run(capsys, "compare", "--base", "3/2,3/2,4", "--json")
        assert json.loads(out)["payload"]["coincide"] is True


class TestOrbitGraph:
    def test_orbit_csv(self, capsys, tmp_path):
        path = tmp_path / "orbit.csv"
        code, _, _ = run(
            capsys, "orbit", "--base", BASE13, "--x", "0.25", "--steps", "6",
            "--csv", str(path),
        )
        lines = path.read_text().splitlines()
        assert lines[0] == "step,slot,x,digit"
        assert len(lines) == 7
        assert lines[1].startswith("0,0,0.25,")

    def test_graph_files(self, capsys, tmp_path):
        path = tmp_path / "graph.csv"
        code, _, _ = run(
            capsys, "graph", "--base", BASE13, "--csv", str(path), "--samples", "32",
        )
        for kind in ("greedy", "lazy"):
            lines = (tmp_path / f"graph_{kind}.csv").read_text().splitlines()
            assert lines[0] == "x,y,branch_index,slot"
            assert len(lines) > 50


class TestDeterminismAndErrors:
    def test_byte_identical_json(self, capsys):
        argv = ["freq", "--base", BASE13, "--digit", "1", "--empirical", "5000",
                "--seed", "7", "--json"]
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_parse_error_exit(self, capsys):
        code, _, err = run(capsys, "expand", "--base", "2+*3", "--x", "0.5")
        assert code == 2
        assert "position" in err

    def test_domain_error_exit(self, capsys):
        code, _, _ = run(capsys, "expand", "--base", "0.5", "--x", "0.1")
        assert code == 3

    def test_numeric_error_exit(self, capsys):
        code, _, _ = run(capsys, "density", "--base", "phi*phi", "--truncation", "2")
        assert code == 4

    def test_resource_error_exit(self, capsys):
        code, _, _ = run(capsys, "compare", "--base", "1000000.5,1000000.5")
        assert code == 5

    def test_env_seed_default(self, capsys, monkeypatch):
        monkeypatch.setenv("ALTBASE_SEED", "31337")
        _, out, _ = run(capsys, "freq", "--base", "2", "--digit", "1",
                        "--empirical", "100", "--json")
        assert json.loads(out)["payload"]["seed"] == 31337
