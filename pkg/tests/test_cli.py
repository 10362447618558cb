import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from pidkit.cli import main

TWO_BIT_COPY = """\
alphabet x y t
0 0 0 0.25
0 1 1 0.25
1 0 2 0.25
1 1 3 0.25
"""

XOR = """\
alphabet x y t
0 0 0 0.25
0 1 1 0.25
1 0 1 0.25
1 1 0 0.25
"""


@pytest.fixture()
def runner():
    return CliRunner()


def write(tmp_path: Path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def parse_atoms(output: str) -> dict:
    values = {}
    for line in output.splitlines():
        if " = " in line:
            key, _, value = line.partition(" = ")
            values[key.strip()] = value.strip()
    return values


class TestPidCommand:
    def test_two_bit_copy_bits(self, runner, tmp_path):
        path = write(tmp_path, "copy.joint", TWO_BIT_COPY)
        result = runner.invoke(main, ["pid", path, "--kind", "imin", "--units", "bits"])
        assert result.exit_code == 0
        values = parse_atoms(result.output)
        assert float(values["r"]) == pytest.approx(1.0, abs=1e-10)
        assert float(values["s"]) == pytest.approx(1.0, abs=1e-10)

    def test_xor_bits(self, runner, tmp_path):
        path = write(tmp_path, "xor.joint", XOR)
        result = runner.invoke(main, ["pid", path, "--kind", "imin", "--units", "bits"])
        values = parse_atoms(result.output)
        assert float(values["s"]) == pytest.approx(1.0, abs=1e-10)
        assert float(values["r"]) == pytest.approx(0.0, abs=1e-10)
        assert float(values["u_x"]) == pytest.approx(0.0, abs=1e-10)

    def test_malformed_probabilities_exit_nonzero(self, runner, tmp_path):
        path = write(tmp_path, "bad.joint", "alphabet x y t\n0 0 0 0.5\n1 1 1 0.4\n")
        result = runner.invoke(main, ["pid", path])
        assert result.exit_code != 0
        assert "sum" in result.output


class TestAnalyticLinearCommand:
    def test_reference_run(self, runner):
        result = runner.invoke(main, ["analytic-linear", "-a", "1", "-b", "2", "--rho", "0"])
        assert result.exit_code == 0
        assert "S=inf" in result.output
        assert "U_Y=0.6931471805599453" in result.output

    def test_precondition_errors(self, runner):
        result = runner.invoke(main, ["analytic-linear", "-a", "2", "-b", "1", "--rho", "0"])
        assert result.exit_code != 0
        assert "a < b" in result.output
        result = runner.invoke(main, ["analytic-linear", "-a", "1", "-b", "2", "--rho", "1.5"])
        assert result.exit_code != 0
        assert "|rho| < 1" in result.output


class TestMcCommand:
    def test_linear_estimates(self, runner):
        result = runner.invoke(
            main,
            ["mc", "--kernel", "linear", "-a", "1", "-b", "2", "--samples", "20000",
             "--seed", "3", "--estimator", "upm_x"],
        )
        assert result.exit_code == 0
        assert "upm_x" in result.output

    def test_below_sample_floor(self, runner):
        result = runner.invoke(
            main, ["mc", "--kernel", "linear", "-a", "1", "-b", "2", "--samples", "10"]
        )
        assert result.exit_code != 0

    def test_out_writes_manifest_and_reruns_identically(self, runner, tmp_path):
        args = ["mc", "--kernel", "sigmoidal", "--alpha", "-1", "--samples", "20000",
                "--seed", "5", "--estimator", "upm_x"]
        for out in ("m1", "m2"):
            result = runner.invoke(main, [*args, "--out", str(tmp_path / out)])
            assert result.exit_code == 0, result.output
        for name in ("mc.json", "manifest.json"):
            assert (tmp_path / "m1" / name).read_bytes() == (tmp_path / "m2" / name).read_bytes()
        manifest = json.loads((tmp_path / "m1" / "manifest.json").read_text())
        assert manifest["seed"] == 5
        assert manifest["config"]["kernel"]["alpha"] == -1.0


class TestExperimentCommand:
    def run_experiment(self, runner, out_dir, extra=()):
        args = ["experiment", "1", "--out", str(out_dir), "--batches", "2",
                "--samples", "60", "--seed", "11", *extra]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        return out_dir

    def test_writes_all_files(self, runner, tmp_path):
        out = self.run_experiment(runner, tmp_path / "run")
        names = sorted(p.name for p in out.iterdir())
        assert names == ["experiment1_pairs.csv", "manifest.json", "summary.json"]

    def test_rerun_is_byte_identical(self, runner, tmp_path):
        out1 = self.run_experiment(runner, tmp_path / "run1")
        out2 = self.run_experiment(runner, tmp_path / "run2")
        for name in ("experiment1_pairs.csv", "summary.json", "manifest.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_manifest_round_trip(self, runner, tmp_path):
        out1 = self.run_experiment(runner, tmp_path / "run1", extra=["--rho", "0.25"])
        manifest = out1 / "manifest.json"
        assert json.loads(manifest.read_text())["config"]["rho"] == 0.25
        out2 = tmp_path / "run2"
        result = runner.invoke(
            main, ["experiment", "1", "--config", str(manifest), "--out", str(out2)]
        )
        assert result.exit_code == 0, result.output
        for name in ("experiment1_pairs.csv", "summary.json", "manifest.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_unknown_config_key_fails(self, runner, tmp_path):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("bogus: 3\n")
        result = runner.invoke(
            main, ["experiment", "1", "--config", str(cfg), "--out", str(tmp_path / "o")]
        )
        assert result.exit_code != 0
        assert "bogus" in result.output
