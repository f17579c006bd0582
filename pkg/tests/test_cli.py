import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from wglab.cli import main
from wglab.config import ExperimentConfig, resolve_threads
from wglab.errors import InvalidArgument

GOLDEN = Path(__file__).parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def _args(name):
    return [a.replace("{golden}", str(GOLDEN)) for a in CASES[name]]


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_outputs(name, tmp_path):
    out = tmp_path / f"{name}.csv"
    assert main(_args(name) + ["--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / f"{name}.csv").read_bytes()


def test_every_subcommand_has_a_golden_file():
    commands = {CASES[n][0] for n in CASES}
    assert commands == {"sieve", "count", "arcs", "expsum", "tau", "satotate", "twisted", "singular", "conjecture"}


def test_count_stdout(capsys):
    assert main(["count", "--kind", "ternary", "--N", "9"]) == 0
    assert capsys.readouterr().out == "9,4\n"


def test_singular_binary_prints_tail(capsys):
    assert main(["singular", "--kind", "binary", "--N", "30", "--cutoff", "100000"]) == 0
    fields = capsys.readouterr().out.strip().split(",")
    assert fields[0] == "30" and float(fields[2]) > 0 and float(fields[3]) < 1e-10


def test_malformed_flag_exit_two(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert main(["count", "--kind", "ternary", "--N", "nine", "--out", str(out)]) == 2
    assert main(["count", "--bogus", "--out", str(out)]) == 2
    assert main(["satotate", "--N", "101", "--interval", "2,1", "--out", str(out)]) == 2
    assert main([]) == 2
    assert not out.exists()
    assert list(tmp_path.iterdir()) == []


def test_out_of_range_exit_three(tmp_path):
    out = tmp_path / "x.csv"
    assert main(["count", "--kind", "ternary", "--N", "9", "200000000", "--out", str(out)]) == 3
    assert not out.exists()
    assert list(tmp_path.iterdir()) == []


def test_threads_do_not_change_output(tmp_path, monkeypatch):
    args = ["conjecture", "--N", "101", "103", "105", "107", "109", "111"]
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert main(args + ["--threads", "1", "--out", str(a)]) == 0
    assert main(args + ["--threads", "4", "--out", str(b)]) == 0
    monkeypatch.setenv("WGLAB_THREADS", "3")
    assert main(args + ["--out", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_threads_env(monkeypatch):
    monkeypatch.delenv("WGLAB_THREADS", raising=False)
    assert resolve_threads(None) == 1
    monkeypatch.setenv("WGLAB_THREADS", "5")
    assert resolve_threads(None) == 5
    assert resolve_threads(2) == 2
    monkeypatch.setenv("WGLAB_THREADS", "zero")
    with pytest.raises(InvalidArgument):
        resolve_threads(None)


def test_json_format(tmp_path):
    out = tmp_path / "t.json"
    assert main(["tau", "--limit", "3", "--format", "json", "--seed", "17", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == "wglab-v1" and doc["seed"] == 17
    assert doc["columns"] == ["n", "tau", "lambda", "theta"]
    assert doc["rows"][1][:2] == [2, -24]


def test_config_roundtrip_and_replay(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    out1 = tmp_path / "one.csv"
    assert main(["count", "--kind", "goldbach2", "--N", "10", "12", "--out", str(out1), "--save-config", str(cfg_path)]) == 0
    cfg = ExperimentConfig.from_json(cfg_path.read_text())
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg
    assert cfg.kind == "goldbach2" and cfg.N == [10, 12]
    out1.unlink()
    assert main(["--config", str(cfg_path)]) == 0
    assert out1.read_text().splitlines()[-2:] == ["10,3", "12,2"]


def test_config_validation():
    with pytest.raises(InvalidArgument):
        ExperimentConfig("count", delta_hypothesis=1.0)
    with pytest.raises(InvalidArgument):
        ExperimentConfig("plot")
    with pytest.raises(InvalidArgument):
        ExperimentConfig("count", format="xml")
    with pytest.raises(InvalidArgument):
        ExperimentConfig.from_dict({"command": "count", "colour": 1})
    cfg = ExperimentConfig("satotate", N=[101], interval=(0, 1.5), epsilon1=0.02, seed=3)
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg


def test_entry_point_subprocess(tmp_path):
    env = dict(os.environ)
    proc = subprocess.run(
        [sys.executable, "-m", "wglab.cli", "count", "--kind", "ternary", "--N", "9"],
        capture_output=True, text=True, env=env, cwd=tmp_path,
    )
    assert proc.returncode == 0 and proc.stdout == "9,4\n"


def test_library_does_not_import_cli():
    code = (
        "import sys, wglab.sieve, wglab.arith, wglab.repcount, wglab.expsum, wglab.hecke, "
        "wglab.satotate, wglab.singular, wglab.probmodel; print('wglab.cli' in sys.modules)"
    )
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert proc.stdout.strip() == "False"
