import csv
import json
import subprocess
import sys

from riscsm.cli import main
from riscsm.harness import CSV_FIELDS


def test_csv_to_file(tmp_path):
    out = tmp_path / "o.csv"
    code = main(["--metric", "analytic-bound", "--snr", "0:10:5", "--out", str(out)])
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == CSV_FIELDS and len(rows) == 4


def test_json_to_stdout(capsys):
    assert main(["--metric", "asymptote", "--snr", "10:10:1", "--format", "json", "--set", "system.N=32"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["N"] == 32 and rows[0]["metric"] == "asymptote"


def test_flags_override_file(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("system: {N: 32, K: 8}\nsweep: {metric: ber, trials: 100000, seed: 1}\n")
    out = tmp_path / "o.csv"
    code = main(["--config", str(cfg), "--trials", "500", "--snr", "5:5:1", "--threads", "2", "--out", str(out)])
    assert code == 0
    row = list(csv.DictReader(out.open()))[0]
    assert row["metric"] == "ber" and int(row["trials"]) == 500 and row["seed"] == "1"


def test_config_error_exit_code(tmp_path, capsys):
    assert main(["--snr", "bad"]) == 1
    assert main(["--config", str(tmp_path / "missing.yaml")]) == 1
    assert main(["--unknown-flag"]) == 1
    assert "configuration error" in capsys.readouterr().err


def test_runtime_error_exit_code(tmp_path):
    assert main(["--metric", "analytic-bound", "--snr", "0:0:1", "--out", str(tmp_path / "no" / "x.csv")]) == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "riscsm", "--metric", "analytic-bound", "--snr", "0:0:1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("scheme,N,N_Q")
