import io
import json
import math
import subprocess
import sys
from contextlib import redirect_stdout
from pathlib import Path

import pytest

from nonovershoot import cli, model

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


def parse_report(out: str) -> dict:
    lines = out.splitlines()
    assert lines[0].startswith("# claim:")
    return json.loads("\n".join(lines[1:]))


def test_calibrate_shipped_config(tmp_path):
    out_path = tmp_path / "spec.cfg"
    code, out = run_cli(["calibrate", str(CONFIGS / "pareto.cfg"),
                         "--out", str(out_path)])
    assert code == 0
    rep = parse_report(out)
    assert abs(rep["residual"]) <= 1e-10
    spec = model.spec_from_config(out_path.read_text())
    assert abs(model.residual(spec)) <= 1e-10


def test_calibrate_lattice_preserves_metadata(tmp_path):
    out_path = tmp_path / "lat.cfg"
    code, out = run_cli(["calibrate", str(CONFIGS / "lattice.cfg"),
                         "--out", str(out_path)])
    assert code == 0
    spec = model.spec_from_config(out_path.read_text())
    assert spec.lattice == 1.0
    assert spec.tail.variant == "lattice_pareto"


def test_calibrate_malformed_config_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("alpha = 0.75\nnot a config line\n")
    code = cli.main(["calibrate", str(bad)])
    assert code == 3
    assert "line 2" in capsys.readouterr().err


def test_usage_error_exit_3():
    code, _ = run_cli(["overshoot", "--mode", "levy", "--alpha", "1.5", "--n", "10"])
    assert code == 3
    code2 = cli.main(["no-such-command"])
    assert code2 == 3


def test_ruin_gambler_matches_closed_form(tmp_path):
    p = 0.3
    spec = model.gambler_spec(p)
    spec_path = tmp_path / "gambler.cfg"
    # gambler uses atom families, not serializable; go through the API fallback
    # by writing a lattice config instead and calling the suite directly
    from nonovershoot import suites

    report = suites.ruin_report(spec, [5.0], 20_000, seed=1)
    row = report["rows"][0]
    exact = (p / (1 - p)) ** 5
    assert abs(row["estimate"] - exact) <= 3.0 * row["stderr"] + 1e-12 * exact


def test_ruin_sweep_monotone_and_csv(tmp_path):
    csv_path = tmp_path / "sweep.csv"
    code, out = run_cli(["ruin", "--spec", str(CONFIGS / "pareto.cfg"),
                         "--r", "2", "4", "8", "--n", "4000", "--seed", "3",
                         "--csv", str(csv_path)])
    assert code == 0
    rep = parse_report(out)
    vals = [row["estimate"] for row in rep["rows"]]
    assert vals[0] > vals[1] > vals[2]
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "r,estimate,stderr,n,budget_exhausted"
    assert len(lines) == 4


def test_overshoot_walk_inherits_spec_alpha(tmp_path):
    code, out = run_cli(["overshoot", "--mode", "walk",
                         "--spec", str(CONFIGS / "pareto.cfg"),
                         "--r", "50", "--n", "500", "--seed", "1",
                         "--ks-bound", "0.9"])
    rep = parse_report(out)
    assert rep["alpha"] == 0.75
    assert code == 0


def test_overshoot_levy_csv(tmp_path):
    csv_path = tmp_path / "chi.csv"
    code, out = run_cli(["overshoot", "--mode", "levy", "--alpha", "0.6",
                         "--delta", "1e-3", "--n", "2000", "--seed", "2",
                         "--ks-bound", "0.2", "--csv", str(csv_path)])
    assert code == 0
    assert csv_path.read_text().startswith("replica,tau,chi,accepted")


def test_xtilde_moments_table():
    code, out = run_cli(["xtilde", "--alpha", "0.5", "--n", "2000",
                         "--delta-log", "1e-3", "--seed", "4"])
    rep = parse_report(out)
    assert code == 0 and rep["pass"]
    exact = [row["exact"] for row in rep["moments"]]
    assert exact[0] == pytest.approx(1.0, rel=1e-8)
    assert exact[1] == pytest.approx(4 / math.pi, rel=1e-8)


def test_xtilde_sensitivity_flag():
    code, out = run_cli(["xtilde", "--alpha", "0.6", "--n", "1500",
                         "--delta-log", "1e-3", "--seed", "5", "--sensitivity"])
    rep = parse_report(out)
    assert "sensitivity" in rep
    assert rep["sensitivity"]["delta_log_half"] == pytest.approx(5e-4)


def test_verify_condition2_pass():
    code, out = run_cli(["verify", "--suite", "condition2",
                         "--spec", str(CONFIGS / "pareto.cfg")])
    rep = parse_report(out)
    assert code == 0 and rep["pass"]


def test_verify_needs_spec():
    code, _ = run_cli(["verify", "--suite", "potter"])
    assert code == 3


def test_byte_identical_output_across_thread_counts():
    argv = ["xtilde", "--alpha", "0.6", "--n", "800", "--delta-log", "1e-3",
            "--seed", "9"]
    _, out1 = run_cli(["--threads", "1"] + argv)
    _, out2 = run_cli(["--threads", "2"] + argv)
    assert out1 == out2


def test_subprocess_determinism_and_seed_env():
    tail = ["verify", "--suite", "potter", "--spec", str(CONFIGS / "pareto.cfg"),
            "--seed", "5"]
    cmd = [sys.executable, "-m", "nonovershoot.cli"] + tail
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run([sys.executable, "-m", "nonovershoot.cli", "--threads", "2"]
                       + tail, capture_output=True, text=True)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    # env var overrides --seed
    import os

    env = dict(os.environ, NONOVERSHOOT_SEED="5")
    c = subprocess.run(
        [sys.executable, "-m", "nonovershoot.cli", "verify", "--suite", "potter",
         "--spec", str(CONFIGS / "pareto.cfg"), "--seed", "1234"],
        capture_output=True, text=True, env=env)
    assert c.stdout == a.stdout
