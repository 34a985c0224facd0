import csv
import json
import math

import numpy as np
import pytest

from jamsplit.cli import main
from jamsplit.configs import default_config, default_config_path
from jamsplit.metrics import DeviceDecision, system_rda
from jamsplit.scenario import scenario_from_config


def test_no_arguments_is_usage_error(capsys):
    assert main([]) == 1


def test_unknown_flag_is_usage_error(capsys):
    assert main(["solve", "--config", "default", "--frobnicate"]) == 1
    assert "usage" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "solve" in capsys.readouterr().out


def test_missing_config_file(tmp_path, capsys):
    assert main(["solve", "--config", str(tmp_path / "nope.json")]) == 1
    assert "no such file" in capsys.readouterr().err


def test_invalid_json_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["solve", "--config", str(bad)]) == 1
    assert "invalid JSON" in capsys.readouterr().err


def test_default_config_ships_with_package():
    path = default_config_path()
    assert path.exists()
    cfg = default_config()
    scn = scenario_from_config(cfg)
    assert scn.n_devices == 10
    assert scn.constants.max_power == 0.23
    assert scn.channel.noise_power == pytest.approx(1e-14, rel=1e-9)


def test_solve_writes_consistent_solution(tmp_path, capsys):
    out = tmp_path / "solution.json"
    code = main(["solve", "--config", "default", "--seed", "7",
                 "--scheme", "lc", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    cfg = default_config()
    cfg["seed"] = 7
    scn = scenario_from_config(cfg)
    decisions = [DeviceDecision(k, p, f) for k, p, f in
                 zip(payload["partitions"], payload["powers"],
                     payload["allocations"])]
    ev = system_rda(scn, decisions)
    assert payload["rda"] == pytest.approx(ev.rda, abs=1e-12)
    assert "rda=" in capsys.readouterr().out


def test_solve_proposed_scheme_end_to_end(tmp_path):
    out = tmp_path / "solution.json"
    code = main(["solve", "--config", "default", "--seed", "7", "--out",
                 str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["scheme"] == "proposed"
    cfg = default_config()
    cfg["seed"] = 7
    scn = scenario_from_config(cfg)
    decisions = [DeviceDecision(k, p, f) for k, p, f in
                 zip(payload["partitions"], payload["powers"],
                     payload["allocations"])]
    assert payload["rda"] == pytest.approx(system_rda(scn, decisions).rda,
                                           abs=1e-12)


def test_sweep_command_writes_outputs(tmp_path):
    out_dir = tmp_path / "out"
    code = main(["sweep", "--config", "default", "--param", "jammer_power",
                 "--values", "0.0", "1.0", "--reps", "1",
                 "--schemes", "lc,esc", "--seed", "3",
                 "--out-dir", str(out_dir), "--plots"])
    assert code == 0
    assert (out_dir / "sweep.csv").exists()
    assert (out_dir / "manifest.json").exists()
    for name in ("rda.svg", "total_delay.svg", "avg_accuracy.svg"):
        assert (out_dir / name).exists()
    with open(out_dir / "sweep.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2 * 1 * 2
    assert "wall_time" not in rows[0]


def test_sweep_rejects_unknown_scheme(tmp_path, capsys):
    code = main(["sweep", "--config", "default", "--param", "jammer_power",
                 "--values", "0.0", "--reps", "1", "--schemes", "bogus",
                 "--out-dir", str(tmp_path / "x")])
    assert code == 1
    assert "scheme" in capsys.readouterr().err


def test_fit_accuracy_command(tmp_path):
    samples = tmp_path / "samples.csv"
    rng = np.random.default_rng(0)
    with open(samples, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "sinr", "accuracy"])
        for s in np.linspace(0.0, 30.0, 25):
            acc = 0.86 / (1.0 + math.exp(-0.38 * (s - 6.98))) + 0.09
            writer.writerow([0, float(s), acc])
    out = tmp_path / "params.json"
    code = main(["fit-accuracy", "--samples", str(samples), "--k", "0",
                 "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["amplitude"] == pytest.approx(0.86, rel=0.01)
    assert payload["midpoint"] == pytest.approx(6.98, rel=0.01)


def test_profile_info_command(capsys):
    assert main(["profile-info", "--config", "default"]) == 0
    out = capsys.readouterr().out
    assert "555422720" in out
    assert "ifd_bits" in out
