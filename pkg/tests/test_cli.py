import json

import pytest

from osac.cli import main
from osac.sweep import SweepSpec, gain_columns, run_sweep
from osac.errors import ConfigError

SMALL = ["--omega", "0.05", "--sigma", "10", "--zeta", "10", "--slots", "100", "--seeds", "1"]


def test_smallest_sweep(tmp_path):
    out = tmp_path / "out"
    assert main(["sweep", *SMALL, "--out", str(out), "--traces"]) == 0
    gains = sorted(p.name for p in (out / "gains" / "sigma10").iterdir())
    assert gains == ["acr10.csv", "rev10.csv", "util10.csv"]
    assert len(list((out / "traces").iterdir())) == 3
    summary = json.loads((out / "summary.json").read_text())
    assert summary["stream_hashes_equal_across_policies"] is True
    for metric in ("rev", "acr", "util"):
        header = (out / "gains" / "sigma10" / f"{metric}10.csv").read_text().splitlines()[0]
        assert header.split(",") == gain_columns(metric)
    assert gain_columns("rev") == ["unit_value_beta_params", "linrp_rev_gain", "exprp_rev_gain",
                                   "y_error_lin", "y_error_exp"]


def test_sweep_is_byte_identical(tmp_path):
    args = ["--omega", "0.05", "0.5", "--sigma", "10", "20", "--zeta", "10", "--slots", "300", "--seeds", "1", "2"]
    main(["sweep", *args, "--out", str(tmp_path / "a")])
    main(["sweep", *args, "--out", str(tmp_path / "b")])
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*.csv"))
    assert len(files) == 1 + 2 * 3
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_sweep_worker_pool_matches_serial(tmp_path):
    spec = dict(omega_values=[0.1, 0.7], sigma_values=[10], zeta_values=[10], slots_per_run=200, seeds=[3, 4])
    run_sweep(SweepSpec(out_dir=str(tmp_path / "serial"), **spec))
    run_sweep(SweepSpec(out_dir=str(tmp_path / "pool"), workers=2, **spec))
    for name in ("cells.csv", "gains/sigma10/rev10.csv"):
        assert (tmp_path / "serial" / name).read_bytes() == (tmp_path / "pool" / name).read_bytes()


def test_invalid_spec_names_field():
    with pytest.raises(ConfigError) as exc:
        SweepSpec(omega_values=[])
    assert exc.value.field == "omega_values"
    with pytest.raises(ConfigError) as exc:
        SweepSpec(policies=["fcfs", "best"])
    assert exc.value.field == "policies"


def test_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["sweep", *SMALL, "--out", str(blocker / "sub")]) == 2
    assert "not writable" in capsys.readouterr().err


def test_run_single_line_and_determinism(capsys):
    args = ["run", "--omega", "0.05", "--sigma", "10", "--zeta", "10", "--slots", "500", "--seed", "3",
            "--policy", "linrp"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    fields = dict(kv.split("=") for kv in first.split())
    assert set(fields) == {"mu", "eta", "rho", "n", "H"}
    assert int(fields["n"]) <= int(fields["H"])


def test_run_single_hand_walk(tmp_path, capsys):
    # three requests in slot 1: the second is priced out by LinRP, see test_simulator
    stream = tmp_path / "s.csv"
    t = 1 / 3
    rows = [(1, 1, 1, 0.5, 0.2, 0.0, 1.0), (2, 1, 1, 0.1, 0.1, 0.1, 10.0), (3, 1, 1, 0.1, 0.1, 0.1, 12.0)]
    lines = ["id,timestamp,lifetime,demand_1,demand_2,demand_3,unit_value,weight_1,weight_2,weight_3,revenue"]
    for rid, ts, life, a, b, c, p in rows:
        rev = life * p * (t * a + t * b + t * c)
        lines.append(",".join(map(repr, (rid, ts, life, a, b, c, p, t, t, t, rev))))
    stream.write_text("\n".join(lines) + "\n")
    assert main(["replay", str(stream), "--policy", "linrp", "--theta", "100"]) == 0
    out = dict(kv.split("=") for kv in capsys.readouterr().out.split())
    assert out["n"] == "2" and out["H"] == "3"
    mu = (0.7 / 3 + 1.2) / 3
    assert float(out["mu"]) == pytest.approx(mu, rel=1e-12)
    # rho: after request 1 sum(u) = 0.7, after request 2 still 0.7, after request 3 1.0
    assert float(out["rho"]) == pytest.approx((0.7 + 0.7 + 1.0) / 3, rel=1e-12)


def test_zero_arrivals_is_an_error(capsys):
    assert main(["run", "--lambda", "1e-12", "--slots", "1"]) != 0
    assert "undefined" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("# scenario\nomega = 0.05\nslots = 300\npolicy = linrp\nseed = 2\n")
    main(["run", "--config", str(cfg)])
    from_file = capsys.readouterr().out
    main(["run", "--omega", "0.05", "--slots", "300", "--policy", "linrp", "--seed", "2"])
    assert capsys.readouterr().out == from_file
    main(["run", "--config", str(cfg), "--policy", "fcfs"])
    assert capsys.readouterr().out != from_file


def test_sweep_config_file_lists(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("omega = 0.05, 0.5\nsigma = 10\nzeta = 10\nslots = 100\nseeds = 1 2\n")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    rows = (tmp_path / "o" / "gains" / "sigma10" / "rev10.csv").read_text().splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == ["0.05", "0.5"]


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("colour = blue\n")
    assert main(["run", "--config", str(cfg)]) == 2


def test_generate_and_oracle(tmp_path, capsys):
    path = tmp_path / "s.csv"
    assert main(["generate", "--slots", "3", "--seed", "4", "--out", str(path)]) == 0
    assert main(["oracle", str(path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("revenue=")
