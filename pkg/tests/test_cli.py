import csv
import io
import json

import pytest

from graphcodes import cli
from graphcodes.cli import ExperimentConfig, main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "64", "--p", "0.3", "--trials", "20", "--seed", "1")
    assert code == 0
    assert out.splitlines()[0] == ",".join(cli.ESTIMATE_COLUMNS)
    (row,) = rows_of(out)
    assert row["n"] == "64" and row["trials"] == "20"
    assert 0 <= float(row["ci_low"]) <= float(row["point"]) <= float(row["ci_high"]) <= 1


def test_simulate_missing_flag_is_usage_error(capsys):
    code, _, err = run(capsys, "simulate", "--p", "0.3")
    assert code == 2 and "usage" in err


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_simulate_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["simulate", "--n", "64", "--p", "0.35", "--trials", "25", "--seed", "9",
                     "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_p0_matches_kolchin_of_generators(capsys):
    # the generators come from a nullspace basis, so at p = 0 nothing fails
    code, out, _ = run(capsys, "simulate", "--n", "128", "--p", "0", "--trials", "30", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["rows"][0]["failures"] == 0
    assert set(data["rows"][0]["causes"]) == {"shape-infeasible", "F-rank-deficient"}


def test_sweep_rows_and_slope(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "64", "128", "--p", "0.35", "--w", "3",
                       "--trials", "30", "--seed", "2")
    assert code == 0
    rows = rows_of(out)
    assert [r["kind"] for r in rows] == ["estimate", "estimate", "summary"]
    assert rows[-1]["slope"] != ""


def test_sweep_single_n_has_empty_slope(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "64", "--p", "0.3", "--trials", "10")
    assert code == 0
    assert rows_of(out)[-1]["slope"] == ""


def test_sweep_descending_rejected(capsys):
    code, _, _ = run(capsys, "sweep", "--n", "128,64", "--p", "0.3", "--trials", "10")
    assert code == 2


def test_loglog_slope():
    assert cli.loglog_slope([10, 100], [0.1, 0.01]) == pytest.approx(-1.0)
    assert cli.loglog_slope([10], [0.1]) is None
    assert cli.loglog_slope([10, 20], [0.0, 0.1]) is None


def test_gcheck_outside_claimed_range_not_asserted(capsys):
    code, out, _ = run(capsys, "gcheck", "--start", "0.2", "--stop", "0.3", "--step", "0.05")
    rows = rows_of(out)
    assert code == 0
    assert [r["asserted"] for r in rows] == ["false"] * 3


def test_gcheck_high_range_all_negative(capsys):
    code, out, _ = run(capsys, "gcheck", "--start", "0.36", "--stop", "0.495", "--step", "0.005")
    assert code == 0
    assert all(r["sign"] == "negative" for r in rows_of(out))


def test_gcheck_exit_code_tracks_asserted_sign(capsys):
    code, out, _ = run(capsys, "gcheck")
    rows = rows_of(out)
    assert len(rows) == 33
    bad = [r for r in rows if r["asserted"] == "true" and r["sign"] != "negative"]
    assert code == (1 if bad else 0)


@pytest.mark.parametrize("step", ["0", "-0.01"])
def test_gcheck_bad_step(capsys, step):
    code, _, _ = run(capsys, "gcheck", "--step", step)
    assert code == 2


def test_kolchin_command(capsys):
    code, out, _ = run(capsys, "kolchin", "--n", "64", "128", "--trials", "50", "--seed", "3")
    assert code == 0
    assert [r["n"] for r in rows_of(out)] == ["64", "128"]


def test_weights_command(capsys):
    code, out, _ = run(capsys, "weights", "--n", "256", "--samples", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["rows"]) == 2 and "frac_degree_within" in data["summary"][0]


def test_oracle_verify_command(capsys):
    code, out, _ = run(capsys, "oracle-verify", "--n", "7", "--samples", "15", "--seed", "4")
    assert code == 0
    assert all(r["instances"] == r["passed"] for r in rows_of(out))
    code, _, _ = run(capsys, "oracle-verify", "--n", "20")
    assert code == 2


def test_distance_and_entropy_commands(capsys):
    code, out, _ = run(capsys, "distance", "--n", "14", "--samples", "2")
    assert code == 0 and len(rows_of(out)) == 2
    code, out, _ = run(capsys, "entropy", "--n", "8", "--samples", "3")
    rows = rows_of(out)
    assert code == 0 and all(r["schmidt_log2"] == r["entropy"] for r in rows)


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": [64], "p": 0.3, "trials": 12, "seed": 5}))
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--trials", "7")
    (row,) = rows_of(out)
    assert code == 0 and row["trials"] == "7" and row["seed"] == "5"


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": [64], "p": 0.3, "bogus": 1}))
    code, _, _ = run(capsys, "simulate", "--config", str(cfg))
    assert code == 2


def test_config_roundtrip():
    cfg = ExperimentConfig(command="sweep", n=[256, 512], p=0.35, rate=0.25, w=3.0, seed=2**63 + 5)
    assert ExperimentConfig.from_json(cfg.to_json()) == cfg


def test_disagreement_exits_1(monkeypatch, capsys):
    import graphcodes.erasure as er

    monkeypatch.setattr(er, "is_recoverable", lambda dp: False)
    code, _, err = run(capsys, "simulate", "--n", "32", "--p", "0", "--trials", "3")
    assert code == 1 and "assertion" in err


def test_help_documents_columns(capsys):
    with pytest.raises(SystemExit):
        main(["simulate", "--help"])
    out = capsys.readouterr().out
    assert "ci_high" in out
