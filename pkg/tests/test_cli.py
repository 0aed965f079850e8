import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
import yaml

from falsifiable import report
from falsifiable.cli import ConfigError, describe, execute, main, run


def write(tmp_path, config, name="config.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(config))
    return str(path)


def test_sweep_m2_has_fifteen_passing_rows():
    rep = run({"scenario": "sweep", "m": 2, "n": 2})
    assert len(rep["body"]["rows"]) == 15
    assert rep["body"]["summary"]["failed"] == 0
    tags = {c["tag"] for c in rep["body"]["checks"]}
    assert {"D", "prop-radem-slt", "prop-cover-slt", "range"} <= tags


def test_uni_corpus_to_length_four():
    rep = run({"scenario": "uni", "corpus": {"max_len": 4}})
    assert len(rep["body"]["rows"]) == 31
    assert all(r["pass"] for r in rep["body"]["rows"])
    assert rep["body"]["machine"] == "toy-v1"


def test_slt_singleton_has_no_violations():
    rep = run({"scenario": "slt", "theory": ["01"], "n": 20, "trials": 200, "seed": 0,
               "distribution": {"labels": "01", "noise": "1/4"}})
    row = rep["body"]["rows"][0]
    assert row["soft_violation_rate"] == 0 and row["hard_violation_rate"] == 0
    assert rep["body"]["summary"]["failed"] == 0


def test_slt_requires_a_seed():
    with pytest.raises(ConfigError) as err:
        run({"scenario": "slt", "theory": ["01"], "n": 20})
    assert err.value.field == "seed"


def test_seq_scenario():
    rep = run({"scenario": "seq", "theory": "constants", "m": 2, "depth": 2})
    row = rep["body"]["rows"][0]
    assert row["V"]["exact"] == "1/4"
    assert row["zero_cover"] <= row["q_image"]


def test_same_seed_gives_identical_bodies():
    config = {"scenario": "slt", "theory": "constants", "m": 2, "n": 15, "trials": 120, "seed": 7,
              "distributions": ["uniform", {"predictor": 0, "noise": "1/4"}]}
    assert report.dumps_body(run(dict(config))) == report.dumps_body(run(dict(config)))


def test_parallel_sweep_matches_serial():
    serial = run({"scenario": "sweep", "m": 2, "n": 1})
    parallel = run({"scenario": "sweep", "m": 2, "n": 1, "jobs": 2})
    body_s, body_p = serial["body"], parallel["body"]
    body_p["config"] = body_s["config"]
    assert json.dumps(body_s, sort_keys=True) == json.dumps(body_p, sort_keys=True)


@pytest.mark.parametrize("config, field", [
    ({"scenario": "nope"}, "scenario"),
    ({"scenario": "sweep"}, "m"),
    ({"scenario": "sweep", "m": 2, "n": 5}, "n"),
    ({"scenario": "seq", "theory": "bogus", "m": 2, "depth": 1}, "theory"),
    ({"scenario": "sweep", "m": 2, "ceilings": {"tree_depth": 9}}, "ceilings"),
    ({"scenario": "sweep", "m": 2, "ceilings": {"nonsense": 1}}, "ceilings"),
])
def test_config_errors_name_the_field(config, field):
    with pytest.raises(ConfigError) as err:
        run(config)
    assert err.value.field == field


def test_raised_ceiling_allowed_when_unsafe():
    rep = run({"scenario": "uni", "corpus": ["0"], "ceilings": {"program_len": 26}}, unsafe=True)
    assert rep["body"]["summary"]["failed"] == 0


def test_describe():
    text = describe({"scenario": "sweep", "m": 3, "n": 2, "depth": 3})
    assert "theories: 255" in text and "2187" in text
    assert "511 planned" in describe({"scenario": "uni", "corpus": {"max_len": 8}})
    with pytest.raises(ConfigError):
        describe({"scenario": "sweep", "m": 2, "ceilings": {"sweep_domain": 9}})


def test_csv_round_trips_exact_values():
    rep, rows = execute({"scenario": "sweep", "m": 2, "n": 2})
    text = report.csv_text(rows)
    parsed = report.read_csv(io.StringIO(text))
    assert [r["F_n"] for r in parsed] == [r["F_n"] for r in rows]
    assert all(isinstance(r["F_n"], Fraction) for r in parsed)


def test_main_exit_codes(tmp_path, capsys):
    ok = write(tmp_path, {"scenario": "uni", "corpus": ["0", "01"]})
    out = tmp_path / "r.json"
    table = tmp_path / "r.csv"
    assert main(["verify", ok, "--out", str(out), "--csv", str(table)]) == 0
    assert json.loads(out.read_text())["body"]["summary"]["failed"] == 0
    assert table.read_text().startswith("y,loss,loss_decimal")
    assert main(["verify", write(tmp_path, {"scenario": "zzz"}, "bad.yaml")]) == 2
    assert main(["verify", ok, "--ceiling-override", "program_len=30"]) == 2
    assert main(["verify", ok, "--ceiling-override", "program_len=30", "--unsafe"]) == 0
    assert main(["verify", ok, "--dry-run"]) == 0
    assert main(["bogus"]) == 2
    capsys.readouterr()


def test_main_reports_failures_with_exit_one(tmp_path):
    # The lifted-VC reduction fails on this theory, so the run must exit 1.
    config = write(tmp_path, {"scenario": "seq", "theory": ["001", "101"], "depth": 2})
    assert main(["verify", config, "--out", str(tmp_path / "r.json")]) == 1


def test_measure_game_and_sol(capsys):
    assert main(["measure", "--theory", "00,11", "--inputs", "0,1"]) == 0
    body = json.loads(capsys.readouterr().out)["body"]
    assert body["rows"][0]["F"]["exact"] == "1/2"
    assert main(["measure", "--theory", "constants", "--m", "2", "--tree", "0,1,1"]) == 0
    assert json.loads(capsys.readouterr().out)["body"]["rows"][0]["zero_cover"] == 2
    assert main(["game", "--theory", "0,1", "--rounds", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["body"]["rows"][0]["V"]["exact"] == "1/2"
    assert main(["sol", "0", "00"]) == 0
    assert len(json.loads(capsys.readouterr().out)["body"]["rows"]) == 2
    assert main(["game", "--theory", "constants", "--m", "5", "--rounds", "1"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "falsifiable", "sol", "--max-len", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["body"]["rows"]) == 3
