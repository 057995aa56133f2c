import json
import math

import numpy as np
import pytest

from wass_smooth.cli import main
from wass_smooth.designs import known_design
from wass_smooth.measures import measure_to_json


@pytest.fixture
def files(tmp_path):
    paths = {}

    def dump(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        paths[name] = str(path)

    dump("delta0.json", {"space": "torus", "dim": 1, "points": [[0.0]]})
    dump("pair.json", {"space": "torus", "dim": 1, "points": [[0.0], [0.5]]})
    dump("oct.json", measure_to_json(known_design("octahedron")))
    dump("bad.json", {"space": "torus"})
    paths["dir"] = str(tmp_path)
    return paths


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_heat_optimize_value(files, capsys):
    code, out, _ = run_cli(capsys, "bound", "torus-heat", "--mu", "vol",
                           "--nu", files["delta0.json"], "--p", "1", "--c", "0",
                           "--optimize", "1e-4", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] > 0.25
    assert payload["valid"] is True


def test_bound_jackson_identical_zero_series(files, capsys):
    code, out, _ = run_cli(capsys, "bound", "torus-jackson", "--mu",
                           files["pair.json"], "--nu", files["pair.json"],
                           "--p", "2", "--c", "1", "--param", "5")
    assert code == 0
    assert json.loads(out)["fourier_term"] == 0.0


def test_bound_winf_range_violation_exit_two(files, capsys):
    code, out, err = run_cli(capsys, "bound", "sphere-winf", "--mu", "vol",
                             "--nu", files["oct.json"], "--p", "inf", "--c", "1",
                             "--b", "0.1", "--r", "0.0001", "--param", "0.9")
    assert code == 2
    assert out == ""  # no partial JSON
    assert "d ≥ 3" in err  # the octahedron lives on S^2


def test_bound_requires_inf_for_winf(files, capsys):
    code, _, err = run_cli(capsys, "bound", "torus-winf", "--mu", "vol",
                           "--nu", files["delta0.json"], "--p", "2", "--c", "1",
                           "--b", "0.5", "--r", "0.01", "--param", "0.3")
    assert code == 2 and "p = inf" in err


def test_bound_torus_winf_valid(files, capsys):
    code, out, _ = run_cli(capsys, "bound", "torus-winf", "--mu", "vol",
                           "--nu", files["pair.json"], "--p", "inf", "--c", "1",
                           "--b", "0.5", "--r", "0.05", "--optimize", "0.25", "0.6")
    assert code == 0
    payload = json.loads(out)
    assert payload["valid"] and payload["value"] >= 0.25


def test_oracle_circle_w1(files, capsys):
    code, out, _ = run_cli(capsys, "oracle", "circle-w1", "--mu",
                           files["delta0.json"], "--nu", "vol")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(0.25)


def test_oracle_discrete_identical(files, capsys):
    code, out, _ = run_cli(capsys, "oracle", "discrete", "--p", "2", "--mu",
                           files["pair.json"], "--nu", files["pair.json"])
    assert code == 0
    assert json.loads(out)["value"] == 0.0


def test_oracle_vs_vol(files, capsys):
    code, out, _ = run_cli(capsys, "oracle", "vs-vol", "--nu", files["oct.json"],
                           "--p", "1", "--m", "500")
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "enclosure" and payload["error_radius"] > 0


def test_oracle_plan_flag(files, capsys):
    code, out, _ = run_cli(capsys, "oracle", "discrete", "--p", "1", "--mu",
                           files["delta0.json"], "--nu", files["pair.json"], "--plan")
    assert code == 0
    assert "plan" in json.loads(out)


def test_design_check_exit_codes(files, capsys):
    code, out, _ = run_cli(capsys, "design", "check", "--points", "octahedron",
                           "--t", "3")
    assert code == 0 and json.loads(out)["is_design"]
    code, out, _ = run_cli(capsys, "design", "check", "--points", "octahedron",
                           "--t", "4")
    assert code == 3


def test_design_verify(files, capsys):
    code, out, _ = run_cli(capsys, "design", "verify", "--points", "icosahedron",
                           "--t", "5", "--p", "1", "--m", "500")
    assert code == 0
    payload = json.loads(out)
    assert payload["corollary_bound"] == pytest.approx(59.3412, rel=1e-4)
    assert payload["oracle"]["value"] - payload["oracle"]["error_radius"] \
        <= payload["corollary_bound"]


def test_io_error_exit_one(files, capsys):
    code, out, err = run_cli(capsys, "oracle", "circle-w1", "--mu",
                             files["dir"] + "/missing.json", "--nu", "vol")
    assert code == 1 and out == ""
    code, _, err = run_cli(capsys, "oracle", "circle-w1", "--mu",
                           files["bad.json"], "--nu", "vol")
    assert code == 2


def test_suite_reproducible_and_empty(files, capsys):
    args = ("suite", "soundness", "--seed", "7", "--n", "2", "--space", "torus1",
            "--p", "1,2")
    code, out1, _ = run_cli(capsys, *args)
    assert code == 0
    code, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    rows = out1.strip().splitlines()
    assert rows[0].startswith("instance,space,p,")
    assert len(rows) == 1 + 2 * 2 * 2  # instances x p values x methods

    code, out, _ = run_cli(capsys, "suite", "soundness", "--seed", "1", "--n", "0",
                           "--space", "torus1", "--p", "1")
    assert code == 0
    assert out.strip() == rows[0]


def test_verify_br_helper(files, capsys):
    # single atom: every radius-0.6 ball on T^1 contains it (covering radius 1/2)
    code, out, _ = run_cli(capsys, "bound", "torus-winf", "--mu", "vol",
                           "--nu", files["delta0.json"], "--p", "inf", "--c", "1",
                           "--b", "1.0", "--r", "0.6", "--verify-br",
                           "--optimize", "3.0", "4.0")
    assert code == 0
    # b above the minimum weight must be rejected
    code, _, err = run_cli(capsys, "bound", "torus-winf", "--mu", "vol",
                           "--nu", files["pair.json"], "--p", "inf", "--c", "1",
                           "--b", "0.9", "--r", "0.3", "--verify-br",
                           "--optimize", "1.5", "2.0")
    assert code == 2 and "minimum atom weight" in err
