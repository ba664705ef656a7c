import json
import math

import pytest

from hmsums.cli import run


def capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_usage_error_exit_code(capsys):
    assert run(["bogus"]) == 2
    capsys.readouterr()
    assert run(["classical"]) == 2          # no check selected
    capsys.readouterr()
    assert run(["sum", "--d", "7", "--dnum", "[1,0]", "--c", "oops"]) == 2
    capsys.readouterr()


def test_classical_recip_example(capsys):
    code, rep = capture(capsys, ["classical", "--recip", "--c", "3", "--d", "1"])
    assert code == 0
    assert rep["aggregate"]["pass"] is True
    assert rep["aggregate"]["max_defect"] == 0.0
    assert rep["cases"][0]["value"] == "1/18"
    assert rep["command"][0] == "hmsums"


def test_classical_rademacher_campaign(capsys):
    code, rep = capture(capsys, ["classical", "--rademacher",
                                 "--trials", "40", "--seed", "5"])
    assert code == 0
    assert rep["cases"][0]["defect"] == 0.0


def test_sum_value(capsys):
    code, rep = capture(capsys, ["sum", "--d", "7", "--dnum", "[1,0]",
                                 "--c", "[3,1]", "--z", "0.35+1.05i"])
    assert code == 0
    assert isinstance(rep["value"], float)


def test_phi_degree_one_matches_rademacher(capsys):
    # phi over the rational field is the Rademacher function over 12
    code, rep = capture(capsys, ["phi", "--d", "1",
                                 "--matrix", "[[1,0],[1,1]]"])
    assert code == 0
    assert rep["value"] == pytest.approx(2.0 / 12, abs=1e-9)


def test_psi_worked_value(capsys):
    code, rep = capture(capsys, ["psi", "--d", "7",
                                 "--matrix", "[[[2,1],[1,1]],[[3,1],[2,1]]]"])
    assert code == 0
    rt7 = math.sqrt(7)
    target = math.log((9 + 3 * rt7) * math.sqrt(2 + rt7) + 18 + 7 * rt7)
    assert rep["value"] == pytest.approx(target, abs=1e-4)


def test_psi_rejects_bad_determinant(capsys):
    code, rep = capture(capsys, ["psi", "--d", "7",
                                 "--matrix", "[[[2,1],[-3,-1]],[[-3,-1],[2,1]]]"])
    assert code == 1
    assert "error" in rep


def test_classify_tags(capsys):
    code, rep = capture(capsys, ["classify", "--d", "7",
                                 "--matrix", "[[[-2,-1],[1,1]],[[3,1],[-2,-1]]]"])
    assert code == 0
    assert rep["tags"] == ["hyperbolic", "elliptic"]


def test_la_report_fields(capsys):
    code, rep = capture(capsys, ["la", "--d", "7",
                                 "--matrix", "[[[-2,-1],[1,1]],[[3,1],[-2,-1]]]",
                                 "--s", "2", "--norm-bound", "500"])
    assert code == 0
    assert rep["heuristic_tail"] is True
    assert rep["value_re"] == pytest.approx(-1.2021, abs=5e-3)
    assert rep["value_im"] == 0.0
    assert rep["tail_error"] > 0


def test_verify_cocycle_campaign(capsys):
    code, rep = capture(capsys, ["verify", "cocycle", "--d", "7",
                                 "--trials", "3", "--seed", "1"])
    assert code == 0
    assert rep["aggregate"]["pass"] is True
    assert rep["aggregate"]["max_defect"] < rep["tol"]
    assert len(rep["cases"]) == 3


def test_verify_reciprocity_campaign(capsys):
    code, rep = capture(capsys, ["verify", "reciprocity", "--d", "7",
                                 "--trials", "3", "--seed", "2"])
    assert code == 0
    assert rep["aggregate"]["max_defect"] < 1e-6


def test_verify_hecke_campaign(capsys):
    code, rep = capture(capsys, ["verify", "hecke", "--d", "7",
                                 "--trials", "2", "--seed", "3"])
    assert code == 0
    assert rep["aggregate"]["max_defect"] < 1e-5


def test_theorem5_subcommand(capsys):
    code, rep = capture(capsys, [
        "theorem5", "--d", "7",
        "--matrix", "[[[-2,-1],[1,1]],[[3,1],[-2,-1]]]",
        "--s", "2", "--norm-bound", "500", "--quad-order", "8",
        "--weight-bound", "25", "--mu-cap", "2000", "--tol", "0.1"])
    assert code == 0
    assert rep["pass"] is True
    assert rep["value_im"] == pytest.approx(5.665, abs=0.05)


def test_env_var_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("HMSUMS_TOL", "1e-30")
    code, rep = capture(capsys, ["verify", "cocycle", "--d", "7",
                                 "--trials", "2", "--seed", "1"])
    assert code == 1                      # impossible tolerance fails the run
    assert rep["tol"] == 1e-30


def test_determinism_modulo_wall_time(capsys):
    argv = ["verify", "cocycle", "--d", "7", "--trials", "2", "--seed", "9"]
    _, r1 = capture(capsys, argv)
    _, r2 = capture(capsys, argv)
    for r in (r1, r2):
        del r["aggregate"]["wall_time"]
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
