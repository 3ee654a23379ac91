"""CLI behavior: exit codes, report round-trips, and determinism."""

import json

import pytest

from shadowing.cli import main
from shadowing.core import (FiniteMetricSystem, discrete_space, line_space,
                            system_to_json)


def _write_system(tmp_path, system, name):
    path = tmp_path / (name + ".json")
    path.write_text(json.dumps(system_to_json(system)))
    return str(path)


@pytest.fixture
def identity2(tmp_path):
    return _write_system(tmp_path,
                         FiniteMetricSystem(line_space(2), (0, 1)), "id2")


@pytest.fixture
def rot3(tmp_path):
    return _write_system(tmp_path,
                         FiniteMetricSystem(discrete_space(3), (1, 2, 0)),
                         "rot3")


def test_validate_good(identity2, capsys):
    assert main(["validate", identity2]) == 0
    assert "valid" in capsys.readouterr().out


def test_validate_triangle_violation(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "points": ["a", "b", "c"],
        "metric": [["0", "1", "5"], ["1", "0", "1"], ["5", "1", "0"]],
        "map": [0, 1, 2]}))
    assert main(["validate", str(bad)]) == 2
    assert "triangle" in capsys.readouterr().out


def test_malformed_json_exit_code(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    assert main(["validate", str(bad)]) == 2


def test_decide_identity_counterexample(identity2, capsys):
    """Large delta lets the walk hop between the two fixed points; no
    orbit tracks it at eps = 1/2."""
    assert main(["decide", "shadowing", identity2,
                 "--eps", "1/2", "--delta", "3/2", "--no-timing"]) == 0
    out = capsys.readouterr().out
    assert ",false," in out


def test_decide_verify_certificates(identity2, rot3, capsys):
    for path in (identity2, rot3):
        for eps, delta in (("1/2", "3/2"), ("2", "1/4")):
            assert main(["decide", "shadowing", path, "--eps", eps,
                         "--delta", delta, "--verify-certificates"]) == 0


def test_property_scan(rot3, capsys):
    assert main(["property", "shadowing", rot3]) == 0
    out = capsys.readouterr().out
    assert "# property_verdict=true" in out


def test_oracle_agrees_with_decider(rot3, capsys):
    assert main(["oracle", "shadowing", rot3, "--eps", "1/2",
                 "--delta", "1/4", "--no-timing"]) == 0
    oracle_out = capsys.readouterr().out
    assert main(["decide", "shadowing", rot3, "--eps", "1/2",
                 "--delta", "1/4", "--no-timing"]) == 0
    decide_out = capsys.readouterr().out
    assert (",true," in oracle_out) == (",true," in decide_out)


def test_induce_round_trips(rot3, tmp_path, capsys):
    out = tmp_path / "induced.json"
    for kind in ("hyperspace", "symmetric", "product-self", "tower"):
        assert main(["induce", kind, rot3, "--out", str(out)]) == 0
        assert main(["validate", str(out)]) == 0


def test_factor_check(rot3, tmp_path, capsys):
    prod = tmp_path / "prod.json"
    assert main(["induce", "product-self", rot3, "--out", str(prod)]) == 0
    fm = tmp_path / "fm.json"
    fm.write_text(json.dumps({"domain": "prod.json", "codomain": "rot3.json",
                              "phi": [0, 0, 0, 1, 1, 1, 2, 2, 2]}))
    assert main(["factor-check", "shadowing", str(fm), "--no-timing"]) == 0
    out = capsys.readouterr().out
    assert "true,true" in out


def test_bad_factor_map_is_input_error(rot3, tmp_path, capsys):
    fm = tmp_path / "fm.json"
    fm.write_text(json.dumps({"domain": "rot3.json", "codomain": "rot3.json",
                              "phi": [0, 0, 0]}))
    assert main(["factor-check", "shadowing", str(fm)]) == 2


def test_experiment_csv_and_plot_data(tmp_path, capsys):
    out = tmp_path / "run.csv"
    plot = tmp_path / "plot.csv"
    assert main(["experiment", "tent-F3-shadowing", "--eps", "1/12",
                 "--delta", "1/24", "--horizon", "30",
                 "--out", str(out), "--emit-plot-data", str(plot)]) == 0
    text = out.read_text()
    assert text.startswith("step,state,defect,set_size")
    assert '"shadowable":false' in text
    assert plot.read_text().startswith("step,defect")


def test_experiment_budget_exit_code(tmp_path, capsys):
    assert main(["experiment", "tent-F3-shadowing", "--eps", "1/2",
                 "--delta", "1/24", "--horizon", "30",
                 "--pattern-budget", "50", "--out",
                 str(tmp_path / "x.csv")]) == 3


def test_bad_rational_flag_is_input_error(rot3, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["decide", "shadowing", rot3, "--eps", "0.5", "--delta", "1/4"])
    assert exc.value.code == 2


def test_table_deterministic(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["table", "--random", "5", "--max-size", "3", "--seed", "42"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert "seed=42" in text
    assert "# violations=0" in text
