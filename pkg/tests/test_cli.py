import csv
import io
import json
import math
import subprocess
import sys

import pytest

from cosourcing import tables
from cosourcing.cli import main

UNIFORM_100 = '{"kind":"uniform","lo":90,"hi":110}'
SMALL = '{"kind":"uniform","lo":0,"hi":2}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_solve_exact_small(capsys):
    code, out, _ = run(capsys, "solve-exact", "--dist", SMALL)
    assert code == 0
    (row,) = rows(out)
    assert row["N_opt"] == "3"
    assert float(row["C_opt"]) == pytest.approx(0.4149, abs=1e-4)
    assert row["regime"] == "co-sourcing"
    assert out.splitlines()[0] == "label,c,N_opt,C_opt,N_max,nodes,regime,capped_searches,at_boundary"


def test_solve_exact_from_config(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"distribution": json.loads(UNIFORM_100), "nodes": 32, "fast": True}))
    code, out, _ = run(capsys, "solve-exact", "--config", str(cfg))
    assert code == 0
    assert rows(out)[0]["N_opt"] == "121"


def test_solve_exact_prohibitive_staffing(capsys):
    code, out, _ = run(capsys, "solve-exact", "--dist", UNIFORM_100, "--c", "2", "--nodes", "8", "--fast")
    assert code == 0
    (row,) = rows(out)
    assert (row["N_opt"], row["regime"]) == ("0", "complete-outsourcing")


def test_curve_file(tmp_path, capsys):
    curve = tmp_path / "curve.csv"
    code, _, _ = run(capsys, "solve-exact", "--dist", SMALL, "--n-max", "6", "--curve", str(curve))
    assert code == 0
    lines = curve.read_text().splitlines()
    assert lines[0] == "N,expected_cost"
    assert len(lines) == 8


@pytest.mark.parametrize(
    "argv",
    [
        ["solve-exact", "--dist", "{not json"],
        ["solve-exact", "--dist", '{"kind":"uniform","lo":5,"hi":1}'],
        ["solve-exact", "--dist", UNIFORM_100, "--gamma", "0"],
        ["solve-exact"],
        ["solve-exact", "--dist", '{"kind":"poisson","mean":3}'],
        ["figure7", "--dist", UNIFORM_100, "--n-grid", "[]"],
        ["figure7", "--dist", UNIFORM_100, "--n-grid", "10:5"],
        ["figure7", "--dist", UNIFORM_100, "--n-grid", "a:b"],
        ["simulate", "--l", "3"],
        ["simulate", "--l", "3", "--N", "2", "--T", "x"],
        ["compare", "--dist", UNIFORM_100, "--seed", "3"],
        ["reproduce-table", "table9"],
    ],
)
def test_config_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 2
    assert capsys.readouterr().err.strip()


def test_missing_config_file(capsys, tmp_path):
    code, _, err = run(capsys, "policy", "u", "--config", str(tmp_path / "none.json"))
    assert code == 2
    assert "cannot read config" in err


def test_malformed_config_file(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{")
    code, _, err = run(capsys, "compare", "--config", str(cfg))
    assert code == 2
    assert "malformed JSON" in err


def test_unknown_config_field(capsys, tmp_path):
    cfg = tmp_path / "extra.json"
    cfg.write_text(json.dumps({"distribution": json.loads(UNIFORM_100), "colour": "red"}))
    code, _, err = run(capsys, "policy", "nv", "--config", str(cfg))
    assert code == 2
    assert "colour" in err


def test_domain_error_exits_1(capsys):
    code, _, err = run(capsys, "simulate", "--l", "0.01", "--N", "1", "--T", "2", "--horizon", "50")
    assert code == 1
    assert "events" in err


def test_policy_json(capsys):
    code, out, _ = run(capsys, "policy", "u", "--dist", UNIFORM_100)
    doc = json.loads(out)
    assert code == 0
    assert doc["N"] == 121
    assert doc["beta"] == pytest.approx(2.11, abs=0.01)
    assert doc["routing"] == "threshold-from-diffusion"
    _, out, _ = run(capsys, "policy", "nv", "--dist", UNIFORM_100)
    assert json.loads(out)["N"] == 108
    _, out_u, _ = run(capsys, "policy", "u", "--dist", '{"kind":"degenerate","value":100}')
    _, out_d, _ = run(capsys, "policy", "d", "--dist", '{"kind":"degenerate","value":100}')
    assert json.loads(out_u)["N"] == json.loads(out_d)["N"]


def test_policy_evaluate(capsys):
    code, out, _ = run(capsys, "policy", "u", "--dist", UNIFORM_100, "--evaluate")
    assert code == 0
    assert json.loads(out)["expected_cost"] == pytest.approx(12.7149, rel=1e-3)


def test_compare_percent_errors_recompute(capsys):
    dists = '[{"kind":"uniform","lo":60,"hi":140},{"kind":"degenerate","value":50}]'
    code, out, _ = run(capsys, "compare", "--dist", dists, "--nodes", "16", "--fast")
    assert code == 0
    table = rows(out)
    assert len(table) == 2
    assert list(table[0]) == list(tables.COMPARE_HEADER)
    for row in table:
        c_opt = float(row["C_opt"])
        for kind in ("U", "D", "NV"):
            pct = 100 * (float(row[f"C_{kind}"]) - c_opt) / c_opt
            assert abs(pct - float(row[f"pct_err_{kind}"])) <= 1e-9
            assert int(row[f"staff_err_{kind}"]) == int(row["N_opt"]) - int(row[f"N_{kind}"])
    fixed = table[1]
    assert (fixed["N_U"], fixed["C_U"]) == (fixed["N_D"], fixed["C_D"]) or fixed["N_U"] == fixed["N_D"]


def test_compare_cost_sweep(capsys, tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"distribution": json.loads(UNIFORM_100), "sweep": {"c": [0.2, 0.5]}, "nodes": 16}))
    code, out, _ = run(capsys, "compare", "--config", str(cfg), "--fast")
    assert code == 0
    assert [r["c"] for r in rows(out)] == ["0.2", "0.5"]


def test_output_is_byte_stable(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        code, out, _ = run(capsys, "compare", "--dist", UNIFORM_100, "--nodes", "8", "--fast", "-o", str(path))
        assert code == 0
        assert out == ""
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_figure7_fixed_rate(capsys):
    code, out, _ = run(capsys, "figure7", "--dist", '{"kind":"degenerate","value":100}', "--n-grid", "100:140:10")
    assert code == 0
    table = rows(out)
    assert [r["N"] for r in table] == ["100", "110", "120", "130", "140"]
    for r in table:
        exact, approx = float(r["exact_cost"]), float(r["approx_cost"])
        assert math.isfinite(exact) and math.isfinite(approx)
    near = table[2]
    assert abs(float(near["difference"])) < 0.02 * float(near["exact_cost"])


def test_figure7_list_grid(capsys):
    code, out, _ = run(capsys, "figure7", "--dist", UNIFORM_100, "--n-grid", "[115, 121]", "--nodes", "16")
    assert code == 0
    assert out.splitlines()[0] == "N,exact_cost,approx_cost,difference"
    assert len(rows(out)) == 2


def test_simulate_json_and_seed(capsys):
    base = ["simulate", "--l", "3", "--N", "2", "--T", "4", "--horizon", "2000"]
    code, out, _ = run(capsys, *base, "--seed", "1")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"model", "estimate", "analytic"}
    assert doc["model"]["T"] == 4
    _, again, _ = run(capsys, *base, "--seed", "1")
    _, other, _ = run(capsys, *base, "--seed", "2")
    assert again == out
    assert other != out


def test_simulate_optimal_and_infinite_threshold(capsys):
    _, out, _ = run(capsys, "simulate", "--l", "3", "--N", "2", "--horizon", "2000")
    assert isinstance(json.loads(out)["model"]["T"], int)
    _, out, _ = run(capsys, "simulate", "--l", "3", "--N", "2", "--T", "inf", "--horizon", "2000")
    doc = json.loads(out)
    assert doc["model"]["T"] == "inf"
    assert doc["estimate"]["counts"]["blocked"] == 0


def test_reproduce_size_table(capsys):
    code, out, _ = run(capsys, "reproduce-table", "table2", "--max-lambda", "9")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == list(tables.SIZE_HEADER)
    assert [(r["lambda"], r["N_opt"], r["N_U"]) for r in table] == [("1", "3", "3"), ("9", "16", "15")]


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "cosourcing.cli", "policy", "nv", "--dist", UNIFORM_100],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["N"] == 108
