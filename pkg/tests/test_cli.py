import json
import os

import pytest

from mdfs.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_asymptotic_json(capsys):
    code, out, _ = run(capsys, "asymptotic", "--a", "1", "--b", "0")
    assert code == 0
    data = json.loads(out)
    assert data["Lambda"] == pytest.approx(0.0513, abs=1e-4)
    assert data["y_star"] == pytest.approx(0.86726, abs=1e-5)


def test_exact_json(capsys):
    code, out, _ = run(capsys, "exact", "--a", "0", "--b", "0", "--n", "2")
    assert code == 0
    data = json.loads(out)
    assert data["mu_n"] == pytest.approx(2 / 3, rel=1e-14)


def test_jh_parametrization(capsys):
    _, ab, _ = run(capsys, "asymptotic", "--a", "2", "--b", "-1")
    code, jh, _ = run(capsys, "asymptotic", "--parametrization", "jh", "--j", "1", "--h", "0")
    assert code == 0
    assert json.loads(ab)["Lambda2"] == json.loads(jh)["Lambda2"]


def test_sweep_csv_format(capsys):
    code, out, _ = run(capsys, "sweep", "--a", "1", "--b", "0", "--n-list", "16,32")
    assert code == 0
    lines = out.split("\r\n")
    assert lines[0] == "n,log_z,p_n,mu_n,chi_n,r_p,r_mu,r_chi"
    assert len([ln for ln in lines if ln]) == 3
    fields = lines[1].split(",")
    assert fields[0] == "16"
    # floats are printed with 17 significant digits so they round-trip
    assert float(fields[2]) == float(format(float(fields[2]), ".17g"))


def test_output_file_is_written(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "asymptotic", "--a", "1", "--b", "0", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["a"] == 1.0
    assert [f for f in os.listdir(tmp_path) if f.startswith(".mdfs-")] == []


def test_deterministic_output(capsys):
    first = run(capsys, "curve", "--quantity", "pressure", "--j-grid", "0.5,0.9")[1]
    second = run(capsys, "curve", "--quantity", "pressure", "--j-grid", "0.5,0.9")[1]
    assert first == second
    assert first.startswith("quantity,method,j,h,bracket_width")


def test_validate_suite(capsys):
    code, out, err = run(capsys, "validate", "--suite", "determinant")
    assert code == 0
    assert json.loads(out)["passed"] is True
    assert "PASS [determinant]" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["asymptotic", "--a", "1"],
        ["asymptotic", "--a", "1", "--b", "0", "--j", "1"],
        ["asymptotic", "--a", "-1", "--b", "0"],
        ["exact", "--a", "1", "--b", "0", "--n", "0"],
        ["sweep", "--a", "1", "--b", "0", "--n-list", "64,32"],
        ["curve", "--method", "numeric", "--n-list", "256,512"],
        ["validate", "--suite", "nonsense"],
    ],
)
def test_usage_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "error" in err


def test_domain_error_exits_one(capsys):
    j_c = 1.4571067811865475
    code, _, err = run(capsys, "asymptotic", "--j", str(j_c), "--h", "-0.3441132032297989")
    assert code == 1
    assert "domain error" in err
