"""CLI contracts: exit codes, schemas, determinism."""

import json
import math

import pytest

from riccati3d.cli import main
from riccati3d.report import thread_cap


def test_verify_algebra_exits_zero(capsys):
    assert main(["verify", "--suite", "algebra"]) == 0
    out = capsys.readouterr().out
    assert "overall: PASS" in out
    assert "basis_table" in out


def test_verify_unknown_suite_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "calculus"])
    assert exc.value.code == 2


def test_verify_failing_tolerance_exits_one(capsys):
    # an impossible override turns a passing check into a failure
    assert main(["verify", "--suite", "algebra", "--tol",
                 "associativity=1e-30"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_report_deterministic_except_seconds(tmp_path, capsys):
    r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--suite", "oned", "--report", str(r1)]) == 0
    assert main(["verify", "--suite", "oned", "--report", str(r2)]) == 0
    capsys.readouterr()

    def strip(path):
        data = json.loads(path.read_text())
        for check in data["checks"]:
            check.pop("seconds")
        return data

    assert strip(r1) == strip(r2)


def test_verify_tolerance_echoed_in_report(tmp_path, capsys):
    rp = tmp_path / "r.json"
    assert main(["verify", "--suite", "algebra", "--tol", "associativity=1e-10",
                 "--report", str(rp)]) == 0
    capsys.readouterr()
    data = json.loads(rp.read_text())
    assert data["config_echo"]["tolerances"]["associativity"] == 1e-10


def test_config_file_round_trip(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment line\nseed = 3\nh=2e-3\ntol.associativity = 1e-30\n")
    rp = tmp_path / "r.json"
    assert main(["verify", "--suite", "algebra", "--config", str(cfg),
                 "--report", str(rp)]) == 1
    capsys.readouterr()
    data = json.loads(rp.read_text())
    assert data["config_echo"]["seed"] == 3
    assert data["config_echo"]["h"] == 2e-3


def test_config_file_bad_key_exits_two(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("velocity = 3\n")
    assert main(["verify", "--suite", "algebra", "--config", str(cfg)]) == 2
    assert "error" in capsys.readouterr().err


def test_eval_row_count_contract(tmp_path, capsys):
    out = tmp_path / "rot.csv"
    assert main(["eval", "--solution", "rotational", "--k", "1", "--c", "0",
                 "--grid", "1.5,3,11,0,1,11,0,1,11", "--fields", "Q,q,residuals",
                 "--out", str(out)]) == 0
    capsys.readouterr()
    lines = out.read_text().splitlines()
    assert len(lines) == 1331 + 1              # header + 11^3 rows
    header = lines[0].split(",")
    assert header[:4] == ["x", "y", "z", "masked"]
    assert "Re_u" in header and "Im_resid_sc" in header
    # the residual columns of unmasked rows stay within the solution budget
    idx = [header.index(f"Re_resid_{n}") for n in ("sc", "v1", "v2", "v3")]
    for line in lines[1:]:
        cells = line.split(",")
        if cells[3] == "1":
            continue
        assert max(abs(float(cells[i])) for i in idx) <= 1e-6


def test_eval_byte_identical_across_runs(tmp_path, capsys):
    args = ["eval", "--solution", "conical", "--C1", "0", "--C2", str(math.e),
            "--grid", "0.8,1.2,5,0,0.3,4,0,0.25,4", "--fields", "Q,q,psi"]
    out1, out2 = tmp_path / "one.csv", tmp_path / "two.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_eval_json_round_trips_byte_exactly(tmp_path, capsys):
    out = tmp_path / "rot.json"
    assert main(["eval", "--solution", "rotational", "--k", "1", "--c", "0",
                 "--grid", "1.5,2.5,4,0,0.8,4,0,0.8,3", "--format", "json",
                 "--out", str(out)]) == 0
    capsys.readouterr()
    text = out.read_text()
    records = json.loads(text)
    assert len(records) == 4 * 4 * 3
    assert json.dumps(records, indent=2) + "\n" == text


def test_eval_masks_singular_cells(tmp_path, capsys):
    out = tmp_path / "masked.csv"
    # the grid straddles the rho = 1 singular cylinder of the c = 0 family
    assert main(["eval", "--solution", "rotational", "--k", "1", "--c", "0",
                 "--grid", "0.5,1.5,9,0,0.4,3,0,1,3", "--fields", "Q",
                 "--out", str(out)]) == 0
    capsys.readouterr()
    rows = out.read_text().splitlines()[1:]
    masked = [r for r in rows if r.split(",")[3] == "1"]
    assert masked
    for row in masked:
        assert row.split(",")[4:] == [""] * 6    # empty Re/Im cells


def test_eval_fully_masked_grid_exits_two(tmp_path, capsys):
    out = tmp_path / "none.csv"
    code = main(["eval", "--solution", "rotational", "--k", "1", "--c", "0",
                 "--grid", "0.96,1.04,3,0,0.02,2,0,0.02,2", "--fields", "Q",
                 "--out", str(out)])
    assert code == 2
    assert "masked" in capsys.readouterr().err


def test_eval_psi_unavailable_exits_two(tmp_path, capsys):
    code = main(["eval", "--solution", "rotational", "--k", "1", "--c", "0",
                 "--grid", "1.5,2,2,0,0.5,2,0,0.5,2", "--fields", "psi",
                 "--out", str(tmp_path / "x.csv")])
    assert code == 2
    capsys.readouterr()


def test_eval_unknown_field_exits_two(tmp_path, capsys):
    code = main(["eval", "--solution", "rotational", "--k", "1", "--c", "0",
                 "--grid", "1.5,2,2,0,0.5,2,0,0.5,2", "--fields", "Q,curl",
                 "--out", str(tmp_path / "x.csv")])
    assert code == 2
    capsys.readouterr()


def test_eval_bad_grid_exits_two(tmp_path, capsys):
    code = main(["eval", "--solution", "rotational", "--k", "1", "--c", "0",
                 "--grid", "1,2,3", "--out", str(tmp_path / "x.csv")])
    assert code == 2
    capsys.readouterr()


def test_transform_rotational_G6(tmp_path, capsys):
    out = tmp_path / "tr.csv"
    c = 0.5 * math.log(2.0)
    code = main(["transform", "--solution", "rotational", "--k", "1",
                 "--c", str(c), "--group", "6", "--lambda", "0.3",
                 "--grid", "0.5,1.0,4,0.05,0.4,4,-0.4,0.4,4",
                 "--out", str(out)])
    assert code == 0
    msg = capsys.readouterr().out
    assert "max |transport - pushforward|" in msg
    lines = out.read_text().splitlines()
    header = lines[0].split(",")
    assert "Re_discrepancy" in header and "Re_resid_sc" in header
    i_resid = header.index("Re_resid_sc")
    i_disc = header.index("Re_discrepancy")
    for line in lines[1:]:
        cells = line.split(",")
        if cells[3] == "1":
            continue
        assert abs(float(cells[i_resid])) <= 1e-5     # transported field solves
        assert abs(float(cells[i_disc])) <= 1e-10


def test_transform_conical_G10(tmp_path, capsys):
    out = tmp_path / "tr10.csv"
    code = main(["transform", "--solution", "conical", "--C1", "0",
                 "--C2", str(math.e), "--group", "10", "--lambda", "0.05",
                 "--grid", "0.85,1.15,4,0.02,0.25,3,0.02,0.2,3",
                 "--out", str(out)])
    assert code == 0
    capsys.readouterr()


def test_transform_incompatible_family_exits_two(tmp_path, capsys):
    code = main(["transform", "--solution", "rotational", "--k", "1", "--c", "0",
                 "--group", "8", "--lambda", "0.05",
                 "--grid", "1.5,2,3,0,1,3,0,1,3", "--out", str(tmp_path / "t.csv")])
    assert code == 2
    assert "not compatible" in capsys.readouterr().err


def test_thread_cap_env(monkeypatch):
    monkeypatch.setenv("RICCATI3D_THREADS", "2")
    assert thread_cap(0) == 2
    monkeypatch.setenv("RICCATI3D_THREADS", "0")
    assert thread_cap(0) >= 1
    assert thread_cap(5) == 5
    monkeypatch.setenv("RICCATI3D_THREADS", "many")
    from riccati3d.errors import ConfigError
    with pytest.raises(ConfigError):
        thread_cap(0)
