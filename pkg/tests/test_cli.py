import json

import numpy as np
import pytest

from presym.cli import EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, main
from presym.families import model_T3, raw_gauge_family
from presym.fieldio import write_field, write_gauge_path


@pytest.fixture
def cfgs(tmp_path):
    (tmp_path / "t3.cfg").write_text('model = "T3"\n')
    (tmp_path / "t4.cfg").write_text('model = "T4"\n')
    (tmp_path / "custom.cfg").write_text(
        "n = 3\neta = [[1, 2, 1.0]]\nK_frame = [[1, 0, 0]]\nG_frame = [[0, 1, 0], [0, 0, 1]]\n"
    )
    return tmp_path


def run(*args):
    return main([str(a) for a in args])


@pytest.mark.parametrize(
    "args, code",
    [
        (["mc", "--example", "zero"], EXIT_OK),
        (["mc", "--example", "mc", "--grid-n", 8], EXIT_OK),
        (["mc", "--example", "perturbed", "--grid-n", 8], EXIT_FAIL),
        (["gauge", "--example", "forward", "--grid-n", 8], EXIT_OK),
        (["gauge", "--example", "control", "--grid-n", 8], EXIT_FAIL),
        (["gauge", "--example", "constant", "--grid-n", 8], EXIT_OK),
    ],
)
def test_presym_commands_on_T3(cfgs, args, code):
    assert run(*args, "--model", cfgs / "t3.cfg") == code


@pytest.mark.parametrize("example, code", [("mc", EXIT_OK), ("perturbed", EXIT_FAIL)])
def test_foliation_mc_on_T4(cfgs, example, code):
    assert run("mc", "--kind", "foliation", "--model", cfgs / "t4.cfg", "--example", example) == code


@pytest.mark.parametrize("example, code", [("forward", EXIT_OK), ("control", EXIT_FAIL), ("constant", EXIT_OK)])
def test_foliation_gauge(cfgs, example, code):
    assert run("gauge", "--kind", "foliation", "--model", cfgs / "t3.cfg", "--example", example, "--grid-n", 8) == code


@pytest.mark.parametrize("example, code", [("degenerate", EXIT_OK), ("trivial", EXIT_OK), ("nonexact", EXIT_FAIL)])
def test_moser(example, code, tmp_path):
    assert run("moser", "--example", example, "--out", tmp_path) == code
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["passed"] == (code == EXIT_OK)


def test_moser_from_gauge_path_input(cfgs):
    model = model_T3(8)
    b, a = raw_gauge_family(model, 0.1, "moving")
    ts = np.linspace(0, 1, 17)
    write_gauge_path(cfgs / "gp", ts, {"beta": [b(t).values for t in ts], "alpha": [a(t).values for t in ts]}, model.grid, {"beta": 2, "alpha": 1})
    assert run("gauge", "--model", cfgs / "t3.cfg", "--input", cfgs / "gp") == EXIT_OK
    assert run("moser", "--model", cfgs / "t3.cfg", "--input", cfgs / "gp", "--out", cfgs / "o") == EXIT_OK
    checks = {c["name"]: c for c in json.loads((cfgs / "o" / "report.json").read_text())["checks"]}
    assert checks["moser.isotopy_identity"]["value"] < 1e-12


@pytest.mark.parametrize("example", ["sqrt2", "half", "sqrt2sqrt3"])
def test_cohomology_examples_write_sweep(example, tmp_path):
    assert run("cohomology", "--example", example, "--cutoff", 4, "--out", tmp_path) == EXIT_OK
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "cutoff,dim_H1M,dim_H1K,dim_H2hor,dim_H2M,min_raw,min_weighted"
    assert lines[-1].startswith("4,")


@pytest.mark.parametrize("example", ["mixed", "moser-ready", "perturbed", "symplectic", "image", "transverse", "clipped"])
def test_cylinder_examples(example):
    assert run("cylinder", "--example", example, "--grid-n", 8) == EXIT_OK


def test_custom_model_and_field_input(cfgs):
    model = model_T3(8)
    write_field(cfgs / "zero.csv", np.zeros(model.grid.shape + (3, 3)), model.grid, 2)
    assert run("mc", "--model", cfgs / "custom.cfg", "--input", cfgs / "zero.csv") == EXIT_OK
    sing = np.zeros(model.grid.shape + (3, 3))
    sing[..., 1, 2], sing[..., 2, 1] = 1.0, -1.0
    write_field(cfgs / "sing.csv", sing, model.grid, 2)
    assert run("mc", "--model", cfgs / "custom.cfg", "--input", cfgs / "sing.csv") == EXIT_NUMERIC


@pytest.mark.parametrize(
    "args",
    [
        ["mc", "--bogus"],
        ["nosuchcommand"],
        ["mc", "--grid-n", "12"],
        ["mc", "--tol-mc", "-1"],
        ["mc", "--example", "unknown"],
        ["mc", "--input", "/nonexistent/field.csv", "--model", "/nonexistent.cfg"],
        ["cohomology", "--example", "nope"],
        ["selftest", "--only", "x"],
        ["selftest", "--only", "99"],
    ],
)
def test_bad_input_exits_3(args):
    assert run(*args) == EXIT_INPUT


def test_reports_are_deterministic_and_timing_is_separate(tmp_path):
    for name in ("a", "b"):
        assert run("mc", "--example", "mc", "--grid-n", 8, "--seed", 3, "--out", tmp_path / name) == EXIT_OK
    a = (tmp_path / "a" / "report.json").read_bytes()
    assert a == (tmp_path / "b" / "report.json").read_bytes()
    assert b"wall_time" not in a
    assert "wall_time_s" in json.loads((tmp_path / "a" / "timing.json").read_text())
    assert not list((tmp_path / "a").glob(".tmp-*"))


def test_csv_format(tmp_path):
    assert run("cylinder", "--example", "mixed", "--grid-n", 8, "--format", "csv", "--out", tmp_path) == EXIT_OK
    lines = (tmp_path / "report.csv").read_text().splitlines()
    assert lines[0] == "name,value,threshold,relation,passed,witness"
    assert len(lines) == 3


def test_selftest_fault_injection_flips_exit_code(tmp_path):
    assert run("selftest", "--scale", "quick", "--only", 1, "--out", tmp_path / "ok") == EXIT_OK
    code = run("selftest", "--scale", "quick", "--only", 1, "--inject-fault", "c1.involution_relative_error", "--out", tmp_path / "bad")
    assert code == EXIT_FAIL
    rep = json.loads((tmp_path / "bad" / "report.json").read_text())
    bad = [c for c in rep["checks"] if not c["passed"]]
    assert [c["name"] for c in bad] == ["c1.involution_relative_error"]
    assert bad[0]["note"] == "injected fault"
    assert run("selftest", "--scale", "quick", "--only", 1, "--inject-fault", "no.such.check") == EXIT_INPUT


def test_gauge_path_leaving_I_Z_is_indeterminate(cfgs):
    model = model_T3(8)
    ts = np.linspace(0, 1, 5)
    betas = []
    for t in ts:
        b = np.zeros(model.grid.shape + (3, 3))
        b[..., 1, 2], b[..., 2, 1] = t, -t  # id + Z beta is singular at t = 1
        betas.append(b)
    alphas = [np.zeros(model.grid.shape + (3,)) for _ in ts]
    write_gauge_path(cfgs / "gp", ts, {"beta": betas, "alpha": alphas}, model.grid, {"beta": 2, "alpha": 1})
    code = run("gauge", "--model", cfgs / "t3.cfg", "--input", cfgs / "gp", "--out", cfgs / "o")
    assert code == EXIT_NUMERIC
    rep = json.loads((cfgs / "o" / "report.json").read_text())
    assert rep["data"]["verdict"] == "indeterminate"


def test_model_file_grid_key(cfgs):
    (cfgs / "n8.cfg").write_text('model = "T3"\nN = 8\n')
    assert run("mc", "--model", cfgs / "n8.cfg", "--out", cfgs / "o") == EXIT_OK
    rep = json.loads((cfgs / "o" / "report.json").read_text())
    assert rep["command"]["grid_n"] == 8
