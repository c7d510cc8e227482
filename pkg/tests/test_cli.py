import io
import json
from pathlib import Path

import pytest

from nca.cli import main, run
from nca.errors import ParseError
from nca.jobs import load_job_text

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def invoke(path, *overrides, json_out=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(str(path), json_out, list(overrides), out, err)
    return code, out.getvalue(), err.getvalue()


def test_koszul_on_polynomial_job():
    code, out, _ = invoke(JOBS / "poly2.json")
    assert code == 0
    assert out.splitlines()[0] == "Koszul in window (5, 8): true"


def test_koszul_false_exits_one():
    code, out, _ = invoke(JOBS / "cusp.json", "command.name=koszul")
    assert code == 1
    assert "Koszul in window (5, 8): false" in out


def test_betti_on_cusp_shows_degrees():
    code, out, _ = invoke(JOBS / "cusp.json")
    assert code == 0
    degs = [line.split("[")[1].rstrip("]") for line in out.splitlines() if line.startswith("F_")]
    assert degs == ["0", "1", "3", "4", "6", "7"]


def test_malformed_relation(tmp_path):
    text = (JOBS / "cusp.json").read_text().replace('"x^3"', '"x*"')
    bad = tmp_path / "bad.json"
    bad.write_text(text)
    code, _, err = invoke(bad)
    assert code == 2
    assert "line 5, column 22" in err
    with pytest.raises(ParseError) as info:
        load_job_text(text)
    assert (info.value.line, info.value.column) == (5, 22)


def test_bad_json_reports_location(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"algebra": \n  [1, }')
    code, _, err = invoke(bad)
    assert code == 2 and "line 2" in err


@pytest.mark.parametrize(
    "override",
    ["command.name=frobnicate", "command.h=-1", "command.D=\"six\"", "command.module=\"nope\"",
     "algebra.assertions=[\"smooth\"]"],
)
def test_usage_errors(override):
    code, _, _ = invoke(JOBS / "poly2.json", override)
    assert code == 2


def test_missing_duality_exits_two():
    code, _, err = invoke(JOBS / "cusp.json", "command.name=cmreg")
    assert code == 2 and "duality" in err


def test_out_of_window_exits_three():
    code, _, err = invoke(JOBS / "poly2.json", "command.name=cmreg", "command.module=\"k\"", "command.D=2")
    assert code == 3 and "out of window" in err


def test_truncate_verify_needs_s_range():
    code, _, _ = invoke(JOBS / "jordan.json", "command.s_range=null")
    assert code == 2


def test_missing_file():
    assert invoke("/nonexistent/job.json")[0] == 2


def test_main_usage():
    assert main([]) == 2
    assert main(["run", str(JOBS / "poly2.json")]) == 0


@pytest.mark.parametrize("job", sorted(p.name for p in JOBS.glob("*.json")))
def test_json_matches_text_and_is_deterministic(tmp_path, job):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code1, out1, _ = invoke(JOBS / job, json_out=str(a))
    code2, out2, _ = invoke(JOBS / job, json_out=str(b))
    assert code1 == code2 == 0
    assert out1 == out2
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert out1.splitlines()[-1] == f"status: {data['status']}"


def test_betti_text_agrees_with_json(tmp_path):
    dest = tmp_path / "o.json"
    _, out, _ = invoke(JOBS / "cusp.json", json_out=str(dest))
    data = json.loads(dest.read_text())
    gens = data["details"]["generator_degrees"]
    for m, degs in enumerate(gens):
        assert f"F_{m}: generators in degrees {degs}" in out
    for m, j, b in data["details"]["betti"]["entries"]:
        row = [line for line in out.splitlines() if line.strip().startswith(f"{j - m}:")][0]
        assert row.split()[1 + m] == str(b)


def test_cmreg_text_agrees_with_json(tmp_path):
    dest = tmp_path / "o.json"
    code, out, _ = invoke(JOBS / "poly2.json", "command.name=cmreg", "command.module=\"quot\"",
                          json_out=str(dest))
    assert code == 0
    data = json.loads(dest.read_text())
    assert data["details"]["cm_reg"]["value"] == 1
    assert out.splitlines()[0].endswith(": 1 (exact)")


@pytest.mark.parametrize("cmd", ["gb", "hilbert", "reg", "left-right-k", "inequalities"])
def test_all_commands_run(cmd):
    code, out, _ = invoke(JOBS / "qplane.json", f"command.name={cmd}")
    assert code == 0 and out.endswith("status: pass\n")


def test_hilbert_output():
    _, out, _ = invoke(JOBS / "cusp.json", "command.name=hilbert", "command.D=5")
    assert out.splitlines()[0] == "dim A_j, j = 0..5: 1 1 1 0 0 0"
