import json
import subprocess
import sys
from pathlib import Path

import pytest

from pfspace.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_retract_to_pf(capsys):
    code, out, _ = run(capsys, "eval", "retract_to_pf", "--measure", DATA / "measure_omega.json")
    assert code == 0
    doc = json.loads(out)
    assert [a["mass"] for a in doc["atoms"]] == [[3, 4], [3, 16], [1, 16]]


def test_eval_domain_error(capsys):
    code, _, err = run(capsys, "eval", "retract_to_pf", "--measure", DATA / "measure_half.json")
    assert code == 1 and err.startswith("OutsideDomain:")


def test_eval_not_pf(capsys):
    code, out, _ = run(capsys, "eval", "pf_membership", "--measure", DATA / "measure_half.json")
    assert code == 0 and json.loads(out)["member"] is False
    code, _, err = run(capsys, "eval", "retract_to_dirac", "--measure", DATA / "measure_half.json")
    assert code == 1 and err.startswith("NotInPf:")


def test_eval_transfer(capsys):
    code, out, _ = run(capsys, "eval", "transfer_retract", "--measure", DATA / "measure_pf.json",
                       "--embedding", DATA / "embedding3.json")
    assert code == 0
    assert json.loads(out)["atoms"] == [{"point": "a", "mass": [1, 1]}]


def test_eval_needs_flag(capsys):
    code, _, err = run(capsys, "eval", "fiber_homotopy", "--measure", DATA / "measure_pf.json")
    assert code == 2 and "--t" in err


def test_eval_pair_decompose(capsys):
    code, out, _ = run(capsys, "eval", "pair_decompose", "--measure", DATA / "measure_half.json")
    assert code == 0 and "pairs" in json.loads(out)


def test_eval_t_out_of_range(capsys):
    code, _, err = run(capsys, "eval", "fiber_homotopy", "--measure", DATA / "measure_pf.json",
                       "--t", "3/2")
    assert code == 1 and err.startswith("ParameterOutOfRange:")


def test_missing_file(capsys):
    code, _, _ = run(capsys, "eval", "retract_to_pf", "--measure", DATA / "nope.json")
    assert code == 2


def test_bad_samples():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--space", str(DATA / "space3.json"), "--samples", "0"])
    assert exc.value.code == 2


def test_verify_deterministic(tmp_path):
    outs = []
    for name in ("r1.json", "r2.json"):
        out = tmp_path / name
        code = main(["verify", "--suite", "omega", "--space", str(DATA / "space3.json"),
                     "--samples", "3", "--seed", "7", "--out", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["status"] == "pass"


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "core", "--space", DATA / "space2.json",
                       "--samples", "2", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "section,name,verdict,cases,failures,detail"


def test_plot(capsys):
    code, out, _ = run(capsys, "plot", "pf-region", "--space", DATA / "space3.json", "--grid", "3")
    assert code == 0 and out.splitlines()[0] == "a,b,c,label"
    code, _, err = run(capsys, "plot", "pf-region", "--space", DATA / "space2.json")
    assert code == 1 and err.startswith("UnsupportedDimension:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pfspace", "eval", "omega_half_membership",
                           "--measure", str(DATA / "measure_half.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"member": True}
