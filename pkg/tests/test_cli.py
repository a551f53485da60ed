import json
import subprocess
import sys

import jsonschema
import pytest

from stablemod import library
from stablemod.cli import main
from stablemod.report import REPORT_KEYS, SCHEMA
from stablemod.textio import ParseError, format_module, format_ring, parse_input

K_S3 = """
ring T { char 101; vars x:1 y:1 z:1; ideal {}; props { dim 3; regular } }
module kk over T { gens { g:0 } rels { x*g; y*g; z*g } }
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    return code, rep


# ---------- input dialect ----------

def test_parse_snippet():
    rings, mods = parse_input(K_S3)
    M = mods["kk"].module
    assert M.rank == 1 and len(M.rels) == 3 and rings["T"].dim == 3


def test_library_round_trips_through_text():
    rings, mods = library.load()
    text = "\n".join(format_ring(r) for r in rings.values())
    text += "\n" + "\n".join(format_module(n, pm.module, pm.gen_names) for n, pm in mods.items())
    rings2, mods2 = parse_input(text)
    assert set(mods2) == set(mods)
    for name, pm in mods.items():
        assert mods2[name].module == pm.module


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        parse_input("ring T { char 101; vars x y; ideal { x** }; }")
    assert exc.value.line == 1 and exc.value.col > 0


# ---------- commands ----------

def test_grade_text_and_json_agree(capsys):
    code, out, _ = run(capsys, "grade", "k_S3")
    assert code == 0 and out.startswith("grade: 3")
    code, rep = run_json(capsys, "grade", "k_S3")
    assert rep["witnesses"][0]["grade"] == 3 and rep["module"] == "k_S3"
    assert set(rep) == set(REPORT_KEYS)


def test_classify_command(capsys):
    code, rep = run_json(capsys, "classify", "m_S3", "--cats", "TF1", "TF2")
    got = {w["category"]: w["status"] for w in rep["witnesses"]}
    assert code == 0 and got == {"TF1": "MEMBER", "TF2": "NON_MEMBER"}


def test_verify_command(capsys):
    code, rep = run_json(capsys, "verify", "THM_D1_REG", "--ring", "S3", "--module", "k")
    assert code == 0 and rep["verdict"] == "PASS"
    assert rep["transcript"]


def test_global_options_either_side(capsys):
    a = run(capsys, "--seed", "5", "--format", "json", "ext", "k_S3", "-i", "3")[1]
    b = run(capsys, "ext", "k_S3", "-i", "3", "--seed", "5", "--format", "json")[1]
    assert a == b and json.loads(a)["seed"] == 5


@pytest.mark.parametrize("argv", [
    ["resolve", "x_A", "--to", "4"],
    ["syzygy", "k_S3", "-n", "2"],
    ["transpose", "m_S3"],
    ["dual", "m_S3"],
    ["dmod", "m_S3"],
    ["gamma", "x2_A"],
    ["ext", "k_S3", "-i", "3"],
])
def test_every_report_validates(capsys, argv):
    code, rep = run_json(capsys, *argv)
    assert code == 0 and rep["verdict"] == "OK"


def test_scalar_invariants_report_their_value(capsys):
    assert run_json(capsys, "depth", "m_S3")[1]["verdict"] == "1"
    assert run_json(capsys, "grade", "xy_S3")[1]["verdict"] == "2"


def test_output_presentations_parse_back(capsys):
    _, rep = run_json(capsys, "ext", "k_S3", "-i", "3")
    text = rep["witnesses"][0]["presentation"]
    _, mods = parse_input(text, library.rings())
    (pm,) = mods.values()
    assert pm.module.degrees == (-3,) and len(pm.module.rels) == 3


def test_user_input_file(tmp_path, capsys):
    f = tmp_path / "k.txt"
    f.write_text(K_S3)
    code, out, _ = run(capsys, "--input", str(f), "grade", "kk")
    assert code == 0 and "grade: 3" in out


def test_timing_and_figures(tmp_path, capsys):
    code, rep = run_json(capsys, "--timing", "--figures", str(tmp_path), "resolve", "x_A", "--to", "3")
    assert code == 0 and rep["timing_ms"] > 0
    assert (tmp_path / "betti_x_A.png").stat().st_size > 0


def test_empty_corpus(capsys):
    code, rep = run_json(capsys, "corpus", "run", "--count", "0")
    assert code == 0 and rep["transcript"] == []


# ---------- errors ----------

@pytest.mark.parametrize("text, kind", [
    ("ring T { char 101; vars x y; ideal { x*y + }; }", "PARSE_ERROR"),
    ("ring T { char 101; vars x y; ideal {}; }\nmodule M over T { gens { a:0 } rels { x*a + x^2*a } }",
     "HOMOGENEITY_ERROR: 2:"),
    ("ring T { char 101; vars x y z; ideal {}; props { dim 2 } }", "PROPERTY_MISMATCH"),
])
def test_input_errors_exit_2(tmp_path, capsys, text, kind):
    f = tmp_path / "bad.txt"
    f.write_text(text)
    code, _, err = run(capsys, "--input", str(f), "grade", "k_S3")
    assert code == 2 and kind in err


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "grade", "no_such_module")[0] == 2
    assert run(capsys, "verify", "THM1_SPH", "--ring", "S3", "--module", "x", "-n", "2")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_cap_exceeded_exit_3(capsys):
    code, _, err = run(capsys, "--max-hom", "2", "resolve", "k_S3", "--to", "5")
    assert code == 3 and "CAP_EXCEEDED" in err


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "stablemod", "grade", "k_S3"], capture_output=True, text=True)
    assert out.returncode == 0 and "grade: 3" in out.stdout
