import io
import json
import math
import subprocess
import sys
from contextlib import redirect_stdout, redirect_stderr

import pytest

from eulerforms.cli import main


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_usage_errors_exit_2_with_silent_stdout():
    for argv in ([], ["no-such-command"], ["f-series"], ["sn"],
                 ["integral", "--n", "0"], ["f-series", "--hi", "3", "--lo", "9"]):
        code, out, err = _run(argv)
        assert code == 2, argv
        assert out == "", argv
        assert err.strip(), argv


def test_domain_errors_exit_1():
    code, out, err = _run(["examples", "--which", "tower", "--n-max", "99"])
    assert code == 1
    assert "cap" in err.lower()
    code, out, err = _run(["examples", "--which", "factorial", "--n-max", "9"])
    assert code == 1
    assert "cap" in err.lower()


def test_f_series_csv_shape():
    code, out, _ = _run(["f-series", "--hi", "6", "--digits", "10"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("# eulerforms 0.1.0 policy=expwindow-v1 config=")
    header = lines[1].split(",")
    assert header[:3] == ["n", "status", "bits"]
    rows = [ln.split(",") for ln in lines[2:]]
    assert [r[0] for r in rows] == [str(n) for n in range(1, 7)]
    f5 = float(rows[4][header.index("F")])
    assert math.isclose(f5, -0.667695066531632, abs_tol=1e-9)


def test_f_series_json_meta(oracles):
    code, out, _ = _run(["f-series", "--hi", "3", "--digits", "12",
                         "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["policy"] == "expwindow-v1"
    assert doc["meta"]["digits"] == 12
    assert [r["n"] for r in doc["records"]] == [1, 2, 3]
    f1 = float(doc["records"][0]["F"])
    assert math.isclose(f1, float(oracles["F"]["1"][2]), abs_tol=1e-11)


def test_reruns_are_byte_identical():
    a = _run(["f-series", "--hi", "8", "--digits", "10"])
    b = _run(["f-series", "--hi", "8", "--digits", "10"])
    w = _run(["f-series", "--hi", "8", "--digits", "10", "--workers", "2"])
    assert a == b == w


def test_checkpoint_resume_matches_fresh(tmp_path):
    ck = str(tmp_path / "run.ckpt")
    first = _run(["f-series", "--hi", "5", "--digits", "10", "--checkpoint", ck])
    assert first[0] == 0
    resumed = _run(["f-series", "--hi", "9", "--digits", "10", "--checkpoint", ck])
    fresh = _run(["f-series", "--hi", "9", "--digits", "10"])
    assert resumed[0] == 0
    assert resumed[1] == fresh[1]
    # mismatched settings must refuse, not silently recompute
    code, out, err = _run(["f-series", "--hi", "9", "--digits", "11",
                           "--checkpoint", ck])
    assert code == 1
    assert "checkpoint" in err.lower() or "mismatch" in err.lower()


def test_sn_and_relation_values(oracles):
    code, out, _ = _run(["sn", "--n", "2", "--exact-cap", "4000"])
    assert code == 0
    assert "39" in out  # digit count of S(2) = 12^36
    code, out, _ = _run(["relation-check", "--n", "3", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert int(doc["nearest_int"]) == oracles["dA"]["3"]
    assert int(doc["d2n"]) == 60


def test_integral_matches_oracle(oracles):
    code, out, _ = _run(["integral", "--n", "3", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 3
    got = float(doc["I"]["value"])
    assert math.isclose(got, float(oracles["In"]["3"]), rel_tol=1e-12)
    assert doc["I"]["abs_err"] < 1e-30


def test_estimate_quotients(oracles):
    code, out, _ = _run(["estimate", "--const", "gamma", "--digits", "60",
                         "--depth", "10"])
    assert code == 0
    assert " ".join(map(str, oracles["cf_gamma"])) in out


def test_bounds_subcommand(oracles):
    code, out, _ = _run(["bounds", "--delta", "0"])
    assert code == 0
    assert "5.436563656918" in out
    code, out, _ = _run(["bounds", "--sigma", "1", "--tau", "0.9"])
    assert code == 0
    assert "5.383" in out
    code, out, err = _run(["bounds"])
    assert code == 2 and out == ""


def test_scan_subcommand():
    code, out, _ = _run(["scan", "--n-max", "60", "--threshold", "0.02"])
    assert code == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    joined = "\n".join(body)
    for n in (18, 44, 58):
        assert str(n) in joined


def test_plot_writes_deterministic_svg(tmp_path):
    p1, p2 = str(tmp_path / "a.svg"), str(tmp_path / "b.svg")
    assert _run(["plot", "--hi", "12", "--digits", "10", "--out", p1])[0] == 0
    assert _run(["plot", "--hi", "12", "--digits", "10", "--out", p2])[0] == 0
    s1, s2 = open(p1).read(), open(p2).read()
    assert s1 == s2
    assert s1.startswith("<svg") and s1.rstrip().endswith("</svg>")


def test_console_script_entrypoint():
    proc = subprocess.run([sys.executable, "-m", "eulerforms.cli",
                           "bounds", "--lam", "8", "--eps", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "1.471517764686" in proc.stdout


def test_env_fallback_for_digits(monkeypatch):
    monkeypatch.setenv("EULERFORMS_DIGITS", "10")
    code, out, _ = _run(["f-series", "--hi", "2"])
    assert code == 0
    doc_line = [ln for ln in out.splitlines() if ln.startswith("n,") or ln.startswith("1,")]
    row = [ln for ln in out.splitlines() if ln.startswith("1,")][0]
    frac_field = row.split(",")[3]
    assert len(frac_field.split(".")[1]) == 10
