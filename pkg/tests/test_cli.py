import io
import json
import subprocess
import sys

import pytest

from qdurfee.cli import main, parse_param, series_from_json
from qdurfee.durfee import SYMBOLIC, ZERO, ParamChoice, no_series
from qdurfee.coeffring import I
from qdurfee.qlaurent import Monomial


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize(
    "text,value",
    [
        ("sym", SYMBOLIC),
        ("0", ZERO),
        ("1", Monomial(1, 0)),
        ("-i", Monomial(-I, 0)),
        ("1/q", Monomial(1, -1)),
        ("q", Monomial(1, 1)),
        ("-q^2", Monomial(-1, 2)),
        ("i*q^{1/2}", Monomial(I, "1/2")),
        ("-1*q^{-3/4}", Monomial(-1, "-3/4")),
    ],
)
def test_parse_param(text, value):
    assert parse_param(text) == value


@pytest.mark.parametrize("bad", ["2", "q^", "x", "i*q^{1/2", "2*q"])
def test_parse_param_rejects(bad):
    code, _ = run("expand", "no", "--a", bad)
    assert code == 2


def test_expand_csv_example():
    code, out = run("expand", "no", "--a", "0", "--b", "-1", "--z", "1", "--order", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["exp,coeff", "1,1", "2,2", "3,3"]


def test_expand_eta_text():
    code, out = run("expand", "eta", "--m", "2", "--order", "3", "--format", "text")
    assert out.strip() == "q^{1/12} - q^{25/12} + O(q^{3})"


def test_expand_json_symbolic_and_roundtrip():
    code, out = run("expand", "no", "--order", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["lattice_den"] == 24
    (t3,) = [t for t in doc["terms"] if t["exp"] == "3"]
    got = {(c["ea"], c["eb"], c["ew"]): (c["re"], c["im"]) for c in t3["coeff"]}
    assert got == {(0, 0, 4): ("1", "0"), (0, 0, 0): ("1", "0"), (0, 0, -4): ("1", "0"), (1, 1, 0): ("1", "0")}
    assert series_from_json(out) == no_series(ParamChoice(), 4)


def test_expand_lattice_option():
    code, out = run("expand", "eta", "--order", "2", "--lattice", "48")
    assert json.loads(out)["terms"][0]["exp"] == "1/24"
    assert json.loads(out)["lattice_den"] == 48
    code, _ = run("expand", "eta", "--order", "2", "--lattice", "5")
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["expand", "no-bilateral", "--variant", "one_pole", "--order", "5"],
        ["expand", "sym-moment", "--k", "1", "--order", "5"],
        ["expand", "ord-moment", "--k", "1", "--order", "5"],
        ["expand", "marked", "--k", "2", "--order", "5"],
        ["expand", "theta", "--order", "3"],
        ["expand", "mu", "--u", "q^{1/3}", "--order", "3"],
        ["expand", "rank", "--order", "5"],
        ["expand", "rank-star", "--order", "5"],
        ["expand", "class-series", "--kind", "F", "--order", "6"],
        ["moments", "--k", "2", "--order", "6"],
    ],
)
def test_every_expression_expands(argv):
    code, out = run(*argv)
    assert code == 0
    assert series_from_json(out) is not None


def test_expand_usage_errors():
    assert run("expand", "no", "--z", "0")[0] == 2
    assert run("expand", "marked", "--k", "2", "--x", "1")[0] == 2
    assert run("expand", "nope")[0] == 2
    assert run("expand", "no", "--order", "x")[0] == 2


def test_classnum_table():
    code, out = run("classnum", "--kind", "H", "--max", "23")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 23
    assert lines[2] == "3, 1/3"
    assert lines[-1] == "23, 3"
    code, out = run("classnum", "--kind", "F", "--max", "4", "--format", "csv")
    assert out.splitlines() == ["n,F", "1,1/2", "2,1", "3,1", "4,1"]


def test_enumerate_table():
    code, out = run("enumerate", "--n", "3")
    assert code == 0
    assert out.splitlines() == ["0, 0, -2, 1", "0, 0, 0, 1", "0, 0, 2, 1", "1, 1, 0, 1"]
    code, out = run("enumerate", "--n", "3", "--marks", "2", "--format", "csv")
    assert out.splitlines()[0] == "r,s,m1,m2,count"
    assert run("enumerate", "--n", "0")[0] == 2


def test_verify_exit_codes():
    code, out = run("verify", "--suite", "class", "--order", "40")
    assert code == 0
    assert out.splitlines()[-1] == "4/4 passed"
    assert run("verify", "--id", "ID-99")[0] == 2
    assert run("verify", "--suite", "bogus")[0] == 2


def test_verify_failure_exit_code(monkeypatch):
    from qdurfee import verify

    broken = verify.get_identity("ID-08").perturbed(3)
    monkeypatch.setitem(verify.REGISTRY, "ID-08", broken)
    code, out = run("verify", "--id", "ID-08", "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["passed"] == 0
    assert doc["reports"][0]["first_mismatch"]["exp"] == "3"


def test_verify_output_is_deterministic():
    a = run("verify", "--suite", "core", "--order", "8")
    b = run("verify", "--suite", "core", "--order", "8")
    assert a == b and a[0] == 0
    a = run("verify", "--id", "ID-03", "--id", "ID-08", "--format", "json")
    b = run("verify", "--id", "ID-03", "--id", "ID-08", "--format", "json")
    assert a == b


def test_verify_parallel_matches_serial():
    serial = run("verify", "--suite", "mock", "--order", "20")
    parallel = run("verify", "--suite", "mock", "--order", "20", "--jobs", "2")
    assert serial == parallel


def test_order_from_env_and_config(tmp_path, monkeypatch):
    cfg = tmp_path / "durfee.conf"
    cfg.write_text("# defaults\norder = 3\nformat = \"csv\"\n")
    code, out = run("expand", "no", "--a", "0", "--b", "-1", "--z", "1", "--config", str(cfg))
    assert out.splitlines() == ["exp,coeff", "1,1", "2,2"]
    monkeypatch.setenv("DURFEE_ORDER", "2")
    code, out = run("expand", "no", "--a", "0", "--b", "-1", "--z", "1", "--config", str(cfg))
    assert out.splitlines() == ["exp,coeff", "1,1"]
    code, out = run("expand", "no", "--a", "0", "--b", "-1", "--z", "1", "--order", "4", "--config", str(cfg))
    assert len(out.splitlines()) == 4
    bad = tmp_path / "bad.conf"
    bad.write_text("order 3\n")
    assert run("expand", "eta", "--config", str(bad))[0] == 2
    assert run("expand", "eta", "--config", str(tmp_path / "missing.conf"))[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qdurfee", "classnum", "--kind", "H", "--max", "7"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "7, 1"
    proc = subprocess.run([sys.executable, "-m", "qdurfee"], capture_output=True, text=True)
    assert proc.returncode == 2
