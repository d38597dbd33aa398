import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import R_AB, poly_forms
from g2gauge.cli import jsonable, main, parse_form, print_form, run_verify
from g2gauge.coeffring import parse_poly
from g2gauge.errors import DegreeMismatch, ParseError, UnknownSymbol
from g2gauge.exterior import KForm
from g2gauge.instanton import example_connection

AB = ("a", "b")


def test_parse_example_connection():
    assert parse_form("x2*e[3] + a*x4*e[5] + b*x6*e[7]", AB) == example_connection()


def test_sign_normalization():
    assert parse_form("e[1,2] + e[2,1]").is_zero()
    assert parse_form("e[2,1]") == -KForm.e(1, 2)
    assert parse_form("3*e[2,1,3] - e[1,2,3]") == KForm.e(1, 2, 3) * -4


@pytest.mark.parametrize("text,col", [
    ("e[1,1]", 5),
    ("e[1,8]", 5),
    ("e[1,2] + e[3]", 10),
    ("e[1,2", 6),
    ("2*e[1] +", 9),
])
def test_parse_errors(text, col):
    with pytest.raises(ParseError) as e:
        parse_form(text)
    assert e.value.line == 1
    assert e.value.column == col


def test_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        parse_form("c*e[1]", AB)


def test_degree_argument():
    assert parse_form("0", degree=2) == KForm.zero(2)
    with pytest.raises(DegreeMismatch):
        parse_form("e[1]", degree=2)


def test_multiline_position():
    with pytest.raises(ParseError) as e:
        parse_form("e[1]\n + e[2] + e[2,2]")
    assert (e.value.line, e.value.column) == (2, 15)


@settings(max_examples=1000)
@given(st.integers(0, 7).flatmap(lambda p: st.tuples(st.just(p), poly_forms(p))))
def test_print_parse_roundtrip(pw):
    p, w = pw
    text = print_form(w)
    back = parse_form(text, AB, degree=p)
    assert back == w
    assert print_form(back) == text


@st.composite
def form_texts(draw):
    k = draw(st.integers(1, 4))
    parts = []
    for _ in range(draw(st.integers(1, 4))):
        idx = draw(st.permutations(range(1, 8)))[:k]
        coef = draw(st.sampled_from(["", "2*", "1/3*", "a*", "(a - b)*", "x1*", "x2^2*b*", "(1 + x3)*"]))
        parts.append(f"{coef}e[{','.join(map(str, idx))}]")
    ops = [draw(st.sampled_from([" + ", " - "])) for _ in parts[1:]]
    out = parts[0]
    for op, t in zip(ops, parts[1:]):
        out += op + t
    return k, out


@settings(max_examples=300)
@given(form_texts())
def test_text_roundtrip(kt):
    k, text = kt
    w = parse_form(text, AB)
    assert parse_form(print_form(w), AB, degree=k) == w


# ---------------------------------------------------------------- reports


def test_jsonable():
    from fractions import Fraction

    assert jsonable({(1, 2): Fraction(1, 2), "x": [(1, 2)]}) == {"1,2": "1/2", "x": [[1, 2]]}


@pytest.fixture(scope="module")
def verify_report():
    return run_verify()


def test_verify_items(verify_report):
    names = [c.name for c in verify_report.checks]
    assert names == sorted(names)
    assert set(names) >= {"clifford", "spin7-brackets", "commutator-table", "closure", "invariant-spinor", "psi-table",
                          "frame-relabel", "t-tensor", "lambda2-eigenvalues", "lambda3-projectors",
                          "lambda4-projectors", "worked-example"}


def test_verify_failures_are_the_known_ones(verify_report):
    failed = {c.name for c in verify_report.checks if not c.ok}
    assert failed == {"commutator-table", "invariant-spinor", "frame-relabel", "worked-example"}
    assert verify_report.exit_code == 1


def test_verify_json_schema(verify_report):
    d = verify_report.to_json()
    assert d["schema"] == "g2gauge-report" and d["version"] == 1
    assert set(d) == {"schema", "version", "suite", "ok", "checks"}
    for c in d["checks"]:
        assert set(c) == {"name", "status", "witness"}
        assert c["status"] in ("pass", "fail")
    json.dumps(d)


def test_corrupted_gamma_report():
    rep = run_verify(corrupt=(2, 3, 4))
    clif = next(c for c in rep.checks if c.name == "clifford")
    assert not clif.ok
    assert any("entry" in w for w in clif.witness)
    assert rep.exit_code == 1


# ---------------------------------------------------------------- commands and exit codes


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["decompose", "--degree", "5", "--form", "x"])
    assert e.value.code == 2


def test_parse_error_exit_2(tmp_path, capsys):
    f = tmp_path / "w.txt"
    f.write_text("e[1,1]")
    code, _, err = run(["decompose", "--degree", "2", "--form", str(f)], capsys)
    assert code == 2 and "repeated index" in err
    code, _, err = run(["decompose", "--degree", "2", "--form", str(tmp_path / "missing")], capsys)
    assert code == 2


def test_classify(tmp_path, capsys):
    f = tmp_path / "B.txt"
    f.write_text("x2*e[3] + a*x4*e[5] + b*x6*e[7]\n")
    code, out, _ = run(["classify", "--form", str(f), "--param", "a", "--param", "b", "--json"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["verdicts"]["asd_instanton"] == {"kind": "conditions", "polys": [str(parse_poly("b - a - 1", AB))]}
    code, out, _ = run(["classify", "--form", str(f), "--param", "a=0", "--param", "b=1", "--json"], capsys)
    d = json.loads(out)
    assert d["verdicts"]["asd_instanton"] == {"kind": "bool", "value": True}


def test_decompose(tmp_path, capsys):
    f = tmp_path / "w.txt"
    f.write_text("e[5,6] + e[1,2]")
    code, out, _ = run(["decompose", "--degree", "2", "--form", str(f), "--json"], capsys)
    assert code == 0
    pieces = list(json.loads(out)["pieces"].values())
    assert pieces == ["0", "e[1,2] + e[5,6]"]


def test_example_exit(capsys):
    code, out, _ = run(["example"], capsys)
    assert code == 1
    assert out.count("PASS") == 7 and out.count("FAIL") == 1
    code, out, _ = run(["example", "--a", "0", "--b", "0"], capsys)
    assert code == 0


def test_spinor(capsys):
    code, out, _ = run(["spinor", "--json"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["eta0_computed"] == ["0", "1", "0", "0", "0", "0", "0", "1"]
    assert d["frame"]["resolved"] is None


def test_zeta_and_assemble(capsys):
    code, out, _ = run(["zeta-det", "prod(2*pi*n)^2", "--json"], capsys)
    assert code == 0 and json.loads(out)["rational"] == "1"
    code, out, _ = run(["zeta-det", "detp(9*D|L0)", "--b0", "1", "--json"], capsys)
    assert json.loads(out)["normal_form"] == "3^(-2) * detp(D|L0)"
    code, out, _ = run(["assemble-zsc", "--b0", "1", "--b1", "0", "--json"], capsys)
    d = json.loads(out)
    assert d["prefactor"] == "3^(-1/4)"
    assert d["matches_printed_pattern"] and not d["matches_printed_prefactor"]
    code, _, _ = run(["zeta-det", "prod(x)"], capsys)
    assert code == 2


def test_db_roundtrip(tmp_path, capsys):
    assert run(["db-example", "--out", str(tmp_path)], capsys)[0] == 0
    base = [str(tmp_path / "complex.json"), str(tmp_path / "cocycles.json")]
    for kind in ("local", "large"):
        code, out, _ = run(["db-verify", *base, "--gauge", str(tmp_path / f"gauge-{kind}.json"), "--json"], capsys)
        d = json.loads(out)
        assert code == 0 and d["ok"]
        assert any(c["name"] == f"gauge-{kind}" for c in d["checks"])


def test_db_verify_detects_broken_class(tmp_path, capsys):
    run(["db-example", "--out", str(tmp_path)], capsys)
    cj = json.loads((tmp_path / "cocycles.json").read_text())
    _, vals = cj["classes"][0]["Gamma"][0]
    vals[0][1] = "1/7"  # a single-vertex bump of Gamma_ab
    (tmp_path / "cocycles.json").write_text(json.dumps(cj))
    code, out, _ = run(["db-verify", str(tmp_path / "complex.json"), str(tmp_path / "cocycles.json")], capsys)
    assert code == 1
    assert "FAIL  class0-cocycle" in out


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "g2gauge", "zeta-det", "prod(3)"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "3^(-1/2)" in r.stdout
