from __future__ import annotations

import json
import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from bishopnf.cli import main
from bishopnf.fields import Gaussian, QQi, cyclotomic
from bishopnf.invariants import detect_moser_s, rotate_surface
from bishopnf.normalizer import AdmissibilityError
from bishopnf.report import decode_field, decode_normal_form, decode_transform, decode_value, encode_value
from bishopnf.series import SurfaceSeries
from bishopnf.surface_io import ParseError, generate_random, parse_text, serialize, serialize_file

from conftest import random_surface_series

M3 = "version 1\ndegree 8\n1 1 1 0\n3 0 1 0\n"
A = "version 1\ndegree 8\n1 1 1 0\n3 0 1 0\n4 0 1 0\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


# ------------------------------------------------------------ file format


def test_parse_examples():
    H = parse_text("degree 6\n1 1 1 0\n3 0 1 0\n").surface
    assert H == SurfaceSeries.model(QQi, 6, 3)
    with pytest.raises(AdmissibilityError) as exc:
        parse_text("degree 6\n1 1 1 0\n2 0 1/2 0\n")
    assert exc.value.kind == "bishop-invariant"
    with pytest.raises(ParseError, match="diagonal"):
        parse_text("degree 6\n1 1 1 0\n2 2 0 1/3\n")
    with pytest.raises(AdmissibilityError) as exc:
        parse_text("degree 6\n1 1 2 0\n3 0 1 0\n")
    assert exc.value.kind == "not-complex-tangent"


@pytest.mark.parametrize("text, line, column", [
    ("1 1 1 0\n", 1, 1),
    ("degree 6\n1 1 1\n", 2, 1),
    ("degree 6\n1 2 1 0\n", 2, 3),
    ("degree 6\n1 1 1 0\n4 3 1 0\n", 3, 1),
    ("degree 6\n1 1 1 0\n3 0 1/0 0\n", 3, 5),
    ("degree 6\n1 1 1 0\n3 0 x 0\n", 3, 5),
    ("# comment\ndegree 6\n1 1 1 0\n1 1 1 0\n", 4, 1),
    ("version 2\ndegree 6\n", 1, 9),
])
def test_parse_errors_report_position(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_text(text)
    assert (exc.value.line, exc.value.column) == (line, column)


def test_comments_and_blank_lines():
    text = "# model\n\nversion 1\ndegree 6   # truncation\n1 1 1 0\n3 0 1 0  # harmonic\n"
    assert parse_text(text).surface == SurfaceSeries.model(QQi, 6, 3)


def test_round_trip_random_surfaces():
    rng = random.Random(77)
    for _ in range(100):
        D = rng.randint(3, 10)
        X = random_surface_series(rng, D, low=3)
        H = SurfaceSeries(QQi, D, {(1, 1): 1}) + X + X.conj()
        text = serialize(H)
        assert parse_text(text, check=False).surface == H
        assert serialize(parse_text(text, check=False).surface) == text


def test_cyclotomic_round_trip():
    K = cyclotomic(12)
    z = K.zeta_power(1)
    H = SurfaceSeries(K, 6, {(1, 1): K.one, (3, 0): K.one, (0, 3): K.one, (4, 1): z, (1, 4): z.conjugate()})
    text = serialize(H, 3)
    assert "field QQ(zeta_12)" in text
    sf = parse_text(text)
    assert sf.surface == H and sf.declared_s == 3


@given(st.integers(0, 10 ** 6), st.integers(3, 6))
def test_generate_is_deterministic_and_admissible(seed, s):
    a = serialize_file(generate_random(seed, s, s + 5))
    assert a == serialize_file(generate_random(seed, s, s + 5))
    sf = parse_text(a)
    assert sf.declared_s == s and sf.surface[(s, 0)] == 1
    assert detect_moser_s(sf.surface) == s


def test_value_encoding_round_trip():
    K = cyclotomic(12)
    for F, x in ((QQi, Gaussian(mpq(-3, 7), mpq(5, 2))), (K, K.zeta_power(5) * mpq(2, 3) + K.one)):
        obj = encode_value(F, x)
        assert decode_value(F, json.loads(json.dumps(obj))) == x
    assert encode_value(QQi, Gaussian(mpq(-3, 7), 0)) == {"re": "-3/7", "im": "0"}


# -------------------------------------------------------------- commands


def test_normalize_json_report(capsys, files):
    code, out, _ = run(capsys, "normalize", files("A.surf", A), "--degree", "8", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == "bishopnf-report/1" and rep["command"] == "normalize"
    assert rep["residual_checked"] is True and rep["s"] == 3
    assert rep["lambdas"]["5"] == {"re": "-21/4", "im": "0"}
    assert rep["lambdas"]["8"] == {"re": "-8553/32", "im": "0"}
    assert rep["automorphism_group"]["order"] == 1
    F = decode_field(rep["field"])
    assert decode_normal_form(F, rep["normal_form"]).lambdas[5] == mpq(-21, 4)
    decode_transform(F, rep["transform"]).validate()
    assert set(rep["numeric"]) == {"elapsed_seconds"}


def test_normalize_text_output(capsys, files):
    code, out, _ = run(capsys, "normalize", files("M3.surf", M3))
    assert code == 0
    assert "s = 3" in out and "lambda_5 = 0" in out and "identity = true" in out
    assert "residual_checked = true" in out


def test_invariants_and_aut(capsys, files):
    code, out, _ = run(capsys, "invariants", files("A.surf", A))
    assert code == 0 and "lambda_5 = -21/4" in out
    for s in (3, 4, 5):
        text = serialize(SurfaceSeries.model(QQi, 3 * s + 2, s))
        code, out, _ = run(capsys, "aut", files(f"M{s}.surf", text))
        assert code == 0 and out.startswith(f"order {s}, full Z_{s}")


def test_equiv_recovers_rotation(capsys, files):
    H = generate_random(5, 3, 9, 5).surface
    a = files("a.surf", serialize(H))
    b = files("b.surf", serialize(rotate_surface(H, 1, 3)))
    code, out, _ = run(capsys, "equiv", a, b)
    assert code == 0 and out.startswith("equivalent, l=1")
    code, out, _ = run(capsys, "equiv", a, b, "--json")
    rep = json.loads(out)
    assert rep["equivalent"] is True and rep["rotation"] == 1 and rep["degree"] == 9
    c = files("c.surf", serialize(H + SurfaceSeries(QQi, 9, {(5, 0): 1, (0, 5): 1})))
    code, out, _ = run(capsys, "equiv", a, c)
    assert code == 0 and out.startswith("inequivalent")


def test_verify_good_and_tampered(capsys, files, tmp_path):
    src = files("A.surf", A)
    _, out, _ = run(capsys, "normalize", src, "--json")
    good = files("good.json", out)
    code, out, _ = run(capsys, "verify", src, good)
    assert code == 0 and out.startswith("verified")
    rep = json.loads((tmp_path / "good.json").read_text())
    rep["normal_form"]["lambdas"]["5"] = {"re": "1", "im": "0"}
    code, out, _ = run(capsys, "verify", src, files("bad.json", json.dumps(rep)))
    assert code == 5 and "FAILED" in out


def test_numeric_scale_round_trip(capsys, files):
    src = files("S.surf", "degree 8\n1 1 1 0\n3 0 2 1\n4 0 1 0\n2 2 3 0\n")
    code, _, err = run(capsys, "normalize", src)
    assert code == 3 and "inadmissible" in err
    code, out, _ = run(capsys, "normalize", src, "--numeric-scale", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["field"]["kind"] == "numeric" and rep["residual_checked"] is True
    code, out, _ = run(capsys, "verify", src, files("S.json", json.dumps(rep)))
    assert code == 0


def test_cyclotomic_field_flag(capsys, files):
    code, out, _ = run(capsys, "normalize", files("A.surf", A), "--field", "cyclotomic", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["field"] == {"kind": "cyclotomic", "name": "QQ(zeta_12)", "n": 12}
    assert rep["lambdas"]["5"]["basis"][0] == "-21/4"


def test_branch_command(capsys, files):
    code, out, _ = run(capsys, "branch", files("M3.surf", M3), "--polynomial", "--order", "12", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["residuals_zero"] == {"z_equation": True, "w_equation": True}
    assert rep["membership_order"] == "4/3" and rep["P"]["terms"]["2"] == {"re": "-3", "im": "0"}
    assert len(rep["branches"]) == 3
    # a surface whose E is not o(|z|^s) is analyzed through its normal form
    code, out, _ = run(capsys, "branch", files("R.surf", "degree 8\n1 1 1 0\n3 0 1 0\n2 1 1 1\n"))
    assert code == 0 and "normal form of the input" in out


def test_generate_command(capsys, tmp_path):
    p1, p2 = tmp_path / "g1.surf", tmp_path / "g2.surf"
    assert main(["generate", "--seed", "1", "--s", "3", "--degree", "10", "-o", str(p1)]) == 0
    assert main(["generate", "--seed", "1", "--s", "3", "--degree", "10", "-o", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()
    code, out, _ = run(capsys, "generate", "--seed", "1", "--s", "3", "--degree", "10")
    assert out == p1.read_text()


def test_quadric_reported_not_failed(capsys, files):
    code, out, _ = run(capsys, "invariants", files("Q.surf", "degree 12\n1 1 1 0\n2 2 1 0\n"))
    assert code == 0 and "quadric-to-degree-12" in out


@pytest.mark.parametrize("text, argv, code", [
    ("degree 6\n1 1 1 0\n3 0 x 0\n", [], 2),
    ("degree 6\n1 1 1 0\n2 0 1/2 0\n", [], 3),
    ("degree 6\n1 1 1 0\n2 2 0 1/3\n", [], 2),
    ("degree 6\n1 1 2 0\n3 0 1 0\n", [], 3),
    ("degree 6\n1 1 1 0\n3 0 1 0\n", ["--degree", "9"], 4),
])
def test_exit_codes(capsys, files, text, argv, code):
    got, _, err = run(capsys, "normalize", files("x.surf", text), *argv)
    assert got == code and err


def test_exit_codes_for_missing_inputs(capsys, files, tmp_path):
    assert run(capsys, "normalize", str(tmp_path / "missing.surf"))[0] == 2
    src = files("A.surf", A)
    assert run(capsys, "verify", src, files("junk.json", "{not json"))[0] == 2
    assert run(capsys, "verify", src, files("empty.json", "{}"))[0] == 5
