import json
from fractions import Fraction

import pytest

from toricproj.adapt import adapt_all
from toricproj.certificates import FarkasCertificate, SupportFunction, certify_lp
from toricproj.fan import InvariantViolation, f_vector, validate_fan
from toricproj.fan_io import (BUILTINS, ParseError, UnknownName, builtin, oda75_h_table,
                              parse_certificate, parse_fan, parse_log, parse_support,
                              read_fan, serialize_certificate, serialize_fan, serialize_log,
                              serialize_support)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtin_round_trip_and_valid(name):
    fan = builtin(name)
    assert parse_fan(serialize_fan(fan)) == fan
    assert validate_fan(fan).ok


def test_builtin_contents():
    assert f_vector(builtin("oda75")) == (7, 15, 10)
    p2 = builtin("p2")
    assert p2.rays == ((1, 0), (0, 1), (-1, -1))
    assert p2.cones == ((0, 1), (0, 2), (1, 2))
    p1p1 = builtin("p1p1")
    assert sorted(p1p1.rays) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert len(p1p1.cones) == 4
    with pytest.raises(UnknownName):
        builtin("p7")


def test_read_fan(tmp_path):
    assert read_fan("builtin:p3") == builtin("p3")
    path = tmp_path / "f.json"
    path.write_text(serialize_fan(builtin("p2")))
    assert read_fan(str(path)) == builtin("p2")


def fan_doc(rays, cones, dim=3):
    return json.dumps({"schema": "fan/1", "dim": dim, "rays": rays, "cones": cones})


def test_parse_fan_rejects_bad_input():
    with pytest.raises(InvariantViolation, match="primitive"):
        parse_fan(fan_doc([[2, 4, 6], [0, 1, 0], [0, 0, 1]], [[0, 1, 2]]))
    with pytest.raises(InvariantViolation, match="distinct"):
        parse_fan(fan_doc([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1]]))
    with pytest.raises(InvariantViolation, match="duplicated"):
        parse_fan(fan_doc([[1, 0, 0], [1, 0, 0], [0, 0, 1]], [[0, 1, 2]]))
    with pytest.raises(ParseError, match="line 1"):
        parse_fan('{"schema": "fan/1", ')
    with pytest.raises(ParseError, match="schema"):
        parse_fan(json.dumps({"schema": "fan/2", "dim": 2, "rays": [], "cones": []}))
    with pytest.raises(ParseError, match=r"rays\[1\]"):
        parse_fan(fan_doc([[1, 0, 0], [0, "x", 0]], []))


def test_support_round_trip():
    assert parse_support('{"schema": "support/1", "values": ["-10/2", "3"]}').values == (-5, 3)
    h = SupportFunction([Fraction(-13, 2), 4, Fraction(1, 3)])
    assert parse_support(serialize_support(h)) == h
    with pytest.raises(ParseError):
        parse_support('{"schema": "support/1", "fan_rays": 3, "values": ["1"]}')
    with pytest.raises(ParseError):
        parse_support('{"schema": "support/1", "values": ["1/x"]}')


def test_h_table_fixture():
    h = oda75_h_table()
    assert len(h) == 32
    assert h[0] == -5 and h[1] == Fraction(-13, 2)


def test_log_round_trip(oda_run):
    _, log = oda_run
    text = serialize_log(log)
    back = parse_log(text)
    assert back.steps == log.steps and back.per_normal == log.per_normal
    assert back.total == 25
    assert serialize_log(back) == text
    doc = json.loads(text)
    assert doc["steps"][0] == {"step": 1, "normal": [0, 0, 1], "u": [0, 0, 1],
                               "v": [0, -1, -1], "s": [0, -1, 0],
                               "u_idx": 2, "v_idx": 5, "s_idx": 7}
    assert doc["per_normal"][0] == {"normal": [0, 0, 1], "count": 1}


def test_log_rejects_inconsistent_counts(oda_run):
    doc = json.loads(serialize_log(oda_run[1]))
    doc["per_normal"][0]["count"] = 2
    with pytest.raises(ParseError):
        parse_log(json.dumps(doc))


def test_certificate_round_trip(oda, gamma):
    farkas = certify_lp(oda)
    back = parse_certificate(serialize_certificate(farkas))
    assert isinstance(back, FarkasCertificate) and back.multipliers == farkas.multipliers
    ample = oda75_h_table()
    back = parse_certificate(serialize_certificate(ample))
    assert back == ample
    assert json.loads(serialize_certificate(ample))["kind"] == "ample"
    with pytest.raises(ParseError):
        parse_certificate('{"schema": "cert/1", "kind": "maybe"}')


def test_pipeline_fan_round_trip(gamma):
    assert parse_fan(serialize_fan(gamma)) == gamma
