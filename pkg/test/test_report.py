import hardylab, pytest, json, math
from hardylab.report import make_report, worst, to_jsonable, dumps

def test_make_report():
    r = make_report("check", {"p": 2.0}, 1.0, 2.0)
    assert r.margin == 1.0
    assert r.passed
    assert r.rule == "inequality"

    r = make_report("check", {"p": 2.0}, 2.0, 1.0, budget=0.5)
    assert r.status == hardylab.FAIL
    r = make_report("check", {"p": 2.0}, 2.0, 1.0, budget=1.0)
    assert r.passed

    # Tolerances are relative to max(1, |lhs|)
    assert make_report("check", {}, 1e12, 1e12 - 1.0).passed
    assert not make_report("check", {}, 1e12, 1e12 - 1e4).passed

    r = make_report("identity", {}, 1.0, 1.0 + 1e-12, identity=True)
    assert r.passed
    assert r.rule == "identity"
    assert r.margin == pytest.approx(-1e-12, abs=1e-15)
    assert not make_report("identity", {}, 1.0, 1.1, identity=True).passed

    assert make_report("check", {}, 1.0, 2.0, strict=True).passed
    assert not make_report("check", {}, 1.0, 1.0, strict=True).passed

    r = make_report("check", {}, math.inf, 1.0)
    assert r.status == hardylab.DIVERGENT
    assert not r.passed
    r = make_report("check", {}, math.inf, math.inf)
    assert r.status == hardylab.DIVERGENT
    assert math.isnan(r.margin)

def test_worst():
    a = make_report("a", {}, 1.0, 2.0)
    b = make_report("b", {}, 1.0, 1.5)
    c = make_report("c", {}, 2.0, 1.0)
    d = make_report("d", {}, math.inf, 1.0)
    assert worst([a, b]) is b
    assert worst([a, b, c]) is c
    assert worst([a, c, d]) is d
    assert hardylab.all_passed([a, b])
    assert not hardylab.all_passed([a, c])
    with pytest.raises(ValueError):
        worst([])

def test_serialization():
    r = make_report("theorem2", {"p": 2.0, "N": 2}, 1.25, 1.5, details={"strict": True})
    d = r.to_dict()
    assert d == {"op": "theorem2", "params": {"p": 2.0, "N": 2}, "lhs": 1.25, "rhs": 1.5, "margin": 0.25, "budget": 0.0,
        "status": "pass", "rule": "inequality", "details": {"strict": True}}
    assert "seed" in r.with_seed(7).to_dict()
    assert json.loads(r.to_json()) == d

    d = make_report("check", {}, math.inf, 1.0).to_dict()
    assert d["lhs"] == "inf"
    assert d["margin"] == "-inf"
    assert to_jsonable([r, {"x": math.nan}])[1] == {"x": "nan"}

    # Sorted keys make the output deterministic
    assert dumps({"b": 1, "a": [r]}) == dumps({"a": [r], "b": 1})
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')
