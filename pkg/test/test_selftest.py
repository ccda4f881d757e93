import hardylab, pytest
from hardylab.selftest import SUITES, run_selftest

@pytest.mark.parametrize("name", list(SUITES.keys()))
def test_suite(name):
    result = run_selftest(42, [name], 0.02)
    assert result["status"] == "pass"
    assert result["suites"][0]["name"] == name
    assert result["suites"][0]["cases"] > 0
    assert not "error" in result["suites"][0]

def test_default_seed(monkeypatch):
    monkeypatch.delenv("HARDY_LAB_SEED", raising=False)
    result = run_selftest(None, ["rearrangement", "one_sided_reduction", "elementary"], 0.05)
    assert result["seed"] == 20240117
    assert result["status"] == "pass"

def test_suites_are_independent():
    alone = run_selftest(42, ["phi"], 0.02)["suites"][0]
    together = run_selftest(42, ["elementary", "phi"], 0.02)["suites"][1]
    assert alone == together

def test_crashing_suite(monkeypatch):
    def broken(rng, scale):
        raise TypeError("Invalid NaN comparison")
    monkeypatch.setitem(SUITES, "phi", broken)
    result = run_selftest(42, ["phi", "constants"], 0.02)
    assert result["status"] == "fail"
    assert result["suites"][0]["status"] == "fail"
    assert result["suites"][0]["error"] == "TypeError: Invalid NaN comparison"
    assert result["suites"][1]["status"] == "pass"

def test_invalid_arguments():
    with pytest.raises(ValueError):
        run_selftest(42, ["theorem4"])
    with pytest.raises(ValueError):
        run_selftest(42, ["phi"], 0.0)
    assert len(SUITES) == 17
