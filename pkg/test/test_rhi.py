import hardylab, pytest, math
import numpy as np
from hardylab.search import ratios
from hardylab.generate import random_step
from scipy.optimize import brentq, minimize_scalar
from hardylab.weight import PowerPiece, Weight
from hardylab.rhi import _log_psi

def test_rhi_constant():
    w = hardylab.make_step([2, 1], [0.5])
    assert hardylab.rhi_constant(w, 2.0) == pytest.approx(10.0 / 9.0, abs=1e-9)
    assert hardylab.rhi_constant(w, 2.0, "suffix") == pytest.approx(9.0 / 8.0, abs=1e-9)
    # Intervals with a third of their length in the first piece
    assert hardylab.rhi_constant(w, 2.0, "all") == pytest.approx(9.0 / 8.0, abs=1e-6)

    search = hardylab.rhi_search(w, hardylab.RHIQuery(2.0))
    assert search.interval == (0.0, 1.0)
    assert search.family == "prefix"
    assert search.tolerance >= 0.0
    assert search.resolution == 0.0
    assert not search.divergent

    assert hardylab.rhi_ratio(w, 2.0, 0.0, 1.0) == pytest.approx(10.0 / 9.0, rel=1e-15)
    assert hardylab.rhi_ratio(w, 2.0, 0.0, 0.5) == 1.0
    with pytest.raises(hardylab.ParameterError):
        hardylab.rhi_ratio(w, 2.0, 0.5, 0.25)

    # Prefix ratios of t^(-a) are constant
    w = hardylab.power_weight(0.25)
    assert hardylab.rhi_constant(w, 2.0) == pytest.approx(1.125, rel=1e-12)
    assert np.allclose(ratios(w, 2.0, 0.0, np.asarray([0.1, 0.5, 1.0])), 1.125, rtol=1e-12)

    assert hardylab.rhi_constant(hardylab.constant_weight(3.0), 2.0, "all") == 1.0

def test_rhi_divergent():
    search = hardylab.rhi_search(hardylab.power_weight(0.5), hardylab.RHIQuery(2.0))
    assert search.divergent
    assert search.c == math.inf

def _jump_supremum(h, q):
    # Intervals around a jump from h to 1 only see the fraction theta of their length below the jump
    result = minimize_scalar(lambda theta: -(theta * h ** q + 1.0 - theta) / (theta * h + 1.0 - theta) ** q, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-14})
    return -result.fun

def test_rhi_constant_at_jumps():
    w = hardylab.make_step([0.01, 1.0], [0.5])
    expected = _jump_supremum(0.01, 3.0)
    assert expected > 1000.0
    for family in ["prefix", "all"]:
        search = hardylab.rhi_search(w, hardylab.RHIQuery(3.0, family))
        assert search.c == pytest.approx(expected, rel=1e-9)
        assert search.resolution == 0.0
        assert search.tolerance <= 1e-11 * search.c
    assert hardylab.rhi_constant(w, 3.0, "suffix") == pytest.approx((0.5 * 0.01 ** 3 + 0.5) / 0.505 ** 3, rel=1e-12)

    # A short low piece far from both ends
    w = hardylab.make_step([1.0, 0.064, 1.0], [0.652344, 0.654297])
    assert hardylab.rhi_constant(w, 3.0, "all") == pytest.approx(_jump_supremum(0.064, 3.0), rel=1e-9)
    assert hardylab.rhi_constant(w, 3.0, "prefix") < 2.0

def test_rhi_constant_steps_against_grid():
    rng = np.random.default_rng(5)
    points = np.linspace(0.0, 1.0, 257)
    for _ in range(20):
        w = random_step(rng)
        q = float(rng.choice([1.5, 2.0, 3.0]))
        grid = np.unique(np.concatenate([points, w.breakpoints]))
        gi, gj = np.triu_indices(len(grid), k=1)
        assert hardylab.rhi_constant(w, q, "all") >= np.max(ratios(w, q, grid[gi], grid[gj])) * (1.0 - 1e-12)
        assert hardylab.rhi_constant(w, q, "prefix") >= np.max(ratios(w, q, 0.0, grid[1:])) * (1.0 - 1e-12)
        assert hardylab.rhi_constant(w, q, "suffix") >= np.max(ratios(w, q, grid[:-1], 1.0)) * (1.0 - 1e-12)

def test_rhi_search_tolerance():
    w = Weight((PowerPiece(0.0, 0.3, 2.0, 0.2), PowerPiece(0.3, 0.31, 0.05, 0.0), PowerPiece(0.31, 1.0, 1.0, 0.5)))
    points = np.unique(np.concatenate([np.linspace(0.0, 1.0, 1001), np.linspace(0.28, 0.33, 501), 0.3 * 2.0 ** -np.arange(30)]))

    search = hardylab.rhi_search(w, hardylab.RHIQuery(2.0))
    assert np.max(ratios(w, 2.0, 0.0, points[1:])) <= search.c + search.tolerance + 1e-12 * search.c
    assert search.tolerance <= 1e-6 * search.c

    search = hardylab.rhi_search(w, hardylab.RHIQuery(2.0, "suffix"))
    assert np.max(ratios(w, 2.0, points[:-1], 1.0)) <= search.c + search.tolerance + 1e-12 * search.c
    assert search.tolerance <= 1e-6 * search.c

    coarse = np.unique(np.concatenate([np.linspace(0.0, 1.0, 401), np.linspace(0.28, 0.33, 201)]))
    i, j = np.triu_indices(len(coarse), k=1)
    search = hardylab.rhi_search(w, hardylab.RHIQuery(2.0, "all"))
    assert np.max(ratios(w, 2.0, coarse[i], coarse[j])) <= search.c + search.tolerance + 1e-12 * search.c
    assert search.tolerance <= 0.1 * search.c

def test_rhi_divergent_families():
    w = hardylab.make_step([0.0, 1.0], [0.5])
    assert hardylab.rhi_search(w, hardylab.RHIQuery(2.0)).divergent
    assert hardylab.rhi_search(w, hardylab.RHIQuery(2.0, "all")).divergent
    # Suffixes reaching into the zero piece dilute the mean: 2 (1 - s) on (s, 1]
    assert hardylab.rhi_constant(w, 2.0, "suffix") == pytest.approx(2.0, rel=1e-12)

    w = hardylab.make_step([1.0, 0.0, 1.0], [0.25, 0.5])
    assert hardylab.rhi_search(w, hardylab.RHIQuery(2.0, "all")).divergent
    assert not hardylab.rhi_search(w, hardylab.RHIQuery(2.0)).divergent

def test_rhi_query():
    with pytest.raises(hardylab.ParameterError):
        hardylab.RHIQuery(1.0)
    with pytest.raises(hardylab.ParameterError):
        hardylab.RHIQuery(2.0, "left")
    with pytest.raises(hardylab.ParameterError):
        hardylab.RHIQuery(2.0, grid=10)

def test_p0_solve():
    assert hardylab.p0_solve(2.0, 9.0 / 8.0) == pytest.approx(4.0, abs=1e-10)
    assert hardylab.p0_solve(2.0, 1.0) == math.inf
    assert hardylab.p0_solve(2.0, 1.0 - 1e-13) == math.inf
    assert 4.0 < hardylab.p0_solve(2.0, 10.0 / 9.0) < 4.2
    with pytest.raises(hardylab.ParameterError):
        hardylab.p0_solve(2.0, 0.5)
    with pytest.raises(hardylab.ParameterError):
        hardylab.p0_solve(1.0, 2.0)
    with pytest.raises(hardylab.ParameterError):
        hardylab.p0_solve(2.0, math.nan)

    # c = (1-a)^q / (1-aq) has the sharp exponent 1/a
    rng = np.random.default_rng(42)
    for _ in range(100):
        q = float(rng.uniform(1.05, 10.0))
        a = float(rng.uniform(0.01, 0.99)) / q
        c = (1.0 - a) ** q / (1.0 - a * q)
        assert hardylab.p0_solve(q, c) == pytest.approx(1.0 / a, rel=1e-8)

    # Larger constants give smaller exponents
    p0s = [hardylab.p0_solve(2.0, c) for c in [1.01, 1.1, 1.5, 3.0]]
    assert all(x > y for x, y in zip(p0s[:-1], p0s[1:]))

def test_constants():
    assert hardylab.k_p(3.0, 2.0, 9.0 / 8.0) == pytest.approx(5.0 / 32.0, abs=1e-12)
    assert hardylab.c_prime(3.0, 2.0, 9.0 / 8.0) == pytest.approx(4.8, abs=1e-12)
    for q, c in [(2.0, 1.5), (1.5, 1.01), (7.0, 3.0)]:
        assert hardylab.c_prime(q, q, c) == c
        assert hardylab.k_p(q, q, c) == 1.0
    with pytest.raises(hardylab.RangeError):
        hardylab.k_p(5.0, 2.0, 9.0 / 8.0)
    with pytest.raises(hardylab.RangeError):
        hardylab.k_p(1.5, 2.0, 9.0 / 8.0)
    with pytest.raises(hardylab.RangeError):
        hardylab.c_prime(4.5, 2.0, 9.0 / 8.0)

def test_phi():
    assert hardylab.phi(1.0, 1.0, 4.0, 2.0) == 0.5
    rng = np.random.default_rng(42)
    y = rng.uniform(0.0, 10.0, 1000)
    x = y + rng.uniform(0.0, 10.0, 1000)
    z = x + rng.uniform(0.0, 10.0, 1000)
    p, q = 3.0, 2.0
    fx, fz = hardylab.phi(y, x, p, q), hardylab.phi(y, z, p, q)
    assert np.all(fx >= fz - 1e-9 * np.maximum(1.0, np.abs(fx)))

def test_theorem3_verify():
    w = hardylab.make_step([2, 1], [0.5])
    report = hardylab.theorem3_verify(w, 2.0, 3.0)
    assert report.op == "theorem3"
    assert report.passed
    assert report.details["c"] == pytest.approx(10.0 / 9.0, abs=1e-9)
    assert set(report.details["checks"].keys()) == {"hypothesis", "averaging_identity", "intermediate", "conclusion"}
    for summary in report.details["checks"].values():
        assert summary["passed"] == summary["checks"]
    assert report.details["c_prime"] == pytest.approx(hardylab.c_prime(3.0, 2.0, report.details["c"]), rel=1e-15)

    # At p = q the identity step is skipped
    report = hardylab.theorem3_verify(w, 2.0, 2.0)
    assert report.passed
    assert not "averaging_identity" in report.details["checks"]

    w = hardylab.power_weight(0.25)
    assert hardylab.theorem3_verify(w, 2.0, 3.5).passed
    assert hardylab.theorem3_verify(w, 2.0, 3.0, c=1.2).passed

    with pytest.raises(hardylab.RangeError):
        hardylab.theorem3_verify(w, 2.0, 4.5)
    with pytest.raises(hardylab.PreconditionError):
        hardylab.theorem3_verify(hardylab.make_step([1, 2], [0.5]), 2.0, 3.0)

def test_extremal_rhi():
    w, evidence = hardylab.extremal_rhi(2.0, 9.0 / 8.0)
    assert evidence.p0 == pytest.approx(4.0, abs=1e-10)
    assert evidence.a == pytest.approx(0.25, abs=1e-10)
    assert evidence.certified
    assert evidence.increments_ok
    assert len(evidence.rows) == 40
    assert all(inc == pytest.approx(math.log(2.0), abs=1e-12) for _, _, _, inc in evidence.rows)
    assert hardylab.rhi_constant(w, 2.0) == pytest.approx(9.0 / 8.0, rel=1e-9)
    assert evidence.to_dict()["rows"][0]["k"] == 1

    with pytest.raises(hardylab.ParameterError):
        hardylab.extremal_rhi(2.0, 1.0)

def test_rhi_range():
    w = hardylab.make_step([2, 1], [0.5])
    result = hardylab.rhi_range(w, hardylab.RHIQuery(2.0))
    assert result.c == pytest.approx(10.0 / 9.0, abs=1e-9)
    assert 4.0 < result.p0 < 4.2
    assert len(result.table) == 16
    assert result.table[0][0] == 2.0
    assert all(q_p < result.p0 for q_p, _, _, _ in result.table)
    assert all(ok for _, _, _, ok in result.table)
    assert result.verified

    d = result.to_dict()
    assert d["status"] == "pass"
    assert d["table"][0] == {"p": 2.0, "k_p": 1.0, "c_prime": result.c, "verified": True}

    result = hardylab.rhi_range(hardylab.constant_weight(), hardylab.RHIQuery(2.0), 4)
    assert result.c == 1.0
    assert result.p0 == math.inf
    assert [row[0] for row in result.table] == [2.0, 3.5, 5.0, 6.5]
    assert result.verified
    assert result.to_dict()["p0"] == "inf"

    result = hardylab.rhi_range(hardylab.power_weight(0.6), hardylab.RHIQuery(2.0))
    assert result.status == hardylab.DIVERGENT
    assert not result.verified

    with pytest.raises(hardylab.PreconditionError):
        hardylab.rhi_range(hardylab.make_step([1, 2], [0.5]), hardylab.RHIQuery(2.0))
    with pytest.raises(hardylab.ParameterError):
        hardylab.rhi_range(w, hardylab.RHIQuery(2.0), 0)

def test_p0_against_brentq():
    for q, c in [(2.0, 10.0 / 9.0), (1.5, 1.3), (4.0, 2.0), (2.0, 1.001)]:
        p0 = hardylab.p0_solve(q, c)
        lo = q * (1.0 + 1e-9)
        hi = 2.0 * p0
        assert _log_psi(lo, q, c) < 0.0 < _log_psi(hi, q, c)
        assert p0 == pytest.approx(brentq(lambda p: _log_psi(p, q, c), lo, hi, xtol=1e-14, rtol=1e-14), rel=1e-10)

def test_rhi_range_suffix():
    w = hardylab.make_step([3, 1], [0.1])
    assert hardylab.rhi_constant(w, 2.0) == pytest.approx(4.0 / 3.0, rel=1e-12)
    result = hardylab.rhi_range(w, hardylab.RHIQuery(2.0, "suffix"))
    assert result.c == pytest.approx(1.25, rel=1e-12)
    assert result.family == "suffix"
    assert result.verified

    report = hardylab.theorem3_verify(w, 2.0, 3.0, family="suffix")
    assert report.passed
    assert report.details["c"] == pytest.approx(1.25, rel=1e-12)
    assert set(report.details["checks"].keys()) == {"suffix_hypothesis", "suffix_conclusion"}
    # The whole interval attains the suffix constant
    assert report.details["checks"]["suffix_hypothesis"]["worst_delta"] == 1.0

    # c = 4/3 has p0 = 3
    report = hardylab.theorem3_verify(w, 2.0, 2.5, family="all")
    assert report.passed
    assert {"hypothesis", "intermediate", "suffix_conclusion"} <= set(report.details["checks"].keys())

    w = hardylab.make_step([5, 2, 1], [0.05, 0.2])
    for family in ["prefix", "suffix", "all"]:
        assert hardylab.rhi_range(w, hardylab.RHIQuery(2.0, family)).verified
    with pytest.raises(hardylab.ParameterError):
        hardylab.theorem3_verify(w, 2.0, 3.0, family="left")
