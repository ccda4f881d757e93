import hardylab, pytest, math
import numpy as np
from hardylab.discrete import compensated_cumsum, compensated_sum, running_ratios
from hardylab.generate import random_sequence

def test_weighted_seq():
    s = hardylab.WeightedSeq((1, 2), (3, 0))
    assert len(s) == 2
    assert s.lam == (1.0, 2.0)
    assert hardylab.WeightedSeq.ones([1.0, 2.0, 3.0]).lam == (1.0, 1.0, 1.0)
    with pytest.raises(hardylab.ValidationError):
        hardylab.WeightedSeq((), ())
    with pytest.raises(hardylab.ValidationError):
        hardylab.WeightedSeq((1.0, 1.0), (1.0,))
    with pytest.raises(hardylab.ValidationError):
        hardylab.WeightedSeq((0.0,), (1.0,))
    with pytest.raises(hardylab.ValidationError):
        hardylab.WeightedSeq((1.0,), (-1.0,))
    with pytest.raises(hardylab.ValidationError):
        hardylab.WeightedSeq((math.inf,), (1.0,))

def test_compensated_sums():
    xs = [1.0, 1e100, 1.0, -1e100]
    assert compensated_sum(xs) == 2.0
    assert list(compensated_cumsum([0.1] * 10))[-1] == pytest.approx(1.0, abs=1e-16)

    assert running_ratios(hardylab.WeightedSeq((1.0, 1.0), (1.0, 0.0))) == [(1.0, 1.0, 1.0), (1.0, 2.0, 0.5)]
    assert running_ratios(hardylab.WeightedSeq((1.0, 1.0), (0.0, 2.0)))[0] == (0.0, 1.0, 0.0)

def test_theorem2():
    report = hardylab.theorem2_sides(hardylab.WeightedSeq((1.0, 1.0), (1.0, 0.0)), 2.0)
    assert report.op == "theorem2"
    assert report.lhs == 1.25
    assert report.rhs == 1.5
    assert report.margin == 0.25
    assert report.passed
    assert report.details["strict"]

    # Equality for constant sequences and single terms
    report = hardylab.theorem2_sides(hardylab.WeightedSeq((1.0, 2.0, 0.5), (3.0, 3.0, 3.0)), 3.0)
    assert report.passed
    assert abs(report.margin) <= 1e-12 * report.lhs
    report = hardylab.theorem2_sides(hardylab.WeightedSeq((2.0,), (5.0,)), 1.5)
    assert abs(report.margin) <= 1e-12 * report.lhs

    with pytest.raises(hardylab.ParameterError):
        hardylab.theorem2_sides(hardylab.WeightedSeq((1.0,), (1.0,)), 1.0)

@pytest.mark.parametrize("p", [1.1, 1.5, 2.0, 3.0, 7.5])
def test_theorem2_random(p):
    rng = np.random.default_rng(42)
    for _ in range(200):
        s = random_sequence(rng)
        report = hardylab.theorem2_sides(s, p)
        assert report.passed
        assert report.margin >= -1e-9 * max(1.0, report.lhs)

        # The weighted inequality implies Copson's
        copson = hardylab.copson_sides(s, p)
        assert copson.passed
        assert copson.lhs == report.lhs

        a = s.a
        assert hardylab.hardy_classical_sides(a, p).passed
        weighted = hardylab.theorem2_sides(hardylab.WeightedSeq.ones(a), p)
        free = hardylab.hardy_theorem2_sides(a, p)
        assert weighted.lhs == free.lhs
        assert weighted.rhs == free.rhs

def test_delta_chain():
    rng = np.random.default_rng(42)
    for _ in range(100):
        s = random_sequence(rng)
        p = float(rng.uniform(1.1, 5.0))
        chain = hardylab.delta_chain(s, p)
        assert len(chain) == len(s)
        assert chain[0][0] == pytest.approx(chain[0][1], rel=1e-12, abs=1e-12)
        scale = max(1.0, max(max(abs(d), abs(b)) for d, b in chain))
        for delta, bound in chain:
            assert delta <= bound + 1e-9 * scale

        report = hardylab.theorem2_sides(s, p)
        telescoped = math.fsum(d - b for d, b in chain)
        assert telescoped == pytest.approx(report.lhs - report.rhs, abs=1e-12 * max(1.0, report.lhs, report.rhs))

def test_delta_chain_bounds_telescope():
    rng = np.random.default_rng(11)
    for _ in range(100):
        s = random_sequence(rng)
        p = float(rng.uniform(1.1, 5.0))
        bounds = [b for _, b in hardylab.delta_chain(s, p)]
        rows = running_ratios(s)
        _, L_N, r_N = rows[-1]
        largest = max(L * r ** p for _, L, r in rows)
        assert math.fsum(bounds) == pytest.approx(-L_N * r_N ** p / (p - 1.0), rel=1e-12, abs=1e-12 * largest / (p - 1.0))

def test_elementary_gap():
    assert hardylab.elementary_gap(2.0, 2.0, 3.0) == 0.0
    assert hardylab.elementary_gap(1.0, 0.0, 2.0) == 1.0
    assert hardylab.elementary_gap(0.0, 2.0, 2.0) == 4.0

    rng = np.random.default_rng(42)
    x, y = rng.uniform(0.0, 10.0, 1000), rng.uniform(0.0, 10.0, 1000)
    p = rng.uniform(1.01, 6.0, 1000)
    gap = hardylab.elementary_gap(x, y, p)
    assert gap.shape == (1000,)
    assert np.all(gap >= -1e-9 * np.maximum(1.0, (p - 1.0) * x ** p + y ** p))
