import hardylab, pytest, math
import numpy as np
from hardylab.weight import PowerPiece, Weight
from hardylab.quad import QuadSpec, integrate_product, integrate_product_with_error
from hardylab.generate import random_weight

def test_integrate_product():
    w = hardylab.power_weight(0.25)
    assert integrate_product(w, 0.0, 1.0, 2.0, 0.0) == pytest.approx(32.0 / 9.0, rel=1e-14)
    assert integrate_product(w, 0.0, 1.0, 0.0, 2.0) == pytest.approx(2.0, rel=1e-14)
    assert integrate_product(hardylab.power_weight(0.5), 0.0, 1.0, 1.0, 1.0) == math.inf

    # Constant weight on both pieces: (Aw)^2 = 1
    w = hardylab.make_step([1.0, 1.0], [0.5])
    value, error = integrate_product_with_error(w, 0.0, 1.0, 2.0, 0.0)
    assert value == pytest.approx(1.0, rel=1e-13)
    assert error < 1e-12

    # (Aw)(t) = (1 + (t - 1/2)) / t on the second piece of the step weight {2, 1}
    w = hardylab.make_step([2.0, 1.0], [0.5])
    value, error = integrate_product_with_error(w, 0.0, 1.0, 1.0, 0.0)
    assert value == pytest.approx(1.0 + 0.5 + 0.5 * math.log(2.0), rel=1e-12)
    assert error <= 1e-9

    with pytest.raises(hardylab.ParameterError):
        integrate_product(w, 0.5, 0.5, 1.0, 0.0)
    with pytest.raises(hardylab.ParameterError):
        integrate_product(w, 0.0, 1.0, -1.0, 0.0)
    with pytest.raises(hardylab.ParameterError):
        QuadSpec(rel_tol=0.0)
    with pytest.raises(hardylab.ParameterError):
        QuadSpec(panel_order=1)

def test_accuracy_error():
    w = Weight((PowerPiece(0.0, 1e-3, 1.0, 0.0), PowerPiece(1e-3, 1.0, 1e-3 ** 1.5, 1.5)))
    with pytest.raises(hardylab.AccuracyError) as e:
        integrate_product_with_error(w, 0.0, 1.0, 0.0, 4.0, QuadSpec(max_panels=1))
    assert e.value.error > 0.0
    assert math.isfinite(e.value.estimate)

def test_I_s():
    w = hardylab.power_weight(0.25)
    assert hardylab.I_s(w, 2.0, 0.0) == pytest.approx(32.0 / 9.0, rel=1e-14)
    assert hardylab.I_s(w, 2.0, 1.0) == pytest.approx(8.0 / 3.0, rel=1e-14)
    assert hardylab.I_s(w, 2.0, 2.0) == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(hardylab.ParameterError):
        hardylab.I_s(w, 2.0, 3.0)
    with pytest.raises(hardylab.ParameterError):
        hardylab.I_s(w, 1.0, 0.0)

def test_theorem1():
    w = hardylab.power_weight(0.25)
    report = hardylab.theorem1_sides(w, hardylab.TheoremParams.of(w, 2.0, 2.0))
    assert report.op == "theorem1"
    assert report.lhs == pytest.approx(32.0 / 9.0, rel=1e-10)
    assert report.rhs == pytest.approx(40.0 / 9.0, rel=1e-10)
    assert report.passed
    assert report.details["strict"]
    assert report.params["f"] == pytest.approx(4.0 / 3.0)

    # f is computed from the weight when not given
    assert hardylab.theorem1_sides(w, hardylab.TheoremParams(2.0, 2.0)).rhs == report.rhs

    with pytest.raises(hardylab.ParameterError):
        hardylab.TheoremParams(2.0, 3.0)
    with pytest.raises(hardylab.ParameterError):
        hardylab.TheoremParams(2.0, 0.5)
    with pytest.raises(hardylab.ParameterError):
        hardylab.TheoremParams(2.0, 1.5, -1.0)

    w = hardylab.power_weight(0.5)
    report = hardylab.theorem1_sides(w, hardylab.TheoremParams.of(w, 2.0, 1.5))
    assert report.status == hardylab.DIVERGENT

def test_corollary1():
    w = hardylab.power_weight(0.25)
    report = hardylab.corollary1_sides(w, 2.0)
    assert report.op == "corollary1"
    assert report.passed
    assert report.lhs == pytest.approx(report.rhs, rel=1e-13)

    w = hardylab.make_step([3.0, 1.0, 0.5], [0.25, 0.5])
    report = hardylab.corollary1_sides(w, 3.0)
    assert report.passed
    assert abs(report.margin) <= 10.0 * report.budget

def test_lemma1():
    w = hardylab.power_weight(0.25)
    for delta in [0.5, 1.0]:
        report = hardylab.lemma1_sides(w, 2.0, delta)
        assert report.rule == "identity"
        assert report.passed
        assert report.lhs == pytest.approx(32.0 / 9.0 * math.sqrt(delta), rel=1e-10)
        assert abs(hardylab.lemma1_residual(w, 2.0, delta)) <= report.budget

    with pytest.raises(hardylab.PreconditionError):
        hardylab.lemma1_sides(hardylab.make_step([1.0, 2.0], [0.5]), 2.0, 0.5)
    with pytest.raises(hardylab.DomainError):
        hardylab.lemma1_sides(w, 2.0, 0.0)
    with pytest.raises(hardylab.DomainError):
        hardylab.lemma1_sides(w, 2.0, 1.5)

def test_random_weights():
    rng = np.random.default_rng(42)
    for _ in range(20):
        w = random_weight(rng)
        p = float(rng.uniform(1.05, 6.0))
        for q in sorted(set([1.0, min(1.5, p), p])):
            assert hardylab.theorem1_sides(w, hardylab.TheoremParams.of(w, p, q)).passed
        for delta in [0.1, 0.5, 1.0]:
            assert hardylab.lemma1_sides(w, p, delta).passed
        if p > 1.5:
            assert hardylab.holder_interpolation_sides(w, p, 1.5).passed

def test_theorem1_strict():
    # Equality is reached only for q = 1
    rng = np.random.default_rng(7)
    for _ in range(20):
        w = random_weight(rng)
        p = float(rng.uniform(1.05, 6.0))
        for q in sorted(set([min(1.5, p), p])):
            report = hardylab.theorem1_sides(w, hardylab.TheoremParams.of(w, p, q))
            assert report.passed
            assert report.details["strict"]

    w = hardylab.constant_weight(2.0)
    assert hardylab.theorem1_sides(w, hardylab.TheoremParams.of(w, 3.0, 2.0)).details["strict"]
    assert not hardylab.theorem1_sides(w, hardylab.TheoremParams.of(w, 3.0, 1.0)).details["strict"]

def test_holder_interpolation():
    # Equality for power weights, where Aw is a multiple of w
    w = hardylab.power_weight(0.25)
    report = hardylab.holder_interpolation_sides(w, 2.0, 2.0)
    assert report.passed
    assert report.lhs == pytest.approx(report.rhs, rel=1e-13)

    w = hardylab.make_step([2.0, 1.0], [0.5])
    assert hardylab.holder_interpolation_gap(w, 3.0, 2.0) > 0.0
    with pytest.raises(hardylab.ParameterError):
        hardylab.holder_interpolation_sides(w, 3.0, 1.0)

def test_G_F():
    assert hardylab.F_eval(1.0, 2.0) == 0.0
    assert hardylab.F_eval(2.0, 2.0) == 1.0
    with pytest.raises(hardylab.DomainError):
        hardylab.F_eval(0.5, 2.0)

    q, p, f = 2.0, 3.0, 1.0
    limit = hardylab.G_limit(q, p, f)
    assert limit == -1.0
    xs = [1e-3, 1e-1, 1.0, 10.0, 1e3, 1e6]
    values = [hardylab.G_eval(x, q, p, f) for x in xs]
    assert all(g0 < g1 for g0, g1 in zip(values[:-1], values[1:]))
    assert all(g < limit for g in values)
    assert values[-1] == pytest.approx(limit, rel=1e-6)

    # G(x) = x - x^(1-q) (x + f^p/(p-1))^q
    x = 2.0
    assert hardylab.G_eval(x, q, p, f) == pytest.approx(x - x ** (1.0 - q) * (x + 0.5) ** q, rel=1e-14)
    h = 1e-6
    derivative = (hardylab.G_eval(x + h, q, p, f) - hardylab.G_eval(x - h, q, p, f)) / (2.0 * h)
    assert hardylab.G_prime(x, q, p, f) == pytest.approx(derivative, rel=1e-6)

    # q = 1 makes G constant
    assert hardylab.G_eval(3.0, 1.0, p, f) == pytest.approx(hardylab.G_limit(1.0, p, f), rel=1e-14)
    with pytest.raises(hardylab.DomainError):
        hardylab.G_eval(0.0, q, p, f)

def test_proof_chain():
    w = hardylab.make_step([2.0, 1.0], [0.5])
    reports = hardylab.proof_chain(w, hardylab.TheoremParams(3.0, 2.0))
    assert [r.op for r in reports] == ["interpolation", "recursion", "Lq_bound", "G_limit"]
    assert hardylab.all_passed(reports)

    reports = hardylab.proof_chain(w, hardylab.TheoremParams(3.0, 1.0))
    assert [r.op for r in reports] == ["recursion", "Lq_bound", "G_limit"]
    assert hardylab.all_passed(reports)
