import math, time, logging
import numpy as np
import scipy.integrate
from dataclasses import dataclass
from .param import get_seed
from .weight import make_step, power_weight, prefix_integral, hardy_average
from .discrete import WeightedSeq, theorem2_sides, hardy_theorem2_sides, delta_chain, elementary_gap
from .continuous import TheoremParams, theorem1_sides, corollary1_sides, lemma1_sides, holder_interpolation_sides
from .continuous import G_eval, G_limit, F_eval
from .sharpness import ratio_scan, limit_scan, limit_scan_holds, Lq_closed, Lq_quadrature
from .rhi import p0_solve, k_p, c_prime, phi, rhi_range, extremal_rhi
from .search import RHIQuery, rhi_constant
from .rearrange import theoremC_check, theoremD_check
from .symbolic import run_symbolic_checks
from .generate import random_weight, random_step, random_sequence
from .report import to_jsonable, PASS, FAIL

logger = logging.getLogger(__name__)

# Search resolution of the rearrangement suites
SUITE_GRID = 64
DISCRETE_EXPONENTS = [1.1, 1.5, 2.0, 3.0, 7.5]

@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    passed: int
    worst_margin: float
    error: str = None

    @property
    def status(self):
        return PASS if self.passed == self.cases else FAIL

    def to_dict(self):
        d = {"name": self.name, "cases": self.cases, "passed": self.passed, "worst_margin": self.worst_margin, "status": self.status}
        if not self.error is None:
            d["error"] = self.error
        return to_jsonable(d)

class _Tally:
    def __init__(self, name):
        self.name = name
        self.cases = 0
        self.passed = 0
        self.worst = math.inf

    def add(self, ok, margin=None):
        self.cases += 1
        self.passed += int(bool(ok))
        if not margin is None and not math.isnan(margin):
            self.worst = min(self.worst, float(margin))
        if not ok:
            logger.info(f"Suite {self.name}: case {self.cases} failed with margin {margin}")

    def add_report(self, report):
        margin = report.margin if report.rule == "inequality" else -abs(report.margin)
        self.add(report.passed, margin / max(1.0, abs(report.lhs)) if math.isfinite(report.lhs) else margin)

    def add_many(self, ok, margins):
        ok = np.asarray(ok)
        self.cases += int(ok.size)
        self.passed += int(np.count_nonzero(ok))
        if ok.size > 0:
            self.worst = min(self.worst, float(np.min(margins)))
        if not np.all(ok):
            logger.info(f"Suite {self.name}: {ok.size - np.count_nonzero(ok)} vectorized cases failed")

    def result(self):
        return SuiteResult(self.name, self.cases, self.passed, self.worst)

def _count(n, scale):
    return max(1, int(round(n * scale)))

def elementary_suite(rng, scale):
    tally = _Tally("elementary")
    n = _count(100000, scale)
    x, y = rng.uniform(0.0, 100.0, n), rng.uniform(0.0, 100.0, n)
    # p in (1, 10]
    p = 10.0 - rng.uniform(0.0, 9.0, n)
    magnitude = np.maximum(1.0, (p - 1.0) * x ** p + y ** p)
    gap = elementary_gap(x, y, p)
    tally.add_many(gap >= -1e-9 * magnitude, gap / magnitude)

    # Equality at x = y
    gap = elementary_gap(x, x, p)
    magnitude = np.maximum(1.0, p * x ** p)
    tally.add_many(np.abs(gap) <= 1e-12 * magnitude, -np.abs(gap) / magnitude)
    return tally.result()

def discrete_suite(rng, scale):
    tally = _Tally("discrete")
    for _ in range(_count(10000, scale)):
        s = random_sequence(rng)
        p = float(rng.choice(DISCRETE_EXPONENTS))
        report = theorem2_sides(s, p)
        tally.add_report(report)

        chain = delta_chain(s, p)
        telescoped = math.fsum(d - b for d, b in chain)
        residual = abs(telescoped - (report.lhs - report.rhs))
        tally.add(residual <= 1e-12 * max(1.0, abs(report.lhs), abs(report.rhs)), -residual)

    # Equality for constant sequences and for a single term
    for _ in range(_count(200, scale)):
        p = float(rng.uniform(1.05, 6.0))
        n = int(rng.integers(1, 33))
        value = float(rng.uniform(0.1, 10.0))
        for s in [WeightedSeq(tuple(rng.uniform(0.1, 10.0, n).tolist()), (value,) * n), WeightedSeq((value,), (float(rng.uniform(0.0, 10.0)),))]:
            report = theorem2_sides(s, p)
            tally.add(abs(report.margin) <= 1e-12 * max(1.0, abs(report.lhs)) * len(s), -abs(report.margin))

    # Unit weights through the weighted and the weight-free path
    for _ in range(_count(200, scale)):
        a = tuple(rng.uniform(0.0, 10.0, int(rng.integers(1, 65))).tolist())
        p = float(rng.uniform(1.05, 6.0))
        weighted = theorem2_sides(WeightedSeq.ones(a), p)
        free = hardy_theorem2_sides(a, p)
        tally.add(weighted.lhs == free.lhs and weighted.rhs == free.rhs, 0.0)
    return tally.result()

def _corpus(rng, scale):
    return [random_weight(rng) for _ in range(_count(200, scale))]

def lemma1_suite(rng, scale):
    tally = _Tally("lemma1")
    for w in _corpus(rng, scale):
        p = float(rng.uniform(1.05, 6.0))
        for delta in np.linspace(0.1, 1.0, 10):
            tally.add_report(lemma1_sides(w, p, float(delta)))

    # int_0^delta (Aw)^2 = 32/9 sqrt(delta) for t^(-1/4)
    for delta in [0.5, 1.0]:
        report = lemma1_sides(power_weight(0.25), 2.0, delta)
        expected = 32.0 / 9.0 * math.sqrt(delta)
        error = abs(report.lhs - expected) / expected
        tally.add(report.passed and error <= 1e-10, -error)
    return tally.result()

def theorem1_suite(rng, scale):
    tally = _Tally("theorem1")
    for w in _corpus(rng, scale):
        p = float(rng.uniform(1.05, 6.0))
        for q in sorted(set([1.0, min(1.5, p), p])):
            report = theorem1_sides(w, TheoremParams.of(w, p, q))
            tally.add_report(report)
            if q > 1.0:
                tally.add(report.details["strict"], report.margin - report.budget)

        # Equality in the case q = 1
        report = corollary1_sides(w, p)
        tally.add(abs(report.margin) <= 10.0 * report.budget + 1e-12 * max(1.0, abs(report.lhs)), -abs(report.margin))

    w = power_weight(0.25)
    report = theorem1_sides(w, TheoremParams.of(w, 2.0, 2.0))
    error = max(abs(report.lhs - 32.0 / 9.0) / (32.0 / 9.0), abs(report.rhs - 40.0 / 9.0) / (40.0 / 9.0))
    tally.add(report.passed and error <= 1e-10, -error)
    return tally.result()

def holder_suite(rng, scale):
    tally = _Tally("holder")
    for w in _corpus(rng, scale):
        p = float(rng.uniform(1.05, 6.0))
        q = float(rng.uniform(1.0, p)) + 1e-9
        tally.add_report(holder_interpolation_sides(w, p, min(q, p)))
    return tally.result()

def G_F_suite(rng, scale):
    tally = _Tally("G_F")
    for _ in range(_count(10000, scale)):
        q = float(rng.uniform(1.05, 5.0))
        p = q * float(rng.uniform(1.0, 3.0))
        f = float(rng.uniform(0.5, 2.0))
        b = f ** p / (p - 1.0)
        x1 = b * 10.0 ** float(rng.uniform(-3.0, 6.0))
        x2 = x1 * 10.0 ** float(rng.uniform(0.01, 2.0))
        g1, g2, limit = G_eval(x1, q, p, f), G_eval(x2, q, p, f), G_limit(q, p, f)
        tally.add(g1 < g2 < limit, (limit - g2) / abs(limit))

        t = 1.0 + 10.0 ** float(rng.uniform(-4.0, 1.0))
        tally.add(F_eval(t, q) > 0.0, F_eval(t, q))
    return tally.result()

def ratio_suite(rng, scale):
    tally = _Tally("sharpness_ratio")
    rows = ratio_scan(3.0, 2.0, [1, 2, 3, 4])
    for row in rows:
        tally.add(abs(row.quadrature - row.closed) <= row.error + 1e-10 * row.closed, -abs(row.quadrature - row.closed))
    closed = [row.closed for row in rows]
    tally.add(all(r0 < r1 for r0, r1 in zip(closed[:-1], closed[1:])), 0.0)
    tally.add(rows[-1].gap < 1e-2, -rows[-1].gap)
    return tally.result()

def limit_suite(rng, scale):
    tally = _Tally("sharpness_limit")
    ks = [1, 2, 3, 4]
    for p, q in [(3.0, 2.0), (2.0, 2.0), (5.0, 1.5)]:
        rows = limit_scan(p, q, 1.0, ks)
        tally.add(limit_scan_holds(rows, q), min(row.margin for row in rows))
        tally.add(rows[-1].margin <= 1e-2 * rows[0].margin, -rows[-1].margin)
    rows = limit_scan(2.0, 1.0, 1.0, ks)
    tally.add(limit_scan_holds(rows, 1.0), -max(abs(row.margin) for row in rows))
    return tally.result()

def Lq_suite(rng, scale):
    tally = _Tally("Lq_agreement")
    for _ in range(_count(500, scale)):
        p = float(rng.uniform(1.2, 6.0))
        q = float(rng.uniform(1.0, p))
        f = float(rng.uniform(0.5, 2.0))
        a = float(rng.uniform(0.01, 0.99)) / p
        closed = Lq_closed(a, p, q, f)
        value, budget = Lq_quadrature(a, p, q, f)
        residual = abs(value - closed)
        tally.add(residual <= budget + 1e-12 * max(1.0, abs(closed)), -residual / max(1.0, abs(closed)))
    return tally.result()

def p0_suite(rng, scale):
    tally = _Tally("p0_roundtrip")
    for _ in range(_count(1000, scale)):
        q = float(rng.uniform(1.05, 10.0))
        a = float(rng.uniform(0.01, 0.99)) / q
        c = (1.0 - a) ** q / (1.0 - a * q)
        p0 = p0_solve(q, c)
        error = abs(p0 - 1.0 / a) * a
        tally.add(error <= 1e-8, -error)
    tally.add(abs(p0_solve(2.0, 9.0 / 8.0) - 4.0) <= 1e-10, -abs(p0_solve(2.0, 9.0 / 8.0) - 4.0))
    tally.add(math.isinf(p0_solve(2.0, 1.0)), 0.0)
    return tally.result()

def constants_suite(rng, scale):
    tally = _Tally("constants")
    tally.add(abs(k_p(3.0, 2.0, 9.0 / 8.0) - 5.0 / 32.0) <= 1e-12, -abs(k_p(3.0, 2.0, 9.0 / 8.0) - 5.0 / 32.0))
    tally.add(abs(c_prime(3.0, 2.0, 9.0 / 8.0) - 4.8) <= 1e-12, -abs(c_prime(3.0, 2.0, 9.0 / 8.0) - 4.8))
    for _ in range(_count(100, scale)):
        q = float(rng.uniform(1.05, 5.0))
        c = 1.0 + float(rng.uniform(0.01, 2.0))
        tally.add(c_prime(q, q, c) == c, 0.0)
        p0 = p0_solve(q, c)
        ks = [k_p(p, q, c) for p in q + (p0 - q) * np.arange(256) / 256.0]
        tally.add(min(ks) > 0.0, min(ks))
    return tally.result()

def theorem3_suite(rng, scale):
    tally = _Tally("theorem3")
    w = make_step([2.0, 1.0], [0.5])
    c = rhi_constant(w, 2.0)
    tally.add(abs(c - 10.0 / 9.0) <= 1e-9, -abs(c - 10.0 / 9.0))
    result = rhi_range(w, RHIQuery(2.0), 16)
    for p, k, cp, ok in result.table:
        tally.add(ok, k)

    result = rhi_range(power_weight(0.25), RHIQuery(2.0), _count(4, scale))
    for p, k, cp, ok in result.table:
        tally.add(ok, k)

    _, evidence = extremal_rhi(2.0, 9.0 / 8.0)
    tally.add(evidence.certified and evidence.increments_ok, -abs(evidence.ratio - 9.0 / 8.0))
    return tally.result()

def phi_suite(rng, scale):
    tally = _Tally("phi")
    n = _count(100000, scale)
    y = rng.uniform(0.0, 10.0, n)
    x = y + rng.uniform(0.0, 10.0, n)
    z = x + rng.uniform(0.0, 10.0, n)
    q = rng.uniform(1.05, 5.0, n)
    p = q * rng.uniform(1.0, 4.0, n) + 1e-9
    fx, fz = phi(y, x, p, q), phi(y, z, p, q)
    magnitude = np.maximum(1.0, np.maximum(np.abs(fx), np.abs(fz)))
    margin = (fx - fz) / magnitude
    tally.add_many(margin >= -1e-9, margin)
    return tally.result()

def rearrange_suite(rng, scale):
    tally = _Tally("rearrangement")
    for _ in range(_count(500, scale)):
        w = random_step(rng)
        for q in [1.5, 2.0, 3.0]:
            report = theoremC_check(w, q, SUITE_GRID)
            tally.add(report.passed, report.c_before - report.c_after)
    return tally.result()

def one_sided_suite(rng, scale):
    tally = _Tally("one_sided_reduction")
    for _ in range(_count(500, scale)):
        w = random_step(rng, nonincreasing=True)
        q = float(rng.choice([1.5, 2.0, 3.0]))
        report = theoremD_check(w, q, SUITE_GRID)
        tally.add(report.passed, -report.gap)
    return tally.result()

def oracle_suite(rng, scale):
    # Closed-form integrals against scipy's adaptive quadrature
    tally = _Tally("oracle")
    for i in range(_count(1000, scale)):
        w = random_weight(rng, nonincreasing=i % 2 == 0)
        t = float(rng.uniform(0.01, 1.0))
        r = float(rng.uniform(0.5, 3.0))
        expected = 0.0
        for piece in w.pieces:
            hi = min(piece.hi, t)
            if hi <= piece.lo or piece.coeff == 0.0:
                continue
            if piece.lo == 0.0:
                value, _ = scipy.integrate.quad(lambda s: piece.coeff ** r, 0.0, hi, weight="alg", wvar=(-piece.exp * r, 0.0), epsabs=0.0, epsrel=1e-13)
            else:
                value, _ = scipy.integrate.quad(lambda s: (piece.coeff * s ** -piece.exp) ** r, piece.lo, hi, epsabs=0.0, epsrel=1e-13, limit=200)
            expected += value
        actual = prefix_integral(w, t, r)
        error = abs(actual - expected) / max(abs(expected), 1e-300)
        tally.add(error <= 1e-10, -error)

        if w.is_nonincreasing():
            tally.add(hardy_average(w, t) >= w(t) * (1.0 - 1e-12), hardy_average(w, t) - w(t))
    return tally.result()

def symbolic_suite(rng, scale):
    tally = _Tally("symbolic")
    for check in run_symbolic_checks():
        tally.add(check.holds, 0.0)
    return tally.result()

SUITES = {
    "elementary": elementary_suite,
    "discrete": discrete_suite,
    "lemma1": lemma1_suite,
    "theorem1": theorem1_suite,
    "holder": holder_suite,
    "G_F": G_F_suite,
    "sharpness_ratio": ratio_suite,
    "sharpness_limit": limit_suite,
    "Lq_agreement": Lq_suite,
    "p0_roundtrip": p0_suite,
    "constants": constants_suite,
    "theorem3": theorem3_suite,
    "phi": phi_suite,
    "rearrangement": rearrange_suite,
    "one_sided_reduction": one_sided_suite,
    "oracle": oracle_suite,
    "symbolic": symbolic_suite,
}

def run_selftest(seed=None, suites=None, scale=1.0):
    """Runs the randomized property suites.

    Every suite draws from its own generator seeded with ``(seed, index)``, so a suite gives the same result whether
    it runs alone or together with others.

    Args:
        seed: Seed of the run. Taken from ``HARDY_LAB_SEED`` or the fixed default if not given.
        suites: Names of the suites to run. Defaults to all suites.
        scale: Factor applied to the number of random cases. Defaults to ``1``.

    Returns:
        A dictionary with the seed, the per-suite results and the overall status.
    """
    seed = get_seed(seed)
    names = list(SUITES.keys()) if suites is None else list(suites)
    unknown = [name for name in names if not name in SUITES]
    if len(unknown) > 0:
        raise ValueError(f"Unknown suites {unknown}, expected names from {list(SUITES.keys())}")
    if not scale > 0.0:
        raise ValueError(f"Expected a positive scale, got {scale}")

    index = {name: i for i, name in enumerate(SUITES.keys())}
    results = []
    for name in names:
        rng = np.random.default_rng([seed, index[name]])
        start = time.perf_counter()
        try:
            result = SUITES[name](rng, scale)
        except Exception as e:
            # A crashing suite fails on its own and the remaining suites still run
            logger.error(f"Suite {name} raised {type(e).__name__}: {e}")
            result = SuiteResult(name, 1, 0, -math.inf, f"{type(e).__name__}: {e}")
        logger.info(f"Suite {name}: {result.passed}/{result.cases} passed in {time.perf_counter() - start:.2f}s")
        results.append(result)

    status = PASS if all(r.status == PASS for r in results) else FAIL
    return {"op": "selftest", "seed": seed, "scale": scale, "suites": [r.to_dict() for r in results], "status": status}
