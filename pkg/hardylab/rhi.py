import math, warnings, logging
import numpy as np
from dataclasses import dataclass, replace
from .errors import AccuracyError, MultipleRootsError, ParameterError, PreconditionError, RangeError
from .param import check_exponent
from .weight import power_weight
from .quad import DEFAULT_QUAD, ROUNDING, integrate_product_with_error
from .continuous import lemma1_sides
from .search import FAMILIES, PREFIX, SUFFIX, RHIQuery, rhi_search, rhi_ratio
from .report import make_report, worst, to_jsonable, DIVERGENT, PASS, FAIL

logger = logging.getLogger(__name__)

P_MAX = 2.0 ** 64
SCAN_POINTS = 1024
DEPTH = 40

def _log_psi(p, q, c):
    # log of c * (1 - q/p) * (p/(p-1))^q
    return math.log(c) + math.log1p(-q / p) - q * math.log1p(-1.0 / p)

def _check_c(c):
    c = float(c)
    if not math.isfinite(c):
        raise ParameterError(f"Expected a finite constant, got c={c}")
    if c < 1.0:
        if c >= 1.0 - 1e-12:
            return 1.0
        raise ParameterError(f"Reverse Hölder constants satisfy c >= 1, got c={c}")
    return c

def p0_solve(q, c):
    """Returns the sharp exponent ``p0 > q``, the root of ``c (p-q)/p (p/(p-1))^q = 1``.

    The root is bracketed by doubling from ``q (1 + 2^-20)`` and refined by bisection to ``1e-12`` relative. A scan over
    the bracket confirms that the root is unique.

    Args:
        q: Exponent ``q > 1``.
        c: Reverse Hölder constant ``c >= 1``.

    Returns:
        ``p0``, or ``inf`` if ``c = 1`` or if no root exists below ``2^64`` (with a warning).

    Raises:
        MultipleRootsError: If the scan finds more than one sign change.
        AccuracyError: If the residual at the root exceeds ``1e-10``.
    """
    q = check_exponent(q, "q")
    c = _check_c(c)
    if c == 1.0:
        return math.inf

    lo = q * (1.0 + 2.0 ** -20)
    if _log_psi(lo, q, c) >= 0.0:
        lo, hi = q, lo
    else:
        hi = 2.0 * lo
        while _log_psi(hi, q, c) < 0.0:
            lo, hi = hi, 2.0 * hi
            if hi > P_MAX:
                warnings.warn(f"No root of the sharp exponent equation below 2^64 for q={q}, c={c}; using p0 = inf", stacklevel=2)
                return math.inf
    scan_lo, scan_hi = lo, hi

    for _ in range(400):
        if hi - lo <= 1e-12 * hi:
            break
        mid = 0.5 * (lo + hi)
        if _log_psi(mid, q, c) >= 0.0:
            hi = mid
        else:
            lo = mid
    p0 = hi

    residual = abs(math.expm1(_log_psi(p0, q, c)))
    if residual > 1e-10:
        raise AccuracyError(f"Residual {residual} at p0={p0} exceeds 1e-10", p0, residual)

    ps = np.geomspace(max(scan_lo, q * (1.0 + 2.0 ** -52)), scan_hi, SCAN_POINTS)
    signs = np.sign([_log_psi(p, q, c) for p in ps])
    changes = np.nonzero(signs[1:] * signs[:-1] < 0)[0]
    if len(changes) > 1:
        raise MultipleRootsError(f"Found {len(changes)} roots of the sharp exponent equation for q={q}, c={c}", [float(ps[i]) for i in changes])
    return p0

def k_p(p, q, c):
    """Returns ``k_p = 1 - c (p-q)/p (p/(p-1))^q``, positive for ``q <= p < p0``.

    Raises:
        RangeError: If ``p < q`` or ``k_p <= 0`` (that is ``p >= p0``).
    """
    p, q, c = float(p), check_exponent(q, "q"), _check_c(c)
    if p < q:
        raise RangeError(f"Expected p >= q, got p={p}, q={q}")
    k = 1.0 - c * (p - q) / p * (p / (p - 1.0)) ** q
    if not k > 0.0:
        raise RangeError(f"p={p} is not below the sharp exponent p0={p0_solve(q, c)} (k_p={k})")
    return k

def c_prime(p, q, c):
    """Returns the improved constant ``q c / (p k_p)``. Equals ``c`` at ``p = q``."""
    k = k_p(p, q, c)
    return (float(q) / float(p)) * _check_c(c) / k

def phi(y, x, p, q):
    """Evaluates ``x^(p/q-1) y - (p-q)/p x^(p/q)``, which is non-increasing in ``x`` for ``x >= y``."""
    x, y = np.asarray(x, dtype="float64"), np.asarray(y, dtype="float64")
    return x ** (p / q - 1.0) * y - (p - q) / p * x ** (p / q)

def delta_grid(w):
    return sorted(set([2.0 ** -j for j in range(DEPTH + 1)] + list(w.breakpoints) + [1.0]))

def suffix_grid(w):
    # Left ends s of the suffixes (s, 1]
    return sorted(set([2.0 ** -j for j in range(1, DEPTH + 1)] + [1.0 - 2.0 ** -j for j in range(DEPTH + 1)] + list(w.breakpoints)))

def _summarize(rows):
    summary = {}
    for name in sorted(set(r.op for r in rows)):
        group = [r for r in rows if r.op == name]
        bad = worst(group)
        summary[name] = {"checks": len(group), "passed": sum(r.passed for r in group), "worst_margin": bad.margin, "worst_delta": bad.params["delta"]}
    return summary

def theorem3_verify(w, q, p, quad=DEFAULT_QUAD, grid=256, c=None, tol=0.0, family=PREFIX):
    """Verifies the higher integrability bound ``avg(w^p) <= c' avg(w)^p`` on prefixes ``(0, delta]`` or suffixes.

    ``c`` is the reverse Hölder constant of ``w`` with exponent ``q`` over ``family`` (searched if not given), and
    ``c' = q c / (p k_p)``. For every ``delta`` in a grid of dyadic points and breakpoints, the hypothesis, the averaging
    identity applied to ``w^q`` with exponent ``p/q``, the intermediate bound
    ``(1/delta) int_0^delta (Aw)^(p-q) w^q <= c' avg(w)^p`` and the conclusion are checked.

    With ``family="suffix"`` the hypothesis and the conclusion are checked on the suffixes ``(s, 1]`` with
    ``s = 2^-j``, ``1 - s = 2^-j`` or ``s`` a breakpoint, as ``suffix_hypothesis`` and ``suffix_conclusion``. ``family="all"`` checks
    prefixes and suffixes.

    Returns:
        An :class:`IneqReport` holding the worst check. ``details`` summarizes all checks per kind.

    Raises:
        PreconditionError: If ``w`` is not non-increasing.
        RangeError: If ``p`` is outside ``[q, p0)``.
    """
    q = check_exponent(q, "q")
    p = float(p)
    if not family in FAMILIES:
        raise ParameterError(f"Unknown interval family '{family}', expected one of {FAMILIES}")
    if not w.is_nonincreasing():
        raise PreconditionError("Higher integrability is verified for non-increasing weights only")
    if c is None:
        search = rhi_search(w, RHIQuery(q, family, grid))
        c = search.c
    params = {"q": q, "p": p, "family": family}
    if math.isinf(c):
        return make_report("theorem3", params, math.inf, math.inf, details={"c": c})
    c = _check_c(c)
    p0 = p0_solve(q, c)
    if not (q <= p < p0):
        raise RangeError(f"Expected q <= p < p0, got p={p}, q={q}, p0={p0}")
    kp = k_p(p, q, c)
    cp = c_prime(p, q, c)

    rows = []
    if family != SUFFIX:
        wq = w.power(q) if p > q else None
        for delta in delta_grid(w):
            at = {"delta": delta}
            mean = w.integral(0.0, delta, 1.0) / delta
            rows.append(make_report("hypothesis", at, rhi_ratio(w, q, 0.0, delta), c, budget=ROUNDING * c, tol=tol))

            if not wq is None:
                identity = lemma1_sides(wq, p / q, delta, quad, tol)
                rows.append(make_report("averaging_identity", at, identity.lhs, identity.rhs, budget=identity.budget, tol=tol, identity=True))

            value, error = integrate_product_with_error(w, 0.0, delta, p - q, q, quad)
            rhs = cp * mean ** p
            rows.append(make_report("intermediate", at, value / delta, rhs, budget=error / delta + ROUNDING * (value / delta + rhs), tol=tol))

            lhs = w.integral(0.0, delta, p) / delta
            rows.append(make_report("conclusion", at, lhs, rhs, budget=ROUNDING * (lhs + rhs), tol=tol))

    if family != PREFIX:
        for s in suffix_grid(w):
            length = 1.0 - s
            at = {"delta": length}
            rows.append(make_report("suffix_hypothesis", at, rhi_ratio(w, q, s, 1.0), c, budget=ROUNDING * c, tol=tol))

            lhs = w.integral(s, 1.0, p) / length
            rhs = cp * (w.integral(s, 1.0, 1.0) / length) ** p
            rows.append(make_report("suffix_conclusion", at, lhs, rhs, budget=ROUNDING * (lhs + rhs), tol=tol))

    bad = worst(rows)
    details = {"c": c, "p0": p0, "k_p": kp, "c_prime": cp, "checks": _summarize(rows), "worst_check": bad.op, "worst_delta": bad.params["delta"]}
    status = PASS if all(r.passed for r in rows) else (DIVERGENT if any(r.status == DIVERGENT for r in rows) else FAIL)
    result = make_report("theorem3", params, bad.lhs, bad.rhs, budget=bad.budget, tol=tol, identity=bad.rule == "identity", details=details)
    if result.status != status:
        # The worst row decides the numbers, all rows decide the status
        result = replace(result, status=status)
    return result

@dataclass(frozen=True)
class DivergenceEvidence:
    """Certificate that ``t^(-1/p0)`` attains the constant ``c`` on every prefix while ``int_eps^1 w^p0`` is unbounded."""
    p0: float
    a: float
    ratio: float
    certified: bool
    rows: tuple
    increments_ok: bool

    def to_dict(self):
        return {
            "p0": self.p0, "a": self.a, "ratio": self.ratio, "certified": self.certified, "increments_ok": self.increments_ok,
            "rows": [{"k": k, "eps": eps, "integral": value, "increment": inc} for k, eps, value, inc in self.rows],
        }

def extremal_rhi(q, c):
    """Returns the sharp weight ``t^(-1/p0)`` for the constant ``c`` and evidence that it is not in ``L^p0``.

    Its prefix ratio ``(1-a)^q / (1-aq)`` with ``a = 1/p0`` equals ``c`` for every ``t``. The truncated integrals
    ``int_eps^1 w^p0 = ln(1/eps)`` for ``eps = 2^-k``, ``k = 1..40``, grow by ``ln 2`` per step.

    Raises:
        ParameterError: If ``c <= 1``, for which no finite sharp exponent exists.
    """
    q = check_exponent(q, "q")
    c = float(c)
    if not c > 1.0:
        raise ParameterError(f"Expected c > 1, got c={c}")
    p0 = p0_solve(q, c)
    if math.isinf(p0):
        raise ParameterError(f"The sharp exponent for c={c} is not finite")
    a = 1.0 / p0
    w = power_weight(a)
    ratio = (1.0 - a) ** q / (1.0 - a * q)
    certified = abs(ratio - c) <= 1e-10 * max(1.0, c)

    rows = []
    previous = 0.0
    for k in range(1, DEPTH + 1):
        eps = 2.0 ** -k
        value = w.integral(eps, 1.0, p0)
        rows.append((k, eps, value, value - previous))
        previous = value
    increments_ok = all(abs(inc - math.log(2.0)) <= 1e-12 for _, _, _, inc in rows)
    logger.debug(f"Sharp weight for q={q}, c={c}: p0={p0}, ratio={ratio}")
    return w, DivergenceEvidence(p0, a, ratio, certified, tuple(rows), increments_ok)

@dataclass(frozen=True)
class RHIRange:
    """Constant ``c``, sharp exponent ``p0`` and the per-``p`` table of ``(p, k_p, c_prime, verified)``."""
    c: float
    p0: float
    table: tuple
    q: float
    family: str
    tolerance: float = 0.0
    resolution: float = 0.0
    status: str = PASS

    @property
    def verified(self):
        return self.status == PASS

    def to_dict(self):
        return to_jsonable({
            "c": self.c, "p0": self.p0, "q": self.q, "family": self.family, "status": self.status,
            "tolerance": self.tolerance, "resolution": self.resolution,
            "table": [{"p": p, "k_p": k, "c_prime": cp, "verified": ok} for p, k, cp, ok in self.table],
        })

def p_grid(q, p0, n):
    if math.isinf(p0):
        return [q * (1.0 + 3.0 * i / n) for i in range(n)]
    return [q + (p0 - q) * i / n for i in range(n)]

def rhi_range(w, query, n_p=16, quad=DEFAULT_QUAD):
    """Runs the whole pipeline: reverse Hölder constant, sharp exponent and verified improved constants.

    Args:
        w: A non-increasing weight.
        query: An :class:`RHIQuery`.
        n_p: Number of exponents in ``[q, p0)``. Defaults to ``16``.
        quad: Quadrature settings.
    """
    if int(n_p) != n_p or n_p < 1:
        raise ParameterError(f"Expected a positive number of exponents, got {n_p}")
    search = rhi_search(w, query)
    if search.divergent:
        return RHIRange(math.inf, math.nan, (), query.q, query.family, status=DIVERGENT)
    if not w.is_nonincreasing():
        raise PreconditionError("The higher integrability pipeline needs a non-increasing weight")
    c = search.c
    p0 = p0_solve(query.q, c)
    table = []
    for p in p_grid(query.q, p0, int(n_p)):
        report = theorem3_verify(w, query.q, p, quad, query.grid, c=c, family=query.family)
        table.append((p, report.details["k_p"], report.details["c_prime"], report.passed))
        logger.debug(f"p={p}: {report.status} (worst {report.details['worst_check']} at delta={report.details['worst_delta']})")
    status = PASS if all(row[3] for row in table) else FAIL
    return RHIRange(c, p0, tuple(table), query.q, query.family, search.tolerance, search.resolution, status)
