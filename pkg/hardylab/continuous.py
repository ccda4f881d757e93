import math
from dataclasses import dataclass
from .errors import DomainError, ParameterError, PreconditionError
from .param import check_exponent
from .quad import DEFAULT_QUAD, ROUNDING, integrate_product_with_error
from .report import make_report

# Identities are checked against a multiple of the combined quadrature error estimate
IDENTITY_SLACK = 10.0

@dataclass(frozen=True)
class TheoremParams:
    """Exponents of the continuous inequality and the mass ``f = int_0^1 g`` of the weight."""
    p: float
    q: float
    f: float = None

    def __post_init__(self):
        p = check_exponent(self.p)
        q = float(self.q)
        if not (1.0 <= q <= p):
            raise ParameterError(f"Expected 1 <= q <= p, got p={p}, q={q}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if not self.f is None:
            f = float(self.f)
            if not f > 0.0:
                raise ParameterError(f"Expected f > 0, got {f}")
            object.__setattr__(self, "f", f)

    @staticmethod
    def of(w, p, q):
        return TheoremParams(p, q, w.total)

    def with_q(self, q):
        return TheoremParams(self.p, q, self.f)

def _params(w, params):
    if params.f is None:
        return TheoremParams.of(w, params.p, params.q)
    return params

def I_s_with_error(w, p, s, quad=DEFAULT_QUAD):
    p = check_exponent(p)
    if not (0.0 <= s <= p):
        raise ParameterError(f"Expected 0 <= s <= p, got s={s}, p={p}")
    return integrate_product_with_error(w, 0.0, 1.0, p - s, s, quad)

def I_s(w, p, s, quad=DEFAULT_QUAD):
    """Returns ``int_0^1 (Aw)^(p-s) * w^s`` for ``0 <= s <= p``.

    Examples:
        >>> I_s(power_weight(0.25), 2.0, 2.0)
        2.0
    """
    return I_s_with_error(w, p, s, quad)[0]

def theorem1_sides(w, params, quad=DEFAULT_QUAD, tol=0.0):
    """Evaluates both sides of ``I_0 <= (p/(p-1))^q I_q - q/(p-1) f^p``.

    Args:
        w: The weight.
        params: Exponents ``p`` and ``q``. ``f`` is computed from ``w`` when not given.
        quad: Quadrature settings.
        tol: Relative tolerance on top of the quadrature error budget. Defaults to ``0``.

    Returns:
        An :class:`IneqReport` with ``lhs = I_0``. The report stores whether the inequality holds strictly beyond the
        budget.
    """
    params = _params(w, params)
    p, q, f = params.p, params.q, params.f
    I0, e0 = I_s_with_error(w, p, 0.0, quad)
    Iq, eq = I_s_with_error(w, p, q, quad)
    factor = (p / (p - 1.0)) ** q
    tail = q / (p - 1.0) * f ** p
    rhs = factor * Iq - tail
    budget = e0 + factor * eq + ROUNDING * (abs(I0) + factor * abs(Iq) + tail)
    strict = math.isfinite(rhs) and math.isfinite(I0) and rhs - I0 > budget
    return make_report("theorem1", {"p": p, "q": q, "f": f}, I0, rhs, budget=budget, tol=tol, details={"strict": strict})

def corollary1_sides(w, p, quad=DEFAULT_QUAD, tol=0.0):
    """The case ``q = 1``: ``I_0 <= p/(p-1) I_1 - f^p/(p-1)``."""
    report = theorem1_sides(w, TheoremParams.of(w, p, 1.0), quad, tol)
    return make_report("corollary1", {"p": report.params["p"], "f": report.params["f"]}, report.lhs, report.rhs,
        budget=report.budget, tol=tol, details=report.details)

def _check_delta(delta):
    delta = float(delta)
    if not (0.0 < delta <= 1.0):
        raise DomainError(f"Expected delta in (0, 1], got {delta}")
    return delta

def lemma1_sides(w, p, delta, quad=DEFAULT_QUAD, tol=0.0):
    """Checks the averaging identity on ``(0, delta]`` for a non-increasing weight:

    ``int_0^delta (Aw)^p = -1/(p-1) (int_0^delta w)^p / delta^(p-1) + p/(p-1) int_0^delta (Aw)^(p-1) w``.

    The report's ``margin`` is the residual ``lhs - rhs``. It passes iff the residual is within ten times the combined
    quadrature error estimate.

    Raises:
        PreconditionError: If ``w`` is not non-increasing.
    """
    p = check_exponent(p)
    delta = _check_delta(delta)
    if not w.is_nonincreasing():
        raise PreconditionError("The averaging identity is checked for non-increasing weights only")
    lhs, e_lhs = integrate_product_with_error(w, 0.0, delta, p, 0.0, quad)
    cross, e_cross = integrate_product_with_error(w, 0.0, delta, p - 1.0, 1.0, quad)
    mass = w.integral(0.0, delta, 1.0)
    boundary = mass ** p / delta ** (p - 1.0) / (p - 1.0)
    rhs = -boundary + p / (p - 1.0) * cross
    budget = e_lhs + p / (p - 1.0) * e_cross + ROUNDING * (abs(lhs) + boundary + p / (p - 1.0) * abs(cross))
    return make_report("lemma1", {"p": p, "delta": delta}, lhs, rhs, budget=IDENTITY_SLACK * budget, tol=tol, identity=True)

def lemma1_residual(w, p, delta, quad=DEFAULT_QUAD):
    """Returns ``lhs - rhs`` of the averaging identity on ``(0, delta]``. See :func:`lemma1_sides`."""
    return lemma1_sides(w, p, delta, quad).margin

def holder_interpolation_sides(w, p, q, quad=DEFAULT_QUAD, tol=0.0):
    """Evaluates both sides of ``I_1 <= I_q^(1/q) * I_0^((q-1)/q)``."""
    p = check_exponent(p)
    q = float(q)
    if not (1.0 < q <= p):
        raise ParameterError(f"Expected 1 < q <= p, got p={p}, q={q}")
    I0, e0 = I_s_with_error(w, p, 0.0, quad)
    I1, e1 = I_s_with_error(w, p, 1.0, quad)
    Iq, eq = I_s_with_error(w, p, q, quad)
    rhs = Iq ** (1.0 / q) * I0 ** ((q - 1.0) / q)
    if math.isfinite(rhs) and rhs > 0.0:
        budget = e1 + rhs * (eq / (q * Iq) + (q - 1.0) / q * e0 / I0) + ROUNDING * (abs(I1) + rhs)
    else:
        budget = e1
    return make_report("interpolation", {"p": p, "q": q}, I1, rhs, budget=budget, tol=tol)

def holder_interpolation_gap(w, p, q, quad=DEFAULT_QUAD):
    """Returns ``I_q^(1/q) * I_0^((q-1)/q) - I_1``, which is non-negative."""
    return holder_interpolation_sides(w, p, q, quad).margin

def G_eval(x, q, p, f):
    """Evaluates ``G(x) = x - x^(1-q) * (x + f^p/(p-1))^q`` for ``x > 0``.

    ``G`` is strictly increasing and tends to ``-q f^p/(p-1)`` from below. The difference of the two large terms is
    computed as ``-x * expm1(q * log1p(f^p / ((p-1) x)))``.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"Expected x > 0, got {x}")
    return -x * math.expm1(q * math.log1p(f ** p / ((p - 1.0) * x)))

def G_prime(x, q, p, f):
    """The derivative of :func:`G_eval`, which equals ``F(1 + f^p / ((p-1) x))``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"Expected x > 0, got {x}")
    return F_eval(1.0 + f ** p / ((p - 1.0) * x), q)

def G_limit(q, p, f):
    return -q * f ** p / (p - 1.0)

def F_eval(t, q):
    """Evaluates ``F(t) = 1 + (q-1) t^q - q t^(q-1)`` for ``t >= 1``. ``F(1) = 0`` and ``F`` is increasing."""
    t = float(t)
    if not t >= 1.0:
        raise DomainError(f"Expected t >= 1, got {t}")
    return 1.0 + (q - 1.0) * t ** q - q * t ** (q - 1.0)

def proof_chain(w, params, quad=DEFAULT_QUAD, tol=0.0):
    """Evaluates each step of the argument for the general inequality and returns one report per step.

    The steps are the interpolation bound ``I_1 <= I_q^(1/q) I_0^((q-1)/q)``, the recursion
    ``I_0 <= p/(p-1) I_1 - f^p/(p-1)``, the bound ``I_0 - (p/(p-1))^q I_q <= G(I_0)`` and finally
    ``G(I_0) < -q f^p/(p-1)``.
    """
    params = _params(w, params)
    p, q, f = params.p, params.q, params.f
    reports = []
    if q > 1.0:
        reports.append(holder_interpolation_sides(w, p, q, quad, tol))

    recursion = corollary1_sides(w, p, quad, tol)
    reports.append(make_report("recursion", recursion.params, recursion.lhs, recursion.rhs, budget=recursion.budget, tol=tol))

    theorem = theorem1_sides(w, params, quad, tol)
    I0 = theorem.lhs
    Lq = I0 - (p / (p - 1.0)) ** q * I_s(w, p, q, quad)
    if math.isfinite(I0):
        G = G_eval(I0, q, p, f)
    else:
        G = -math.inf
    reports.append(make_report("Lq_bound", {"p": p, "q": q, "f": f}, Lq, G, budget=theorem.budget, tol=tol))
    reports.append(make_report("G_limit", {"p": p, "q": q, "f": f}, G, G_limit(q, p, f),
        budget=ROUNDING * abs(G_limit(q, p, f)), tol=tol, strict=q > 1.0))
    return reports
