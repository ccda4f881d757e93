import math
import numpy as np
from dataclasses import dataclass
from .errors import ValidationError
from .param import DEFAULT_TOL, check_exponent
from .report import make_report

@dataclass(frozen=True)
class WeightedSeq:
    """A finite weighted sequence ``(lambda_n, a_n)``, ``n = 1..N``."""
    lam: tuple
    a: tuple

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lam)
        a = tuple(float(x) for x in self.a)
        if len(lam) == 0:
            raise ValidationError("A weighted sequence needs at least one term")
        if len(lam) != len(a):
            raise ValidationError(f"Sequences lambda and a must have equal length, got {len(lam)} and {len(a)}")
        if any(not (x > 0.0 and math.isfinite(x)) for x in lam):
            raise ValidationError("All lambda_n must be positive and finite")
        if any(not (x >= 0.0 and math.isfinite(x)) for x in a):
            raise ValidationError("All a_n must be non-negative and finite")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "a", a)

    def __len__(self):
        return len(self.lam)

    @staticmethod
    def ones(a):
        return WeightedSeq((1.0,) * len(a), tuple(a))

def compensated_cumsum(xs):
    """Left-to-right prefix sums with Neumaier compensation."""
    out = np.empty(len(xs))
    s = 0.0
    c = 0.0
    for i, x in enumerate(xs):
        x = float(x)
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[i] = s + c
    return out

def compensated_sum(xs):
    if len(xs) == 0:
        return 0.0
    return float(compensated_cumsum(xs)[-1])

def _ratio_powers(A, Lam, e):
    # (A_n / Lambda_n)^e with the convention 0^e = 0 when A_n = 0
    r = np.where(A > 0.0, A / Lam, 0.0)
    return r, np.where(A > 0.0, r ** e, 0.0)

def running_ratios(s):
    """Returns the triples ``(A_n, Lambda_n, A_n / Lambda_n)`` of a weighted sequence.

    Examples:
        >>> running_ratios(WeightedSeq((1, 1), (1, 0)))
        [(1.0, 1.0, 1.0), (1.0, 2.0, 0.5)]
    """
    lam = np.asarray(s.lam)
    A = compensated_cumsum(lam * np.asarray(s.a))
    Lam = compensated_cumsum(lam)
    r, _ = _ratio_powers(A, Lam, 1.0)
    return [(float(A_n), float(L_n), float(r_n)) for A_n, L_n, r_n in zip(A, Lam, r)]

def _theorem2_terms(lam, a, p):
    # lam=None is the unweighted path with Lambda_n = n
    if lam is None:
        A = compensated_cumsum(a)
        Lam = np.arange(1, len(a) + 1, dtype="float64")
        _, rp = _ratio_powers(A, Lam, p)
        _, rp1 = _ratio_powers(A, Lam, p - 1.0)
        lhs_terms = rp
        cross_terms = a * rp1
    else:
        A = compensated_cumsum(lam * a)
        Lam = compensated_cumsum(lam)
        _, rp = _ratio_powers(A, Lam, p)
        _, rp1 = _ratio_powers(A, Lam, p - 1.0)
        lhs_terms = lam * rp
        cross_terms = lam * a * rp1
    return A, Lam, rp, lhs_terms, cross_terms

def _theorem2_report(op, lam, a, p, tol, params):
    A, Lam, rp, lhs_terms, cross_terms = _theorem2_terms(lam, a, p)
    lhs = compensated_sum(lhs_terms)
    tail = Lam[-1] * rp[-1]
    rhs = (p / (p - 1.0)) * compensated_sum(cross_terms) - tail / (p - 1.0)
    return make_report(op, params, lhs, rhs, tol=tol, details={"strict": bool(rhs > lhs)})

def theorem2_sides(s, p, tol=DEFAULT_TOL):
    """Evaluates both sides of the weighted discrete Hardy inequality

    ``sum lambda_n (A_n/Lambda_n)^p <= p/(p-1) sum lambda_n a_n (A_n/Lambda_n)^(p-1) - 1/(p-1) Lambda_N (A_N/Lambda_N)^p``

    with ``A_n = lambda_1 a_1 + ... + lambda_n a_n`` and ``Lambda_n = lambda_1 + ... + lambda_n``.

    Args:
        s: The weighted sequence.
        p: Exponent ``p > 1``.
        tol: Relative tolerance of the pass criterion. Defaults to ``1e-9``.

    Returns:
        An :class:`IneqReport` that passes iff ``rhs - lhs >= -tol * max(1, |lhs|)``.
    """
    p = check_exponent(p)
    return _theorem2_report("theorem2", np.asarray(s.lam), np.asarray(s.a), p, tol, {"p": p, "N": len(s)})

def hardy_theorem2_sides(a, p, tol=DEFAULT_TOL):
    """The weighted discrete inequality with ``lambda_n = 1``, computed without weights."""
    p = check_exponent(p)
    a = np.asarray(WeightedSeq.ones(a).a)
    return _theorem2_report("theorem2", None, a, p, tol, {"p": p, "N": len(a)})

def copson_sides(s, p, tol=DEFAULT_TOL):
    """Evaluates ``sum lambda_n (A_n/Lambda_n)^p <= (p/(p-1))^p sum lambda_n a_n^p``."""
    p = check_exponent(p)
    _, _, _, lhs_terms, _ = _theorem2_terms(np.asarray(s.lam), np.asarray(s.a), p)
    lhs = compensated_sum(lhs_terms)
    rhs = (p / (p - 1.0)) ** p * compensated_sum(np.asarray(s.lam) * np.asarray(s.a) ** p)
    return make_report("copson", {"p": p, "N": len(s)}, lhs, rhs, tol=tol)

def hardy_classical_sides(a, p, tol=DEFAULT_TOL):
    """Evaluates ``sum (A_n/n)^p <= (p/(p-1))^p sum a_n^p``."""
    p = check_exponent(p)
    a = np.asarray(WeightedSeq.ones(a).a)
    _, _, _, lhs_terms, _ = _theorem2_terms(None, a, p)
    lhs = compensated_sum(lhs_terms)
    rhs = (p / (p - 1.0)) ** p * compensated_sum(a ** p)
    return make_report("hardy", {"p": p, "N": len(a)}, lhs, rhs, tol=tol)

def delta_chain(s, p):
    """Returns the per-term pairs ``(Delta_n, bound_n)`` of the telescoping argument.

    ``Delta_n = lambda_n r_n^p - p/(p-1) lambda_n a_n r_n^(p-1)`` with ``r_n = A_n/Lambda_n``, and
    ``bound_n = (Lambda_(n-1) r_(n-1)^p - Lambda_n r_n^p) / (p-1)``. For ``n = 1`` the bound is
    ``-Lambda_1 r_1^p / (p-1)``, which ``Delta_1`` attains exactly.
    """
    p = check_exponent(p)
    lam, a = np.asarray(s.lam), np.asarray(s.a)
    A, Lam, rp, lhs_terms, cross_terms = _theorem2_terms(lam, a, p)
    deltas = lhs_terms - (p / (p - 1.0)) * cross_terms
    tails = Lam * rp
    bounds = np.empty(len(s))
    bounds[0] = -tails[0] / (p - 1.0)
    bounds[1:] = (tails[:-1] - tails[1:]) / (p - 1.0)
    return [(float(d), float(b)) for d, b in zip(deltas, bounds)]

def elementary_gap(x, y, p):
    """The slack ``(p-1) x^p + y^p - p x^(p-1) y`` of the elementary inequality. Non-negative for ``x, y >= 0``."""
    x, y = np.asarray(x, dtype="float64"), np.asarray(y, dtype="float64")
    return (p - 1.0) * x ** p + y ** p - p * x ** (p - 1.0) * y
