import math, warnings, logging
from dataclasses import dataclass
from fractions import Fraction
from .errors import ParameterError
from .param import check_exponent
from .weight import power_weight
from .quad import DEFAULT_QUAD, ROUNDING
from .continuous import I_s_with_error

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class ExtremalParams:
    """Parameters of the extremal family ``g_a(t) = f (1-a) t^(-a)`` with ``0 < a < 1/p``."""
    p: float
    q: float
    f: float
    a: float

    def __post_init__(self):
        p = check_exponent(self.p)
        q, f, a = float(self.q), float(self.f), float(self.a)
        if not (1.0 <= q <= p):
            raise ParameterError(f"Expected 1 <= q <= p, got p={p}, q={q}")
        if not f > 0.0:
            raise ParameterError(f"Expected f > 0, got {f}")
        _check_a(a, p)
        for name, value in [("p", p), ("q", q), ("f", f), ("a", a)]:
            object.__setattr__(self, name, value)

    @property
    def weight(self):
        return extremal_weight(self.f, self.a)

@dataclass(frozen=True)
class ScanRow:
    k: int
    a: float
    L: float
    margin: float

@dataclass(frozen=True)
class RatioRow:
    k: int
    a: float
    closed: float
    quadrature: float
    error: float
    target: float

    @property
    def gap(self):
        return (self.target - self.closed) / self.target

def _check_a(a, p):
    if not (0.0 < a < 1.0 / p):
        raise ParameterError(f"Expected 0 < a < 1/p = {1.0 / p}, got a={a}")

def extremal_weight(f, a):
    """Returns the one-piece weight ``f (1-a) t^(-a)``, whose integral over ``(0, 1]`` is ``f``.

    Examples:
        >>> extremal_weight(2.0, 0.5).total
        2.0
    """
    f, a = float(f), float(a)
    if not (0.0 < a < 1.0):
        raise ParameterError(f"Expected 0 < a < 1, got a={a}")
    if not f > 0.0:
        raise ParameterError(f"Expected f > 0, got {f}")
    return power_weight(a, coeff=f * (1.0 - a))

def ratio_J(a, p, q):
    """The ratio ``I_0 / I_q = (1/(1-a))^q`` of the extremal family. It tends to ``(p/(p-1))^q`` as ``a -> 1/p``."""
    p = check_exponent(p)
    _check_a(a, p)
    return (1.0 / (1.0 - a)) ** q

def ratio_J_quadrature(a, p, q, quad=DEFAULT_QUAD):
    """Returns ``(I_0 / I_q, error)`` computed by :func:`integrate_product` for ``t^(-a)``."""
    p = check_exponent(p)
    _check_a(a, p)
    w = power_weight(a)
    I0, e0 = I_s_with_error(w, p, 0.0, quad)
    Iq, eq = I_s_with_error(w, p, q, quad)
    ratio = I0 / Iq
    return ratio, ratio * (e0 / I0 + eq / Iq)

def _gap_from_1(a, p):
    # 1 - a*p without rounding, since the scan points approach 1/p
    return float(1 - Fraction(a) * Fraction(p))

def _Lq_from_gap(eps, p, q, f):
    return -f ** p * math.expm1(q * math.log1p(eps / (p - 1.0))) / eps

def Lq_closed(a, p, q, f):
    """Returns ``L_q(a) = I_0 - (p/(p-1))^q I_q`` for the extremal weight ``g_a`` in closed form.

    ``L_q(a) = f^p [1 - ((1-a) p/(p-1))^q] / (1 - a p)``, evaluated as
    ``-f^p expm1(q log1p(eps/(p-1))) / eps`` with ``eps = 1 - a p``. It tends to ``-q f^p/(p-1)`` as ``a -> 1/p``.

    Examples:
        >>> round(Lq_closed(0.3, 3.0, 2.0, 1.0), 12)
        -1.025
    """
    p = check_exponent(p)
    _check_a(a, p)
    return _Lq_from_gap(_gap_from_1(a, p), p, q, float(f))

def Lq_quadrature(a, p, q, f, quad=DEFAULT_QUAD):
    """Returns ``(L_q(a), budget)`` computed from the integrals ``I_0`` and ``I_q`` of ``g_a``."""
    params = ExtremalParams(p, q, f, a)
    w = params.weight
    I0, e0 = I_s_with_error(w, params.p, 0.0, quad)
    Iq, eq = I_s_with_error(w, params.p, params.q, quad)
    factor = (params.p / (params.p - 1.0)) ** params.q
    value = I0 - factor * Iq
    return value, e0 + factor * eq + ROUNDING * (abs(I0) + factor * abs(Iq))

def _scan_points(p, ks):
    for k in ks:
        a = Fraction(1) / Fraction(p) - Fraction(1, 10 ** int(k))
        if a <= 0:
            warnings.warn(f"Skipping k={k}: a = 1/p - 10^(-{k}) is not positive", stacklevel=3)
            continue
        yield int(k), float(a), float(1 - a * Fraction(p))

def limit_scan(p, q, f, ks):
    """Evaluates ``L_q`` along ``a_k = 1/p - 10^(-k)``.

    Returns:
        A list of :class:`ScanRow` with ``margin = -L_q(a_k) - q f^p/(p-1)``. Points with ``a_k <= 0`` are skipped with
        a warning.
    """
    p = check_exponent(p)
    q, f = float(q), float(f)
    limit = q * f ** p / (p - 1.0)
    rows = []
    for k, a, eps in _scan_points(p, ks):
        L = _Lq_from_gap(eps, p, q, f)
        rows.append(ScanRow(k, a, L, -L - limit))
    logger.debug(f"Limit scan for p={p}, q={q} produced {len(rows)} rows")
    return rows

def limit_scan_holds(rows, q, budget=1e-12):
    """Whether a scan shows the constant ``q/(p-1)`` to be sharp.

    For ``q > 1`` margins must be non-negative and strictly decreasing. For ``q = 1`` every margin must vanish within
    ``budget``.
    """
    if len(rows) == 0:
        return False
    margins = [row.margin for row in rows]
    if q == 1.0:
        return all(abs(m) <= budget for m in margins)
    if any(m < -budget for m in margins):
        return False
    return all(m1 < m0 for m0, m1 in zip(margins[:-1], margins[1:]))

def ratio_scan(p, q, ks, quad=DEFAULT_QUAD):
    """Evaluates ``I_0 / I_q`` for ``t^(-a_k)`` with ``a_k = 1/p - 10^(-k)`` against the constant ``(p/(p-1))^q``."""
    p = check_exponent(p)
    q = float(q)
    target = (p / (p - 1.0)) ** q
    rows = []
    for k, a, _ in _scan_points(p, ks):
        ratio, error = ratio_J_quadrature(a, p, q, quad)
        rows.append(RatioRow(k, a, ratio_J(a, p, q), ratio, error, target))
    return rows
