import math, heapq, logging
import numpy as np
from dataclasses import dataclass
from .errors import AccuracyError, ParameterError
from .weight import power_integral, power_of
from .lru_cache import lru_cache

logger = logging.getLogger(__name__)

# Relative floor added to every error estimate for the rounding of the summation itself
ROUNDING = 64 * np.finfo("float64").eps

@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and panel controls for :func:`integrate_product`.

    Args:
        rel_tol: Relative accuracy target. Defaults to ``1e-10``.
        abs_tol: Absolute accuracy target. Defaults to ``1e-14``.
        panel_order: Number of Gauss-Legendre nodes per panel. Defaults to ``16``.
        max_panels: Maximum number of panels per integral before giving up. Defaults to ``4096``.
    """
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    panel_order: int = 16
    max_panels: int = 4096

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise ParameterError(f"Quadrature tolerances must be positive, got rel_tol={self.rel_tol}, abs_tol={self.abs_tol}")
        if int(self.panel_order) != self.panel_order or self.panel_order < 2:
            raise ParameterError(f"panel_order must be an integer >= 2, got {self.panel_order}")
        if int(self.max_panels) != self.max_panels or self.max_panels < 1:
            raise ParameterError(f"max_panels must be a positive integer, got {self.max_panels}")

DEFAULT_QUAD = QuadSpec()

@lru_cache
def gauss_legendre(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights

def _first_piece_integral(piece, t0, t1, alpha, beta):
    # On (0, hi] the average is coeff * t^(-exp) / (1 - exp), so the integrand is an exact power of t
    k = power_of(piece.coeff / (1.0 - piece.exp), alpha) * power_of(piece.coeff, beta)
    if k == 0.0:
        return 0.0
    return k * power_integral(t0, t1, piece.exp * (alpha + beta))

class _Panels:
    def __init__(self, piece, prefix, alpha, beta, order):
        self.piece = piece
        self.prefix = prefix
        self.alpha = alpha
        self.beta = beta
        self.nodes, self.weights = gauss_legendre(order)

    def integrand(self, t):
        average = (self.prefix + self.piece.integral_array(self.piece.lo, t, 1.0)) / t
        return average ** self.alpha * (self.piece.coeff * t ** -self.piece.exp) ** self.beta

    def rule(self, u, v):
        half = 0.5 * (v - u)
        return half * float(np.dot(self.weights, self.integrand(0.5 * (u + v) + half * self.nodes)))

    def split(self, u, v, whole=None):
        if whole is None:
            whole = self.rule(u, v)
        m = 0.5 * (u + v)
        left = self.rule(u, m)
        right = self.rule(m, v)
        refined = left + right
        return refined, abs(whole - refined), (u, m, left), (m, v, right)

def _adaptive(w, t0, t1, alpha, beta, quad):
    # Global adaptive Gauss panels over all pieces that do not touch 0
    heap = []
    counter = 0
    total = 0.0
    error = 0.0
    for index, piece in enumerate(w.pieces[1:], start=1):
        u = max(t0, piece.lo)
        v = min(t1, piece.hi)
        if v <= u:
            continue
        panels = _Panels(piece, w.integral(0.0, piece.lo, 1.0), alpha, beta, quad.panel_order)
        value, err, left, right = panels.split(u, v)
        total += value
        error += err
        heapq.heappush(heap, (-err, counter, panels, u, v, value, left, right))
        counter += 1

    num_panels = len(heap)
    while heap and error > max(quad.abs_tol, quad.rel_tol * abs(total)):
        if num_panels >= quad.max_panels:
            raise AccuracyError(
                f"Quadrature did not reach rel_tol={quad.rel_tol} within {quad.max_panels} panels "
                f"(estimate {total}, error {error})",
                total,
                error,
            )
        neg_err, _, panels, u, v, value, left, right = heapq.heappop(heap)
        total -= value
        error += neg_err
        for (cu, cv, whole) in [left, right]:
            cvalue, cerr, cleft, cright = panels.split(cu, cv, whole)
            total += cvalue
            error += cerr
            heapq.heappush(heap, (-cerr, counter, panels, cu, cv, cvalue, cleft, cright))
            counter += 1
        num_panels += 1

    logger.debug(f"Adaptive quadrature on [{t0}, {t1}] used {num_panels} panels, error {error:.3e}")
    return total, max(error, 0.0)

def _check(t0, t1, alpha, beta):
    if not (0.0 <= t0 < t1 <= 1.0):
        raise ParameterError(f"Expected 0 <= t0 < t1 <= 1, got t0={t0}, t1={t1}")
    if alpha < 0.0 or beta < 0.0:
        raise ParameterError(f"Expected non-negative powers, got alpha={alpha}, beta={beta}")

@lru_cache
def integrate_product_with_error(w, t0, t1, alpha, beta, quad=DEFAULT_QUAD):
    """Integrates ``(Aw)^alpha * w^beta`` over ``[t0, t1]`` and returns ``(value, error_bound)``.

    ``Aw(t) = (1/t) * int_0^t w`` is the averaging operator. The piece touching 0 is integrated in closed form, since
    both factors are exact powers of ``t`` there. All other pieces are smooth and are integrated with adaptive
    Gauss-Legendre panels. A divergent integral returns ``(inf, 0.0)``.

    Args:
        w: The weight.
        t0: Lower limit in ``[0, 1)``.
        t1: Upper limit in ``(t0, 1]``.
        alpha: Power of the averaging operator.
        beta: Power of the weight.
        quad: Quadrature settings.

    Raises:
        AccuracyError: If the panel budget is exhausted before the tolerance is met.
    """
    t0, t1, alpha, beta = float(t0), float(t1), float(alpha), float(beta)
    _check(t0, t1, alpha, beta)

    first = w.pieces[0]
    closed = 0.0
    if t0 < first.hi:
        closed = _first_piece_integral(first, t0, min(t1, first.hi), alpha, beta)
        if math.isinf(closed):
            return math.inf, 0.0

    if t1 > first.hi:
        value, error = _adaptive(w, t0, t1, alpha, beta, quad)
    else:
        value, error = 0.0, 0.0
    total = closed + value
    return total, error + ROUNDING * abs(total)

def integrate_product(w, t0, t1, alpha, beta, quad=DEFAULT_QUAD):
    """Integrates ``(Aw)^alpha * w^beta`` over ``[t0, t1]``.

    Examples:
        >>> from hardylab import power_weight
        >>> integrate_product(power_weight(0.25), 0.0, 1.0, 2.0, 0.0)  # 32/9
        3.5555555555555554
    """
    return integrate_product_with_error(w, t0, t1, alpha, beta, quad)[0]
