import math, logging
import numpy as np
from dataclasses import dataclass
from scipy.optimize import minimize_scalar
from .errors import ParameterError
from .param import check_exponent
from .lru_cache import lru_cache

logger = logging.getLogger(__name__)

PREFIX = "prefix"
SUFFIX = "suffix"
ALL = "all"
FAMILIES = (PREFIX, SUFFIX, ALL)

# Branch and bound stops refining a cell once its upper bound is within this factor of the best ratio
BOUND_RTOL = 1e-7
MAX_ROUNDS = 48
INITIAL_SPLITS = 8
COORDINATE_ROUNDS = 3
JENSEN_SLACK = 1e-12
ROUNDING = 64 * np.finfo("float64").eps
# Relative rounding allowance of the closed form search on step weights
EXACT_SLACK = 1e-12

@dataclass(frozen=True)
class RHIQuery:
    """Which reverse Hölder constant to compute.

    Args:
        q: Exponent ``q > 1``.
        family: Interval family, one of ``"prefix"`` (intervals ``(0, t]``), ``"suffix"`` (intervals ``(t, 1]``) or
            ``"all"`` (all subintervals). Defaults to ``"prefix"``.
        grid: Search budget, at least 64. Branch and bound keeps at most ``64 * grid`` open cells. Step weights are
            solved in closed form and ignore it. Defaults to ``256``.
    """
    q: float
    family: str = PREFIX
    grid: int = 256

    def __post_init__(self):
        object.__setattr__(self, "q", check_exponent(self.q, "q"))
        if not self.family in FAMILIES:
            raise ParameterError(f"Unknown interval family '{self.family}', expected one of {FAMILIES}")
        if int(self.grid) != self.grid or self.grid < 64:
            raise ParameterError(f"Search grid must be an integer >= 64, got {self.grid}")
        object.__setattr__(self, "grid", int(self.grid))

@dataclass(frozen=True)
class RHIConstant:
    """Result of a constant search.

    ``c`` is the largest ratio found and ``interval`` the interval attaining it. The true supremum lies in
    ``[c, c + tolerance]``. ``resolution`` is the widest search cell that was still open when the search stopped, and
    ``0`` if every cell was settled or the weight was solved in closed form.
    """
    c: float
    interval: tuple
    resolution: float
    tolerance: float
    family: str
    status: str = "ok"

    @property
    def divergent(self):
        return self.status == "divergent"

def ratios(w, q, x0, x1):
    """Vectorized ``avg(w^q) / avg(w)^q`` over the intervals ``(x0, x1]``. Intervals where ``w`` vanishes give 1."""
    x0, x1 = np.broadcast_arrays(np.asarray(x0, dtype="float64"), np.asarray(x1, dtype="float64"))
    length = x1 - x0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        mean_q = w.integral_array(x0, x1, q) / length
        mean = w.integral_array(x0, x1, 1.0) / length
        r = mean_q / mean ** q
    return np.where(mean > 0.0, r, 1.0)

def ratio(w, q, a, b):
    # Scalar path used inside the refinement loops
    length = b - a
    if not length > 0.0:
        return 1.0
    mean = w.integral(a, b, 1.0) / length
    if not mean > 0.0:
        return 1.0
    return (w.integral(a, b, q) / length) / mean ** q

def rhi_ratio(w, q, a, b):
    """Returns ``avg(w^q) / avg(w)^q`` over ``(a, b]`` with ``0 <= a < b <= 1``."""
    if not (0.0 <= a < b <= 1.0):
        raise ParameterError(f"Expected 0 <= a < b <= 1, got a={a}, b={b}")
    return float(ratios(w, q, a, b))

def _diverges(w, q, family):
    if not math.isfinite(w.integral(0.0, 1.0, q)):
        return True
    # An interval reaching just past a zero piece into a positive one has an unbounded ratio
    if family == PREFIX:
        return w.pieces[0].coeff == 0.0
    if family == SUFFIX:
        return w.pieces[-1].coeff == 0.0
    return any((left.coeff == 0.0) != (right.coeff == 0.0) for left, right in zip(w.pieces[:-1], w.pieces[1:]))

def _power(x, r):
    with np.errstate(over="ignore"):
        return float(np.power(np.float64(x), r))

def _best(w, q, a, b):
    a, b = np.asarray(a, dtype="float64"), np.asarray(b, dtype="float64")
    values = ratios(w, q, a, b)
    k = int(np.argmax(values))
    return float(values[k]), (float(a[k]), float(b[k]))

def _edge_root(L0, l, P0, p, D0, d, q):
    # With L, P, D affine in x, d/dx log(L^(q-1) P / D^q) vanishes where (q-1) l P D + p L D - q d L P = 0. The
    # quadratic terms cancel, so there is at most one root.
    c1 = (q - 1.0) * l * (P0 * d + p * D0) + p * (L0 * d + l * D0) - q * d * (L0 * p + l * P0)
    c0 = (q - 1.0) * l * P0 * D0 + p * L0 * D0 - q * d * L0 * P0
    if c1 == 0.0 or not math.isfinite(c1) or not math.isfinite(c0):
        return []
    return [-c0 / c1]

def _mul(x, y):
    # Product of affine functions (x0 + x1 t)(y0 + y1 t), highest power first
    return np.asarray([x[1] * y[1], x[0] * y[1] + x[1] * y[0], x[0] * y[0]])

def _interior_roots(L0, P0, D0, alpha, beta, gamma, delta, q):
    # Both partial derivatives vanish only on the line (alpha - beta) D = q (gamma - delta) P
    ku = (alpha - beta) * gamma - q * (gamma - delta) * alpha
    kv = (alpha - beta) * delta - q * (gamma - delta) * beta
    k0 = (alpha - beta) * D0 - q * (gamma - delta) * P0
    if ku == 0.0 and kv == 0.0:
        return []
    if abs(kv) >= abs(ku):
        u0, du, v0, dv = 0.0, 1.0, -k0 / kv, -ku / kv
    else:
        u0, du, v0, dv = -k0 / ku, -kv / ku, 0.0, 1.0
    L = (L0 + u0 + v0, du + dv)
    P = (P0 + alpha * u0 + beta * v0, alpha * du + beta * dv)
    D = (D0 + gamma * u0 + delta * v0, gamma * du + delta * dv)
    coeffs = (q - 1.0) * _mul(P, D) + alpha * _mul(L, D) - q * gamma * _mul(L, P)
    if not np.all(np.isfinite(coeffs)):
        return []
    roots = np.roots(coeffs)
    roots = [t.real for t in roots if abs(t.imag) <= 1e-9 * max(1.0, abs(t.real))]
    return [(u0 + du * t, v0 + dv * t) for t in roots]

def _step_one_sided(w, q, family):
    a, b = [0.0], [1.0]
    for piece in w.pieces:
        h, length = piece.coeff, piece.hi - piece.lo
        if family == PREFIX:
            L0, P0, D0 = piece.lo, w.integral(0.0, piece.lo, q), w.integral(0.0, piece.lo, 1.0)
        else:
            L0, P0, D0 = 1.0 - piece.hi, w.integral(piece.hi, 1.0, q), w.integral(piece.hi, 1.0, 1.0)
        for x in [length] + _edge_root(L0, 1.0, P0, _power(h, q), D0, h, q):
            if 0.0 < x <= length:
                if family == PREFIX:
                    a.append(0.0)
                    b.append(piece.lo + x)
                else:
                    a.append(piece.hi - x)
                    b.append(1.0)
    return _best(w, q, a, b)

def _step_all(w, q):
    # For pieces i < j the interval (hi_i - u, lo_j + v] has affine length and integrals in (u, v). The maximum lies
    # at a corner, at the root of an edge or at an interior critical point.
    a, b = [0.0], [1.0]
    pieces = w.pieces
    for i, left in enumerate(pieces):
        for right in pieces[i + 1:]:
            U, V = left.hi - left.lo, right.hi - right.lo
            L0 = right.lo - left.hi
            P0, D0 = w.integral(left.hi, right.lo, q), w.integral(left.hi, right.lo, 1.0)
            alpha, gamma = _power(left.coeff, q), left.coeff
            beta, delta = _power(right.coeff, q), right.coeff

            points = [(u, v) for u in (0.0, U) for v in (0.0, V)]
            for u in (0.0, U):
                points += [(u, v) for v in _edge_root(L0 + u, 1.0, P0 + alpha * u, beta, D0 + gamma * u, delta, q)]
            for v in (0.0, V):
                points += [(u, v) for u in _edge_root(L0 + v, 1.0, P0 + beta * v, alpha, D0 + delta * v, gamma, q)]
            points += _interior_roots(L0, P0, D0, alpha, beta, gamma, delta, q)

            for u, v in points:
                if 0.0 <= u <= U and 0.0 <= v <= V and L0 + u + v > 0.0:
                    a.append(left.hi - u)
                    b.append(right.lo + v)
    return _best(w, q, a, b)

def _value_range(w, x0, x1):
    # Infimum and supremum of w over (x0, x1]
    low = np.full(x0.shape, np.inf)
    high = np.zeros(x0.shape)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        for piece in w.pieces:
            overlap = (x1 > piece.lo) & (x0 < piece.hi)
            if piece.coeff == 0.0 or piece.exp == 0.0:
                top = bottom = np.full(x0.shape, piece.coeff)
            else:
                top = piece.coeff * np.maximum(x0, piece.lo) ** -piece.exp
                bottom = piece.coeff * np.minimum(x1, piece.hi) ** -piece.exp
            low = np.where(overlap, np.minimum(low, bottom), low)
            high = np.where(overlap, np.maximum(high, top), high)
    return low, high

def _no_nan(x):
    return np.where(np.isnan(x), np.inf, x)

def _mixture_bound(low_a, high_a, low_b, high_b, q):
    # sup over theta in [0, 1] of (theta Ma^q + (1 - theta) Mb^q) / (theta ma + (1 - theta) mb)^q
    na, nb = high_a ** q, high_b ** q
    dn, dm = na - nb, low_a - low_b
    theta = (q * dm * nb - dn * low_b) / ((1.0 - q) * dn * dm)
    theta = np.clip(np.nan_to_num(theta, nan=0.0, posinf=1.0, neginf=0.0), 0.0, 1.0)
    values = [_no_nan((t * na + (1.0 - t) * nb) / (t * low_a + (1.0 - t) * low_b) ** q) for t in [0.0, 1.0, theta]]
    return np.maximum(np.maximum(values[0], values[1]), values[2])

def _first_piece_constant(w, q):
    first = w.pieces[0]
    if first.coeff == 0.0:
        return 1.0
    # Every subinterval of (0, hi] has a ratio below the prefix value (1 - e)^q / (1 - e q) of c t^(-e)
    return (1.0 - first.exp) ** q / (1.0 - first.exp * q)

def _upper_bounds(w, q, a0, a1, b0, b1, first_constant):
    # Upper bounds of the ratio over all intervals (a, b] with a in [a0, a1] and b in [b0, b1]
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        top = w.integral_array(a0, b1, q)
        bottom = w.integral_array(a1, b0, 1.0)
        bound = _no_nan(np.where(bottom > 0.0, (b1 - a0) ** (q - 1.0) * top / bottom ** q, np.inf))

        low, high = _value_range(w, a0, b1)
        bound = np.minimum(bound, _no_nan(np.where(high > 0.0, (high / low) ** (q - 1.0), 1.0)))

        adjacent = (a1 == b0) & (a0 < a1) & (b0 < b1)
        if np.any(adjacent):
            low_a, high_a = _value_range(w, a0, a1)
            low_b, high_b = _value_range(w, b0, b1)
            bound = np.where(adjacent, np.minimum(bound, _mixture_bound(low_a, high_a, low_b, high_b, q)), bound)

        bound = np.where(b1 <= w.pieces[0].hi, np.minimum(bound, first_constant), bound)
    return bound

def _lower_values(w, q, a0, a1, b0, b1):
    candidates = [(a0, b1), (0.5 * (a0 + a1), 0.5 * (b0 + b1)), (a1, b0)]
    values = np.stack([np.where(a < b, ratios(w, q, a, b), -np.inf) for a, b in candidates])
    k = np.argmax(values, axis=0)
    rows = np.arange(len(a0))
    xa = np.stack([a for a, _ in candidates])[k, rows]
    xb = np.stack([b for _, b in candidates])[k, rows]
    return values[k, rows], xa, xb

def _halve(lo, hi, split):
    if not split:
        return [(lo, hi)]
    mid = 0.5 * (lo + hi)
    return [(lo, mid), (mid, hi)]

def _split(a0, a1, b0, b1, split_a, split_b):
    parts = [(x0, x1, y0, y1) for x0, x1 in _halve(a0, a1, split_a) for y0, y1 in _halve(b0, b1, split_b)]
    a0, a1, b0, b1 = [np.concatenate(x) for x in zip(*parts)]
    keep = a0 < b1
    return a0[keep], a1[keep], b0[keep], b1[keep]

def _initial_cells(w, family):
    lo = np.concatenate([np.linspace(piece.lo, piece.hi, INITIAL_SPLITS + 1)[:-1] for piece in w.pieces])
    hi = np.concatenate([np.linspace(piece.lo, piece.hi, INITIAL_SPLITS + 1)[1:] for piece in w.pieces])
    if family == PREFIX:
        zeros = np.zeros(len(lo))
        return zeros, zeros, lo, hi
    if family == SUFFIX:
        ones = np.ones(len(lo))
        return lo, hi, ones, ones
    i, j = np.triu_indices(len(lo))
    return lo[i], hi[i], lo[j], hi[j]

def _maximize(func, lo, hi):
    if not hi > lo:
        return lo, func(lo)
    result = minimize_scalar(lambda x: -func(x), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12 * max(1.0, abs(hi))})
    return float(result.x), -float(result.fun)

def _polish(w, q, family, c, best, cell):
    # Coordinate ascent inside the cell of the best ratio. Only raises c, the bounds stay valid.
    a, b = best
    a0, a1, b0, b1 = [float(x) for x in cell]
    for _ in range(COORDINATE_ROUNDS if family == ALL else 1):
        if family != PREFIX and a1 > a0:
            x, value = _maximize(lambda x: ratio(w, q, x, b), a0, min(a1, b))
            if value > c:
                a, c = x, value
        if family != SUFFIX and b1 > b0:
            x, value = _maximize(lambda x: ratio(w, q, a, x), max(b0, a), b1)
            if value > c:
                b, c = x, value
    return c, (a, b)

def _branch_and_bound(w, q, family, grid):
    first_constant = _first_piece_constant(w, q)
    a0, a1, b0, b1 = _initial_cells(w, family)
    split_a, split_b = family != PREFIX, family != SUFFIX
    children = (2 if split_a else 1) * (2 if split_b else 1)
    limit = 64 * grid

    c, best, cell = ratio(w, q, 0.0, 1.0), (0.0, 1.0), (0.0, 0.0, 1.0, 1.0)
    settled = -np.inf
    for step in range(MAX_ROUNDS + 1):
        values, xa, xb = _lower_values(w, q, a0, a1, b0, b1)
        k = int(np.argmax(values))
        if values[k] > c:
            c, best, cell = float(values[k]), (float(xa[k]), float(xb[k])), (a0[k], a1[k], b0[k], b1[k])

        bounds = _upper_bounds(w, q, a0, a1, b0, b1, first_constant)
        keep = bounds > c * (1.0 + BOUND_RTOL)
        if not np.all(keep):
            settled = max(settled, float(np.max(bounds[~keep])))
        a0, a1, b0, b1, bounds = a0[keep], a1[keep], b0[keep], b1[keep], bounds[keep]
        if len(a0) == 0 or step == MAX_ROUNDS or len(a0) * children > limit:
            break
        a0, a1, b0, b1 = _split(a0, a1, b0, b1, split_a, split_b)

    upper = max(settled, float(np.max(bounds)) if len(bounds) > 0 else -np.inf)
    resolution = float(np.max(np.maximum(a1 - a0, b1 - b0))) if len(a0) > 0 else 0.0
    logger.debug(f"Branch and bound ({family}, q={q}) stopped after {step} rounds with {len(a0)} open cells")
    c, best = _polish(w, q, family, c, best, cell)
    return c, best, upper, resolution

@lru_cache
def rhi_search(w, query):
    """Searches the supremum of ``avg(w^q) / avg(w)^q`` over an interval family.

    Step weights are solved in closed form. On every piece, and on every pair of pieces for the family of all
    subintervals, length and integrals are affine in the endpoints, so the maximum is attained at piece ends or at
    roots of a linear or quadratic equation. Other weights are searched by branch and bound over cells of endpoints.
    Each cell carries an upper bound from monotonicity of the integrals, from the range of the weight and from the
    closed form constant of a power function, so the reported tolerance bounds the remaining error.

    Args:
        w: The weight.
        query: An :class:`RHIQuery`.

    Returns:
        An :class:`RHIConstant`. Its value is ``inf`` with status ``"divergent"`` if the supremum is infinite.
    """
    q = query.q
    if _diverges(w, q, query.family):
        return RHIConstant(math.inf, (0.0, 1.0), 0.0, 0.0, query.family, "divergent")

    if w.is_step():
        if query.family == ALL:
            c, interval = _step_all(w, q)
        else:
            c, interval = _step_one_sided(w, q, query.family)
        upper, resolution = c * (1.0 + EXACT_SLACK), 0.0
    else:
        c, interval, upper, resolution = _branch_and_bound(w, q, query.family, query.grid)

    # Constants are >= 1, values within rounding of 1 are taken as exactly 1
    if 1.0 - JENSEN_SLACK <= c <= 1.0 + ROUNDING:
        c = 1.0
    tolerance = max(0.0, upper - c)
    logger.debug(f"RHI search ({query.family}, q={q}) found c={c} on {interval}, tolerance {tolerance:.3e}")
    return RHIConstant(c, tuple(interval), resolution, tolerance, query.family)

def rhi_constant(w, q, family=PREFIX, grid=256):
    """Returns the reverse Hölder constant ``sup avg(w^q) / avg(w)^q`` over an interval family.

    Examples:
        >>> rhi_constant(make_step([2, 1], [0.5]), 2.0)  # 10/9
        1.1111111111111112
    """
    return rhi_search(w, RHIQuery(q, family, grid)).c
