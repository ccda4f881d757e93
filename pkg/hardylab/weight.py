import math, bisect
import numpy as np
from dataclasses import dataclass
from .errors import DomainError, PreconditionError, ValidationError

def power_integral(x0, x1, e):
    """Returns the integral of ``s^(-e)`` over ``[x0, x1]`` for ``0 <= x0 <= x1``.

    Uses ``x0^m * expm1(m * log(x1 / x0)) / m`` with ``m = 1 - e`` so that exponents close to 1 lose no digits. The
    integral from 0 is infinite when ``e >= 1``.
    """
    if x1 <= x0:
        return 0.0
    if e == 0.0:
        return x1 - x0
    m = 1.0 - e
    if x0 == 0.0:
        if m <= 0.0:
            return math.inf
        return x1 ** m / m
    log_ratio = math.log(x1 / x0)
    if m == 0.0:
        return log_ratio
    return x0 ** m * math.expm1(m * log_ratio) / m

def power_integral_array(x0, x1, e):
    x0, x1 = np.broadcast_arrays(np.asarray(x0, dtype="float64"), np.asarray(x1, dtype="float64"))
    if e == 0.0:
        return np.maximum(x1 - x0, 0.0)
    m = 1.0 - e
    nonempty = x1 > x0
    from_zero = nonempty & (x0 == 0.0)
    inner = nonempty & (x0 > 0.0)

    result = np.zeros(x0.shape)
    if np.any(from_zero):
        result[from_zero] = x1[from_zero] ** m / m if m > 0.0 else np.inf
    if np.any(inner):
        lo, hi = x0[inner], x1[inner]
        log_ratio = np.log(hi / lo)
        if m == 0.0:
            result[inner] = log_ratio
        else:
            result[inner] = lo ** m * np.expm1(m * log_ratio) / m
    return result

def power_of(x, r):
    # Overflow saturates to inf, so that huge coefficients show up as divergent integrals
    try:
        return x ** r
    except OverflowError:
        return math.inf

@dataclass(frozen=True)
class PowerPiece:
    """The function ``t -> coeff * t^(-exp)`` on the left-open, right-closed interval ``(lo, hi]``."""
    lo: float
    hi: float
    coeff: float
    exp: float

    def __post_init__(self):
        for name in ["lo", "hi", "coeff", "exp"]:
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValidationError(f"Piece field {name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not (0.0 <= self.lo < self.hi <= 1.0):
            raise ValidationError(f"Piece interval must satisfy 0 <= lo < hi <= 1, got ({self.lo}, {self.hi}]")
        if self.coeff < 0.0:
            raise ValidationError(f"Piece coefficient must be non-negative, got {self.coeff}")
        if self.exp < 0.0:
            raise ValidationError(f"Piece exponent must be non-negative, got {self.exp}")
        if self.lo == 0.0 and self.exp >= 1.0:
            raise ValidationError(f"The piece touching 0 must be integrable (exp < 1), got exp={self.exp}")

    def __call__(self, t):
        if self.coeff == 0.0:
            return 0.0
        return self.coeff * t ** -self.exp

    def integral(self, x0, x1, r):
        # Integral of (coeff * s^(-exp))^r over [x0, x1] inside [lo, hi]
        if r == 0.0:
            return max(x1 - x0, 0.0)
        if self.coeff == 0.0:
            return 0.0
        value = power_integral(x0, x1, self.exp * r)
        return power_of(self.coeff, r) * value if value > 0.0 else 0.0

    def integral_array(self, x0, x1, r):
        if r == 0.0:
            return np.maximum(np.asarray(x1, dtype="float64") - np.asarray(x0, dtype="float64"), 0.0)
        if self.coeff == 0.0:
            return np.zeros(np.broadcast(np.asarray(x0), np.asarray(x1)).shape)
        value = power_integral_array(x0, x1, self.exp * r)
        with np.errstate(invalid="ignore", over="ignore"):
            return np.where(value > 0.0, power_of(self.coeff, r) * value, 0.0)

    def __str__(self):
        if self.exp == 0.0:
            return f"{self.coeff:g} on ({self.lo:g}, {self.hi:g}]"
        return f"{self.coeff:g}*t^(-{self.exp:g}) on ({self.lo:g}, {self.hi:g}]"

@dataclass(frozen=True)
class Weight:
    """A non-negative piecewise power-law function on ``(0, 1]``.

    The pieces partition ``(0, 1]`` exactly and in order. Weights are immutable and hashable, so they can be used as
    arguments of cached functions.
    """
    pieces: tuple

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if len(pieces) == 0:
            raise ValidationError("A weight needs at least one piece")
        if any(not isinstance(piece, PowerPiece) for piece in pieces):
            raise ValidationError("All pieces must be of type PowerPiece")
        if pieces[0].lo != 0.0:
            raise ValidationError(f"The first piece must start at 0, got {pieces[0].lo}")
        if pieces[-1].hi != 1.0:
            raise ValidationError(f"The last piece must end at 1, got {pieces[-1].hi}")
        for left, right in zip(pieces[:-1], pieces[1:]):
            if left.hi != right.lo:
                raise ValidationError(f"Pieces must be contiguous, got hi={left.hi} followed by lo={right.lo}")
        if not any(piece.coeff > 0.0 for piece in pieces):
            raise ValidationError("At least one piece must have a positive coefficient")
        object.__setattr__(self, "pieces", pieces)

    @property
    def breakpoints(self):
        return tuple(piece.hi for piece in self.pieces[:-1])

    @property
    def total(self):
        """The integral of the weight over ``(0, 1]``."""
        return self.integral(0.0, 1.0, 1.0)

    def piece_at(self, t):
        index = bisect.bisect_left([piece.hi for piece in self.pieces], t)
        return self.pieces[min(index, len(self.pieces) - 1)]

    def __call__(self, t):
        return evaluate(self, t)

    def integral(self, a, b, r):
        """Returns the integral of ``w^r`` over ``(a, b]`` in closed form, piece by piece."""
        total = 0.0
        for piece in self.pieces:
            if piece.hi <= a:
                continue
            if piece.lo >= b:
                break
            total += piece.integral(max(a, piece.lo), min(b, piece.hi), r)
        return total

    def integral_array(self, a, b, r):
        a, b = np.broadcast_arrays(np.asarray(a, dtype="float64"), np.asarray(b, dtype="float64"))
        total = np.zeros(a.shape)
        for piece in self.pieces:
            x0 = np.clip(a, piece.lo, piece.hi)
            x1 = np.clip(b, piece.lo, piece.hi)
            total = total + piece.integral_array(x0, x1, r)
        return total

    def prefix_integral(self, t, r):
        return prefix_integral(self, t, r)

    def hardy_average(self, t):
        return hardy_average(self, t)

    def is_nonincreasing(self):
        return is_nonincreasing(self)

    def is_step(self):
        return all(piece.exp == 0.0 for piece in self.pieces)

    def power(self, r):
        """Returns ``w^r`` as a weight. Fails if the result is not integrable near 0."""
        return Weight(tuple(PowerPiece(piece.lo, piece.hi, power_of(piece.coeff, r), piece.exp * r) for piece in self.pieces))

    def scale(self, k):
        return type(self)(tuple(PowerPiece(piece.lo, piece.hi, piece.coeff * k, piece.exp) for piece in self.pieces))

    def __str__(self):
        return "Weight[" + ", ".join(str(piece) for piece in self.pieces) + "]"

@dataclass(frozen=True)
class StepWeight(Weight):
    """A weight that is constant on every piece."""

    def __post_init__(self):
        Weight.__post_init__(self)
        if not self.is_step():
            raise ValidationError("All pieces of a step weight must have exponent 0")

    @property
    def values(self):
        return tuple(piece.coeff for piece in self.pieces)

def _check_domain(t):
    t = float(t)
    if not (0.0 < t <= 1.0):
        raise DomainError(f"Expected t in (0, 1], got {t}")
    return t

def evaluate(w, t):
    """Evaluates the weight at ``t``. At a breakpoint the value of the left piece is returned."""
    return w.piece_at(_check_domain(t))(t)

def prefix_integral(w, t, r):
    """Returns the integral of ``w^r`` over ``(0, t]``, or ``inf`` if it diverges at 0.

    Args:
        w: The weight.
        t: Upper limit in ``(0, 1]``.
        r: Non-negative power.

    Examples:
        >>> prefix_integral(power_weight(0.25), 1.0, 2.0)
        2.0
    """
    t = _check_domain(t)
    if r < 0.0:
        raise DomainError(f"Expected r >= 0, got {r}")
    return w.integral(0.0, t, float(r))

def hardy_average(w, t):
    """The averaging operator ``(1/t) * int_0^t w``."""
    return prefix_integral(w, t, 1.0) / t

def is_nonincreasing(w):
    for left, right in zip(w.pieces[:-1], w.pieces[1:]):
        if left(left.hi) < right(left.hi):
            return False
    return True

def make_step(values, breakpoints=()):
    """Creates a step weight with ``values[i]`` between consecutive breakpoints.

    Examples:
        >>> make_step([2, 1], [0.5])(0.5)
        2.0
    """
    values = [float(v) for v in values]
    breakpoints = [float(b) for b in breakpoints]
    if len(values) != len(breakpoints) + 1:
        raise ValidationError(f"Expected {len(breakpoints) + 1} values for {len(breakpoints)} breakpoints, got {len(values)}")
    if any(v < 0.0 for v in values):
        raise ValidationError(f"Step values must be non-negative, got {values}")
    edges = [0.0] + breakpoints + [1.0]
    if any(not (lo < hi) for lo, hi in zip(edges[:-1], edges[1:])):
        raise ValidationError(f"Breakpoints must be strictly increasing inside (0, 1), got {breakpoints}")
    return StepWeight(tuple(PowerPiece(lo, hi, v, 0.0) for lo, hi, v in zip(edges[:-1], edges[1:], values)))

def power_weight(a, coeff=1.0):
    """The single-piece weight ``coeff * t^(-a)``."""
    return Weight((PowerPiece(0.0, 1.0, coeff, a),))

def constant_weight(value=1.0):
    return make_step([value])

def as_step(w):
    if isinstance(w, StepWeight):
        return w
    if not w.is_step():
        raise PreconditionError("Expected a step weight, but some pieces have non-zero exponents")
    return StepWeight(w.pieces)
