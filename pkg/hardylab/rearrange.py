import logging
from dataclasses import dataclass
from fractions import Fraction
from .errors import PreconditionError
from .weight import StepWeight, PowerPiece, as_step
from .search import ALL, PREFIX, SUFFIX, RHIQuery, rhi_search
from .report import to_jsonable, PASS, FAIL, DIVERGENT

logger = logging.getLogger(__name__)

# Relative allowance of the rearranged constant over the original one
REARRANGE_SLACK = 1e-6

def distribution(w):
    """Returns the pairs ``(value, measure)`` of a step weight, merged by value and sorted by decreasing value.

    Measures are exact sums of the piece lengths.

    Examples:
        >>> distribution(make_step([1, 3, 1], [0.25, 0.5]))
        [(3.0, Fraction(1, 4)), (1.0, Fraction(3, 4))]
    """
    w = as_step(w)
    measures = {}
    for piece in w.pieces:
        measures[piece.coeff] = measures.get(piece.coeff, Fraction(0)) + (Fraction(piece.hi) - Fraction(piece.lo))
    return sorted(measures.items(), key=lambda x: -x[0])

def rearrange_nonincreasing(w):
    """Returns the non-increasing rearrangement of a step weight.

    The values are sorted in decreasing order and carry their lengths, so the result is equimeasurable with ``w``.
    A weight that is already non-increasing is returned unchanged.

    Raises:
        PreconditionError: If ``w`` is not a step weight.
    """
    w = as_step(w)
    if w.is_nonincreasing():
        return w
    pieces = []
    edge = Fraction(0)
    for value, measure in distribution(w):
        lo = edge
        edge = edge + measure
        pieces.append(PowerPiece(float(lo), float(edge), value, 0.0))
    return StepWeight(tuple(pieces))

def _search(w, q, family, grid):
    return rhi_search(w, RHIQuery(q, family, grid))

@dataclass(frozen=True)
class RearrangeReport:
    """Constants over all subintervals before and after rearranging."""
    c_before: float
    c_after: float
    family: str
    resolution: float
    tolerance: float
    q: float
    status: str

    @property
    def passed(self):
        return self.status == PASS

    def to_dict(self):
        return to_jsonable({
            "op": "rearrangement", "q": self.q, "family": self.family, "c_before": self.c_before, "c_after": self.c_after,
            "resolution": self.resolution, "tolerance": self.tolerance, "status": self.status,
        })

def theoremC_check(w, q, grid=256):
    """Checks that rearranging a step weight does not increase its constant over all subintervals.

    Passes iff ``c_after <= c_before (1 + 1e-6) + tolerance``, where the tolerance is the sum of both search
    tolerances.
    """
    w = as_step(w)
    before = _search(w, q, ALL, grid)
    after = _search(rearrange_nonincreasing(w), q, ALL, grid)
    tolerance = before.tolerance + after.tolerance
    if before.divergent or after.divergent:
        status = DIVERGENT
    else:
        status = PASS if after.c <= before.c * (1.0 + REARRANGE_SLACK) + tolerance else FAIL
    logger.debug(f"Rearrangement with q={q}: c_before={before.c}, c_after={after.c}")
    return RearrangeReport(before.c, after.c, ALL, max(before.resolution, after.resolution), tolerance, float(q), status)

@dataclass(frozen=True)
class TheoremDReport:
    """Constants of a non-increasing weight over prefixes, suffixes and all subintervals."""
    c_prefix: float
    c_suffix: float
    c_all: float
    resolution: float
    tolerance: float
    q: float
    status: str

    @property
    def passed(self):
        return self.status == PASS

    @property
    def gap(self):
        return abs(self.c_all - max(self.c_prefix, self.c_suffix))

    def to_dict(self):
        return to_jsonable({
            "op": "one_sided_reduction", "q": self.q, "c_prefix": self.c_prefix, "c_suffix": self.c_suffix,
            "c_all": self.c_all, "gap": self.gap, "resolution": self.resolution, "tolerance": self.tolerance,
            "status": self.status,
        })

def theoremD_check(w, q, grid=256):
    """Checks that the constant of a non-increasing step weight over all subintervals is attained on prefixes or
    suffixes, that is ``|c_all - max(c_prefix, c_suffix)| <= tolerance``.

    Raises:
        PreconditionError: If ``w`` is not a non-increasing step weight.
    """
    w = as_step(w)
    if not w.is_nonincreasing():
        raise PreconditionError("The one-sided reduction applies to non-increasing weights only")
    prefix = _search(w, q, PREFIX, grid)
    suffix = _search(w, q, SUFFIX, grid)
    every = _search(w, q, ALL, grid)
    tolerance = prefix.tolerance + suffix.tolerance + every.tolerance
    resolution = max(prefix.resolution, suffix.resolution, every.resolution)
    status = PASS if abs(every.c - max(prefix.c, suffix.c)) <= tolerance else FAIL
    return TheoremDReport(prefix.c, suffix.c, every.c, resolution, tolerance, float(q), status)
