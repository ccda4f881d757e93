import numpy as np
from .weight import PowerPiece, Weight, make_step
from .discrete import WeightedSeq

def random_breakpoints(rng, max_pieces):
    # Multiples of 1/1024 keep breakpoints distinct and exactly representable
    n = int(rng.integers(1, max_pieces + 1))
    points = np.unique(np.round(rng.uniform(0.0, 1.0, n - 1) * 1024.0)) / 1024.0
    return [float(x) for x in points if 0.0 < x < 1.0]

def random_weight(rng, max_pieces=6, p_max=6.0, nonincreasing=True):
    """Draws a piecewise power-law weight whose first exponent lies in ``[0, 0.9/(p_max+1)]``.

    Non-increasing weights drop by a factor in ``[0.3, 0.999]`` at every breakpoint.
    """
    edges = [0.0] + random_breakpoints(rng, max_pieces) + [1.0]
    first_exp = float(rng.uniform(0.0, 0.9 / (p_max + 1.0)))
    pieces = [PowerPiece(0.0, edges[1], float(rng.uniform(0.5, 5.0)), first_exp)]
    for lo, hi in zip(edges[1:-1], edges[2:]):
        exp = float(rng.uniform(0.0, 1.5))
        if nonincreasing:
            left_value = pieces[-1](lo)
            coeff = float(rng.uniform(0.3, 0.999)) * left_value * lo ** exp
        else:
            coeff = float(rng.uniform(0.0, 5.0))
        pieces.append(PowerPiece(lo, hi, coeff, exp))
    return Weight(tuple(pieces))

def random_step(rng, max_pieces=8, nonincreasing=False):
    """Draws a step weight with values in ``(0, 10]``."""
    breakpoints = random_breakpoints(rng, max_pieces)
    values = 10.0 - rng.uniform(0.0, 10.0, len(breakpoints) + 1)
    if nonincreasing:
        values = np.sort(values)[::-1]
    return make_step(values.tolist(), breakpoints)

def random_sequence(rng, max_terms=64):
    """Draws a weighted sequence with ``lambda_n`` in ``(0, 10]`` and ``a_n`` in ``[0, 10]``."""
    n = int(rng.integers(1, max_terms + 1))
    lam = 10.0 - rng.uniform(0.0, 10.0, n)
    a = rng.uniform(0.0, 10.0, n)
    return WeightedSeq(tuple(lam.tolist()), tuple(a.tolist()))
