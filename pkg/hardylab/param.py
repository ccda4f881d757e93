import os, math
from fractions import Fraction
from .errors import ParameterError

DEFAULT_SEED = 20240117
DEFAULT_TOL = 1e-9

def parse_number(x):
    """Parses a decimal or a simple fraction such as ``"9/8"`` into a float.

    ``"inf"`` is accepted for unbounded parameters. Numbers are passed through unchanged.
    """
    if isinstance(x, (int, float, Fraction)):
        return float(x)
    text = str(x).strip()
    if text.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"Invalid number '{x}', expected a decimal or a fraction like 9/8")
    return float(value)

def parse_numbers(xs):
    return [parse_number(x) for x in xs]

def get_seed(seed=None):
    # Flag first, then environment, then the fixed default
    if not seed is None:
        return int(seed)
    value = os.environ.get("HARDY_LAB_SEED", None)
    if value is None or value.strip() == "":
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError:
        raise ParameterError(f"HARDY_LAB_SEED must be an integer, got '{value}'")

def check_exponent(p, name="p"):
    p = float(p)
    if not p > 1.0 or math.isnan(p):
        raise ParameterError(f"Expected {name} > 1, got {p}")
    return p
