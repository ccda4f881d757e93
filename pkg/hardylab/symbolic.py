import sympy
from dataclasses import dataclass

a, p, q, f, t, s = sympy.symbols("a p q f t s", positive=True)

# Points inside 0 < a < 1/q <= 1/p < 1 < q <= p used when simplification alone is inconclusive
SAMPLES = [
    {a: sympy.Rational(1, 7), p: sympy.Rational(3), q: sympy.Rational(2), f: sympy.Rational(5, 4), t: sympy.Rational(1, 3)},
    {a: sympy.Rational(1, 5), p: sympy.Rational(7, 2), q: sympy.Rational(3, 2), f: sympy.Rational(2), t: sympy.Rational(3, 4)},
    {a: sympy.Rational(2, 9), p: sympy.Rational(4), q: sympy.Rational(4), f: sympy.Rational(1, 3), t: sympy.Rational(1, 8)},
]

@dataclass(frozen=True)
class SymbolicCheck:
    name: str
    expression: str
    holds: bool

    def to_dict(self):
        return {"name": self.name, "expression": self.expression, "holds": self.holds}

def _vanishes(expr):
    expr = sympy.simplify(expr)
    if expr == 0:
        return True
    for sample in SAMPLES:
        value = sympy.N(expr.subs(sample), 50)
        if not value.is_number or value.is_finite is not True or abs(value) > sympy.Float("1e-40"):
            return False
    return True

def _generic(expr):
    # Keeps the branch for exponents other than -1
    return expr.replace(lambda e: isinstance(e, sympy.Piecewise), lambda e: e.args[0].expr)

def _integrate(expr, var, lo, hi):
    # Integrands are powers s^k with k > -1 on the parameter region, so antiderivatives vanish at 0
    antiderivative = _generic(sympy.integrate(expr, var))
    lower = 0 if lo == 0 else antiderivative.subs(var, lo)
    return sympy.powsimp(antiderivative.subs(var, hi) - lower, force=True)

def _average(g):
    return sympy.powsimp(sympy.expand_power_base(_integrate(g.subs(t, s), s, 0, t) / t, force=True), force=True)

def extremal_Lq():
    """Returns ``L_q(a) = I_0 - (p/(p-1))^q I_q`` for ``g_a = f (1-a) t^(-a)``, integrated symbolically."""
    g = f * (1 - a) * t ** -a
    average = _average(g)
    I0 = _integrate(sympy.expand_power_base(average ** p, force=True), t, 0, 1)
    Iq = _integrate(sympy.expand_power_base(average ** (p - q) * g ** q, force=True), t, 0, 1)
    return I0 - (p / (p - 1)) ** q * Iq

def Lq_corrected():
    return f ** p * (1 - ((1 - a) * p / (p - 1)) ** q) / (1 - a * p)

def Lq_displayed():
    # The form that omits (1-a)^p from the integral of g_a^p
    return (1 / (1 - a)) ** (p - q) * f ** p * ((1 / (1 - a)) ** q - (p / (p - 1)) ** q) / (1 - a * p)

def limit_at_inverse_p(expr):
    """The limit of ``N(a) / (1 - a p)`` as ``a -> 1/p`` when ``N(1/p) = 0``, by l'Hôpital's rule."""
    numerator = sympy.simplify(expr * (1 - a * p))
    return sympy.simplify(sympy.diff(numerator, a).subs(a, 1 / p) / sympy.diff(1 - a * p, a))

def check_Lq():
    """Confirms that integrating ``g_a`` gives the corrected closed form of ``L_q(a)`` and that it tends to
    ``-q f^p/(p-1)``. Also evaluates the limit of the displayed form, which differs."""
    expected = -q * f ** p / (p - 1)
    derived = extremal_Lq()
    corrected_limit = limit_at_inverse_p(Lq_corrected())
    displayed_limit = limit_at_inverse_p(Lq_displayed())

    return [
        SymbolicCheck("Lq_integrals", str(sympy.simplify(derived)), _vanishes(derived - Lq_corrected())),
        SymbolicCheck("Lq_limit", str(corrected_limit), _vanishes(corrected_limit - expected)),
        SymbolicCheck("Lq_displayed_limit_differs", str(displayed_limit), not _vanishes(displayed_limit - expected)),
    ]

def check_p0_inverse():
    """Confirms that ``c = (1-a)^q / (1-aq)`` has the sharp exponent ``p0 = 1/a``."""
    c = (1 - a) ** q / (1 - a * q)
    psi = c * (1 - q / p) * (p / (p - 1)) ** q
    residual = psi.subs(p, 1 / a) - 1
    return [SymbolicCheck("p0_inverse", str(sympy.simplify(psi.subs(p, 1 / a))), _vanishes(residual))]

def check_averaging_identity():
    """Confirms ``d/dt [t^(1-p) (int_0^t g)^p] = (1-p) (Ag)^p + p (Ag)^(p-1) g`` for ``g = f t^(-a)``.

    Integrating over ``(0, delta]`` gives the averaging identity.
    """
    g = f * t ** -a
    mass = _integrate(g.subs(t, s), s, 0, t)
    average = mass / t
    lhs = sympy.diff(t ** (1 - p) * mass ** p, t)
    rhs = (1 - p) * average ** p + p * average ** (p - 1) * g
    return [SymbolicCheck("averaging_identity", str(sympy.simplify(lhs)), _vanishes(lhs - rhs))]

def check_ratio_J():
    g = t ** -a
    average = _average(g)
    J0 = _integrate(sympy.expand_power_base(average ** p, force=True), t, 0, 1)
    Jq = _integrate(sympy.expand_power_base(average ** (p - q) * g ** q, force=True), t, 0, 1)
    ratio = sympy.simplify(J0 / Jq)
    return [SymbolicCheck("ratio_J", str(ratio), _vanishes(ratio - (1 / (1 - a)) ** q))]

def run_symbolic_checks():
    return check_Lq() + check_p0_inverse() + check_averaging_identity() + check_ratio_J()
