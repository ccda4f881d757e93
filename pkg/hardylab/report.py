import math, json, frozendict
import numpy as np
from dataclasses import dataclass, field, replace
from .tree_util import tree_map
from .param import DEFAULT_TOL

PASS = "pass"
FAIL = "fail"
DIVERGENT = "divergent"

ROUNDING = 64 * np.finfo("float64").eps

@dataclass(frozen=True)
class IneqReport:
    """Uniform record of one inequality or identity check.

    ``margin`` is ``rhs - lhs`` for inequalities and the residual for identities. ``budget`` is the error allowance the
    margin is compared against.
    """
    op: str
    params: frozendict.frozendict
    lhs: float
    rhs: float
    margin: float
    budget: float
    status: str
    seed: int = None
    rule: str = "inequality"
    details: frozendict.frozendict = field(default_factory=frozendict.frozendict)

    @property
    def passed(self):
        return self.status == PASS

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def to_dict(self):
        d = {
            "op": self.op,
            "params": dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "budget": self.budget,
            "status": self.status,
            "rule": self.rule,
        }
        if not self.seed is None:
            d["seed"] = self.seed
        if len(self.details) > 0:
            d["details"] = self.details
        return to_jsonable(d)

    def to_json(self):
        return dumps(self.to_dict())

def _jsonable_leaf(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x

def to_jsonable(tree):
    """Converts a tree of reports, dicts, lists and numbers into plain JSON values. Non-finite floats become strings."""
    def leaf(x):
        if hasattr(x, "to_dict"):
            return x.to_dict()
        return _jsonable_leaf(x)
    return tree_map(leaf, tree, is_leaf=lambda x: hasattr(x, "to_dict"))

def dumps(tree):
    # Sorted keys keep the output byte-identical across runs
    return json.dumps(to_jsonable(tree), indent=2, sort_keys=True)

def make_report(op, params, lhs, rhs, budget=0.0, tol=DEFAULT_TOL, identity=False, details=None, strict=False):
    """Builds an :class:`IneqReport` from both sides of a check.

    For an inequality ``lhs <= rhs`` the margin is ``rhs - lhs`` and the check passes iff ``margin >= -allowance``.
    For an identity ``lhs == rhs`` the margin is the residual ``lhs - rhs`` and the check passes iff
    ``|margin| <= allowance``. The allowance is ``budget + tol * max(1, |lhs|)``. Non-finite sides yield the status
    ``divergent``.

    Args:
        op: Name of the check.
        params: Parameters of the check.
        lhs: Left-hand side.
        rhs: Right-hand side.
        budget: Error budget of the computed sides. Defaults to ``0``.
        tol: Relative tolerance. Defaults to ``1e-9``.
        identity: Whether the check is an identity. Defaults to ``False``.
        details: Additional values to store in the report.
        strict: Whether an inequality must hold with a margin exceeding the allowance. Defaults to ``False``.
    """
    lhs, rhs, budget = float(lhs), float(rhs), float(budget)
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        margin = math.nan if (math.isinf(lhs) and math.isinf(rhs)) else (rhs - lhs if not identity else lhs - rhs)
        status = DIVERGENT
    else:
        allowance = budget + tol * max(1.0, abs(lhs))
        if identity:
            margin = lhs - rhs
            status = PASS if abs(margin) <= allowance else FAIL
        else:
            margin = rhs - lhs
            if strict:
                status = PASS if margin > allowance else FAIL
            else:
                status = PASS if margin >= -allowance else FAIL
    params = frozendict.frozendict({k: _jsonable_leaf(v) for k, v in (params or {}).items()})
    details = frozendict.frozendict(details or {})
    return IneqReport(op=op, params=params, lhs=lhs, rhs=rhs, margin=margin, budget=budget, status=status,
        rule="identity" if identity else "inequality", details=details)

def worst(reports):
    """Returns the report with the smallest normalized margin, preferring divergent and failing reports."""
    reports = list(reports)
    if len(reports) == 0:
        raise ValueError("Expected at least one report")
    order = {DIVERGENT: 0, FAIL: 1, PASS: 2}
    def key(r):
        margin = r.margin if not math.isnan(r.margin) else -math.inf
        if r.rule == "identity":
            margin = -abs(margin)
        return (order[r.status], margin / max(1.0, abs(r.lhs)) if math.isfinite(r.lhs) else -math.inf)
    return min(reports, key=key)

def all_passed(reports):
    return all(r.passed for r in reports)
