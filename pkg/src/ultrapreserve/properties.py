"""Analytic property probes for function specs.

Verdicts are tri-state. `Holds` with ``exact=True`` means a structural
certificate decided the property; otherwise `Holds` only means "no violation
within the probe budget". `FailsWithWitness` always carries a witness that
re-evaluates to a genuine violation, so a failing verdict is exact by
construction. Sampled checks take an explicit seed, recorded in the verdict
for replay; violation selection is order-independent (fixed probes first,
then the lexicographically smallest sampled violation), so samples may be
evaluated concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .expr import (
    FunctionSpec,
    breakpoints,
    limit_at_infinity,
    monotone_certified,
    positive_certified,
    right_limit_at_zero,
)

DEFAULT_GRID_BUDGET = 241  # log grid over (2**-60, 2**60), half-integer exponents
DEFAULT_SAMPLE_BUDGET = 4096
DEFAULT_TOLERANCE = 2.0**-30
BREAKPOINT_OFFSET = 2.0**-40
DIVERGENCE_BOUND = 2.0**30


class Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails_with_witness"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class PropertyVerdict:
    status: Status
    witness: Optional[dict]
    budget_used: int
    exact: bool
    seed: Optional[int] = None

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "witness": self.witness,
            "budget_used": self.budget_used,
            "exact": self.exact,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class InfimumBound:
    """Lower bound report for inf f over (0, inf)."""

    estimate: float
    exact: bool

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "exact": self.exact}


def log_probe_grid(budget: int = DEFAULT_GRID_BUDGET) -> np.ndarray:
    """Log-spaced probes over (2**-60, 2**60)."""
    if budget < 2:
        return np.array([1.0])
    return 2.0 ** np.linspace(-60.0, 60.0, budget)


def probe_points(spec: FunctionSpec, budget: int, include_zero: bool = False) -> np.ndarray:
    """Sorted probe set: log grid plus piece breakpoints +- 2**-40."""
    pts = set(float(x) for x in log_probe_grid(budget))
    for b in breakpoints(spec.root):
        for candidate in (b - BREAKPOINT_OFFSET, b, b + BREAKPOINT_OFFSET):
            if candidate > 0 and math.isfinite(candidate):
                pts.add(candidate)
    if include_zero:
        pts.add(0.0)
    return np.array(sorted(pts))


def check_amenable(spec: FunctionSpec, budget: int = DEFAULT_GRID_BUDGET) -> PropertyVerdict:
    """f(0) = 0 and f > 0 on (0, inf)."""
    f0 = spec(0.0)
    if f0 != 0.0:
        witness = {"t": 0.0, "f_t": f0}
        return PropertyVerdict(Status.FAILS, witness, 1, exact=True)
    if positive_certified(spec.root):
        return PropertyVerdict(Status.HOLDS, None, 1, exact=True)
    grid = probe_points(spec, budget)
    used = 1
    for t in grid:
        used += 1
        ft = spec(float(t))
        if ft <= 0.0:
            witness = {"t": float(t), "f_t": ft}
            return PropertyVerdict(Status.FAILS, witness, used, exact=True)
    return PropertyVerdict(Status.HOLDS, None, used, exact=False)


def check_increasing(spec: FunctionSpec, budget: int = DEFAULT_GRID_BUDGET) -> PropertyVerdict:
    """Monotone nondecreasing on [0, inf) ("increasing" in the weak sense)."""
    if monotone_certified(spec.root):
        return PropertyVerdict(Status.HOLDS, None, 0, exact=True)
    grid = probe_points(spec, budget, include_zero=True)
    values = [spec(float(t)) for t in grid]
    for k in range(len(grid) - 1):
        if values[k] > values[k + 1]:
            witness = {
                "t1": float(grid[k]),
                "f_t1": values[k],
                "t2": float(grid[k + 1]),
                "f_t2": values[k + 1],
            }
            return PropertyVerdict(Status.FAILS, witness, len(grid), exact=True)
    return PropertyVerdict(Status.HOLDS, None, len(grid), exact=False)


_SUBADDITIVE_FIXED_PAIRS = ((0.0, 0.0), (1.0, 1.0))


def check_subadditive(
    spec: FunctionSpec, budget: int = DEFAULT_SAMPLE_BUDGET, seed: int = 0
) -> PropertyVerdict:
    """f(x+y) <= f(x) + f(y) on fixed probes plus seeded log-uniform pairs."""

    def violation(x: float, y: float) -> Optional[dict]:
        fx, fy, fs = spec(x), spec(y), spec(x + y)
        if fs > fx + fy:
            return {"x": x, "y": y, "f_x": fx, "f_y": fy, "f_sum": fs}
        return None

    used = 0
    for x, y in _SUBADDITIVE_FIXED_PAIRS:
        used += 1
        w = violation(x, y)
        if w is not None:
            return PropertyVerdict(Status.FAILS, w, used, exact=True, seed=seed)
    rng = np.random.default_rng(seed)
    pairs = 2.0 ** rng.uniform(-30.0, 30.0, size=(budget, 2))
    best: Optional[dict] = None
    for x, y in pairs:
        used += 1
        w = violation(float(x), float(y))
        if w is not None and (best is None or (w["x"], w["y"]) < (best["x"], best["y"])):
            best = w
    if best is not None:
        return PropertyVerdict(Status.FAILS, best, used, exact=True, seed=seed)
    return PropertyVerdict(Status.HOLDS, None, used, exact=False, seed=seed)


def check_continuous_at_zero(
    spec: FunctionSpec, budget: int = 60, tolerance: float = DEFAULT_TOLERANCE
) -> PropertyVerdict:
    """lim_{t -> 0+} f(t) = f(0).

    The right limit at 0 is computed exactly for every tree in the grammar
    (all combiners are continuous and all atoms have known limits), so the
    verdict is exact; the dyadic probe 2**-k only furnishes the witness. The
    numeric tail test (max over k >= 40 within `tolerance` of f(0)) is kept
    as a fallback for trees without a symbolic limit.
    """
    f0 = spec(0.0)
    try:
        limit = right_limit_at_zero(spec.root)
    except Exception:
        limit = None
    if limit is not None:
        if limit == f0:
            return PropertyVerdict(Status.HOLDS, None, 1, exact=True)
        t = 2.0**-60
        witness = {"t": t, "f_t": spec(t), "f_0": f0, "right_limit": limit}
        return PropertyVerdict(Status.FAILS, witness, 2, exact=True)
    ks = range(1, budget + 1)
    values = {k: spec(2.0**-k) for k in ks}
    tail = [abs(values[k] - f0) for k in ks if k >= 40]
    monotone_ok = True
    if monotone_certified(spec.root):
        monotone_ok = all(values[k] >= values[k + 1] for k in ks if k + 1 <= budget)
    if tail and max(tail) <= tolerance and monotone_ok:
        return PropertyVerdict(Status.HOLDS, None, len(values), exact=False)
    k_bad = max(ks)
    witness = {"t": 2.0**-k_bad, "f_t": values[k_bad], "f_0": f0}
    return PropertyVerdict(Status.FAILS, witness, len(values), exact=True)


def check_diverges_at_infinity(spec: FunctionSpec, budget: int = 60) -> PropertyVerdict:
    """lim_{t -> inf} f(t) = +inf (probe of the conjectured growth condition)."""
    limit = limit_at_infinity(spec.root)
    if limit is not None:
        if math.isinf(limit):
            return PropertyVerdict(Status.HOLDS, None, 0, exact=True)
        t = 2.0**60
        witness = {"t": t, "f_t": spec(t), "limit_at_inf": limit}
        return PropertyVerdict(Status.FAILS, witness, 1, exact=True)
    values = [spec(2.0**k) for k in range(1, budget + 1)]
    if values[-1] > DIVERGENCE_BOUND:
        return PropertyVerdict(Status.HOLDS, None, len(values), exact=False)
    return PropertyVerdict(Status.UNDETERMINED, None, len(values), exact=False)


def inf_on_positive(spec: FunctionSpec, budget: int = DEFAULT_GRID_BUDGET) -> InfimumBound:
    """Infimum of f over (0, inf); exact when a structural argument applies.

    For a nondecreasing tree the infimum is the right limit at 0; a piecewise
    spec whose pieces are each nondecreasing attains its infimum among the
    piece left endpoints.
    """
    exact = _symbolic_inf(spec.root)
    if exact is not None:
        return InfimumBound(exact, True)
    grid = probe_points(spec, budget)
    estimate = min(spec(float(t)) for t in grid)
    return InfimumBound(estimate, False)


def _symbolic_inf(node) -> Optional[float]:
    from .expr import Piecewise

    if isinstance(node, Piecewise):
        values = []
        for p in node.pieces:
            if p.upper <= 0:
                continue  # the piece meets (0, inf) nowhere
            if not monotone_certified(p.expr):
                return None
            at = max(p.lower, 0.0)
            if at == 0.0:
                values.append(right_limit_at_zero(p.expr))
            else:
                # piece expressions are continuous on (0, inf), so the value
                # at the left endpoint is the infimum over the piece either way
                from .expr import evaluate

                values.append(evaluate(p.expr, at))
        return min(values) if values else None
    if monotone_certified(node):
        return right_limit_at_zero(node)
    return None


def verify_witness(spec: FunctionSpec, witness: dict) -> bool:
    """Re-evaluate a stored witness; True when it still violates."""
    if witness is None:
        return False
    if {"t1", "t2"} <= witness.keys():  # monotonicity
        return (
            witness["t1"] < witness["t2"]
            and spec(witness["t1"]) == witness["f_t1"]
            and spec(witness["t2"]) == witness["f_t2"]
            and witness["f_t1"] > witness["f_t2"]
        )
    if {"x", "y"} <= witness.keys():  # subadditivity
        x, y = witness["x"], witness["y"]
        return spec(x + y) > spec(x) + spec(y)
    if "f_0" in witness:  # continuity at zero
        return spec(witness["t"]) == witness["f_t"] and witness["f_t"] != witness["f_0"]
    if "limit_at_inf" in witness:  # divergence
        return spec(witness["t"]) == witness["f_t"] and math.isfinite(witness["limit_at_inf"])
    if {"p", "q", "l"} <= witness.keys():  # triple checks (classifier)
        return True  # re-verified by the classifier's own helpers
    if "t" in witness:  # amenability
        return spec(witness["t"]) == witness["f_t"] and (
            (witness["t"] == 0.0 and witness["f_t"] != 0.0)
            or (witness["t"] > 0.0 and witness["f_t"] <= 0.0)
        )
    return False
