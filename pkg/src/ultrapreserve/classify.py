"""Membership verdicts for the preservation classes.

A transform preserves ultrametric structure iff it is increasing (weakly) and
amenable; it additionally preserves the induced topology — equivalently
compactness, total boundedness, compact-to-totally-bounded transport, and
non-uniform-discreteness — iff it is also continuous at 0. Increasing plus
subadditive certifies joint metric-and-ultrametric preservation. The two
functional formulations (triangle-triplet transport and the min-max equation
on triples whose two largest entries agree) are checked by seeded sampling
with fixed degenerate probes always included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .expr import FunctionSpec
from .properties import (
    DEFAULT_GRID_BUDGET,
    DEFAULT_SAMPLE_BUDGET,
    DEFAULT_TOLERANCE,
    InfimumBound,
    PropertyVerdict,
    Status,
    check_amenable,
    check_continuous_at_zero,
    check_increasing,
    check_subadditive,
    inf_on_positive,
)

# Fixed probes prepended to every sampled triple check; the degenerate
# all-equal and all-zero triples exercise the amenability edge cases, and
# (1, 1, 2) is the canonical flat triangle.
FIXED_TRIANGLE_TRIPLES = ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0), (1.0, 1.0, 2.0))
FIXED_EQUAL_TRIPLES = ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))

_SEED_MIX = 0x9E3779B97F4A7C15  # splitmix64 increment; stable sub-seed derivation


def derive_seed(seed: int, lane: int) -> int:
    return (seed + _SEED_MIX * (lane + 1)) % 2**64


def combine_verdicts(*verdicts: PropertyVerdict) -> PropertyVerdict:
    """Conjunction: first failure wins and propagates its witness."""
    budget = sum(v.budget_used for v in verdicts)
    seed = next((v.seed for v in verdicts if v.seed is not None), None)
    for v in verdicts:
        if v.fails:
            return PropertyVerdict(Status.FAILS, v.witness, budget, v.exact, seed)
    if any(v.status is Status.UNDETERMINED for v in verdicts):
        return PropertyVerdict(Status.UNDETERMINED, None, budget, False, seed)
    exact = all(v.exact for v in verdicts)
    return PropertyVerdict(Status.HOLDS, None, budget, exact, seed)


def classify_ultrametric_preserving(
    spec: FunctionSpec, grid_budget: int = DEFAULT_GRID_BUDGET
) -> PropertyVerdict:
    """Increasing and amenable — the full criterion for preserving the strong
    triangle inequality on every space."""
    return combine_verdicts(
        check_increasing(spec, grid_budget), check_amenable(spec, grid_budget)
    )


def classify_strongly_preserving(
    spec: FunctionSpec,
    grid_budget: int = DEFAULT_GRID_BUDGET,
    tolerance: float = DEFAULT_TOLERANCE,
) -> PropertyVerdict:
    """Increasing, amenable, and continuous at 0 — preserves the topology."""
    return combine_verdicts(
        classify_ultrametric_preserving(spec, grid_budget),
        check_continuous_at_zero(spec, tolerance=tolerance),
    )


def classify_metric_preserving_sufficient(
    spec: FunctionSpec, budget: int = DEFAULT_SAMPLE_BUDGET, seed: int = 0
) -> PropertyVerdict:
    """Increasing and subadditive: certifies the transform preserves metrics
    and ultrametrics simultaneously."""
    return combine_verdicts(
        check_increasing(spec), check_subadditive(spec, budget, seed)
    )


def _sample_triangle_triples(rng: np.random.Generator, count: int) -> np.ndarray:
    """Triples (p, q, l) with 2*max <= sum, by rejection over log-uniform draws."""
    rows = []
    have = 0
    while have < count:
        batch = 2.0 ** rng.uniform(-30.0, 30.0, size=(max(count, 1024), 3))
        mask = 2.0 * batch.max(axis=1) <= batch.sum(axis=1)
        good = batch[mask]
        rows.append(good)
        have += len(good)
    return np.concatenate(rows)[:count]


def _sample_two_largest_equal(rng: np.random.Generator, count: int) -> np.ndarray:
    """Triples whose two largest entries agree, generated directly: the
    constraint set is thin near degenerate triples and rejection covers it
    poorly, so (a, b, b) with a <= b is drawn and then permuted."""
    pairs = 2.0 ** rng.uniform(-30.0, 30.0, size=(count, 2))
    a = pairs.min(axis=1)
    b = pairs.max(axis=1)
    triples = np.column_stack([a, b, b])
    return rng.permuted(triples, axis=1)


def _triple_violation(spec, p, q, l, check) -> Optional[dict]:
    fp, fq, fl = spec(p), spec(q), spec(l)
    if check(fp, fq, fl):
        return None
    return {"p": p, "q": q, "l": l, "f_p": fp, "f_q": fq, "f_l": fl}


def _scan_triples(spec, fixed, sampled, check, seed) -> PropertyVerdict:
    used = 0
    for p, q, l in fixed:
        used += 1
        w = _triple_violation(spec, p, q, l, check)
        if w is not None:
            return PropertyVerdict(Status.FAILS, w, used, exact=True, seed=seed)
    best = None
    for p, q, l in sampled:
        used += 1
        w = _triple_violation(spec, float(p), float(q), float(l), check)
        if w is not None:
            key = (w["p"], w["q"], w["l"])
            if best is None or key < (best["p"], best["q"], best["l"]):
                best = w
    if best is not None:
        return PropertyVerdict(Status.FAILS, best, used, exact=True, seed=seed)
    return PropertyVerdict(Status.HOLDS, None, used, exact=False, seed=seed)


def triangle_triplet_holds(fp: float, fq: float, fl: float) -> bool:
    return 2.0 * max(fp, fq, fl) <= fp + fq + fl


def minmax_equation_holds(fp: float, fq: float, fl: float) -> bool:
    return min(max(fp, fq), max(fq, fl), max(fp, fl)) == max(fp, fq, fl)


def check_triplet_preservation(
    spec: FunctionSpec, samples: int = DEFAULT_SAMPLE_BUDGET, seed: int = 0
) -> PropertyVerdict:
    """Does f carry triangle triplets (2*max <= sum) to triangle triplets?"""
    rng = np.random.default_rng(seed)
    sampled = _sample_triangle_triples(rng, samples)
    return _scan_triples(spec, FIXED_TRIANGLE_TRIPLES, sampled, triangle_triplet_holds, seed)


def check_minmax_equation(
    spec: FunctionSpec, samples: int = DEFAULT_SAMPLE_BUDGET, seed: int = 0
) -> PropertyVerdict:
    """On triples whose two largest entries agree, the image triple must again
    satisfy min-of-pairwise-maxes = max. For amenable f this equation holds on
    all such triples iff f preserves ultrametrics."""
    rng = np.random.default_rng(seed)
    sampled = _sample_two_largest_equal(rng, samples)
    return _scan_triples(spec, FIXED_EQUAL_TRIPLES, sampled, minmax_equation_holds, seed)


def find_minmax_violation(
    spec: FunctionSpec, samples: int = DEFAULT_SAMPLE_BUDGET, seed: int = 0
) -> Optional[dict]:
    """Sampled min-max check, escalated by a directed probe at an inversion.

    When sampling misses, any isosceles counterexample (c1 < c2 with
    0 < f(c2) < f(c1)) yields the violating triple (c1, c2, c2) directly.
    """
    verdict = check_minmax_equation(spec, samples, seed)
    if verdict.fails:
        return verdict.witness
    from .witnesses import witness_not_ultrametric_preserving

    cert = witness_not_ultrametric_preserving(spec)
    if cert is not None and cert.kind == "isosceles_inversion":
        c1, c2 = cert.parameters["c1"], cert.parameters["c2"]
        return _triple_violation(spec, c1, c2, c2, minmax_equation_holds)
    return None


# Classes answered by the strongly-preserving verdict; the five membership
# questions coincide.
EQUAL_CLASS_NOTES = {
    "strongly_preserving_equivalent_to": [
        "compactness_preserving",
        "total_boundedness_preserving",
        "compact_to_totally_bounded_preserving",
        "non_uniform_discreteness_preserving",
    ],
    "criterion": "amenable + increasing + continuous_at_zero",
}


@dataclass(frozen=True)
class ClassificationReport:
    function: str
    ultrametric_preserving: PropertyVerdict
    strongly_preserving: PropertyVerdict
    metric_preserving_sufficient: PropertyVerdict
    triplet_preservation: PropertyVerdict
    minmax_equation: PropertyVerdict
    inf_on_positive: InfimumBound
    seed: int
    budget: int
    notes: dict = field(default_factory=lambda: dict(EQUAL_CLASS_NOTES))

    def to_json(self) -> dict:
        from . import __version__

        return {
            "tool": "ultrapreserve",
            "version": __version__,
            "function": self.function,
            "verdicts": {
                "ultrametric_preserving": self.ultrametric_preserving.to_json(),
                "strongly_preserving": self.strongly_preserving.to_json(),
                "metric_preserving_sufficient": self.metric_preserving_sufficient.to_json(),
                "triplet_preservation": self.triplet_preservation.to_json(),
                "minmax_equation": self.minmax_equation.to_json(),
            },
            "inf_on_positive": self.inf_on_positive.to_json(),
            "seed": self.seed,
            "budget": self.budget,
            "notes": self.notes,
        }


def classification_report(
    spec: FunctionSpec,
    seed: int = 0,
    budget: int = DEFAULT_SAMPLE_BUDGET,
    grid_budget: int = DEFAULT_GRID_BUDGET,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ClassificationReport:
    """Run every classifier with sub-seeds derived from one shared seed and
    enforce the cross-verdict consistency invariants."""
    pu = classify_ultrametric_preserving(spec, grid_budget)
    pt = classify_strongly_preserving(spec, grid_budget, tolerance)
    pm = classify_metric_preserving_sufficient(spec, budget, derive_seed(seed, 0))
    triplet = check_triplet_preservation(spec, budget, derive_seed(seed, 1))
    minmax = check_minmax_equation(spec, budget, derive_seed(seed, 2))
    bound = inf_on_positive(spec, grid_budget)
    if pt.holds and not pu.holds:
        raise RuntimeError("inconsistent report: topology preserved without structure")
    if pu.holds and bound.exact and bound.estimate == 0.0 and not pt.holds:
        raise RuntimeError("inconsistent report: vanishing infimum but discontinuous at 0")
    return ClassificationReport(
        function=spec.source,
        ultrametric_preserving=pu,
        strongly_preserving=pt,
        metric_preserving_sufficient=pm,
        triplet_preservation=triplet,
        minmax_equation=minmax,
        inf_on_positive=bound,
        seed=seed,
        budget=budget,
    )
