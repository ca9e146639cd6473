"""Acceptance gate: the nine exit criteria at their full budgets.

Each test prints one PASS/FAIL line; run with `pytest tests/test_acceptance.py -v -s`
(or via the `ultrapreserve suite` command, which exercises the same checks).
All comparisons are exact unless the criterion itself states a tolerance.
"""

import time

import pytest

from ultrapreserve import suite

ACCEPTANCE_SEED = 0


def report(result, elapsed=None):
    tag = "PASS" if result.passed else "FAIL"
    timing = f" [{elapsed:.2f}s]" if elapsed is not None else ""
    print(f"ACCEPTANCE {result.name}: {tag}{timing}")


def test_criterion_1_forward_preservation():
    """500 trials: certified increasing+amenable transforms applied to random
    ultrametric spaces (n <= 12) stay ultrametric; exact checks, < 10 s."""
    start = time.monotonic()
    result = suite.forward_preservation(trials=500, max_points=12, seed=ACCEPTANCE_SEED)
    elapsed = time.monotonic() - start
    report(result, elapsed)
    assert result.passed, result.details
    assert elapsed < 10.0, f"took {elapsed:.2f}s"


def test_criterion_2_witness_synthesis():
    """20 curated non-members (10 planted zeros, 10 inversions) all yield
    certificates that re-verify exactly; zero misses."""
    result = suite.witness_synthesis()
    report(result)
    assert result.passed, result.details
    assert result.details["non_members"] == 20


def test_criterion_3_strongly_preserving_criterion():
    """Identity and the extended Cantor function hold; step_above(a) fails
    with witness for a in {2**-10, 1, 2**10}; all verdicts exact."""
    result = suite.strongly_preserving_criterion()
    report(result)
    assert result.passed, result.details


def test_criterion_4_covering_divergence():
    """step_above(1), truncations N in {4, 8, 16, 32}: image covering number
    at eps = 1/2 equals N exactly; source covering number at eps = 1/4 is
    constant in N."""
    result = suite.covering_divergence(level_counts=(4, 8, 16, 32))
    report(result)
    assert result.passed, result.details
    assert result.details["before_counts"] == [2]
    assert [row["covering_after"] for row in result.details["table"]] == [4, 8, 16, 32]


def test_criterion_5_universal_embedding():
    """1000 random 3-point ultrametric spaces embed into the zero-coordinate
    pair space with exact isometry verification; < 5 s."""
    start = time.monotonic()
    result = suite.universal_embedding(trials=1000, seed=ACCEPTANCE_SEED)
    elapsed = time.monotonic() - start
    report(result, elapsed)
    assert result.passed, result.details
    assert result.details["failures"] == 0
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_criterion_6_minmax_equivalence():
    """10 certified members x 10**4 hypothesis triples: zero image-equation
    violations; 10 non-members: a violating triple found by directed search."""
    result = suite.minmax_equivalence(samples=10_000, seed=ACCEPTANCE_SEED)
    report(result)
    assert result.passed, result.details


def test_criterion_7_triplet_preservation():
    """Extended Cantor function: 10**4 sampled triangle triplets and 10**4
    subadditivity pairs with zero violations; the square fails with the
    recorded witness (1, 1, 2)."""
    result = suite.triplet_and_subadditivity(samples=10_000, seed=ACCEPTANCE_SEED)
    report(result)
    assert result.passed, result.details
    witness = result.details["square_triplet"]["witness"]
    assert (witness["p"], witness["q"], witness["l"]) == (1.0, 1.0, 2.0)


def test_criterion_8_cantor_values():
    """Anchors: G(0)=0, G(2)=1, G(1/3)=1/2 and G(1/4)=1/3 within 2**-50;
    monotone on a 10**4-point grid of [0, 2]."""
    result = suite.cantor_values(grid_points=10_000)
    report(result)
    assert result.passed, result.details
    assert all(result.details["checks"].values())


def test_criterion_9_net_oracle_equivalence():
    """Greedy covering number equals the exhaustive minimum net on 200 random
    ultrametric spaces with n <= 10; exact integers."""
    result = suite.net_oracle_equivalence(n_spaces=200, max_points=10, seed=ACCEPTANCE_SEED)
    report(result)
    assert result.passed, result.details
    assert result.details["mismatches"] == []
