"""Expression evaluation, the extended Cantor function, and tree analyses.

The Cantor expectations are frozen from an exact-rational digit oracle
(`cantor_oracle` below), which extracts ternary digits of the intended
rational with integer arithmetic and never touches the float code path.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ultrapreserve.expr import (
    CantorHat,
    Const,
    Difference,
    FunctionSpec,
    Max,
    Min,
    NegativeInput,
    Piece,
    Piecewise,
    Power,
    Product,
    StepAbove,
    Sum,
    Var,
    cantor_hat,
    evaluate,
    limit_at_infinity,
    monotone_certified,
    positive_certified,
    right_limit_at_zero,
    to_text,
)


def cantor_oracle(x: Fraction, digits: int = 64) -> Fraction:
    """Cantor ternary function by exact rational digit extraction."""
    if x >= 1:
        return Fraction(1)
    if x <= 0:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    acc = Fraction(0)
    for k in range(1, digits + 1):
        num *= 3
        d, num = divmod(num, den)
        if d == 1:
            return acc + Fraction(1, 2**k)
        acc += Fraction(d // 2, 2**k)
        if num == 0:
            break
    return acc


# oracle sanity: the two headline rationals
assert cantor_oracle(Fraction(1, 3)) == Fraction(1, 2)
assert abs(cantor_oracle(Fraction(1, 4)) - Fraction(1, 3)) < Fraction(1, 2**60)


class TestCantorHat:
    def test_anchor_values(self):
        assert cantor_hat(0.0) == 0.0
        assert cantor_hat(1.0) == 1.0
        assert cantor_hat(2.0) == 1.0
        assert cantor_hat(100.0) == 1.0

    def test_one_third_is_one_half(self):
        # frozen from cantor_oracle(Fraction(1, 3)) == 1/2
        assert abs(cantor_hat(1.0 / 3.0) - 0.5) <= 2.0**-50

    def test_one_quarter_is_one_third(self):
        # frozen from cantor_oracle(Fraction(1, 4)); exact digits cycle 0,2
        assert abs(cantor_hat(0.25) - 1.0 / 3.0) <= 2.0**-50

    def test_plateau_values(self):
        # G is 1/2 on [1/3, 2/3] and 1/4 on [1/9, 2/9]
        assert cantor_hat(0.5) == 0.5
        assert cantor_hat(2.0 / 3.0) == 0.5
        assert abs(cantor_hat(1.0 / 9.0) - 0.25) <= 2.0**-50
        assert abs(cantor_hat(0.2) - 0.25) <= 2.0**-50

    def test_negative_input_rejected(self):
        with pytest.raises(NegativeInput):
            cantor_hat(-0.5)

    def test_matches_rational_oracle_on_dyadics(self):
        import numpy as np

        rng = np.random.default_rng(20240811)
        ks = rng.integers(1, 2**40, size=200)
        for k in ks:
            x = float(k) / 2.0**40
            expected = float(cantor_oracle(Fraction(int(k), 2**40)))
            assert abs(cantor_hat(x) - expected) <= 2.0**-28

    def test_symmetry_on_dyadic_grid(self):
        # G(x) + G(1 - x) = 1; dyadic x keeps 1 - x exactly representable
        import numpy as np

        rng = np.random.default_rng(7)
        ks = rng.integers(1, 2**40, size=1000)
        for k in ks:
            x = float(k) / 2.0**40
            assert abs(cantor_hat(x) + cantor_hat(1.0 - x) - 1.0) <= 2.0**-50

    def test_monotone_on_grid(self):
        import numpy as np

        grid = np.linspace(0.0, 2.0, 10_000)
        values = [cantor_hat(float(t)) for t in grid]
        assert all(a <= b for a, b in zip(values, values[1:]))


class TestEvaluate:
    def test_identity(self):
        assert evaluate(Var(), 7.0) == 7.0

    def test_arithmetic(self):
        node = Sum(Product(Const(2.0), Var()), Const(1.0))  # 2t + 1
        assert evaluate(node, 3.0) == 7.0
        assert evaluate(Difference(Var(), Const(1.0)), 0.5) == -0.5
        assert evaluate(Power(Var(), 0.5), 4.0) == 2.0
        assert evaluate(Min(Var(), Const(1.0)), 5.0) == 1.0
        assert evaluate(Max(Var(), Const(1.0)), 5.0) == 5.0

    def test_step_above(self):
        node = StepAbove(3.0)
        assert evaluate(node, 0.0) == 0.0
        assert evaluate(node, 1e-300) == 3.0

    def test_piecewise_dispatch(self):
        node = Piecewise(
            (
                Piece(0.0, 1.0, True, False, Var()),
                Piece(1.0, math.inf, True, False, Const(5.0)),
            )
        )
        assert evaluate(node, 0.5) == 0.5
        assert evaluate(node, 1.0) == 5.0
        assert evaluate(node, 100.0) == 5.0

    def test_overflow_saturates(self):
        assert evaluate(Power(Var(), 100.0), 2.0**60) == math.inf

    def test_spec_callable_rejects_negative(self):
        spec = FunctionSpec.from_node(Var())
        with pytest.raises(NegativeInput):
            spec(-1.0)

    def test_determinism_bit_for_bit(self):
        spec = FunctionSpec.from_node(Sum(CantorHat(), Power(Var(), 0.5)))
        values = [spec(0.37) for _ in range(5)]
        assert len(set(values)) == 1


class TestAnalyses:
    def test_right_limit_atoms(self):
        assert right_limit_at_zero(Var()) == 0.0
        assert right_limit_at_zero(Const(2.0)) == 2.0
        assert right_limit_at_zero(CantorHat()) == 0.0
        assert right_limit_at_zero(StepAbove(3.0)) == 3.0

    def test_right_limit_composite(self):
        # t + step_above(1): limit 1, value at 0 is 0
        node = Sum(Var(), StepAbove(1.0))
        assert right_limit_at_zero(node) == 1.0
        assert evaluate(node, 0.0) == 0.0

    def test_right_limit_piecewise_skips_degenerate_piece(self):
        node = Piecewise(
            (
                Piece(0.0, 0.0, True, True, Const(0.0)),
                Piece(0.0, math.inf, False, False, Sum(Var(), Const(1.0))),
            )
        )
        assert right_limit_at_zero(node) == 1.0

    def test_limit_at_infinity(self):
        assert limit_at_infinity(Var()) == math.inf
        assert limit_at_infinity(CantorHat()) == 1.0
        assert limit_at_infinity(Min(Var(), Const(100.0))) == 100.0
        assert limit_at_infinity(Sum(Var(), CantorHat())) == math.inf
        assert limit_at_infinity(Difference(Var(), Var())) is None

    def test_monotone_certificate(self):
        assert monotone_certified(Sum(Var(), Product(Var(), Var())))
        assert monotone_certified(Min(CantorHat(), Var()))
        assert not monotone_certified(Difference(Var(), Const(1.0)))
        assert not monotone_certified(
            Piecewise((Piece(0.0, math.inf, True, False, Var()),))
        )

    def test_positive_certificate(self):
        assert positive_certified(Var())
        assert positive_certified(Product(Const(2.0), Var()))
        assert positive_certified(StepAbove(1.0))
        assert not positive_certified(Const(0.0))
        assert not positive_certified(StepAbove(0.0))
        assert not positive_certified(Max(Const(0.0), Difference(Var(), Const(1.0))))


@given(
    st.floats(min_value=0.0, max_value=4.0, allow_nan=False),
    st.floats(min_value=0.0, max_value=4.0, allow_nan=False),
)
def test_cantor_weakly_monotone(a, b):
    lo, hi = min(a, b), max(a, b)
    assert cantor_hat(lo) <= cantor_hat(hi)


def test_to_text_round_trips_structure():
    from ultrapreserve.parser import parse_function_spec

    node = Max(Const(0.0), Difference(Var(), Const(1.0)))
    assert parse_function_spec(to_text(node)).root == node
