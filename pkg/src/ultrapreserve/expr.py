"""Expression trees for distance transforms f : [0, inf) -> [0, inf).

The node set is deliberately small: nonnegative constants, the variable t,
sums, differences, products, powers with a fixed nonnegative exponent, binary
min/max, the extended Cantor step function, positive jump functions, and
piecewise definitions over a partition of [0, inf).

Trees are immutable after construction; evaluation and all analyses are pure,
so specs can be shared freely between concurrent tasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

INF = math.inf

# Ternary digits scanned by the Cantor evaluator. Beyond 64 digits the input
# resolution of a double is long exhausted; the truncation error is < 2**-64.
CANTOR_DIGITS = 64


class FunctionSpecError(ValueError):
    """Base class for parse- and evaluation-time failures of function specs."""


class NegativeInput(FunctionSpecError):
    def __init__(self, t: float):
        super().__init__(f"function specs are defined on [0, inf); got t = {t!r}")
        self.t = t


class DomainGap(FunctionSpecError):
    """Piecewise pieces fail to form a partition of [0, inf)."""


# ---------------------------------------------------------------------------
# Node types


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    """The single free variable t."""


@dataclass(frozen=True)
class Sum:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Difference:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Product:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: float


@dataclass(frozen=True)
class Min:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Max:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class CantorHat:
    """Extended Cantor function: ternary Cantor function on [0,1], 1 above."""


@dataclass(frozen=True)
class StepAbove:
    """0 at t = 0, the constant `height` on (0, inf)."""

    height: float


@dataclass(frozen=True)
class Piece:
    lower: float
    upper: float
    closed_lower: bool
    closed_upper: bool
    expr: "Node"

    def contains(self, t: float) -> bool:
        lo_ok = t >= self.lower if self.closed_lower else t > self.lower
        hi_ok = t <= self.upper if self.closed_upper else t < self.upper
        return lo_ok and hi_ok

    def is_empty(self) -> bool:
        if self.lower > self.upper:
            return True
        if self.lower == self.upper:
            return not (self.closed_lower and self.closed_upper)
        return False


@dataclass(frozen=True)
class Piecewise:
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        _validate_partition(self.pieces)


Node = Union[
    Const, Var, Sum, Difference, Product, Power, Min, Max, CantorHat, StepAbove, Piecewise
]


def _validate_partition(pieces: tuple[Piece, ...]) -> None:
    """Pieces must be sorted, disjoint, and cover [0, inf) exactly."""
    if not pieces:
        raise DomainGap("piecewise spec has no pieces")
    for p in pieces:
        if p.lower < 0:
            raise DomainGap(f"piece starts below 0: {p.lower}")
        if p.is_empty():
            raise DomainGap(f"empty piece [{p.lower}, {p.upper}]")
        if math.isinf(p.upper) and p.closed_upper:
            raise DomainGap("unbounded piece must be open at inf")
    first = pieces[0]
    if first.lower != 0 or not first.closed_lower:
        raise DomainGap("pieces must start with a piece containing 0")
    for prev, cur in zip(pieces, pieces[1:]):
        if prev.upper != cur.lower:
            raise DomainGap(
                f"gap or overlap between pieces at {prev.upper} vs {cur.lower}"
            )
        if prev.closed_upper == cur.closed_lower:
            which = "both cover" if prev.closed_upper else "neither covers"
            raise DomainGap(f"{which} the boundary point {prev.upper}")
    if not math.isinf(pieces[-1].upper):
        raise DomainGap(f"pieces end at {pieces[-1].upper}, not inf")


# ---------------------------------------------------------------------------
# The extended Cantor function


def cantor_hat(t: float) -> float:
    """Extended Cantor function: G(t) on [0, 1], constant 1 on (1, inf).

    Ternary digits of t are extracted by repeated multiplication by 3 (round
    to nearest); the usual digit-halving rule maps them to binary digits of
    the result, stopping at the first ternary digit equal to 1. The rounding
    in the digit loop keeps near-triadic inputs (such as float(1/3)) on the
    value of the intended rational; the 64-digit cap bounds the truncation
    error by 2**-64.
    """
    if t < 0:
        raise NegativeInput(t)
    if t >= 1.0:
        return 1.0
    if t == 0.0:
        return 0.0
    acc = 0
    x = t
    for k in range(1, CANTOR_DIGITS + 1):
        x *= 3.0
        d = int(x)
        if d > 2:  # only reachable if rounding pushes x to exactly 3.0
            d = 2
        x -= d
        if d == 1:
            acc = (acc << 1) | 1
            return math.ldexp(acc, -k)
        acc = (acc << 1) | (d >> 1)
        if x == 0.0:
            return math.ldexp(acc, -k)
    return math.ldexp(acc, -CANTOR_DIGITS)


# ---------------------------------------------------------------------------
# Evaluation


def _pow(base: float, exponent: float) -> float:
    try:
        return math.pow(base, exponent)
    except OverflowError:
        return INF


def evaluate(node: Node, t: float) -> float:
    """Value of the expression at t >= 0. Overflow saturates to +inf."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Sum):
        return evaluate(node.left, t) + evaluate(node.right, t)
    if isinstance(node, Difference):
        return evaluate(node.left, t) - evaluate(node.right, t)
    if isinstance(node, Product):
        return evaluate(node.left, t) * evaluate(node.right, t)
    if isinstance(node, Power):
        return _pow(evaluate(node.base, t), node.exponent)
    if isinstance(node, Min):
        return min(evaluate(node.left, t), evaluate(node.right, t))
    if isinstance(node, Max):
        return max(evaluate(node.left, t), evaluate(node.right, t))
    if isinstance(node, CantorHat):
        return cantor_hat(t)
    if isinstance(node, StepAbove):
        return 0.0 if t == 0.0 else node.height
    if isinstance(node, Piecewise):
        for piece in node.pieces:
            if piece.contains(t):
                return evaluate(piece.expr, t)
        raise FunctionSpecError(f"no piece covers t = {t!r}")  # unreachable
    raise TypeError(f"unknown node {node!r}")


# ---------------------------------------------------------------------------
# Rendering (round-trips through the parser)

_PREC_SUM = 1
_PREC_PRODUCT = 2
_PREC_ATOM = 3


def _render(node: Node, parent_prec: int) -> str:
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return "t"
    if isinstance(node, (Sum, Difference)):
        op = "+" if isinstance(node, Sum) else "-"
        # the parser is left-associative: parenthesize sums on the right
        text = f"{_render(node.left, _PREC_SUM)} {op} {_render(node.right, _PREC_SUM + 1)}"
        return f"({text})" if parent_prec > _PREC_SUM else text
    if isinstance(node, Product):
        text = f"{_render(node.left, _PREC_PRODUCT)} * {_render(node.right, _PREC_PRODUCT + 1)}"
        return f"({text})" if parent_prec > _PREC_PRODUCT else text
    if isinstance(node, Power):
        return f"pow({_render(node.base, _PREC_SUM)}, {repr(node.exponent)})"
    if isinstance(node, Min):
        return f"min({_render(node.left, _PREC_SUM)}, {_render(node.right, _PREC_SUM)})"
    if isinstance(node, Max):
        return f"max({_render(node.left, _PREC_SUM)}, {_render(node.right, _PREC_SUM)})"
    if isinstance(node, CantorHat):
        return "cantor_hat(t)"
    if isinstance(node, StepAbove):
        return f"step_above({repr(node.height)})"
    if isinstance(node, Piecewise):
        parts = []
        for p in node.pieces:
            lo = "[" if p.closed_lower else "("
            hi = "]" if p.closed_upper else ")"
            up = "inf" if math.isinf(p.upper) else repr(p.upper)
            parts.append(f"{lo}{repr(p.lower)},{up}{hi}: {_render(p.expr, _PREC_SUM)}")
        return "piecewise { " + "; ".join(parts) + " }"
    raise TypeError(f"unknown node {node!r}")


def to_text(node: Node) -> str:
    return _render(node, _PREC_SUM)


# ---------------------------------------------------------------------------
# FunctionSpec


@dataclass(frozen=True)
class FunctionSpec:
    """Parsed, evaluable description of a transform f : [0, inf) -> [0, inf)."""

    root: Node
    source: str

    def __call__(self, t: float) -> float:
        if t < 0:
            raise NegativeInput(t)
        return evaluate(self.root, t)

    @classmethod
    def from_node(cls, node: Node) -> "FunctionSpec":
        return cls(node, to_text(node))


# ---------------------------------------------------------------------------
# Static analyses


def children(node: Node) -> tuple[Node, ...]:
    if isinstance(node, (Sum, Difference, Product, Min, Max)):
        return (node.left, node.right)
    if isinstance(node, Power):
        return (node.base,)
    if isinstance(node, Piecewise):
        return tuple(p.expr for p in node.pieces)
    return ()


def walk(node: Node):
    yield node
    for child in children(node):
        yield from walk(child)


def fold_constant(node: Node) -> Optional[float]:
    """Value of a constant subtree, or None if it depends on t."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, (Var, CantorHat, StepAbove, Piecewise)):
        return None
    vals = [fold_constant(c) for c in children(node)]
    if any(v is None for v in vals):
        return None
    if isinstance(node, Sum):
        return vals[0] + vals[1]
    if isinstance(node, Difference):
        return vals[0] - vals[1]
    if isinstance(node, Product):
        return vals[0] * vals[1]
    if isinstance(node, Power):
        return _pow(vals[0], node.exponent)
    if isinstance(node, Min):
        return min(vals)
    if isinstance(node, Max):
        return max(vals)
    raise TypeError(f"unknown node {node!r}")


def first_negative_fold(node: Node) -> Optional[Node]:
    """First subtree (preorder) that folds to a negative constant."""
    for sub in walk(node):
        v = fold_constant(sub)
        if v is not None and v < 0:
            return sub
    return None


def breakpoints(node: Node) -> tuple[float, ...]:
    """Finite piece boundaries anywhere in the tree, sorted ascending."""
    points: set[float] = set()
    for sub in walk(node):
        if isinstance(sub, Piecewise):
            for p in sub.pieces:
                points.add(p.lower)
                if math.isfinite(p.upper):
                    points.add(p.upper)
    return tuple(sorted(points))


def nonneg_certified(node: Node) -> bool:
    """True when the tree cannot produce a negative value for any t >= 0.

    Every node type except Difference maps nonnegative inputs to nonnegative
    outputs, so the certificate is simply the absence of subtraction (plus
    nonnegative literals, which the parser already enforces).
    """
    for sub in walk(node):
        if isinstance(sub, Difference):
            return False
        if isinstance(sub, Const) and sub.value < 0:
            return False
        if isinstance(sub, StepAbove) and sub.height < 0:
            return False
        if isinstance(sub, Power) and sub.exponent < 0:
            return False
    return True


def positive_certified(node: Node) -> bool:
    """True when the tree is provably > 0 everywhere on (0, inf)."""
    if isinstance(node, Const):
        return node.value > 0
    if isinstance(node, Var):
        return True
    if isinstance(node, CantorHat):
        return True  # G(t) >= G(3**-k) = 2**-k > 0 for t > 0
    if isinstance(node, StepAbove):
        return node.height > 0
    if isinstance(node, Sum):
        l, r = node.left, node.right
        if not (nonneg_certified(l) and nonneg_certified(r)):
            return False
        return positive_certified(l) or positive_certified(r)
    if isinstance(node, Product):
        return positive_certified(node.left) and positive_certified(node.right)
    if isinstance(node, Min):
        return positive_certified(node.left) and positive_certified(node.right)
    if isinstance(node, Max):
        return positive_certified(node.left) or positive_certified(node.right)
    if isinstance(node, Power):
        if node.exponent == 0:
            return True  # x**0 == 1, including 0**0
        return node.exponent > 0 and positive_certified(node.base)
    if isinstance(node, Piecewise):
        return all(
            positive_certified(p.expr) for p in node.pieces if p.upper > 0
        )
    return False


def monotone_certified(node: Node) -> bool:
    """True when the tree is provably nondecreasing on [0, inf).

    Sound for trees built from nondecreasing nonnegative atoms under
    sum / product / min / max / power; subtraction and piecewise glue
    defeat the certificate and fall back to numeric probing.
    """
    if isinstance(node, (Const, Var, CantorHat)):
        return True
    if isinstance(node, StepAbove):
        return node.height >= 0
    if isinstance(node, (Sum, Min, Max)):
        return monotone_certified(node.left) and monotone_certified(node.right)
    if isinstance(node, Product):
        return (
            monotone_certified(node.left)
            and monotone_certified(node.right)
            and nonneg_certified(node.left)
            and nonneg_certified(node.right)
        )
    if isinstance(node, Power):
        return node.exponent >= 0 and monotone_certified(node.base) and nonneg_certified(node.base)
    return False


def right_limit_at_zero(node: Node) -> float:
    """Exact lim_{t -> 0+} of the expression.

    Every combiner in the grammar (sum, difference, product, min, max, power
    with fixed exponent) is continuous, and every atom has a known right
    limit at 0, so the limit always exists and is computed exactly.
    """
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return 0.0
    if isinstance(node, CantorHat):
        return 0.0
    if isinstance(node, StepAbove):
        return node.height
    if isinstance(node, Sum):
        return right_limit_at_zero(node.left) + right_limit_at_zero(node.right)
    if isinstance(node, Difference):
        return right_limit_at_zero(node.left) - right_limit_at_zero(node.right)
    if isinstance(node, Product):
        return right_limit_at_zero(node.left) * right_limit_at_zero(node.right)
    if isinstance(node, Power):
        return _pow(right_limit_at_zero(node.base), node.exponent)
    if isinstance(node, Min):
        return min(right_limit_at_zero(node.left), right_limit_at_zero(node.right))
    if isinstance(node, Max):
        return max(right_limit_at_zero(node.left), right_limit_at_zero(node.right))
    if isinstance(node, Piecewise):
        for p in node.pieces:
            if p.upper > 0:  # first piece intersecting (0, delta)
                return right_limit_at_zero(p.expr)
        raise DomainGap("no piece intersects (0, inf)")  # unreachable
    raise TypeError(f"unknown node {node!r}")


def limit_at_infinity(node: Node) -> Optional[float]:
    """lim_{t -> inf} of the expression: a float, math.inf, or None (unknown)."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return INF
    if isinstance(node, CantorHat):
        return 1.0
    if isinstance(node, StepAbove):
        return node.height
    if isinstance(node, Piecewise):
        return limit_at_infinity(node.pieces[-1].expr)
    if isinstance(node, Power):
        b = limit_at_infinity(node.base)
        if node.exponent == 0:
            return 1.0
        if b is None:
            return None
        return INF if math.isinf(b) else _pow(b, node.exponent)
    lims = [limit_at_infinity(c) for c in children(node)]
    if any(v is None for v in lims):
        return None
    l, r = lims
    if isinstance(node, Sum):
        return l + r
    if isinstance(node, Difference):
        if math.isinf(l) and math.isinf(r):
            return None
        d = l - r
        return d if d >= 0 or math.isfinite(d) else None
    if isinstance(node, Product):
        if (math.isinf(l) and r == 0) or (math.isinf(r) and l == 0):
            return None
        return l * r
    if isinstance(node, Min):
        return min(l, r)
    if isinstance(node, Max):
        return max(l, r)
    raise TypeError(f"unknown node {node!r}")
