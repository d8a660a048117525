"""
Valued points of the generic fiber.

A point is a homomorphism from an algebra to the rational function field
k(v) sending w to v^e; its valuation is the v-adic order. Input values are
Laurent polynomials in v, but lifting through a blow-up divides values, so
they are carried as elements of SymPy's `k(v)` field.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Tuple, Union

import sympy
from sympy.polys.fields import FracElement, field
from sympy.parsing.sympy_parser import parse_expr

from src.algebra.errors import (
    InvalidArgument,
    NotContinuous,
    NotIntegral,
    PolySyntaxError,
    RelationViolated,
    RingMismatch,
)
from src.algebra.fpalg import ElementLike, FpAlgebra, RingMap
from src.algebra.poly import PARSE_TRANSFORMATIONS, CoeffField, Poly
from src.utils.logging import get_logger

logger = get_logger(__name__)

VALUE_SYMBOL = "v"


@functools.lru_cache(maxsize=None)
def value_field(coefficients: CoeffField):
    """The field k(v) and its generator v."""
    domain = sympy.QQ if coefficients.characteristic == 0 else sympy.GF(coefficients.characteristic)
    return field(VALUE_SYMBOL, domain)


def _scalar(coefficients: CoeffField, c: Union[int, Fraction]) -> FracElement:
    K, _ = value_field(coefficients)
    c = coefficients.convert(c)
    if coefficients.characteristic == 0:
        return K(c.numerator) / K(c.denominator)
    return K(int(c))


def _from_polynomial_expr(coefficients: CoeffField, expr) -> FracElement:
    K, v = value_field(coefficients)
    try:
        sp = sympy.Poly(expr, sympy.Symbol(VALUE_SYMBOL), domain="QQ")
    except sympy.PolynomialError as e:
        raise PolySyntaxError(f"{expr} is not a Laurent polynomial in {VALUE_SYMBOL}") from e
    total = K.zero
    for (e,), c in sp.terms():
        rational = sympy.Rational(c)
        total += _scalar(coefficients, Fraction(int(rational.p), int(rational.q))) * v ** int(e)
    return total


def parse_value(coefficients: CoeffField, text: str) -> FracElement:
    """Parses a value such as `v^3 + v^-1` or `(1 + v)/v^2` into k(v)."""
    symbol = sympy.Symbol(VALUE_SYMBOL)
    try:
        expr = parse_expr(text, local_dict={VALUE_SYMBOL: symbol}, transformations=PARSE_TRANSFORMATIONS)
    except Exception as e:
        raise PolySyntaxError(f"cannot parse value {text!r}: {e}") from e
    if expr.has(sympy.Float):
        raise PolySyntaxError(f"{text!r} has floating point coefficients")
    if expr.free_symbols - {symbol}:
        raise PolySyntaxError(f"values may only involve {VALUE_SYMBOL}: {text!r}")
    numerator, denominator = sympy.fraction(sympy.together(expr))
    den = _from_polynomial_expr(coefficients, denominator)
    if not den:
        raise InvalidArgument(f"value {text!r} has a vanishing denominator")
    return _from_polynomial_expr(coefficients, numerator) / den


def v_order(value: FracElement) -> Optional[int]:
    """The v-adic order; None stands for the order of zero (infinity)."""
    if not value:
        return None
    low_num = min(m[0] for m in value.numer.monoms())
    low_den = min(m[0] for m in value.denom.monoms())
    return low_num - low_den


def render_value(value: FracElement) -> str:
    return str(value).replace("**", "^")


@dataclass(frozen=True)
class Point:
    """A valued point: one k(v)-value per variable of `variables`."""

    variables: Tuple[str, ...]
    e: int
    values: Tuple[FracElement, ...]
    coefficients: CoeffField = CoeffField()

    def value(self, name: str) -> FracElement:
        return self.values[self.variables.index(name)]

    def evaluate(self, p: Poly) -> FracElement:
        if p.ring.variables != self.variables:
            raise RingMismatch(f"point on {self.variables} cannot evaluate {p}")
        K, _ = value_field(self.coefficients)
        total = K.zero
        for exps, c in p.terms.items():
            term = _scalar(self.coefficients, c)
            for val, k in zip(self.values, exps):
                if k:
                    term *= val ** k
            total += term
        return total

    def order(self, p: Poly) -> Optional[int]:
        return v_order(self.evaluate(p))

    def as_dict(self) -> dict:
        return {name: render_value(val) for name, val in zip(self.variables, self.values)}

    def __str__(self) -> str:
        body = ", ".join(f"{n} -> {render_value(val)}" for n, val in zip(self.variables[1:], self.values[1:]))
        return f"e={self.e} {body}".rstrip()


def make_point(
    A: FpAlgebra, e: int, images: Mapping[str, Union[str, FracElement]]
) -> Point:
    """
    Builds a point of A with w -> v^e and the given non-w values.

    Raises:
        InvalidArgument: on e < 1, unknown or missing variables.
    """
    if e < 1:
        raise InvalidArgument("the ramification index must be at least 1")
    unknown = [name for name in images if name not in A.variables]
    if unknown:
        raise InvalidArgument(f"unknown variables {unknown}")
    K, v = value_field(A.field)
    values = [v ** e]
    for name in A.variables[1:]:
        if name not in images:
            raise InvalidArgument(f"no value given for {name!r}")
        raw = images[name]
        values.append(parse_value(A.field, raw) if isinstance(raw, str) else K(raw))
    return Point(A.variables, e, tuple(values), A.field)


def point_validate(A: FpAlgebra, P: Point) -> None:
    """
    Checks that P is a continuous valued point of A landing in the integral elements.

    Raises:
        RingMismatch: if P has a different variable list.
        InvalidArgument: if w is not sent to v^e.
        RelationViolated: naming the first relation that does not vanish.
        NotIntegral: naming the first variable of negative order.
        NotContinuous: naming the first ideal-of-definition generator of order <= 0.
    """
    if P.variables != A.variables:
        raise RingMismatch(f"point variables {P.variables} differ from {A.variables}")
    _, v = value_field(A.field)
    if P.values[0] != v ** P.e:
        raise InvalidArgument(f"{A.uniformizer_name} must be sent to {VALUE_SYMBOL}^{P.e}")
    for r in A.relations.generators:
        if P.evaluate(r):
            logger.error(f"Relation {r} does not vanish at the point")
            raise RelationViolated(str(r))
    for name, value in zip(P.variables, P.values):
        order = v_order(value)
        if order is not None and order < 0:
            logger.error(f"Value of {name} has negative order {order}")
            raise NotIntegral(name)
    for f in A.idef:
        order = P.order(f)
        if order is not None and order <= 0:
            logger.error(f"Ideal-of-definition generator {f} has order {order}")
            raise NotContinuous(str(f))


def spc_contains(A: FpAlgebra, P: Point, f: ElementLike) -> bool:
    """True iff |f(P)| < 1, i.e. f belongs to the prime spc(P)."""
    order = P.order(A.ring.coerce(f))
    return order is None or order > 0


def pull_back(P: Point, phi: RingMap) -> Point:
    """The point P o phi on the source of phi."""
    values = tuple(P.evaluate(img) for img in phi.images)
    return Point(phi.source.variables, P.e, values, P.coefficients)
