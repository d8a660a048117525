"""
Exact Multivariate Polynomials and Groebner Bases

This module is the computational substrate of the toolkit. It provides:
1.  `CoeffField`: the coefficient field, either the rationals (arbitrary
    precision `Fraction`s) or a prime field F_p. No floating point anywhere.
2.  `MonomialOrder`: grevlex, lex and block (lex on a prefix, then grevlex)
    orders, each optionally acting through a variable permutation.
3.  `PolyRing` / `Poly`: immutable sparse polynomials over a named
    variable list. The pseudo-uniformizer is an ordinary named variable.
4.  `normal_form` and `groebner`: multivariate division and Buchberger's
    algorithm with the product and chain criteria, returning the unique
    reduced (monic, interreduced, sorted) Groebner basis.

Polynomial text syntax is parsed with SymPy (`^` powers, optional `*`), and
SymPy also supplies squarefree parts (`squarefree_part`).
"""

from __future__ import annotations

import dataclasses
import functools
from fractions import Fraction
from itertools import combinations
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import BasePolynomialError

from src.algebra.errors import InvalidArgument, PolySyntaxError, RingMismatch
from src.utils.logging import get_logger

logger = get_logger(__name__)

Monomial = Tuple[int, ...]
Coefficient = Union[int, Fraction]

PARSE_TRANSFORMATIONS = standard_transformations + (implicit_multiplication, convert_xor)


# -----------------------------------------------------------------
# COEFFICIENT FIELDS
# -----------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class CoeffField:
    """
    The rationals (characteristic 0) or the prime field F_p.

    Rational coefficients are stored as `Fraction`; F_p coefficients as
    integers in [0, p).
    """

    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.characteristic != 0 and not sympy.isprime(self.characteristic):
            raise InvalidArgument(f"{self.characteristic} is not a prime")

    @classmethod
    def rationals(cls) -> "CoeffField":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "CoeffField":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "CoeffField":
        """Parses the CLI spelling: `q` or `fp:<p>`."""
        label = text.strip().lower()
        if label in ("q", "qq"):
            return cls.rationals()
        if label.startswith("fp:"):
            try:
                return cls.prime(int(label[3:]))
            except ValueError as e:
                raise InvalidArgument(f"bad prime in field spec {text!r}") from e
        raise InvalidArgument(f"unknown coefficient field {text!r}")

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    @property
    def label(self) -> str:
        return "q" if self.characteristic == 0 else f"fp:{self.characteristic}"

    def convert(self, value: Union[int, Fraction]) -> Coefficient:
        if self.characteristic == 0:
            return Fraction(value)
        p = self.characteristic
        value = Fraction(value)
        denominator = value.denominator % p
        if denominator == 0:
            raise InvalidArgument(f"{value} has no image in F_{p}")
        return value.numerator * pow(denominator, -1, p) % p

    def normalize(self, c: Coefficient) -> Coefficient:
        return c % self.characteristic if self.characteristic else c

    def inverse(self, c: Coefficient) -> Coefficient:
        if not c:
            raise ZeroDivisionError("inverse of zero coefficient")
        if self.characteristic == 0:
            return 1 / Fraction(c)
        return pow(c, -1, self.characteristic)

    def __str__(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


# -----------------------------------------------------------------
# MONOMIAL ORDERS
# -----------------------------------------------------------------
_ORDER_KINDS = ("grevlex", "lex", "block")


@dataclasses.dataclass(frozen=True)
class MonomialOrder:
    """
    A monomial order acting on exponent vectors.

    `permutation[k]` is the index of the variable compared in position k.
    For `block`, the first `prefix` permuted positions are compared
    lexicographically and win outright, the remaining ones by grevlex; any
    monomial involving a prefix variable is then larger than every monomial
    free of them, which makes `block` an elimination order.
    """

    kind: str = "grevlex"
    permutation: Optional[Tuple[int, ...]] = None
    prefix: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _ORDER_KINDS:
            raise InvalidArgument(f"unknown monomial order {self.kind!r}")
        if self.prefix < 0:
            raise InvalidArgument("block prefix must be non-negative")

    @classmethod
    def grevlex(cls, permutation: Optional[Sequence[int]] = None) -> "MonomialOrder":
        return cls("grevlex", _perm(permutation))

    @classmethod
    def lex(cls, permutation: Optional[Sequence[int]] = None) -> "MonomialOrder":
        return cls("lex", _perm(permutation))

    @classmethod
    def block(cls, prefix: int, permutation: Optional[Sequence[int]] = None) -> "MonomialOrder":
        return cls("block", _perm(permutation), prefix)

    @classmethod
    def parse(cls, text: str) -> "MonomialOrder":
        if text not in ("grevlex", "lex"):
            raise InvalidArgument(f"unknown monomial order {text!r}")
        return cls(text)

    def key(self, exps: Monomial):
        return _order_key(self, exps)


def _perm(permutation: Optional[Sequence[int]]) -> Optional[Tuple[int, ...]]:
    return None if permutation is None else tuple(permutation)


def _grevlex_key(exps: Monomial):
    return (sum(exps), tuple(-e for e in reversed(exps)))


@functools.lru_cache(maxsize=1 << 16)
def _order_key(order: MonomialOrder, exps: Monomial):
    if order.permutation is not None:
        exps = tuple(exps[i] for i in order.permutation)
    if order.kind == "lex":
        return exps
    if order.kind == "grevlex":
        return _grevlex_key(exps)
    return (exps[:order.prefix], _grevlex_key(exps[order.prefix:]))


DEFAULT_ORDER = MonomialOrder()


# -----------------------------------------------------------------
# POLYNOMIAL RINGS
# -----------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class PolyRing:
    """An ordered list of named variables over a coefficient field."""

    variables: Tuple[str, ...]
    field: CoeffField = CoeffField()

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise RingMismatch(f"duplicate variables in {self.variables}")
        for name in self.variables:
            if not name.isidentifier():
                raise RingMismatch(f"{name!r} is not a valid variable name")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise RingMismatch(f"no variable {name!r} in {self.variables}") from None

    def gen(self, name: Union[str, int]) -> "Poly":
        i = name if isinstance(name, int) else self.index(name)
        exps = tuple(1 if k == i else 0 for k in range(self.nvars))
        return Poly._from_dict(self, {exps: self.field.convert(1)})

    @property
    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def zero(self) -> "Poly":
        return Poly._from_dict(self, {})

    def one(self) -> "Poly":
        return self.constant(1)

    def constant(self, c: Coefficient) -> "Poly":
        value = self.field.convert(c)
        if not value:
            return self.zero()
        return Poly._from_dict(self, {(0,) * self.nvars: value})

    def monomial(self, exps: Sequence[int], c: Coefficient = 1) -> "Poly":
        return Poly(self, {tuple(exps): c})

    def extend(self, names: Sequence[str]) -> "PolyRing":
        clash = [n for n in names if n in self.variables]
        if clash:
            raise RingMismatch(f"variables {clash} already present")
        return PolyRing(self.variables + tuple(names), self.field)

    def drop(self, names: Iterable[str]) -> "PolyRing":
        dropped = set(names)
        return PolyRing(tuple(v for v in self.variables if v not in dropped), self.field)

    def fresh_name(self, base: str) -> str:
        if base not in self.variables:
            return base
        i = 1
        while f"{base}{i}" in self.variables:
            i += 1
        return f"{base}{i}"

    def fresh_names(self, prefix: str, count: int) -> List[str]:
        """`count` indexed names `prefix0, prefix1, ...` avoiding collisions."""
        candidate = prefix
        while True:
            names = [f"{candidate}{i}" for i in range(count)]
            if not any(n in self.variables for n in names):
                return names
            candidate += "_"

    def parse(self, text: str) -> "Poly":
        return parse_polynomial(self, text)

    def coerce(self, value: Union["Poly", int, Fraction, str]) -> "Poly":
        if isinstance(value, Poly):
            if value.ring != self:
                return value.embed(self)
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, Fraction)):
            return self.constant(value)
        raise InvalidArgument(f"cannot interpret {value!r} as a polynomial")

    def __str__(self) -> str:
        return f"{self.field}[{', '.join(self.variables)}]"


# -----------------------------------------------------------------
# POLYNOMIALS
# -----------------------------------------------------------------
class Poly:
    """
    An immutable sparse polynomial: a map from exponent vectors to
    nonzero coefficients, tied to a `PolyRing`.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Optional[Mapping[Sequence[int], Coefficient]] = None):
        data: Dict[Monomial, Coefficient] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != ring.nvars:
                raise RingMismatch(f"exponent vector {exps} does not fit {ring}")
            value = ring.field.normalize(data.get(exps, 0) + ring.field.convert(c))
            if value:
                data[exps] = value
            else:
                data.pop(exps, None)
        self.ring = ring
        self._terms = data
        self._hash = None

    @classmethod
    def _from_dict(cls, ring: PolyRing, data: Dict[Monomial, Coefficient]) -> "Poly":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = data
        obj._hash = None
        return obj

    @property
    def terms(self) -> Mapping[Monomial, Coefficient]:
        return MappingProxyType(self._terms)

    # --- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> Optional["Poly"]:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch(f"{other.ring} differs from {self.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        data = dict(self._terms)
        _accumulate(data, other._terms, self.ring.field)
        return Poly._from_dict(self.ring, data)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        f = self.ring.field
        return Poly._from_dict(self.ring, {m: f.normalize(-c) for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        f = self.ring.field
        data: Dict[Monomial, Coefficient] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                data[m] = data.get(m, 0) + c1 * c2
        return Poly._from_dict(self.ring, _clean(data, f))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise InvalidArgument("polynomial exponents must be non-negative integers")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Coefficient) -> "Poly":
        f = self.ring.field
        c = f.convert(c)
        if not c:
            return self.ring.zero()
        return Poly._from_dict(self.ring, {m: f.normalize(v * c) for m, v in self._terms.items()})

    def mul_term(self, exps: Monomial, c: Coefficient = 1) -> "Poly":
        f = self.ring.field
        c = f.convert(c)
        return Poly._from_dict(
            self.ring,
            {tuple(a + b for a, b in zip(m, exps)): f.normalize(v * c) for m, v in self._terms.items()},
        )

    # --- comparison ---------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # --- inspection ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Coefficient:
        return self._terms.get((0,) * self.ring.nvars, 0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((m[index] for m in self._terms), default=-1)

    def support(self) -> Tuple[int, ...]:
        """Indices of the variables that actually occur."""
        used = set()
        for m in self._terms:
            used.update(i for i, e in enumerate(m) if e)
        return tuple(sorted(used))

    def leading_term(self, order: MonomialOrder = DEFAULT_ORDER) -> Tuple[Monomial, Coefficient]:
        if not self._terms:
            raise InvalidArgument("the zero polynomial has no leading term")
        m = max(self._terms, key=order.key)
        return m, self._terms[m]

    def leading_monomial(self, order: MonomialOrder = DEFAULT_ORDER) -> Monomial:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = DEFAULT_ORDER) -> "Poly":
        if not self._terms:
            return self
        _, c = self.leading_term(order)
        return self.scale(self.ring.field.inverse(c))

    def sorted_terms(self, order: MonomialOrder = DEFAULT_ORDER) -> List[Tuple[Monomial, Coefficient]]:
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # --- ring changes -------------------------------------------------
    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Evaluates the polynomial at `images`, one per variable."""
        if len(images) != self.ring.nvars:
            raise RingMismatch(
                f"{len(images)} images given for {self.ring.nvars} variables"
            )
        target = images[0].ring
        if any(img.ring != target for img in images):
            raise RingMismatch("substitution images live in different rings")
        if target.field != self.ring.field:
            raise RingMismatch(f"cannot substitute from {self.ring.field} into {target.field}")
        cache: Dict[Tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            if (i, e) not in cache:
                cache[(i, e)] = images[i] ** e
            return cache[(i, e)]

        data: Dict[Monomial, Coefficient] = {}
        for exps, c in self._terms.items():
            term = target.constant(c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            _accumulate(data, term._terms, target.field)
        return Poly._from_dict(target, data)

    def embed(self, ring: PolyRing) -> "Poly":
        """Moves the polynomial into `ring`, matching variables by name."""
        if ring == self.ring:
            return self
        if ring.field != self.ring.field:
            raise RingMismatch(f"cannot move a polynomial from {self.ring.field} to {ring.field}")
        positions = [
            ring.variables.index(name) if name in ring.variables else None
            for name in self.ring.variables
        ]
        data: Dict[Monomial, Coefficient] = {}
        for exps, c in self._terms.items():
            new = [0] * ring.nvars
            for i, e in enumerate(exps):
                if e:
                    j = positions[i]
                    if j is None:
                        raise RingMismatch(
                            f"variable {self.ring.variables[i]!r} does not exist in {ring}"
                        )
                    new[j] = e
            data[tuple(new)] = c
        return Poly._from_dict(ring, data)

    # --- rendering ----------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        char = self.ring.field.characteristic
        out = []
        for exps, c in self.sorted_terms(DEFAULT_ORDER):
            negative = char == 0 and c < 0
            magnitude = -c if negative else c
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.variables, exps) if e
            )
            if not mono:
                body = str(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{magnitude}*{mono}"
            if not out:
                out.append(f"-{body}" if negative else body)
            else:
                out.append(f" - {body}" if negative else f" + {body}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"Poly('{self}')"


def _accumulate(data: Dict[Monomial, Coefficient], terms: Mapping[Monomial, Coefficient], field: CoeffField) -> None:
    for m, c in terms.items():
        value = field.normalize(data.get(m, 0) + c)
        if value:
            data[m] = value
        else:
            data.pop(m, None)


def _clean(data: Dict[Monomial, Coefficient], field: CoeffField) -> Dict[Monomial, Coefficient]:
    out = {}
    for m, c in data.items():
        c = field.normalize(c)
        if c:
            out[m] = c
    return out


# -----------------------------------------------------------------
# PARSING
# -----------------------------------------------------------------
def parse_polynomial(ring: PolyRing, text: str) -> Poly:
    """
    Parses polynomial text such as `x^2 - 3/2*w*y + 1` into `ring`.

    Raises:
        PolySyntaxError: on malformed text, unknown names, floats or
                         non-polynomial expressions.
    """
    symbols = {name: sympy.Symbol(name) for name in ring.variables}
    try:
        expr = parse_expr(text, local_dict=dict(symbols), transformations=PARSE_TRANSFORMATIONS)
    except Exception as e:
        raise PolySyntaxError(f"cannot parse polynomial {text!r}: {e}") from e
    return from_sympy(ring, expr)


def from_sympy(ring: PolyRing, expr) -> Poly:
    symbols = [sympy.Symbol(name) for name in ring.variables]
    expr = sympy.sympify(expr)
    if expr.has(sympy.Float):
        raise PolySyntaxError(f"{expr} has floating point coefficients")
    unknown = sorted(str(s) for s in expr.free_symbols - set(symbols))
    if unknown:
        raise PolySyntaxError(f"unknown variables {unknown} for ring {ring}")
    try:
        sp = sympy.Poly(expr, *symbols, domain="QQ")
    except (BasePolynomialError, sympy.SympifyError, TypeError) as e:
        raise PolySyntaxError(f"{expr} is not a polynomial: {e}") from e
    terms = {}
    for monom, coeff in sp.terms():
        rational = sympy.Rational(coeff)
        if rational != 0:
            terms[tuple(int(e) for e in monom)] = Fraction(int(rational.p), int(rational.q))
    return Poly(ring, terms)


def to_sympy(p: Poly):
    """The polynomial as a SymPy expression in symbols named like its variables."""
    symbols = [sympy.Symbol(name) for name in p.ring.variables]
    out = sympy.Integer(0)
    for exps, c in p.terms.items():
        c = Fraction(c)
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(symbols, exps):
            if e:
                term *= s ** e
        out += term
    return out


def squarefree_part(p: Poly) -> Poly:
    """
    The product of the distinct irreducible factors of `p`, made monic.

    Computed by SymPy over the variables that occur in `p`. SymPy has no
    multivariate squarefree decomposition over F_p, so such inputs come
    back unchanged.
    """
    if p.is_constant():
        return p
    ring = p.ring
    used = p.support()
    symbols = [sympy.Symbol(ring.variables[i]) for i in used]
    char = ring.field.characteristic
    options = {"modulus": char} if char else {"domain": "QQ"}
    try:
        part = sympy.Poly(to_sympy(p), *symbols, **options).sqf_part()
    except NotImplementedError:
        logger.debug(f"no squarefree part of {p} over {ring.field}")
        return p
    terms = {}
    for monom, coeff in part.terms():
        exps = [0] * ring.nvars
        for i, e in zip(used, monom):
            exps[i] = int(e)
        rational = sympy.Rational(coeff)
        terms[tuple(exps)] = Fraction(int(rational.p), int(rational.q))
    return Poly(ring, terms).monic()


# -----------------------------------------------------------------
# DIVISION AND GROEBNER BASES
# -----------------------------------------------------------------
def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _check_common_ring(polys: Sequence[Poly]) -> None:
    if polys and any(p.ring != polys[0].ring for p in polys):
        raise RingMismatch("polynomials live in different rings")


def normal_form(p: Poly, basis: Sequence[Poly], order: MonomialOrder = DEFAULT_ORDER) -> Poly:
    """
    Remainder of `p` under full multivariate division by `basis`.

    When `basis` is a Groebner basis under `order` (caller contract), the
    remainder is unique and vanishes iff `p` lies in the generated ideal.
    """
    _check_common_ring([p, *basis])
    field = p.ring.field
    divisors = []
    for g in basis:
        if g.is_zero():
            continue
        lm, lc = g.leading_term(order)
        divisors.append((lm, field.inverse(lc), g._terms))

    rest = dict(p._terms)
    remainder: Dict[Monomial, Coefficient] = {}
    while rest:
        m = max(rest, key=order.key)
        c = rest[m]
        for lm, lc_inv, terms in divisors:
            if _divides(lm, m):
                shift = tuple(a - b for a, b in zip(m, lm))
                factor = field.normalize(c * lc_inv)
                for gm, gc in terms.items():
                    t = tuple(a + b for a, b in zip(gm, shift))
                    value = field.normalize(rest.get(t, 0) - factor * gc)
                    if value:
                        rest[t] = value
                    else:
                        rest.pop(t, None)
                break
        else:
            remainder[m] = c
            del rest[m]
    return Poly._from_dict(p.ring, remainder)


def exact_divide(p: Poly, g: Poly) -> Poly:
    """
    The quotient p / g.

    Raises:
        InvalidArgument: if g is zero or does not divide p.
    """
    _check_common_ring([p, g])
    if g.is_zero():
        raise InvalidArgument("division by the zero polynomial")
    field = p.ring.field
    lm, lc = g.leading_term()
    lc_inv = field.inverse(lc)
    rest = dict(p._terms)
    quotient: Dict[Monomial, Coefficient] = {}
    while rest:
        m = max(rest, key=DEFAULT_ORDER.key)
        if not _divides(lm, m):
            raise InvalidArgument(f"{g} does not divide {p}")
        shift = tuple(a - b for a, b in zip(m, lm))
        factor = field.normalize(rest[m] * lc_inv)
        quotient[shift] = factor
        for gm, gc in g._terms.items():
            t = tuple(a + b for a, b in zip(gm, shift))
            value = field.normalize(rest.get(t, 0) - factor * gc)
            if value:
                rest[t] = value
            else:
                rest.pop(t, None)
    return Poly._from_dict(p.ring, quotient)


def _s_polynomial(f: Poly, g: Poly, lm_f: Monomial, lm_g: Monomial, lcm: Monomial) -> Poly:
    # f and g are monic
    left = f.mul_term(tuple(a - b for a, b in zip(lcm, lm_f)))
    right = g.mul_term(tuple(a - b for a, b in zip(lcm, lm_g)))
    return left - right


def _chain_criterion(i: int, j: int, lcm: Monomial, lms: Sequence[Monomial], pairs: set) -> bool:
    for k, lm_k in enumerate(lms):
        if k in (i, j):
            continue
        if (min(i, k), max(i, k)) in pairs or (min(j, k), max(j, k)) in pairs:
            continue
        if _divides(lm_k, lcm):
            return True
    return False


def groebner(gens: Iterable[Poly], order: MonomialOrder = DEFAULT_ORDER) -> List[Poly]:
    """
    Computes the reduced Groebner basis of the ideal generated by `gens`.

    Buchberger's algorithm with the product and chain criteria; S-pairs are
    selected by the normal strategy (smallest lcm degree, then smallest lcm
    under `order`, then pair indices). The result is monic, interreduced and
    sorted by decreasing leading monomial, so two generating sets of the same
    ideal return identical lists.

    Args:
        gens: Generators in a common ring. Zero generators are ignored.
        order: The monomial order.

    Returns:
        The reduced basis; `[]` for the zero ideal, `[1]` for the unit ideal.
    """
    polys = [g for g in gens if not g.is_zero()]
    if not polys:
        return []
    _check_common_ring(polys)
    ring = polys[0].ring

    basis: List[Poly] = []
    for g in polys:
        g = g.monic(order)
        if g.is_constant():
            return [ring.one()]
        if g not in basis:
            basis.append(g)
    lms = [g.leading_monomial(order) for g in basis]
    pairs = set(combinations(range(len(basis)), 2))
    reductions = 0

    def priority(pair):
        lcm = _lcm(lms[pair[0]], lms[pair[1]])
        return (sum(lcm), order.key(lcm), pair)

    while pairs:
        i, j = min(pairs, key=priority)
        lcm = _lcm(lms[i], lms[j])
        coprime = lcm == tuple(a + b for a, b in zip(lms[i], lms[j]))
        if not coprime and not _chain_criterion(i, j, lcm, lms, pairs):
            reductions += 1
            s = normal_form(_s_polynomial(basis[i], basis[j], lms[i], lms[j], lcm), basis, order)
            if not s.is_zero():
                if s.is_constant():
                    return [ring.one()]
                s = s.monic(order)
                k = len(basis)
                basis.append(s)
                lms.append(s.leading_monomial(order))
                pairs.update((a, k) for a in range(k))
        pairs.discard((i, j))

    logger.debug(
        f"Buchberger finished: {len(basis)} elements, {reductions} S-pair reductions "
        f"({order.kind}, {ring.nvars} variables)"
    )
    return _reduce_basis(basis, lms, order)


def _reduce_basis(basis: List[Poly], lms: List[Monomial], order: MonomialOrder) -> List[Poly]:
    minimal = []
    for idx, g in enumerate(basis):
        redundant = any(
            _divides(lms[o], lms[idx]) and (lms[o] != lms[idx] or o < idx)
            for o in range(len(basis)) if o != idx
        )
        if not redundant:
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        reduced.append(normal_form(g, others, order).monic(order))
    reduced.sort(key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
    return reduced
