"""
Ideal Calculus in Polynomial Rings

An `Ideal` is a finite generator list plus a write-once cache of reduced
Groebner bases, one per monomial order. Everything the geometric layer
needs reduces to the functions below: membership, equality, sums and
products, intersections and quotients, saturation, elimination and radical
membership.

Saturation and radical membership both use a single auxiliary variable
(the Rabinowitsch construction), so each costs exactly one Buchberger run.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple, Union

from src.algebra.errors import RingMismatch
from src.algebra.poly import (
    DEFAULT_ORDER,
    MonomialOrder,
    Poly,
    PolyRing,
    exact_divide,
    groebner,
    normal_form,
)
from src.utils.logging import get_logger

logger = get_logger(__name__)

PolyLike = Union[Poly, int, str]


class Ideal:
    """An ideal of a polynomial ring, given by generators."""

    def __init__(self, ring: PolyRing, generators: Iterable[PolyLike] = ()) -> None:
        self.ring = ring
        self.generators: Tuple[Poly, ...] = tuple(ring.coerce(g) for g in generators)
        self._gb_cache: Dict[MonomialOrder, Tuple[Poly, ...]] = {}

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [ring.one()])

    @classmethod
    def zero(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [])

    def groebner_basis(self, order: MonomialOrder = DEFAULT_ORDER) -> Tuple[Poly, ...]:
        cached = self._gb_cache.get(order)
        if cached is None:
            cached = tuple(groebner(self.generators, order))
            self._gb_cache[order] = cached
        return cached

    def _seed(self, basis: Sequence[Poly], order: MonomialOrder = DEFAULT_ORDER) -> "Ideal":
        self._gb_cache[order] = tuple(basis)
        return self

    def reduce(self, p: Poly) -> Poly:
        """Canonical representative of `p` modulo the ideal (grevlex)."""
        return normal_form(self.ring.coerce(p), self.groebner_basis())

    def contains(self, p: PolyLike) -> bool:
        return contains(self, p)

    def is_unit(self) -> bool:
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.groebner_basis()

    def embed(self, ring: PolyRing) -> "Ideal":
        return Ideal(ring, [g.embed(ring) for g in self.generators])

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self) -> str:
        return f"Ideal{self}"


def _same_ring(I: Ideal, J: Ideal) -> None:
    if I.ring != J.ring:
        raise RingMismatch(f"ideals live in {I.ring} and {J.ring}")


def contains(I: Ideal, p: PolyLike) -> bool:
    """True iff `p` lies in `I`."""
    if isinstance(p, Poly) and p.ring != I.ring:
        raise RingMismatch(f"{p} does not live in {I.ring}")
    p = I.ring.coerce(p)
    return normal_form(p, I.groebner_basis()).is_zero()


def is_subset(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return all(contains(J, g) for g in I.generators)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    """True iff the reduced grevlex bases coincide."""
    _same_ring(I, J)
    return I.groebner_basis() == J.groebner_basis()


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(I.ring, I.generators + J.generators)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    """Generated by the pairwise products, in `f_a * g_b` order."""
    _same_ring(I, J)
    return Ideal(I.ring, [f * g for f in I.generators for g in J.generators])


def ideal_power(I: Ideal, k: int) -> Ideal:
    result = Ideal.unit(I.ring)
    for _ in range(k):
        result = ideal_product(result, I)
        # keep generator lists small between multiplications
        result = Ideal(I.ring, result.groebner_basis())
    return result


def saturation(I: Ideal, g: PolyLike) -> Ideal:
    """
    Computes I : g^oo.

    Adjoins a fresh variable y in front of the ring, adds 1 - y*g and
    eliminates y with a block order. The y-free part of that basis is
    already the reduced grevlex basis of the saturation and is cached.
    """
    ring = I.ring
    g = ring.coerce(g)
    y = ring.fresh_name("y")
    ext = PolyRing((y,) + ring.variables, ring.field)
    gens = [p.embed(ext) for p in I.generators]
    gens.append(ext.one() - ext.gen(y) * g.embed(ext))
    basis = groebner(gens, MonomialOrder.block(1))
    kept = [p.embed(ring) for p in basis if p.degree_in(0) <= 0]
    logger.debug(f"saturation of {len(I.generators)} generators at {g}: {len(kept)} basis elements")
    return Ideal(ring, kept)._seed(kept)


def eliminate(I: Ideal, names: Iterable[str]) -> Ideal:
    """
    Computes I intersected with k[remaining variables].

    The result lives in the ring with `names` dropped.
    """
    ring = I.ring
    names = list(names)
    for name in names:
        ring.index(name)
    if not names:
        return Ideal(ring, I.generators)
    drop = set(names)
    elim = [i for i, v in enumerate(ring.variables) if v in drop]
    rest = [i for i, v in enumerate(ring.variables) if v not in drop]
    basis = groebner(I.generators, MonomialOrder.block(len(elim), elim + rest))
    target = ring.drop(drop)
    kept = [
        p.embed(target) for p in basis
        if all(p.degree_in(i) <= 0 for i in elim)
    ]
    return Ideal(target, kept)._seed(kept)


def ideal_intersection(I: Ideal, J: Ideal) -> Ideal:
    """
    Computes I intersected with J as the t-free part of t*I + (1 - t)*J,
    for a fresh variable t eliminated with a block order.
    """
    _same_ring(I, J)
    ring = I.ring
    t = ring.fresh_name("t")
    ext = PolyRing((t,) + ring.variables, ring.field)
    T = ext.gen(t)
    gens = [T * f.embed(ext) for f in I.generators]
    gens += [(ext.one() - T) * g.embed(ext) for g in J.generators]
    basis = groebner(gens, MonomialOrder.block(1))
    kept = [p.embed(ring) for p in basis if p.degree_in(0) <= 0]
    return Ideal(ring, kept)._seed(kept)


def ideal_quotient(I: Ideal, J: Ideal) -> Ideal:
    """
    Computes I : J, the polynomials f with f*J inside I.

    For a single generator g, I : g is (I intersected with (g)) / g; the
    quotient by J is the intersection over its generators.
    """
    _same_ring(I, J)
    ring = I.ring
    result = Ideal.unit(ring)
    for g in unique_generators(list(J.generators)):
        common = ideal_intersection(I, Ideal(ring, [g]))
        part = Ideal(ring, [exact_divide(h, g) for h in common.groebner_basis()])
        result = part if result.is_unit() else ideal_intersection(result, part)
    return result


def radical_contains(I: Ideal, p: PolyLike) -> bool:
    """True iff some power of `p` lies in `I`."""
    ring = I.ring
    p = ring.coerce(p)
    y = ring.fresh_name("y")
    ext = PolyRing((y,) + ring.variables, ring.field)
    gens = [q.embed(ext) for q in I.generators]
    gens.append(ext.one() - ext.gen(y) * p.embed(ext))
    basis = groebner(gens)
    return len(basis) == 1 and basis[0].is_constant()


def unique_generators(polys: Sequence[Poly]) -> List[Poly]:
    """Drops zeros and repeats, keeping first occurrences."""
    out: List[Poly] = []
    for p in polys:
        if not p.is_zero() and p not in out:
            out.append(p)
    return out
