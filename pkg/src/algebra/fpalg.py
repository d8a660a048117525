"""
Finitely Presented Algebras over k[w]

An `FpAlgebra` is a quotient k[w, x1..xn] / I_A together with a list of
generators of an ideal of definition that always contains the
pseudo-uniformizer w (the first variable). Each algebra stands for its
adic completion; completions are never computed because every
construction of the toolkit commutes with them.

This module provides:
1.  Construction and validation (`make_algebra`, `ring_map`).
2.  Ring map plumbing (`RingMap`, `identity_map`, `compose`, `map_kernel`,
    `is_injective`).
3.  w-torsion handling (`torsion_saturate`, `require_torsion_free`).
4.  Localization at one element, exact division and integrality testing.
"""

from __future__ import annotations

from typing import Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from src.algebra.errors import (
    IllDefined,
    InvalidArgument,
    MissingUniformizer,
    RingMismatch,
    TorsionInput,
)
from src.algebra.ideal import Ideal, contains, eliminate, ideal_equal, radical_contains, saturation
from src.algebra.poly import DEFAULT_ORDER, CoeffField, MonomialOrder, Poly, PolyRing, normal_form
from src.config.settings import settings
from src.utils.logging import get_logger

logger = get_logger(__name__)

ElementLike = Union[Poly, int, str]


class FpAlgebra:
    """
    A finitely presented algebra over k[w] with an ideal of definition.

    Attributes:
        ring: The polynomial ring; its first variable is the uniformizer.
        relations: The presentation ideal I_A.
        idef: Generators f1..fr of the ideal of definition.
        name: Optional display name (session bindings).
    """

    def __init__(
        self,
        ring: PolyRing,
        relations: Union[Ideal, Iterable[ElementLike]] = (),
        idef: Iterable[ElementLike] = (),
        name: Optional[str] = None,
    ) -> None:
        if ring.nvars == 0:
            raise MissingUniformizer("an algebra needs the uniformizer variable")
        self.ring = ring
        if not isinstance(relations, Ideal):
            relations = Ideal(ring, relations)
        elif relations.ring != ring:
            raise RingMismatch("relations live in a different ring")
        self.relations = relations
        self.idef: Tuple[Poly, ...] = tuple(ring.coerce(f) for f in idef)
        self.name = name
        # set by `localize`: the element whose inverse is the last variable
        self.inverted: Optional[Poly] = None
        self._torsion_free: Optional[bool] = None

    # --- basic accessors ----------------------------------------------
    @property
    def uniformizer_name(self) -> str:
        return self.ring.variables[0]

    @property
    def uniformizer(self) -> Poly:
        return self.ring.gen(0)

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.ring.variables

    @property
    def field(self) -> CoeffField:
        return self.ring.field

    def element(self, value: ElementLike) -> Poly:
        """Parses/coerces `value` and returns its canonical representative."""
        return self.reduce(self.ring.coerce(value))

    def reduce(self, p: Poly) -> Poly:
        return normal_form(p, self.relations.groebner_basis())

    def is_zero(self, value: ElementLike) -> bool:
        return self.element(value).is_zero()

    def ideal(self, gens: Iterable[ElementLike]) -> Ideal:
        """The ideal of the ambient ring generated by `gens` and I_A."""
        return Ideal(self.ring, [self.ring.coerce(g) for g in gens] + list(self.relations.generators))

    def ideal_of_definition(self) -> Ideal:
        return self.ideal(self.idef)

    def is_zero_ring(self) -> bool:
        return self.relations.is_unit()

    def is_torsion_free(self) -> bool:
        if self._torsion_free is None:
            saturated = saturation(self.relations, self.uniformizer)
            self._torsion_free = ideal_equal(saturated, self.relations)
        return self._torsion_free

    def same_presentation(self, other: "FpAlgebra") -> bool:
        return self.ring == other.ring and ideal_equal(self.relations, other.relations)

    def with_relations(self, extra: Iterable[ElementLike], name: Optional[str] = None) -> "FpAlgebra":
        return FpAlgebra(self.ring, self.ideal(extra), self.idef, name)

    def presentation(self) -> str:
        rels = ", ".join(str(g) for g in self.relations.groebner_basis())
        idef = ", ".join(str(f) for f in self.idef)
        return f"vars[{', '.join(self.variables)}] rels[{rels}] idef[{idef}]"

    def __str__(self) -> str:
        return f"{self.name} = {self.presentation()}" if self.name else self.presentation()

    def __repr__(self) -> str:
        return f"FpAlgebra({self.presentation()})"


def make_algebra(
    variables: Sequence[str],
    relations: Iterable[ElementLike] = (),
    idef_gens: Iterable[ElementLike] = (),
    field: Optional[CoeffField] = None,
    uniformizer: Optional[str] = None,
    name: Optional[str] = None,
) -> FpAlgebra:
    """
    Builds k[w, x..]/(relations) with the given ideal of definition.

    The uniformizer is moved to the front of the variable list and adjoined
    to the ideal of definition unless the listed generators already contain
    it modulo the relations.

    Raises:
        MissingUniformizer: if the uniformizer is not among `variables`.
    """
    uniformizer = uniformizer or settings.UNIFORMIZER_NAME
    field = field or CoeffField.parse(settings.COEFFICIENT_FIELD)
    if uniformizer not in variables:
        logger.error(f"Uniformizer {uniformizer!r} missing from variables {list(variables)}")
        raise MissingUniformizer(f"the uniformizer {uniformizer!r} is not a variable")
    ordered = [uniformizer] + [v for v in variables if v != uniformizer]
    ring = PolyRing(tuple(ordered), field)
    rels = [ring.coerce(r) for r in relations]
    idef = [ring.coerce(f) for f in idef_gens]
    w = ring.gen(0)
    if not contains(Ideal(ring, idef + rels), w):
        idef.insert(0, w)
    return FpAlgebra(ring, Ideal(ring, rels), idef, name)


# -----------------------------------------------------------------
# RING MAPS
# -----------------------------------------------------------------
class RingMap:
    """A w-preserving homomorphism given by one image per source variable."""

    def __init__(self, source: FpAlgebra, target: FpAlgebra, images: Sequence[Poly]) -> None:
        self.source = source
        self.target = target
        self.images: Tuple[Poly, ...] = tuple(images)

    def __call__(self, value: ElementLike) -> Poly:
        p = self.source.ring.coerce(value)
        return self.target.reduce(p.substitute(self.images))

    def image_of(self, name: str) -> Poly:
        return self.images[self.source.ring.index(name)]

    def as_dict(self) -> dict:
        return {v: str(img) for v, img in zip(self.source.variables, self.images)}

    def __str__(self) -> str:
        return ", ".join(f"{v} -> {img}" for v, img in zip(self.source.variables, self.images))

    def __repr__(self) -> str:
        return f"RingMap({self})"


def ring_map(
    source: FpAlgebra,
    target: FpAlgebra,
    images: Union[Sequence[ElementLike], Mapping[str, ElementLike]],
) -> RingMap:
    """
    Builds and validates a ring map.

    `images` is either one image per source variable, or a mapping from
    variable names to images in which unnamed variables map to the target
    variable of the same name.

    Raises:
        InvalidArgument: wrong image count or w not sent to w.
        IllDefined: naming the first source relation that is not respected.
    """
    if isinstance(images, Mapping):
        unknown = [k for k in images if k not in source.variables]
        if unknown:
            raise InvalidArgument(f"unknown source variables {unknown}")
        listed = []
        for v in source.variables:
            if v in images:
                listed.append(images[v])
            elif v in target.variables:
                listed.append(target.ring.gen(v))
            else:
                raise InvalidArgument(f"no image given for {v!r}")
        images = listed
    if len(images) != source.ring.nvars:
        raise InvalidArgument(
            f"{len(images)} images given for {source.ring.nvars} source variables"
        )
    reduced = [target.element(img) for img in images]
    if reduced[0] != target.reduce(target.uniformizer):
        raise InvalidArgument("the uniformizer must be sent to the uniformizer")
    for r in source.relations.generators:
        if not target.reduce(r.substitute(reduced)).is_zero():
            logger.error(f"Ring map violates relation {r}")
            raise IllDefined(str(r))
    return RingMap(source, target, reduced)


def identity_map(A: FpAlgebra) -> RingMap:
    return RingMap(A, A, [A.reduce(g) for g in A.ring.gens])


def compose(outer: RingMap, inner: RingMap) -> RingMap:
    """outer after inner."""
    if inner.target.ring != outer.source.ring:
        raise RingMismatch("maps are not composable")
    return RingMap(inner.source, outer.target, [outer(img) for img in inner.images])


def maps_equal(f: RingMap, g: RingMap) -> bool:
    return f.target.ring == g.target.ring and all(
        f.target.reduce(a - b).is_zero() for a, b in zip(f.images, g.images)
    )


def _renamed_copy(A: FpAlgebra, taken: Iterable[str]) -> Tuple[Tuple[str, ...], dict]:
    taken = set(taken) | set(A.variables)
    renamed = []
    for v in A.variables:
        candidate = f"{v}_"
        while candidate in taken:
            candidate += "_"
        taken.add(candidate)
        renamed.append(candidate)
    return tuple(renamed), dict(zip(A.variables, renamed))


def map_kernel(phi: RingMap) -> Ideal:
    """
    Kernel of `phi` as an ideal of the source.

    Computed by eliminating the (renamed) target variables from the graph
    ideal. Generators are returned as canonical representatives modulo the
    source relations, so an injective map yields the empty generator list.
    """
    source, target = phi.source, phi.target
    renamed, _ = _renamed_copy(target, source.variables)
    combined = PolyRing(source.variables + renamed, source.field)
    moved = [combined.gen(n) for n in renamed]
    gens = [target_rel.substitute(moved) for target_rel in target.relations.generators]
    for v, img in zip(source.variables, phi.images):
        gens.append(combined.gen(v) - img.substitute(moved))
    eliminated = eliminate(Ideal(combined, gens), renamed)
    kernel = []
    for g in eliminated.groebner_basis():
        r = source.reduce(g.embed(source.ring))
        if not r.is_zero() and r not in kernel:
            kernel.append(r)
    return Ideal(source.ring, kernel)


def is_injective(phi: RingMap) -> bool:
    return not map_kernel(phi).generators


# -----------------------------------------------------------------
# TORSION, OPENNESS, LOCALIZATION
# -----------------------------------------------------------------
def torsion_saturate(A: FpAlgebra) -> Tuple[FpAlgebra, RingMap]:
    """Returns A modulo its w-power torsion, with the quotient map."""
    saturated = saturation(A.relations, A.uniformizer)
    B = FpAlgebra(A.ring, saturated, A.idef, A.name)
    B._torsion_free = True
    return B, RingMap(A, B, [B.reduce(g) for g in A.ring.gens])


def require_torsion_free(A: FpAlgebra) -> None:
    if not A.is_torsion_free():
        logger.error(f"Algebra {A.presentation()} has w-torsion")
        raise TorsionInput(f"the algebra {A.name or A.presentation()} has w-power torsion")


def is_open_ideal(A: FpAlgebra, J: Union[Ideal, Iterable[ElementLike]]) -> bool:
    """True iff every generator of the ideal of definition lies in sqrt(J + I_A)."""
    gens = J.generators if isinstance(J, Ideal) else J
    total = A.ideal(gens)
    return all(radical_contains(total, f) for f in A.idef)


def is_adic(A: FpAlgebra) -> bool:
    """True iff (w) alone is an ideal of definition."""
    return is_open_ideal(A, [A.uniformizer])


def localize(A: FpAlgebra, g: ElementLike, name: str = "u") -> Tuple[FpAlgebra, RingMap]:
    """
    Presents A[g^-1] as A[u]/(g*u - 1).

    The ideal of definition is carried over by extension, so the result
    models the completed localization with its restricted topology.
    """
    g = A.ring.coerce(g)
    u = A.ring.fresh_name(name)
    ring = A.ring.extend([u])
    rels = [r.embed(ring) for r in A.relations.generators]
    rels.append(g.embed(ring) * ring.gen(u) - 1)
    L = FpAlgebra(ring, Ideal(ring, rels), [f.embed(ring) for f in A.idef])
    L.inverted = g.embed(ring)
    if A._torsion_free:
        L._torsion_free = True
    return L, RingMap(A, L, [L.reduce(v.embed(ring)) for v in A.ring.gens])


def extend_to_localization(
    L: FpAlgebra, target: FpAlgebra, images: Mapping[str, Poly]
) -> RingMap:
    """
    Extends a map defined on the base variables of a localization `L` to
    all of `L` by sending the inverse variable to the inverse of the image
    of the localized element.

    Raises:
        InvalidArgument: if `L` is not a localization or that image is not
                         a unit of `target`.
    """
    if L.inverted is None:
        raise InvalidArgument("the source is not a localization")
    base = L.variables[:-1]
    partial = [target.ring.coerce(images[v]) for v in base] + [target.ring.zero()]
    unit = L.inverted.substitute(partial)
    inverse = exact_quotient(target, 1, unit)
    if inverse is None:
        raise InvalidArgument(f"{target.reduce(unit)} is not invertible in the target")
    return ring_map(L, target, partial[:-1] + [inverse])


def exact_quotient(A: FpAlgebra, numerator: ElementLike, denominator: ElementLike) -> Optional[Poly]:
    """
    The element t of A with denominator * t = numerator, or None.

    Works in A[s]/(denominator*s - numerator) saturated at the denominator,
    which presents the subring A[numerator/denominator] of A[denominator^-1];
    the quotient exists iff s reduces to an s-free element there.
    """
    num = A.ring.coerce(numerator)
    den = A.ring.coerce(denominator)
    s = A.ring.fresh_name("s")
    ext = PolyRing((s,) + A.variables, A.field)
    gens = [r.embed(ext) for r in A.relations.generators]
    gens.append(den.embed(ext) * ext.gen(0) - num.embed(ext))
    graph = saturation(Ideal(ext, gens), den.embed(ext))
    remainder = normal_form(ext.gen(0), graph.groebner_basis(MonomialOrder.block(1)), MonomialOrder.block(1))
    if remainder.degree_in(0) > 0:
        return None
    t = A.reduce(remainder.embed(A.ring))
    if not A.reduce(den * t - num).is_zero():
        return None
    return t


# -----------------------------------------------------------------
# INTEGRALITY
# -----------------------------------------------------------------
def integrality_relation(
    A: FpAlgebra, c: ElementLike, m: int, z_name: Optional[str] = None
) -> Optional[Poly]:
    """
    Finds a monic equation for c / w^m over A.

    Presents A[z]/(w^m z - c) saturated at w and scans its reduced basis in
    the block order (lex on z, then grevlex) for an element whose leading
    monomial is a pure power of z; such an element is monic in z. The one of
    lowest z-degree is returned, living in the ring (z, *A.variables).

    Args:
        A: A w-torsion-free algebra.
        c: The numerator.
        m: The w-exponent of the denominator.
        z_name: Name of the new variable; a fresh `z` by default.

    Returns:
        The monic relation, or None when c / w^m is not integral.

    Raises:
        TorsionInput: if A has w-power torsion.
    """
    require_torsion_free(A)
    if m < 0:
        raise InvalidArgument("denominator exponents must be non-negative")
    c = A.ring.coerce(c)
    z = z_name or A.ring.fresh_name("z")
    ext = PolyRing((z,) + A.variables, A.field)
    if A.is_zero_ring():
        # every element of the zero ring is integral; z itself is monic
        return ext.gen(0)
    w = ext.gen(A.uniformizer_name)
    gens = [r.embed(ext) for r in A.relations.generators]
    gens.append(w ** m * ext.gen(0) - c.embed(ext))
    presented = saturation(Ideal(ext, gens), w)
    order = MonomialOrder.block(1)
    best = None
    for g in presented.groebner_basis(order):
        lm = g.leading_monomial(order)
        if lm[0] > 0 and not any(lm[1:]):
            if best is None or lm[0] < best.degree_in(0):
                best = g
    return best


def is_integral_element(A: FpAlgebra, c: ElementLike, m: int) -> bool:
    """True iff c / w^m in A[1/w] is integral over A."""
    if m == 0:
        require_torsion_free(A)
        return True
    return integrality_relation(A, c, m) is not None


def standard_monomials(I: Ideal, max_degree: int, variables: Sequence[int]) -> List[Poly]:
    """
    Monomials in the given variable indices of total degree <= max_degree
    that are not divisible by any leading monomial of I's grevlex basis,
    in increasing grevlex order.
    """
    ring = I.ring
    leads = [g.leading_monomial(DEFAULT_ORDER) for g in I.groebner_basis()]
    out: List[Tuple[int, ...]] = []

    def walk(position: int, remaining: int, exps: List[int]) -> None:
        if position == len(variables):
            mono = tuple(exps)
            if not any(all(a <= b for a, b in zip(lead, mono)) for lead in leads):
                out.append(mono)
            return
        for e in range(remaining + 1):
            exps[variables[position]] = e
            walk(position + 1, remaining - e, exps)
        exps[variables[position]] = 0

    walk(0, max_degree, [0] * ring.nvars)
    out.sort(key=DEFAULT_ORDER.key)
    return [ring.monomial(mono) for mono in out]
