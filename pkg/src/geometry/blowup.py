"""
Admissible Formal Blow-ups of Affine Models

The blow-up of Spf(A) in an admissible ideal J = (f1..fr) is covered by
one chart per generator. The chart at f_i is the affine blow-up algebra

    B_i = A[T_0..T_{r-1}] / ((f_i * T_j - f_j)_j + I_A)   saturated at f_i and w,

on which J becomes principal, generated by f_i. This module builds these
charts, glues them along their overlaps, composes blow-ups through product
ideals, extends admissible ideals from basic opens and turns finite
modifications into blow-ups.

Every chart is a `Chart` record: its algebra, the structure map from A, the
distinguished element (image of f_i), the names of its Rees variables and,
for normalized charts, the adjoined integral fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.algebra.errors import (
    EmptyOverlap,
    ExtensionBoundExceeded,
    IllDefined,
    InvalidArgument,
    NotAdmissible,
    NotAGenerator,
    NotIntegral,
    NotOpenLocally,
    NotPrincipal,
)
from src.algebra.fpalg import (
    ElementLike,
    FpAlgebra,
    RingMap,
    compose,
    exact_quotient,
    extend_to_localization,
    identity_map,
    integrality_relation,
    is_open_ideal,
    localize,
    map_kernel,
    maps_equal,
    require_torsion_free,
    ring_map,
)
from src.algebra.ideal import Ideal, contains, ideal_equal, saturation, unique_generators
from src.algebra.poly import Poly, PolyRing
from src.config.settings import settings
from src.utils.logging import get_logger

logger = get_logger(__name__)

# (numerator, exponent): numerator / g^exponent for the relevant g
Fraction_ = Tuple[ElementLike, int]


# -----------------------------------------------------------------
# DATA TYPES
# -----------------------------------------------------------------
@dataclass(frozen=True)
class AdmissibleIdeal:
    """A finitely generated open ideal of `ambient`, with ordered generators."""

    ambient: FpAlgebra
    generators: Tuple[Poly, ...]

    def __post_init__(self) -> None:
        gens = tuple(self.ambient.ring.coerce(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not is_open_ideal(self.ambient, gens):
            logger.error(f"Ideal ({', '.join(map(str, gens))}) is not open")
            raise NotAdmissible(
                f"({', '.join(map(str, gens))}) does not contain a power of the ideal of definition"
            )

    def ideal(self) -> Ideal:
        return self.ambient.ideal(self.generators)

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def admissible_ideal(A: FpAlgebra, gens: Sequence[ElementLike]) -> AdmissibleIdeal:
    return AdmissibleIdeal(A, tuple(A.ring.coerce(g) for g in gens))


@dataclass(frozen=True)
class Chart:
    index: int
    algebra: FpAlgebra
    structure: RingMap
    distinguished: Poly
    rees_names: Tuple[str, ...]
    # (variable name, numerator, w-exponent) for normalized charts
    adjoined: Tuple[Tuple[str, Poly, int], ...] = ()
    empty: bool = False

    def rees(self, j: int) -> Poly:
        return self.algebra.ring.gen(self.rees_names[j])


@dataclass(frozen=True)
class ChartAtlas:
    base: FpAlgebra
    ideal: AdmissibleIdeal
    charts: Tuple[Chart, ...]
    provenance: str = "plain"

    def __len__(self) -> int:
        return len(self.charts)

    def chart(self, i: int) -> Chart:
        if not 0 <= i < len(self.charts):
            raise InvalidArgument(f"chart index {i} out of range 0..{len(self.charts) - 1}")
        return self.charts[i]

    def nonempty(self) -> List[int]:
        return [c.index for c in self.charts if not c.empty]


@dataclass(frozen=True)
class RingIso:
    forward: RingMap
    backward: RingMap

    def is_inverse_pair(self) -> bool:
        return maps_equal(
            compose(self.backward, self.forward), identity_map(self.forward.source)
        ) and maps_equal(compose(self.forward, self.backward), identity_map(self.backward.source))


def presentation_iso(B: FpAlgebra, C: FpAlgebra) -> Optional[RingIso]:
    """The identity-on-names isomorphism between two presentations, if any."""
    if B.variables != C.variables:
        return None
    try:
        iso = RingIso(ring_map(B, C, list(C.ring.gens)), ring_map(C, B, list(B.ring.gens)))
    except (IllDefined, InvalidArgument):
        return None
    return iso


# -----------------------------------------------------------------
# CHARTS
# -----------------------------------------------------------------
def rees_presentation(
    A: FpAlgebra,
    numerators: Sequence[Poly],
    denominator: Poly,
    saturate_at: Sequence[Poly],
    prefix: str = "t",
) -> Tuple[FpAlgebra, RingMap, Tuple[str, ...]]:
    """
    Presents A[numerators / denominator] as A[T]/((denominator*T_j - n_j) + I_A),
    saturated successively at each element of `saturate_at`.
    """
    names = tuple(A.ring.fresh_names(prefix, len(numerators)))
    ring = A.ring.extend(names)
    gens = [r.embed(ring) for r in A.relations.generators]
    den = denominator.embed(ring)
    for name, num in zip(names, numerators):
        gens.append(den * ring.gen(name) - num.embed(ring))
    relations = Ideal(ring, gens)
    for g in saturate_at:
        relations = saturation(relations, g.embed(ring))
    B = FpAlgebra(ring, relations, [f.embed(ring) for f in A.idef])
    structure = RingMap(A, B, [B.reduce(v.embed(ring)) for v in A.ring.gens])
    return B, structure, names


def _generator_index(J: AdmissibleIdeal, g: ElementLike) -> int:
    """Position of g among the generators of J, compared modulo I_A."""
    target = J.ambient.ring.coerce(g)
    for i, f in enumerate(J.generators):
        if f == target:
            return i
    for i, f in enumerate(J.generators):
        if J.ambient.reduce(f - target).is_zero():
            return i
    logger.error(f"{target} is not among the generators {J}")
    raise NotAGenerator(f"{target} is not a listed generator of {J}")


def _chart(A: FpAlgebra, J: AdmissibleIdeal, i: int) -> Chart:
    g = J.generators[i]
    B, structure, names = rees_presentation(A, J.generators, g, [g, A.uniformizer])
    B._torsion_free = True
    empty = B.is_zero_ring()
    if empty:
        logger.warning(f"Chart {i} of the blow-up in {J} is the zero ring")
    return Chart(i, B, structure, B.reduce(g.embed(B.ring)), names, (), empty)


def affine_blowup_algebra(A: FpAlgebra, J: AdmissibleIdeal, g: ElementLike) -> Tuple[FpAlgebra, RingMap]:
    """
    The affine blow-up algebra A[J/g] with its structure map.

    Raises:
        NotAGenerator: if `g` is not one of J's listed generators.
    """
    chart = _chart(A, J, _generator_index(J, g))
    return chart.algebra, chart.structure


def blowup_charts(A: FpAlgebra, J: Union[AdmissibleIdeal, Sequence[ElementLike]]) -> ChartAtlas:
    """
    Builds the chart atlas of the admissible blow-up of A in J.

    One chart per listed generator, in order; zero-ring charts are kept and
    flagged so that chart indices stay aligned with the generator list.

    Raises:
        NotAdmissible: if J is not open.
    """
    if not isinstance(J, AdmissibleIdeal):
        J = admissible_ideal(A, J)
    charts = tuple(_chart(A, J, i) for i in range(len(J.generators)))
    logger.info(f"Built {len(charts)} charts for the blow-up in {J}")
    return ChartAtlas(A, J, charts)


# -----------------------------------------------------------------
# GLUING
# -----------------------------------------------------------------
def complete_images(chart: Chart, target: FpAlgebra, known: Dict[str, Poly]) -> Optional[Dict[str, Poly]]:
    """
    Completes images of the base and Rees variables of `chart` over its
    adjoined fractions c / w^m by exact division in `target`.
    """
    ring = chart.algebra.ring
    images = dict(known)
    zero = target.ring.zero()
    for name, c, m in chart.adjoined:
        current = [images.get(v, zero) for v in ring.variables]
        quotient = exact_quotient(target, c.embed(ring).substitute(current), target.uniformizer ** m)
        if quotient is None:
            return None
        images[name] = quotient
    return images


def _overlap_map(atlas: ChartAtlas, i: int, j: int, source: FpAlgebra, target: FpAlgebra) -> RingMap:
    chart_i, chart_j = atlas.charts[i], atlas.charts[j]
    inverse_j = target.ring.gen(target.variables[-1])
    known: Dict[str, Poly] = {v: target.ring.gen(v) for v in atlas.base.variables}
    for k, name in enumerate(chart_i.rees_names):
        known[name] = target.reduce(target.ring.gen(chart_j.rees_names[k]) * inverse_j)
    images = complete_images(chart_i, target, known)
    if images is None:
        raise InvalidArgument(f"adjoined fractions of chart {i} do not transport to chart {j}")
    images[source.variables[-1]] = target.ring.gen(chart_j.rees_names[i])
    return ring_map(source, target, [images[v] for v in source.variables])


def chart_transition(atlas: ChartAtlas, i: int, j: int) -> RingIso:
    """
    The gluing isomorphism B_i[1/T_j] = B_j[1/T_i] between two charts.

    T_j in B_i is the fraction f_j/f_i; the forward map sends T_k to
    T_k * (1/T_i) and the inverse of T_j to T_i.

    Raises:
        EmptyOverlap: if either localization is the zero ring.
    """
    chart_i, chart_j = atlas.chart(i), atlas.chart(j)
    if i == j:
        return RingIso(identity_map(chart_i.algebra), identity_map(chart_i.algebra))
    if chart_i.empty or chart_j.empty:
        raise EmptyOverlap(f"chart {i if chart_i.empty else j} is empty")
    L_i, _ = localize(chart_i.algebra, chart_i.rees(j))
    L_j, _ = localize(chart_j.algebra, chart_j.rees(i))
    if L_i.is_zero_ring() or L_j.is_zero_ring():
        logger.warning(f"Charts {i} and {j} do not overlap")
        raise EmptyOverlap(f"charts {i} and {j} have empty overlap")
    iso = RingIso(_overlap_map(atlas, i, j, L_i, L_j), _overlap_map(atlas, j, i, L_j, L_i))
    if not iso.is_inverse_pair():
        logger.error(f"Transition maps between charts {i} and {j} are not inverse")
        raise InvalidArgument(f"transition maps between charts {i} and {j} are not inverse")
    return iso


def check_cocycle(atlas: ChartAtlas, i: int, j: int, k: int) -> bool:
    """
    Checks that i -> j -> k agrees with i -> k on the triple overlap.

    Both composites are pushed into B_k localized at T_i * T_j. Triples
    that do not pairwise overlap pass vacuously.
    """
    if len({i, j, k}) < 3:
        return True
    try:
        ij = chart_transition(atlas, i, j)
        jk = chart_transition(atlas, j, k)
        ik = chart_transition(atlas, i, k)
    except EmptyOverlap:
        return True
    chart_k = atlas.charts[k]
    W, _ = localize(chart_k.algebra, chart_k.rees(i) * chart_k.rees(j))
    if W.is_zero_ring():
        return True
    identity = {v: W.ring.gen(v) for v in chart_k.algebra.variables}
    into_from_jk = extend_to_localization(jk.forward.target, W, identity)
    into_from_ik = extend_to_localization(ik.forward.target, W, identity)
    jk_in_w = compose(into_from_jk, jk.forward)
    through_j = extend_to_localization(
        ij.forward.target, W, {v: jk_in_w.image_of(v) for v in atlas.charts[j].algebra.variables}
    )
    left = compose(through_j, ij.forward)
    right = compose(into_from_ik, ik.forward)
    # the sources invert different elements; compare on the variables of B_i
    return all(
        W.reduce(left.image_of(v) - right.image_of(v)).is_zero() for v in atlas.charts[i].algebra.variables
    )


def check_principal(atlas: ChartAtlas) -> List[bool]:
    """Per chart: does J * B_i equal (f_i) * B_i?"""
    results = []
    for chart in atlas.charts:
        B = chart.algebra
        extended = B.ideal([chart.structure(f) for f in atlas.ideal.generators])
        results.append(ideal_equal(extended, B.ideal([chart.distinguished])))
    return results


def check_torsion_free(atlas: ChartAtlas) -> List[bool]:
    results = []
    for chart in atlas.charts:
        B = chart.algebra
        results.append(ideal_equal(saturation(B.relations, B.uniformizer), B.relations))
    return results


# -----------------------------------------------------------------
# SUBRINGS AND THE UNIVERSAL PROPERTY
# -----------------------------------------------------------------
def fraction_subring(A: FpAlgebra, numerators: Sequence[ElementLike], g: ElementLike) -> FpAlgebra:
    """
    Presents the subring A[n_1/g, .., n_r/g] of A[1/g] as the kernel of
    A[T] -> A[1/g], T_j -> n_j * u.
    """
    numerators = [A.ring.coerce(n) for n in numerators]
    L, _ = localize(A, g)
    names = tuple(A.ring.fresh_names("t", len(numerators)))
    ring = A.ring.extend(names)
    free = FpAlgebra(ring, [r.embed(ring) for r in A.relations.generators], [f.embed(ring) for f in A.idef])
    u = L.ring.gen(L.variables[-1])
    images = [L.ring.gen(v) for v in A.variables] + [n.embed(L.ring) * u for n in numerators]
    kernel = map_kernel(ring_map(free, L, images))
    B = FpAlgebra(ring, list(kernel.generators) + list(free.relations.generators), free.idef)
    return B


def factor_through_chart(atlas: ChartAtlas, i: int, phi: RingMap) -> RingMap:
    """
    The unique map B_i -> C through which phi: A -> C factors, when
    J * C = (phi(f_i)) * C and C is w-torsion-free.

    Raises:
        TorsionInput: if C has w-torsion.
        NotPrincipal: if some phi(f_j) is not divisible by phi(f_i).
    """
    chart = atlas.chart(i)
    C = phi.target
    require_torsion_free(C)
    denominator = phi(atlas.ideal.generators[i])
    known = {v: phi.image_of(v) for v in atlas.base.variables}
    for j, name in enumerate(chart.rees_names):
        q = exact_quotient(C, phi(atlas.ideal.generators[j]), denominator)
        if q is None:
            logger.error(f"phi(f_{j}) is not divisible by phi(f_{i}) in the target")
            raise NotPrincipal(i)
        known[name] = q
    images = complete_images(chart, C, known)
    if images is None:
        raise NotPrincipal(i, f"adjoined fractions of chart {i} do not descend to the target")
    return ring_map(chart.algebra, C, [images[v] for v in chart.algebra.variables])


# -----------------------------------------------------------------
# COMPOSITION, EXTENSION, FINITE MODIFICATIONS
# -----------------------------------------------------------------
def compose_blowups(
    A: FpAlgebra, J1: AdmissibleIdeal, J2: AdmissibleIdeal
) -> Tuple[ChartAtlas, List[RingMap]]:
    """
    Blows up A in the product J1 * J2.

    Chart a * len(J2) + b sits at f_a * g_b; the returned map for it goes
    from the chart of `blowup_charts(A, J1)` at f_a, sending T_c to
    T_(c, b).
    """
    first = blowup_charts(A, J1)
    product = AdmissibleIdeal(A, tuple(f * g for f in J1.generators for g in J2.generators))
    atlas = blowup_charts(A, product)
    width = len(J2.generators)
    maps = []
    for chart in atlas.charts:
        a, b = divmod(chart.index, width)
        source = first.charts[a]
        C = chart.algebra
        images = [C.ring.gen(v) for v in A.variables]
        images += [C.ring.gen(chart.rees_names[c * width + b]) for c in range(len(J1.generators))]
        maps.append(ring_map(source.algebra, C, images))
    return atlas, maps


def _ideal_power_gens(gens: Sequence[Poly], k: int, ring: PolyRing) -> List[Poly]:
    out = []
    for combo in combinations_with_replacement(gens, k):
        p = ring.one()
        for f in combo:
            p = p * f
        out.append(p)
    return out


def extend_admissible_ideal(
    A: FpAlgebra, g: ElementLike, local_gens: Sequence[Fraction_], bound: Optional[int] = None
) -> AdmissibleIdeal:
    """
    Extends an open ideal of A[1/g], given by fractions p_i / g^m_i, to an
    admissible ideal of A.

    The result is (p_i * g^(M - m_i))_i + I^k with M the largest exponent
    and k the least exponent <= bound for which I^k A[1/g] lies in the
    local ideal.

    Raises:
        NotOpenLocally: if the fractions do not generate an open ideal.
        ExtensionBoundExceeded: if no k <= bound works.
    """
    bound = settings.EXTENSION_BOUND if bound is None else bound
    g = A.ring.coerce(g)
    L, to_local = localize(A, g)
    u = L.ring.gen(L.variables[-1])
    fractions = [(A.ring.coerce(p), m) for p, m in local_gens]
    local = L.ideal([to_local(p) * u ** m for p, m in fractions])
    if not is_open_ideal(L, local):
        logger.error(f"Local generators {local_gens} are not open on D({g})")
        raise NotOpenLocally(f"the fractions do not generate an open ideal of A[1/{g}]")
    top = max((m for _, m in fractions), default=0)
    cleared = [A.reduce(p * g ** (top - m)) for p, m in fractions]
    for k in range(bound + 1):
        power = _ideal_power_gens(A.idef, k, A.ring)
        if all(contains(local, to_local(q)) for q in power):
            gens = unique_generators(cleared + [A.reduce(q) for q in power])
            J = admissible_ideal(A, gens)
            restricted = L.ideal([to_local(f) for f in J.generators])
            if not ideal_equal(restricted, local):
                raise InvalidArgument("extended ideal does not restrict to the local ideal")
            logger.info(f"Extended ideal from D({g}) with k = {k}: {J}")
            return J
    logger.warning(f"No exponent k <= {bound} extends the local ideal on D({g})")
    raise ExtensionBoundExceeded(bound)


def finite_modification_to_blowup(A: FpAlgebra, elems: Sequence[Fraction_]) -> Tuple[AdmissibleIdeal, int, RingIso]:
    """
    Realizes A[c_1/w^m_1, ..] for integral fractions as an admissible blow-up.

    With r the largest exponent and c_i' = c_i * w^(r - m_i), the blow-up in
    (w^r, c_1', .., c_n') has, at w^r, a chart isomorphic to
    A[z]/((w^r z_i - c_i') + monic relations) saturated at w.

    Raises:
        TorsionInput: if A has w-torsion.
        NotIntegral: naming the first non-integral fraction.
    """
    require_torsion_free(A)
    fractions = [(A.ring.coerce(c), m) for c, m in elems]
    z_names = A.ring.fresh_names("z", len(fractions))
    relations = []
    for i, (c, m) in enumerate(fractions):
        relation = integrality_relation(A, c, m, z_names[i])
        if relation is None:
            logger.error(f"Fraction {c}/w^{m} is not integral")
            raise NotIntegral(i, f"fraction {i} ({c} / {A.uniformizer_name}^{m}) is not integral")
        relations.append(relation)

    r = max((m for _, m in fractions), default=0)
    w = A.uniformizer
    cleared = [A.reduce(c * w ** (r - m)) for c, m in fractions]
    J = admissible_ideal(A, [w ** r] + cleared)
    atlas = blowup_charts(A, J)
    chart = atlas.charts[0]

    ring = A.ring.extend(z_names)
    gens = [q.embed(ring) for q in A.relations.generators]
    gens += [w.embed(ring) ** r * ring.gen(z) - c.embed(ring) for z, c in zip(z_names, cleared)]
    gens += [rel.embed(ring) for rel in relations]
    presented = FpAlgebra(ring, saturation(Ideal(ring, gens), w.embed(ring)), [f.embed(ring) for f in A.idef])

    B = chart.algebra
    forward = [presented.ring.gen(v) for v in A.variables] + [presented.ring.one()]
    forward += [presented.ring.gen(z) for z in z_names]
    backward = [B.ring.gen(v) for v in A.variables] + [chart.rees(i + 1) for i in range(len(z_names))]
    iso = RingIso(ring_map(B, presented, forward), ring_map(presented, B, backward))
    if not iso.is_inverse_pair():
        raise InvalidArgument("chart and presented modification are not isomorphic")
    return J, 0, iso
