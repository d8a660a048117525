"""
The Generic Fiber as a Chart System

For an algebra A with ideal of definition (f_1..f_r) the generic fiber is
the increasing union of the charts

    B_n = A[f_1^n / w, .., f_r^n / w]   (saturated at w),   n >= 1,

glued along the transition maps B_m -> B_n for m >= n. Tubes of closed
subsets of the special fiber use the same construction with other
generators. This module also hosts point lifting through blow-ups, the
empty-fiber criterion, descent of generic-fiber maps to model maps and
the comparison of chart systems built from different generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from src.algebra.errors import (
    ExtensionBoundExceeded,
    InvalidArgument,
    NoFiniteOrder,
    NotContainingIdealOfDefinition,
)
from src.algebra.fpalg import (
    ElementLike,
    FpAlgebra,
    RingMap,
    exact_quotient,
    is_open_ideal,
    localize,
    require_torsion_free,
    ring_map,
)
from src.algebra.ideal import contains, ideal_equal, radical_contains
from src.algebra.poly import Poly, PolyRing
from src.config.settings import settings
from src.geometry.blowup import AdmissibleIdeal, ChartAtlas, blowup_charts, rees_presentation
from src.geometry.points import Point, point_validate, value_field
from src.utils.logging import get_logger

logger = get_logger(__name__)

@dataclass(frozen=True)
class GenericChart:
    """The n-th chart A[g_j^n / w] for generators g_1..g_s."""

    index: int
    algebra: FpAlgebra
    structure: RingMap
    generators: Tuple[Poly, ...]
    rees_names: Tuple[str, ...]

def _power_chart(A: FpAlgebra, gens: Sequence[Poly], n: int) -> GenericChart:
    if n < 1:
        raise InvalidArgument("chart indices start at 1")
    powers = [g ** n for g in gens]
    B, structure, names = rees_presentation(A, powers, A.uniformizer, [A.uniformizer])
    B._torsion_free = True
    return GenericChart(n, B, structure, tuple(gens), names)

def generic_chart(A: FpAlgebra, n: int) -> GenericChart:
    """The chart B_n of the generic fiber of A."""
    chart = _power_chart(A, A.idef, n)
    logger.info(f"Generic chart B_{n}: {chart.algebra.presentation()}")
    return chart

def check_generic_chart(chart: GenericChart) -> bool:
    """
    (g^n) B and w B define the same topology on the chart: (g^n) B lies in
    w B and w lies in its radical. For n = 1 the two ideals are equal.
    """
    B = chart.algebra
    powers = B.ideal([chart.structure(g ** chart.index) for g in chart.generators])
    w_ideal = B.ideal([B.uniformizer])
    if chart.index == 1:
        return ideal_equal(powers, w_ideal)
    return all(contains(w_ideal, p) for p in powers.generators) and radical_contains(powers, B.uniformizer)

def generic_transition(A: FpAlgebra, m: int, n: int) -> RingMap:
    """
    The A-algebra map B_m -> B_n, T_j -> f_j^(m-n) * T_j.

    It is forced: in B_n, w * f_j^(m-n) * T_j = f_j^m.
    """
    if not m >= n >= 1:
        raise InvalidArgument(f"transition needs m >= n >= 1, got m={m}, n={n}")
    source = generic_chart(A, m)
    if m == n:
        target = source
    else:
        target = generic_chart(A, n)
    return _transition(source, target, m - n)

def _transition(source: GenericChart, target: GenericChart, gap: int) -> RingMap:
    B = target.algebra
    images = [B.ring.gen(v) for v in source.structure.source.variables]
    for j in range(len(source.rees_names)):
        f = target.structure(source.generators[j])
        images.append(f ** gap * B.ring.gen(target.rees_names[j]))
    return ring_map(source.algebra, B, images)

def tube_chart(A: FpAlgebra, z_gens: Sequence[ElementLike], n: int) -> GenericChart:
    """
    The n-th chart A[g_1^n/w, .., g_s^n/w] of the tube over V(g_1..g_s).

    Raises:
        NotContainingIdealOfDefinition: if some ideal-of-definition
            generator is not in the radical of (g) + I_A.
    """
    gens = [A.ring.coerce(g) for g in z_gens]
    if not is_open_ideal(A, gens):
        logger.error(f"Tube ideal ({', '.join(map(str, gens))}) misses the ideal of definition")
        raise NotContainingIdealOfDefinition(
            f"({', '.join(map(str, gens))}) does not contain a power of the ideal of definition"
        )
    return _power_chart(A, gens, n)

def chart_refinement(
    A: FpAlgebra, other_gens: Sequence[ElementLike], n: int, bound: Optional[int] = None
) -> Tuple[int, RingMap]:
    """
    Compares the chart system of A with the one built from `other_gens`.

    Returns the least m <= bound for which the m-th chart for `other_gens`
    maps to B_n over A, together with that map.

    Raises:
        NotContainingIdealOfDefinition: if `other_gens` do not generate an
            ideal of definition.
        ExtensionBoundExceeded: if no m <= bound works.
    """
    bound = settings.CHART_REFINEMENT_BOUND if bound is None else bound
    gens = [A.ring.coerce(g) for g in other_gens]
    other = FpAlgebra(A.ring, A.relations, gens, A.name)
    if not (is_open_ideal(A, gens) and is_open_ideal(other, A.idef)):
        raise NotContainingIdealOfDefinition("the generators do not define the same topology")
    target = generic_chart(A, n)
    B = target.algebra
    for m in range(1, bound + 1):
        quotients = [exact_quotient(B, target.structure(g ** m), B.uniformizer) for g in gens]
        if all(q is not None for q in quotients):
            source = _power_chart(other, gens, m)
            images = [B.ring.gen(v) for v in A.variables] + quotients
            return m, ring_map(source.algebra, B, images)
    raise ExtensionBoundExceeded(bound)

# -----------------------------------------------------------------
# POINTS THROUGH BLOW-UPS
# -----------------------------------------------------------------
def chart_point(atlas: ChartAtlas, i: int, P: Point) -> Point:
    """
    The candidate lift of P on chart i: T_j -> f_j(P) / f_i(P).

    Adjoined fractions of normalized charts c / w^m take c(P) / v^(e m).
    The result is only a point of the chart when f_i has minimal order at
    P; callers check that with `point_validate`.

    Raises:
        NoFiniteOrder: if f_i vanishes at P.
    """
    values = [P.evaluate(f) for f in atlas.ideal.generators]
    if not values[i]:
        raise NoFiniteOrder(f"generator {i} of the ideal vanishes at the point")
    chart = atlas.charts[i]
    _, v = value_field(P.coefficients)
    names = chart.algebra.variables
    known = list(P.values) + [val / values[i] for val in values]
    for _, c, m in chart.adjoined:
        stage = Point(names[: len(known)], P.e, tuple(known), P.coefficients)
        numerator = stage.evaluate(c.embed(PolyRing(stage.variables, chart.algebra.field)))
        known.append(numerator / v ** (P.e * m))
    return Point(names, P.e, tuple(known), P.coefficients)

def lift_point(
    A: FpAlgebra, J: Union[AdmissibleIdeal, ChartAtlas], P: Point
) -> Tuple[int, Point]:
    """
    Lifts P to the chart of the blow-up where f_i(P) has minimal order.

    Ties go to the smallest index. The lift is validated against the chart
    algebra before it is returned.

    Raises:
        NoFiniteOrder: if every generator vanishes at P.
        RelationViolated: if P is not a point of A.
    """
    atlas = J if isinstance(J, ChartAtlas) else blowup_charts(A, J)
    orders = [P.order(f) for f in atlas.ideal.generators]
    finite = [(o, i) for i, o in enumerate(orders) if o is not None]
    if not finite:
        logger.error("Every generator of the blown-up ideal vanishes at the point")
        raise NoFiniteOrder("every generator of the ideal vanishes at the point")
    _, i = min(finite)
    lifted = chart_point(atlas, i, P)
    point_validate(atlas.charts[i].algebra, lifted)
    return i, lifted

def is_generic_fiber_empty(A: FpAlgebra) -> bool:
    """True iff w is nilpotent in A."""
    return radical_contains(A.relations, A.uniformizer)

# -----------------------------------------------------------------
# DESCENT
# -----------------------------------------------------------------
@dataclass(frozen=True)
class NeedsBlowup:
    """The image of source variable `index + 1` does not lie in the model."""

    index: int
    numerator: Poly
    exponent: int

    def __str__(self) -> str:
        return f"NeedsBlowup({self.index})"

def descend_morphism(
    A: FpAlgebra, B: FpAlgebra, images: Sequence[Tuple[ElementLike, int]]
) -> Union[RingMap, NeedsBlowup]:
    """
    Descends a generic-fiber map A[1/w] -> B[1/w], given by x_i -> c_i / w^m_i
    for the non-w variables of A, to a model map A -> B.

    Raises:
        TorsionInput: if B has w-torsion.
        InvalidArgument: on a wrong number of images.
        IllDefined: if the fraction-level map does not respect A's relations.
    """
    require_torsion_free(B)
    if len(images) != len(A.variables) - 1:
        raise InvalidArgument(
            f"{len(images)} images given for {len(A.variables) - 1} non-uniformizer variables"
        )
    fractions = [(B.ring.coerce(c), m) for c, m in images]
    L, to_local = localize(B, B.uniformizer)
    u = L.ring.gen(L.variables[-1])
    ring_map(A, L, [L.ring.gen(B.uniformizer_name)] + [to_local(c) * u ** m for c, m in fractions])

    descended = [B.reduce(B.uniformizer)]
    for i, (c, m) in enumerate(fractions):
        q = exact_quotient(B, c, B.uniformizer ** m)
        if q is None:
            logger.info(f"Image {i} ({c}/w^{m}) does not lie in the model")
            return NeedsBlowup(i, c, m)
        descended.append(q)
    return ring_map(A, B, descended)
