"""
w-Normalization

The normalization of a w-torsion-free algebra A is the integral closure
of A inside A[1/w]. It is computed by adjunction: as long as some c makes
c / w integral but not an element of A, adjoin z = c / w together with its
monic equation and saturate at w. If x = c / w^m is integral and m is
minimal, then w^(m-1) x = c' / w is integral and not in A, so
single-denominator witnesses suffice.

Witnesses come from two searches, cheapest first:
1.  the standard monomials of I_A + (w) of degree <= D;
2.  the endomorphism ring of the reduced fiber. Let J be the radical of
    (w) + I_A. Every c with c*J inside w*J + I_A gives an integral c / w,
    and A is integrally closed in A[1/w] iff each such c lies in (w) + I_A.
    This condition is linear in c, so it also finds witnesses that are sums
    of monomials, such as (x - 1) / w over (x - 1)^2 = w^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from src.algebra.errors import GenericFiberChanged, IllDefined, IncompleteNormalization, InvalidArgument
from src.algebra.fpalg import (
    ElementLike,
    FpAlgebra,
    RingMap,
    compose,
    extend_to_localization,
    integrality_relation,
    is_integral_element,
    localize,
    require_torsion_free,
    ring_map,
    standard_monomials,
)
from src.algebra.ideal import (
    Ideal,
    contains,
    eliminate,
    ideal_equal,
    ideal_intersection,
    ideal_quotient,
    saturation,
    unique_generators,
)
from src.algebra.poly import Poly, squarefree_part
from src.config.settings import settings
from src.geometry.blowup import AdmissibleIdeal, Chart, ChartAtlas, RingIso, blowup_charts
from src.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class NormalizationResult:
    """
    Attributes:
        closure: The (bounded) integral closure.
        inclusion: The map A -> closure.
        adjoined: (name, c, m) per adjoined fraction z = c / w^m, in order.
        complete: False if the step limit stopped the search.
    """

    closure: FpAlgebra
    inclusion: RingMap
    adjoined: Tuple[Tuple[str, Poly, int], ...]
    complete: bool


# -----------------------------------------------------------------
# REDUCED FIBER
# -----------------------------------------------------------------
def _is_zero_dimensional(basis: Sequence[Poly], nvars: int) -> bool:
    leads = [g.leading_monomial() for g in basis]
    return all(any(lm[i] > 0 and sum(lm) == lm[i] for lm in leads) for i in range(nvars))


def reduced_fiber_ideal(A: FpAlgebra) -> Ideal:
    """
    An ideal between (w) + I_A and its radical.

    Squarefree parts of basis elements are added until nothing changes.
    When A/wA is finite over k, the squarefree parts of the eliminants in
    each single variable are added as well, and the result is the radical.
    """
    ring = A.ring
    K = A.ideal([A.uniformizer])
    for _ in range(ring.nvars + 1):
        basis = list(K.groebner_basis())
        extra = [squarefree_part(g) for g in basis]
        if _is_zero_dimensional(basis, ring.nvars):
            for name in ring.variables[1:]:
                others = [v for v in ring.variables if v != name]
                extra += [squarefree_part(g.embed(ring)) for g in eliminate(K, others).groebner_basis()]
            return Ideal(ring, basis + extra)
        grown = Ideal(ring, basis + extra)
        if ideal_equal(grown, K):
            break
        K = grown
    return K


def endomorphism_numerators(A: FpAlgebra, J: Optional[Ideal] = None) -> List[Poly]:
    """
    Generators c of (w*J + I_A) : J, reduced modulo I_A.

    Multiplication by c / w maps J into itself, so every c / w is integral.
    Since w is a non-zero-divisor the quotient lies in J, and generators of
    J inside (w) + I_A impose no condition.

    Args:
        A: A w-torsion-free algebra.
        J: Defaults to `reduced_fiber_ideal(A)`.
    """
    J = reduced_fiber_ideal(A) if J is None else J
    ring = A.ring
    w = A.uniformizer
    w_ideal = A.ideal([w])
    basis = J.groebner_basis()
    conditions = [g for g in basis if not contains(w_ideal, g)]
    if not conditions:
        return []
    w_J = Ideal(ring, [w * g for g in basis] + list(A.relations.generators))
    quotient = ideal_intersection(J, ideal_quotient(w_J, Ideal(ring, conditions)))
    numerators = unique_generators([A.reduce(q) for q in quotient.groebner_basis()])
    return sorted(numerators, key=lambda c: (c.total_degree(), str(c)))


# -----------------------------------------------------------------
# INTEGRAL CLOSURE
# -----------------------------------------------------------------
def is_integrally_closed(A: FpAlgebra, degree_bound: Optional[int] = None) -> Tuple[bool, Optional[Poly]]:
    """
    Searches for c of degree <= degree_bound with c / w integral but not in A.

    Standard monomials of I_A + (w) in the non-w variables are tried
    first, in increasing grevlex order, then the endomorphism numerators of
    the reduced fiber by increasing degree.

    Returns:
        (True, None) if no witness exists below the bound, else (False, c).

    Raises:
        TorsionInput: if A has w-torsion.
    """
    require_torsion_free(A)
    bound = settings.DEGREE_BOUND if degree_bound is None else degree_bound
    w_ideal = A.ideal([A.uniformizer])
    candidates = standard_monomials(w_ideal, bound, range(1, len(A.variables)))
    for c in candidates:
        if contains(w_ideal, c):
            continue
        if is_integral_element(A, c, 1):
            logger.debug(f"Integrality witness {c}/{A.uniformizer_name}")
            return False, c
    for c in endomorphism_numerators(A):
        if c.total_degree() > bound or contains(w_ideal, c):
            continue
        if is_integral_element(A, c, 1):
            logger.debug(f"Integrality witness {c}/{A.uniformizer_name} from the reduced fiber")
            return False, c
    return True, None


def generic_fiber_iso(result: NormalizationResult) -> Optional[RingIso]:
    """
    The isomorphism A[1/w] -> closure[1/w] induced by the inclusion, with
    its inverse, or None when the inclusion does not localize to one.

    The inverse sends each adjoined z = c / w^m to c * u^m, where the
    earlier adjoined variables inside c are replaced the same way.
    """
    A, C = result.inclusion.source, result.closure
    A_w, _ = localize(A, A.uniformizer)
    C_w, to_C_w = localize(C, C.uniformizer)
    try:
        forward = extend_to_localization(
            A_w, C_w, {v: to_C_w(result.inclusion.image_of(v)) for v in A.variables}
        )
    except (IllDefined, InvalidArgument):
        return None
    u = A_w.ring.gen(A_w.variables[-1])
    images = {v: A_w.ring.gen(v) for v in A.variables}
    for z, c, m in result.adjoined:
        partial = [images.get(v, A_w.ring.zero()) for v in C.variables]
        images[z] = A_w.reduce(c.substitute(partial) * u ** m)
    images[C_w.variables[-1]] = u
    try:
        backward = ring_map(C_w, A_w, [images[v] for v in C_w.variables])
    except (IllDefined, InvalidArgument):
        return None
    iso = RingIso(forward, backward)
    return iso if iso.is_inverse_pair() else None


def normalize(A: FpAlgebra, degree_bound: Optional[int] = None, max_steps: Optional[int] = None) -> NormalizationResult:
    """
    Computes the integral closure of A in A[1/w] up to the degree bound.

    Raises:
        TorsionInput: if A has w-torsion.
        GenericFiberChanged: if the result does not become isomorphic to A
                             after inverting w.
    """
    require_torsion_free(A)
    max_steps = settings.NORMALIZATION_MAX_STEPS if max_steps is None else max_steps
    current = A
    adjoined = []
    complete = True
    while True:
        closed, c = is_integrally_closed(current, degree_bound)
        if closed:
            break
        if len(adjoined) >= max_steps:
            logger.warning(f"Normalization stopped after {max_steps} adjunctions")
            complete = False
            break
        z = current.ring.fresh_name(f"z{len(adjoined) + 1}")
        relation = integrality_relation(current, c, 1, z)
        ring = current.ring.extend([z])
        w = ring.gen(0)
        gens = [r.embed(ring) for r in current.relations.generators]
        gens.append(w * ring.gen(z) - c.embed(ring))
        gens.append(relation.embed(ring))
        nxt = FpAlgebra(ring, saturation(Ideal(ring, gens), w), [f.embed(ring) for f in current.idef], A.name)
        nxt._torsion_free = True
        adjoined.append((z, c.embed(ring), 1))
        logger.info(f"Adjoined {z} = {c}/{A.uniformizer_name} with {relation.embed(ring)} = 0")
        current = nxt

    final_ring = current.ring
    adjoined = tuple((z, c.embed(final_ring), m) for z, c, m in adjoined)
    inclusion = RingMap(A, current, [current.reduce(g.embed(final_ring)) for g in A.ring.gens])
    result = NormalizationResult(current, inclusion, adjoined, complete)
    if adjoined and generic_fiber_iso(result) is None:
        logger.error(f"Normalization of {A.presentation()} changed the generic fiber")
        raise GenericFiberChanged(f"the closure of {A.name or A.presentation()} differs from it after inverting w")
    return result


def normalized_blowup(
    A: FpAlgebra, J: Union[AdmissibleIdeal, ChartAtlas], degree_bound: Optional[int] = None
) -> ChartAtlas:
    """
    Blows up A in J and normalizes every chart.

    Raises:
        TorsionInput: if A has w-torsion.
        NotAdmissible: if J is not open.
        IncompleteNormalization: naming the first chart whose search was cut off.
    """
    require_torsion_free(A)
    atlas = J if isinstance(J, ChartAtlas) else blowup_charts(A, J)
    charts = []
    for chart in atlas.charts:
        if chart.empty:
            charts.append(chart)
            continue
        result = normalize(chart.algebra, degree_bound)
        if not result.complete:
            logger.error(f"Normalization of chart {chart.index} is incomplete")
            raise IncompleteNormalization(chart.index)
        charts.append(
            Chart(
                chart.index,
                result.closure,
                compose(result.inclusion, chart.structure),
                result.inclusion(chart.distinguished),
                chart.rees_names,
                result.adjoined,
                False,
            )
        )
    return ChartAtlas(atlas.base, atlas.ideal, tuple(charts), "normalized")


def check_uniformity_implication(
    A: FpAlgebra, numerator: ElementLike, exponent: int, max_power: Optional[int] = None
) -> bool:
    """
    For f = numerator / w^exponent: if (w f)^j lies in A for some
    j <= max_power, returns whether w f itself lies in A. Returns True when
    the hypothesis never holds. For integrally closed A the answer is
    always True.
    """
    max_power = settings.UNIFORMITY_MAX_POWER if max_power is None else max_power
    c = A.ring.coerce(numerator)
    shift = exponent - 1
    if shift <= 0:
        return True
    w = A.uniformizer
    for j in range(1, max_power + 1):
        if contains(A.ideal([w ** (j * shift)]), c ** j):
            return contains(A.ideal([w ** shift]), c)
    return True
