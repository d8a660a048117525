"""
Session Runner

Executes parsed session statements against an environment of bound
values. Each statement produces a `CommandResult`; the first failing
statement aborts the run with its ToolkitError.
"""

import itertools
import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.algebra.errors import InvalidArgument, RingMismatch
from src.algebra.fpalg import (
    FpAlgebra,
    RingMap,
    compose,
    is_adic,
    make_algebra,
    maps_equal,
    ring_map,
    torsion_saturate,
)
from src.algebra.ideal import saturation
from src.algebra.poly import CoeffField, MonomialOrder, Poly
from src.cli.schemas import (
    AlgebraModel,
    AtlasModel,
    BooleanModel,
    CheckItem,
    CheckModel,
    CommandResult,
    CompositionModel,
    DescentModel,
    FiniteModificationModel,
    GenericChartModel,
    GroebnerModel,
    IdealModel,
    LiftModel,
    NormalizationModel,
    PointModel,
    RingIsoModel,
    RingMapModel,
)
from src.cli.session import (
    Frac,
    IdealLit,
    Ref,
    Session,
    Statement,
    UnboundName,
)
from src.config.settings import settings
from src.geometry.blowup import (
    AdmissibleIdeal,
    ChartAtlas,
    admissible_ideal,
    blowup_charts,
    chart_transition,
    check_cocycle,
    check_principal,
    check_torsion_free,
    compose_blowups,
    extend_admissible_ideal,
    finite_modification_to_blowup,
)
from src.geometry.generic import (
    GenericChart,
    NeedsBlowup,
    descend_morphism,
    generic_chart,
    generic_transition,
    is_generic_fiber_empty,
    lift_point,
    tube_chart,
)
from src.geometry.normal import (
    NormalizationResult,
    check_uniformity_implication,
    is_integrally_closed,
    normalize,
    normalized_blowup,
)
from src.geometry.points import Point, make_point, point_validate, spc_contains
from src.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class RunOptions:
    field: CoeffField
    order_name: str
    degree_bound: int
    uniformizer: str

    @property
    def order(self) -> MonomialOrder:
        return MonomialOrder.parse(self.order_name)

    @classmethod
    def from_settings(cls, **overrides: Any) -> "RunOptions":
        """Defaults from settings; `None` overrides are ignored."""
        values = {
            "field": CoeffField.parse(settings.COEFFICIENT_FIELD),
            "order_name": settings.MONOMIAL_ORDER,
            "degree_bound": settings.DEGREE_BOUND,
            "uniformizer": settings.UNIFORMIZER_NAME,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class BoundIdeal:
    """An ideal binding; shares `ambient` and `generators` with AdmissibleIdeal."""

    ambient: FpAlgebra
    generators: Tuple[Poly, ...]


@dataclass(frozen=True)
class BoundPoint:
    ambient: FpAlgebra
    point: Point


def _ideal_model(A: FpAlgebra, gens: Sequence[Poly]) -> IdealModel:
    return IdealModel(
        generators=[str(A.reduce(g)) for g in gens],
        groebner_basis=[str(g) for g in A.ideal(gens).groebner_basis()],
    )


def _generic_chart_model(chart: GenericChart) -> GenericChartModel:
    return GenericChartModel(
        index=chart.index,
        algebra=AlgebraModel.from_domain(chart.algebra),
        structure_map=chart.structure.as_dict(),
    )


def to_model(value: Any):
    """The output model for any bound value."""
    if isinstance(value, FpAlgebra):
        return AlgebraModel.from_domain(value)
    if isinstance(value, (BoundIdeal, AdmissibleIdeal)):
        return _ideal_model(value.ambient, value.generators)
    if isinstance(value, BoundPoint):
        return PointModel.from_domain(value.point)
    if isinstance(value, RingMap):
        return RingMapModel.from_domain(value)
    if isinstance(value, ChartAtlas):
        return AtlasModel.from_domain(value)
    if isinstance(value, NormalizationResult):
        return NormalizationModel.from_domain(value)
    raise InvalidArgument(f"cannot display a {type(value).__name__}")


class SessionRunner:
    """
    Runs statements in order against a name environment.

    Example:
        runner = SessionRunner()
        results = runner.run_session(parse_session(text))
    """

    def __init__(self, options: Optional[RunOptions] = None) -> None:
        self.options = options or RunOptions.from_settings()
        self.env: Dict[str, Any] = {}
        self._handlers = {
            "ring": self._ring,
            "ideal": self._ideal,
            "point": self._point,
            "map": self._map,
            "gb": self._gb,
            "sat": self._sat,
            "blowup": self._blowup,
            "transition": self._transition,
            "compose": self._compose,
            "extend": self._extend,
            "finmod": self._finmod,
            "genchart": self._genchart,
            "gentrans": self._gentrans,
            "tube": self._tube,
            "spc": self._spc,
            "lift": self._lift,
            "descend": self._descend,
            "normalize": self._normalize,
            "normblowup": self._normblowup,
            "check": self._check,
            "show": self._show,
            "empty?": self._empty,
        }

    def run_session(self, session: Session) -> List[CommandResult]:
        return [self.run(statement) for statement in session.statements]

    def run(self, statement: Statement) -> CommandResult:
        logger.debug(f"Line {statement.line}: {statement.render()}")
        result = self._handlers[statement.keyword](statement)
        return CommandResult(format=settings.JSON_FORMAT_VERSION, command=statement.render(), result=result)

    def _bind(self, statement: Statement, value: Any) -> None:
        if statement.target is not None:
            self.env[statement.target] = value

    # -----------------------------------------------------------------
    # NAME RESOLUTION
    # -----------------------------------------------------------------
    def _lookup(self, ref: Ref, statement: Statement) -> Any:
        if ref.name not in self.env:
            raise UnboundName(ref.name, statement.line)
        return self.env[ref.name]

    def _algebra(self, ref: Ref, statement: Statement) -> FpAlgebra:
        value = self._lookup(ref, statement)
        if isinstance(value, NormalizationResult):
            return value.closure
        if not isinstance(value, FpAlgebra):
            raise InvalidArgument(f"{ref.name} is not an algebra")
        return value

    def _atlas(self, ref: Ref, statement: Statement) -> ChartAtlas:
        value = self._lookup(ref, statement)
        if not isinstance(value, ChartAtlas):
            raise InvalidArgument(f"{ref.name} is not a blow-up")
        return value

    def _bound_point(self, ref: Ref, statement: Statement) -> BoundPoint:
        value = self._lookup(ref, statement)
        if not isinstance(value, BoundPoint):
            raise InvalidArgument(f"{ref.name} is not a point")
        return value

    def _generators(self, arg, A: FpAlgebra, statement: Statement) -> List[Poly]:
        if isinstance(arg, IdealLit):
            return [A.element(text) for text in arg.gens]
        value = self._lookup(arg, statement)
        if not isinstance(value, (BoundIdeal, AdmissibleIdeal)):
            raise InvalidArgument(f"{arg.name} is not an ideal")
        if not value.ambient.same_presentation(A):
            raise RingMismatch(f"ideal {arg.name} belongs to a different algebra")
        return list(value.generators)

    @staticmethod
    def _fractions(A: FpAlgebra, args: Sequence[Any]) -> List[Tuple[Poly, int]]:
        return [(A.element(a.numerator), a.exponent) for a in args if isinstance(a, Frac)]

    def _degree_bound(self, statement: Statement) -> int:
        return statement.flag("degree-bound", self.options.degree_bound)

    # -----------------------------------------------------------------
    # BINDINGS AND BASICS
    # -----------------------------------------------------------------
    def _ring(self, s: Statement):
        spec = s.args[0]
        A = make_algebra(
            spec.variables,
            spec.relations,
            spec.idef,
            field=self.options.field,
            uniformizer=self.options.uniformizer,
            name=s.target,
        )
        self._bind(s, A)
        return AlgebraModel.from_domain(A)

    def _ideal(self, s: Statement):
        A = self._algebra(s.args[0], s)
        gens = self._generators(s.args[1], A, s)
        self._bind(s, BoundIdeal(A, tuple(gens)))
        return _ideal_model(A, gens)

    def _point(self, s: Statement):
        A = self._algebra(s.args[0], s)
        P = make_point(A, s.args[1].e, dict(s.args[2].items))
        point_validate(A, P)
        self._bind(s, BoundPoint(A, P))
        return PointModel.from_domain(P)

    def _map(self, s: Statement):
        A = self._algebra(s.args[0], s)
        B = self._algebra(s.args[2], s)
        phi = ring_map(A, B, {name: B.element(text) for name, text in s.args[3].items})
        self._bind(s, phi)
        return RingMapModel.from_domain(phi)

    def _gb(self, s: Statement):
        A = self._algebra(s.args[0], s)
        ideal = A.relations if len(s.args) == 1 else A.ideal(self._generators(s.args[1], A, s))
        basis = ideal.groebner_basis(self.options.order)
        return GroebnerModel(order=self.options.order_name, basis=[str(g) for g in basis])

    def _sat(self, s: Statement):
        A = self._algebra(s.args[0], s)
        if len(s.args) == 1:
            B, _ = torsion_saturate(A)
            self._bind(s, B)
            return AlgebraModel.from_domain(B)
        gens = self._generators(s.args[1], A, s)
        saturated = saturation(A.ideal(gens), A.element(s.args[3].text))
        basis = list(saturated.groebner_basis())
        self._bind(s, A.with_relations(basis, s.target))
        return IdealModel(generators=[str(g) for g in basis], groebner_basis=[str(g) for g in basis])

    # -----------------------------------------------------------------
    # BLOW-UPS
    # -----------------------------------------------------------------
    def _blowup(self, s: Statement):
        A = self._algebra(s.args[0], s)
        atlas = blowup_charts(A, self._generators(s.args[1], A, s))
        self._bind(s, atlas)
        return AtlasModel.from_domain(atlas)

    def _transition(self, s: Statement):
        atlas = self._atlas(s.args[0], s)
        return RingIsoModel.from_domain(chart_transition(atlas, s.args[1].value, s.args[2].value))

    def _compose(self, s: Statement):
        A = self._algebra(s.args[0], s)
        first = admissible_ideal(A, self._generators(s.args[1], A, s))
        second = admissible_ideal(A, self._generators(s.args[2], A, s))
        atlas, maps = compose_blowups(A, first, second)
        self._bind(s, atlas)
        return CompositionModel(atlas=AtlasModel.from_domain(atlas), maps=[RingMapModel.from_domain(m) for m in maps])

    def _extend(self, s: Statement):
        A = self._algebra(s.args[0], s)
        J = extend_admissible_ideal(A, A.element(s.args[2].text), self._fractions(A, s.args[3:]))
        self._bind(s, J)
        return _ideal_model(A, J.generators)

    def _finmod(self, s: Statement):
        A = self._algebra(s.args[0], s)
        J, index, iso = finite_modification_to_blowup(A, self._fractions(A, s.args[1:]))
        self._bind(s, J)
        return FiniteModificationModel(
            ideal=[str(g) for g in J.generators], chart=index, iso=RingIsoModel.from_domain(iso)
        )

    # -----------------------------------------------------------------
    # GENERIC FIBER
    # -----------------------------------------------------------------
    def _genchart(self, s: Statement):
        chart = generic_chart(self._algebra(s.args[0], s), s.args[1].value)
        self._bind(s, chart.algebra)
        return _generic_chart_model(chart)

    def _gentrans(self, s: Statement):
        A = self._algebra(s.args[0], s)
        return RingMapModel.from_domain(generic_transition(A, s.args[1].value, s.args[2].value))

    def _tube(self, s: Statement):
        A = self._algebra(s.args[0], s)
        chart = tube_chart(A, self._generators(s.args[1], A, s), s.args[2].value)
        self._bind(s, chart.algebra)
        return _generic_chart_model(chart)

    def _spc(self, s: Statement):
        bound = self._bound_point(s.args[0], s)
        A = bound.ambient
        return BooleanModel(value=spc_contains(A, bound.point, A.element(s.args[1].text)))

    def _lift(self, s: Statement):
        bound = self._bound_point(s.args[0], s)
        A = bound.ambient
        arg = s.args[1]
        value = self.env.get(arg.name) if isinstance(arg, Ref) else None
        if isinstance(value, ChartAtlas):
            if not value.base.same_presentation(A):
                raise RingMismatch(f"{arg.name} is not a blow-up of the point's algebra")
            atlas = value
        else:
            atlas = blowup_charts(A, self._generators(arg, A, s))
        index, lifted = lift_point(A, atlas, bound.point)
        self._bind(s, BoundPoint(atlas.charts[index].algebra, lifted))
        return LiftModel(chart=index, point=PointModel.from_domain(lifted))

    def _descend(self, s: Statement):
        A = self._algebra(s.args[0], s)
        B = self._algebra(s.args[1], s)
        outcome = descend_morphism(A, B, self._fractions(B, s.args[2:]))
        if isinstance(outcome, NeedsBlowup):
            return DescentModel(needs_blowup=outcome.index)
        self._bind(s, outcome)
        return DescentModel(map=RingMapModel.from_domain(outcome))

    def _empty(self, s: Statement):
        return BooleanModel(value=is_generic_fiber_empty(self._algebra(s.args[0], s)))

    # -----------------------------------------------------------------
    # NORMALIZATION
    # -----------------------------------------------------------------
    def _normalize(self, s: Statement):
        A = self._algebra(s.args[0], s)
        result = normalize(A, self._degree_bound(s), s.flag("max-steps"))
        self._bind(s, result)
        return NormalizationModel.from_domain(result)

    def _normblowup(self, s: Statement):
        A = self._algebra(s.args[0], s)
        atlas = normalized_blowup(A, admissible_ideal(A, self._generators(s.args[1], A, s)), self._degree_bound(s))
        self._bind(s, atlas)
        return AtlasModel.from_domain(atlas)

    # -----------------------------------------------------------------
    # CHECKS
    # -----------------------------------------------------------------
    def _check(self, s: Statement):
        prop = s.args[0].text
        subject = s.args[1]
        items: List[CheckItem] = []
        if prop == "principal":
            atlas = self._atlas(subject, s)
            items = [CheckItem(label=f"chart {i}", passed=ok) for i, ok in enumerate(check_principal(atlas))]
        elif prop == "torsionfree":
            value = self._lookup(subject, s)
            if isinstance(value, ChartAtlas):
                results = check_torsion_free(value)
                items = [CheckItem(label=f"chart {i}", passed=ok) for i, ok in enumerate(results)]
            else:
                A = self._algebra(subject, s)
                items = [CheckItem(label=subject.name, passed=A.is_torsion_free())]
        elif prop == "cocycle":
            atlas = self._atlas(subject, s)
            for i, j, k in itertools.permutations(range(len(atlas)), 3):
                items.append(CheckItem(label=f"{i},{j},{k}", passed=check_cocycle(atlas, i, j, k)))
        elif prop == "closed":
            closed, witness = is_integrally_closed(self._algebra(subject, s), self._degree_bound(s))
            detail = None if witness is None else f"{witness}/{self.options.uniformizer} is integral"
            items = [CheckItem(label="integrally closed", passed=closed, detail=detail)]
        elif prop == "adic":
            items = [CheckItem(label="adic", passed=is_adic(self._algebra(subject, s)))]
        elif prop == "uniform":
            A = self._algebra(subject, s)
            for c, m in self._fractions(A, s.args[2:]):
                ok = check_uniformity_implication(A, c, m, s.flag("max-power"))
                items.append(CheckItem(label=f"({c})/{self.options.uniformizer}^{m}", passed=ok))
        elif prop == "transitivity":
            A = self._algebra(subject, s)
            l, m, n = (a.value for a in s.args[2:5])
            direct = generic_transition(A, l, n)
            through = compose(generic_transition(A, m, n), generic_transition(A, l, m))
            items = [CheckItem(label=f"{l} -> {m} -> {n}", passed=maps_equal(through, direct))]
        return CheckModel(property=prop, subject=subject.name, items=items)

    def _show(self, s: Statement):
        return to_model(self._lookup(s.args[0], s))


def render_results(results: Sequence[CommandResult], as_json: bool = False) -> str:
    """Text output, or the JSON array of versioned result documents."""
    if as_json:
        return json.dumps([r.to_json_dict() for r in results], sort_keys=True, indent=2) + "\n"
    return "".join(r.to_text() + "\n" for r in results)
