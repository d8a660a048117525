"""
Pydantic Schemas for Command Output

Every command result is one of the models below. `--json` output dumps
them with sorted keys; the human-readable form comes from `to_text`.
Polynomials are always rendered in canonical form (reduced modulo the
relations where applicable, terms in decreasing grevlex order).
"""

from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator

from src.algebra.fpalg import FpAlgebra, RingMap
from src.geometry.blowup import Chart, ChartAtlas, RingIso
from src.geometry.normal import NormalizationResult
from src.geometry.points import Point


def _join(items: List[str]) -> str:
    return ", ".join(items)


class AlgebraModel(BaseModel):
    """A presentation: variables, reduced relations, ideal of definition."""

    variables: List[str]
    relations: List[str] = Field(..., description="Reduced grevlex basis of I_A")
    ideal_of_definition: List[str]
    zero_ring: bool = False

    @classmethod
    def from_domain(cls, A: FpAlgebra) -> "AlgebraModel":
        return cls(
            variables=list(A.variables),
            relations=[str(g) for g in A.relations.groebner_basis()],
            ideal_of_definition=[str(f) for f in A.idef],
            zero_ring=A.is_zero_ring(),
        )

    def to_text(self) -> str:
        text = (
            f"vars[{_join(self.variables)}] rels[{_join(self.relations)}] "
            f"idef[{_join(self.ideal_of_definition)}]"
        )
        return text + ("  (zero ring)" if self.zero_ring else "")


class IdealModel(BaseModel):
    generators: List[str]
    groebner_basis: List[str]

    def to_text(self) -> str:
        return f"({_join(self.generators)})  basis [{_join(self.groebner_basis)}]"


class GroebnerModel(BaseModel):
    order: str
    basis: List[str]

    @field_validator("order")
    @classmethod
    def validate_order(cls, v: str) -> str:
        if v not in ("grevlex", "lex"):
            raise ValueError("order must be 'grevlex' or 'lex'")
        return v

    def to_text(self) -> str:
        return f"{self.order}: [{_join(self.basis)}]"


class RingMapModel(BaseModel):
    source: List[str]
    target: List[str]
    images: Dict[str, str]

    @classmethod
    def from_domain(cls, phi: RingMap) -> "RingMapModel":
        return cls(
            source=list(phi.source.variables),
            target=list(phi.target.variables),
            images=phi.as_dict(),
        )

    def to_text(self) -> str:
        return _join([f"{v} -> {self.images[v]}" for v in self.source])


class RingIsoModel(BaseModel):
    forward: RingMapModel
    backward: RingMapModel

    @classmethod
    def from_domain(cls, iso: RingIso) -> "RingIsoModel":
        return cls(forward=RingMapModel.from_domain(iso.forward), backward=RingMapModel.from_domain(iso.backward))

    def to_text(self) -> str:
        return f"forward: {self.forward.to_text()}\nbackward: {self.backward.to_text()}"


class FractionModel(BaseModel):
    name: Optional[str] = None
    numerator: str
    exponent: int = Field(..., ge=0)
    uniformizer: str = "w"

    def to_text(self) -> str:
        prefix = f"{self.name} = " if self.name else ""
        return f"{prefix}({self.numerator}) / {self.uniformizer}^{self.exponent}"


class ChartModel(BaseModel):
    index: int
    algebra: AlgebraModel
    structure_map: Dict[str, str]
    distinguished: str
    empty: bool
    adjoined: List[FractionModel] = []

    @classmethod
    def from_domain(cls, chart: Chart) -> "ChartModel":
        return cls(
            index=chart.index,
            algebra=AlgebraModel.from_domain(chart.algebra),
            structure_map=chart.structure.as_dict(),
            distinguished=str(chart.distinguished),
            empty=chart.empty,
            adjoined=[
                FractionModel(name=z, numerator=str(c), exponent=m, uniformizer=chart.algebra.uniformizer_name)
                for z, c, m in chart.adjoined
            ],
        )

    def to_text(self) -> str:
        lines = [f"chart {self.index} at {self.distinguished}{'  (empty)' if self.empty else ''}"]
        lines.append(f"  {self.algebra.to_text()}")
        for fraction in self.adjoined:
            lines.append(f"  adjoined {fraction.to_text()}")
        return "\n".join(lines)


class AtlasModel(BaseModel):
    base: AlgebraModel
    ideal: List[str]
    provenance: str
    charts: List[ChartModel]

    @field_validator("provenance")
    @classmethod
    def validate_provenance(cls, v: str) -> str:
        if v not in ("plain", "normalized"):
            raise ValueError("provenance must be 'plain' or 'normalized'")
        return v

    @classmethod
    def from_domain(cls, atlas: ChartAtlas) -> "AtlasModel":
        return cls(
            base=AlgebraModel.from_domain(atlas.base),
            ideal=[str(f) for f in atlas.ideal.generators],
            provenance=atlas.provenance,
            charts=[ChartModel.from_domain(c) for c in atlas.charts],
        )

    def to_text(self) -> str:
        head = f"{self.provenance} blow-up in ({_join(self.ideal)}), {len(self.charts)} charts"
        return "\n".join([head] + [c.to_text() for c in self.charts])


class CompositionModel(BaseModel):
    atlas: AtlasModel
    maps: List[RingMapModel]

    def to_text(self) -> str:
        lines = [self.atlas.to_text()]
        for i, phi in enumerate(self.maps):
            lines.append(f"map to chart {i}: {phi.to_text()}")
        return "\n".join(lines)


class GenericChartModel(BaseModel):
    index: int
    algebra: AlgebraModel
    structure_map: Dict[str, str]

    def to_text(self) -> str:
        return f"chart {self.index}: {self.algebra.to_text()}"


class PointModel(BaseModel):
    e: int = Field(..., ge=1)
    values: Dict[str, str]

    @classmethod
    def from_domain(cls, P: Point) -> "PointModel":
        return cls(e=P.e, values=P.as_dict())

    def to_text(self) -> str:
        return f"e={self.e} " + _join([f"{k} -> {v}" for k, v in self.values.items()])


class LiftModel(BaseModel):
    chart: int
    point: PointModel

    def to_text(self) -> str:
        return f"chart {self.chart}: {self.point.to_text()}"


class NormalizationModel(BaseModel):
    closure: AlgebraModel
    inclusion: Dict[str, str]
    adjoined: List[FractionModel]
    complete: bool

    @classmethod
    def from_domain(cls, result: NormalizationResult) -> "NormalizationModel":
        return cls(
            closure=AlgebraModel.from_domain(result.closure),
            inclusion=result.inclusion.as_dict(),
            adjoined=[
                FractionModel(name=z, numerator=str(c), exponent=m, uniformizer=result.closure.uniformizer_name)
                for z, c, m in result.adjoined
            ],
            complete=result.complete,
        )

    def to_text(self) -> str:
        lines = [f"closure: {self.closure.to_text()}"]
        lines += [f"adjoined {a.to_text()}" for a in self.adjoined]
        lines.append("complete" if self.complete else "incomplete (step limit reached)")
        return "\n".join(lines)


class DescentModel(BaseModel):
    map: Optional[RingMapModel] = None
    needs_blowup: Optional[int] = None

    def to_text(self) -> str:
        if self.map is not None:
            return f"model map: {self.map.to_text()}"
        return f"NeedsBlowup({self.needs_blowup})"


class FiniteModificationModel(BaseModel):
    ideal: List[str]
    chart: int
    iso: RingIsoModel

    def to_text(self) -> str:
        return f"ideal ({_join(self.ideal)}), chart {self.chart}\n{self.iso.to_text()}"


class CheckItem(BaseModel):
    label: str
    passed: bool
    detail: Optional[str] = None


class CheckModel(BaseModel):
    property: str
    subject: str
    items: List[CheckItem]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def to_text(self) -> str:
        lines = [f"{self.property} {self.subject}: {'PASS' if self.passed else 'FAIL'}"]
        for item in self.items:
            detail = f" ({item.detail})" if item.detail else ""
            lines.append(f"  {item.label}: {'PASS' if item.passed else 'FAIL'}{detail}")
        return "\n".join(lines)


class BooleanModel(BaseModel):
    value: bool

    def to_text(self) -> str:
        return "true" if self.value else "false"


ResultModel = Union[
    AlgebraModel,
    IdealModel,
    GroebnerModel,
    RingMapModel,
    RingIsoModel,
    AtlasModel,
    CompositionModel,
    GenericChartModel,
    PointModel,
    LiftModel,
    NormalizationModel,
    DescentModel,
    FiniteModificationModel,
    CheckModel,
    BooleanModel,
]


class CommandResult(BaseModel):
    """One executed statement: the versioned JSON document of the CLI."""

    format: int
    command: str
    result: Any

    def to_json_dict(self) -> Dict[str, Any]:
        payload = self.result.model_dump() if isinstance(self.result, BaseModel) else self.result
        if isinstance(self.result, CheckModel):
            payload["passed"] = self.result.passed
        return {"format": self.format, "command": self.command, "result": payload}

    def to_text(self) -> str:
        return f"> {self.command}\n{self.result.to_text()}"
