"""
Tests for the generic-fiber chart system, tubes, point lifting and descent.
"""

import functools

import pytest

from src.algebra.errors import (
    ExtensionBoundExceeded,
    IllDefined,
    InvalidArgument,
    NoFiniteOrder,
    NotContainingIdealOfDefinition,
    NotIntegral,
    RelationViolated,
    TorsionInput,
)
from src.algebra.fpalg import RingMap, compose, localize, make_algebra, maps_equal, torsion_saturate
from src.algebra.ideal import ideal_equal, saturation
from src.geometry.blowup import blowup_charts
from src.geometry.generic import (
    NeedsBlowup,
    chart_point,
    chart_refinement,
    check_generic_chart,
    descend_morphism,
    generic_chart,
    generic_transition,
    is_generic_fiber_empty,
    lift_point,
    tube_chart,
)
from src.geometry.normal import normalized_blowup
from src.geometry.points import make_point, point_validate, spc_contains
from tests.conftest import BLOWUP_CORPUS, random_elements
from tests.oracles import nilpotent_bounded


# (corpus entry, e, values of the non-w variables)
LIFT_POINTS = [
    (0, 2, {"x": "v^3"}),
    (0, 2, {"x": "-v^3"}),
    (1, 1, {"x": "1 + v"}),
    (1, 1, {"x": "v^3"}),
    (2, 1, {"x": "v"}),
    (2, 1, {"x": "2"}),
    (3, 1, {"x": "0"}),
    (3, 1, {"x": "v"}),
    (4, 1, {"u": "v"}),
    (4, 1, {"u": "-v"}),
    (5, 3, {"x": "v^4"}),
    (5, 6, {"x": "v^8"}),
    (6, 1, {"x": "v^2", "y": "1 + v"}),
    (6, 1, {"x": "1", "y": "v"}),
    (7, 1, {"x": "v", "y": "1"}),
    (7, 2, {"x": "v", "y": "v"}),
    (8, 1, {"x": "v", "y": "v"}),
    (8, 1, {"x": "1 + v", "y": "2"}),
    (9, 2, {"x": "v^3"}),
    (9, 4, {"x": "v^6"}),
]


@functools.lru_cache(maxsize=None)
def _corpus_atlas(entry):
    variables, relations, gens = BLOWUP_CORPUS[entry]
    A = make_algebra(variables, relations)
    return A, blowup_charts(A, gens)


class TestGenericCharts:
    """B_n = A[f^n / w]"""

    def test_first_chart_of_plane(self, plane):
        chart = generic_chart(plane, 1)
        B = chart.algebra
        assert B.variables == ("w", "x", "t0", "t1")
        assert B.is_zero("t0 - 1")
        assert B.is_zero("x - w*t1")

    def test_second_chart_of_plane(self, plane):
        B = generic_chart(plane, 2).algebra
        assert B.is_zero("t0 - w")
        assert B.is_zero("w*t1 - x^2")
        assert not B.is_zero("x - w*t1")

    def test_chart_indices_start_at_one(self, plane):
        with pytest.raises(InvalidArgument):
            generic_chart(plane, 0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_topology_matches(self, plane, cusp, n):
        assert check_generic_chart(generic_chart(plane, n))
        assert check_generic_chart(generic_chart(cusp, n))

    @pytest.mark.parametrize("n", [1, 2])
    def test_presentation_is_saturated(self, plane, n):
        B = generic_chart(plane, n).algebra
        assert ideal_equal(saturation(B.relations, B.uniformizer), B.relations)


class TestTransitions:
    """B_m -> B_n for m >= n"""

    def test_images(self, plane):
        phi = generic_transition(plane, 2, 1)
        assert phi.image_of("t0") == phi.target.element("w*t0")
        assert phi.image_of("t1") == phi.target.element("x*t1")
        assert phi.image_of("x") == phi.target.element("x")

    def test_transitivity(self, plane):
        through = compose(generic_transition(plane, 2, 1), generic_transition(plane, 3, 2))
        assert maps_equal(through, generic_transition(plane, 3, 1))

    def test_equal_indices_give_identity(self, plane):
        phi = generic_transition(plane, 2, 2)
        assert all(phi.image_of(v) == phi.target.element(v) for v in phi.source.variables)

    def test_wrong_direction(self, plane):
        with pytest.raises(InvalidArgument):
            generic_transition(plane, 1, 2)


class TestTubesAndRefinement:
    """Chart systems built from other generators"""

    def test_tube_must_contain_ideal_of_definition(self, line):
        with pytest.raises(NotContainingIdealOfDefinition):
            tube_chart(line, ["x"], 1)

    def test_tube_chart(self, line):
        chart = tube_chart(line, ["x", "w"], 2)
        assert chart.algebra.is_zero("w*t0 - x^2")
        assert chart.algebra.is_zero("t1 - w")

    def test_refinement_at_first_step(self, plane):
        m, phi = chart_refinement(plane, ["w", "x^2"], 1)
        assert m == 1
        assert phi.image_of("t1") == phi.target.element("w*t1^2")

    def test_refinement_needs_higher_index(self, plane):
        m, phi = chart_refinement(plane, ["w", "x"], 2)
        assert m == 2
        assert phi.image_of("t1") == phi.target.element("t1")

    def test_refinement_bound(self, plane):
        with pytest.raises(ExtensionBoundExceeded):
            chart_refinement(plane, ["w", "x"], 2, bound=1)

    def test_refinement_requires_same_topology(self, plane):
        with pytest.raises(NotContainingIdealOfDefinition):
            chart_refinement(plane, ["w"], 1)


class TestLifting:
    """Points through blow-ups"""

    def test_cusp_point_lands_on_w_chart(self, cusp):
        P = make_point(cusp, 2, {"x": "v^3"})
        atlas = blowup_charts(cusp, ["x", "w"])
        index, lifted = lift_point(cusp, atlas, P)
        assert index == 1
        assert lifted.as_dict() == {"w": "v^2", "x": "v^3", "t0": "v", "t1": "1"}
        point_validate(atlas.chart(1).algebra, lifted)

    def test_ties_go_to_smallest_index(self, plane):
        P = make_point(plane, 1, {"x": "v"})
        index, _ = lift_point(plane, blowup_charts(plane, ["x", "w"]), P)
        assert index == 0

    @pytest.mark.parametrize("f", ["x", "w", "1", "x + 1", "x - w", "x^2 - w^3"])
    def test_specialization_is_compatible(self, cusp, f):
        P = make_point(cusp, 2, {"x": "v^3"})
        atlas = blowup_charts(cusp, ["x", "w"])
        index, lifted = lift_point(cusp, atlas, P)
        chart = atlas.chart(index)
        assert spc_contains(chart.algebra, lifted, chart.structure(f)) == spc_contains(cusp, P, f)

    def test_adjoined_fractions_are_evaluated(self, cusp):
        P = make_point(cusp, 2, {"x": "v^3"})
        atlas = normalized_blowup(cusp, ["w"])
        index, lifted = lift_point(cusp, atlas, P)
        assert index == 0
        assert lifted.as_dict() == {"w": "v^2", "x": "v^3", "t0": "1", "z1": "v"}

    @pytest.mark.parametrize("entry, e, images", LIFT_POINTS)
    def test_lift_through_corpus_blowups(self, entry, e, images):
        A, atlas = _corpus_atlas(entry)
        P = make_point(A, e, images)
        point_validate(A, P)
        index, lifted = lift_point(A, atlas, P)
        chart = atlas.chart(index)
        point_validate(chart.algebra, lifted)
        for f in random_elements(A.variables, 10, seed=entry * 31 + e):
            assert lifted.evaluate(chart.structure(f)) == P.evaluate(A.ring.coerce(f))
            assert spc_contains(chart.algebra, lifted, chart.structure(f)) == spc_contains(A, P, f)

    @pytest.mark.parametrize("entry, e, images", LIFT_POINTS)
    def test_lift_lies_only_on_minimal_charts(self, entry, e, images):
        A, atlas = _corpus_atlas(entry)
        P = make_point(A, e, images)
        orders = [P.order(f) for f in atlas.ideal.generators]
        least = min(o for o in orders if o is not None)
        for j, order in enumerate(orders):
            if order is None:
                with pytest.raises(NoFiniteOrder):
                    chart_point(atlas, j, P)
            elif order > least:
                with pytest.raises(NotIntegral):
                    point_validate(atlas.chart(j).algebra, chart_point(atlas, j, P))
            else:
                point_validate(atlas.chart(j).algebra, chart_point(atlas, j, P))

    def test_lift_rejects_points_off_the_model(self, cusp):
        P = make_point(cusp, 1, {"x": "v"})
        with pytest.raises(RelationViolated):
            lift_point(cusp, blowup_charts(cusp, ["x", "w"]), P)


class TestEmptyGenericFiber:
    """w nilpotent"""

    @pytest.mark.parametrize(
        "variables, relations",
        [(["w"], ["w^2"]), (["w", "x"], ["w*x", "x^2"]), (["w", "x"], []), (["w", "x"], ["w^2 - x^3", "x^4"])],
    )
    def test_agrees_with_bounded_search(self, variables, relations):
        A = make_algebra(variables, relations)
        expected = nilpotent_bounded(variables, relations, "w", 4, 8)
        assert is_generic_fiber_empty(A) == expected

    @pytest.mark.parametrize(
        "variables, relations",
        [(["w"], ["w^2"]), (["w", "x"], ["w*x", "x^2"]), (["w", "x"], []), (["w", "x"], ["w*x - x^2", "w^3"])],
    )
    def test_matches_torsion_quotient(self, variables, relations):
        A = make_algebra(variables, relations)
        assert is_generic_fiber_empty(A) == torsion_saturate(A)[0].is_zero_ring()

    def test_known_answers(self, line):
        assert is_generic_fiber_empty(make_algebra(["w"], ["w^2"]))
        assert not is_generic_fiber_empty(make_algebra(["w", "x"], ["w*x", "x^2"]))
        assert not is_generic_fiber_empty(line)


# (source, target, fractions c / w^m, expected model images)
DESCENT_CASES = [
    ((["w", "x"], []), (["w", "y"], []), [("w*y", 1)], ["y"]),
    ((["w", "x"], []), (["w", "y"], []), [("w^2*y", 1)], ["w*y"]),
    ((["w", "x"], []), (["w", "y"], []), [("w^3", 2)], ["w"]),
    ((["w", "x"], []), (["w", "y"], []), [("w^2*y^2 + w", 1)], ["w*y^2 + 1"]),
    ((["w", "x"], []), (["w", "y"], []), [("y", 0)], ["y"]),
    ((["w", "x"], []), (["w", "z"], ["z^2 - w^3"]), [("z^2", 1)], ["w^2"]),
    ((["w", "x"], ["x^2 - w^3"]), (["w", "t"], ["t^2 - w"]), [("w*t^3", 1)], ["w*t"]),
    ((["w", "x", "y"], []), (["w", "s"], []), [("w*s", 1), ("w^2", 1)], ["s", "w"]),
    ((["w", "x", "y"], ["x*y - w"]), (["w", "s", "t"], ["s*t - 1"]), [("w^2*s", 1), ("t", 0)], ["w*s", "t"]),
    ((["w", "u"], ["u^2 - w^2"]), (["w"], []), [("w^2", 1)], ["w"]),
    ((["w", "x"], []), (["w", "y"], []), [("w^4*y^3 - w^2", 2)], ["w^2*y^3 - 1"]),
]


class TestDescent:
    """Generic-fiber maps that extend to the models"""

    @pytest.fixture
    def target(self):
        return make_algebra(["w", "y"])

    def test_descends(self, line, target):
        phi = descend_morphism(line, target, [("w*y", 1)])
        assert phi.image_of("x") == target.element("y")
        # after inverting w the model map is the given one
        L, to_local = localize(target, "w")
        u = L.ring.gen("u")
        assert L.is_zero(to_local(phi.image_of("x")) - to_local("w*y") * u)

    @pytest.mark.parametrize("source, target, fractions, expected", DESCENT_CASES)
    def test_descended_map_agrees_after_inverting_w(self, source, target, fractions, expected):
        A = make_algebra(*source)
        B = make_algebra(*target)
        phi = descend_morphism(A, B, fractions)
        assert isinstance(phi, RingMap)
        L, to_local = localize(B, "w")
        u = L.ring.gen(L.variables[-1])
        for name, (c, m), image in zip(A.variables[1:], fractions, expected):
            assert B.is_zero(phi.image_of(name) - B.element(image))
            assert L.is_zero(to_local(phi.image_of(name)) - to_local(c) * u ** m)

    @pytest.mark.parametrize("fractions", [[("y", 1)], [("y^2 + w", 1)], [("w*y", 2)]])
    def test_non_integral_fractions_need_blowup(self, line, target, fractions):
        assert isinstance(descend_morphism(line, target, fractions), NeedsBlowup)

    def test_needs_blowup(self, line, target):
        result = descend_morphism(line, target, [("y", 1)])
        assert isinstance(result, NeedsBlowup)
        assert result.index == 0
        assert str(result) == "NeedsBlowup(0)"

    def test_ill_defined(self, target):
        A = make_algebra(["w", "x"], ["x^2"])
        with pytest.raises(IllDefined):
            descend_morphism(A, target, [("y", 1)])

    def test_wrong_image_count(self, line, target):
        with pytest.raises(InvalidArgument):
            descend_morphism(line, target, [])

    def test_torsion_target(self, line):
        with pytest.raises(TorsionInput):
            descend_morphism(line, make_algebra(["w", "y"], ["w*y"]), [("w", 1)])
