"""
Tests for admissible blow-ups: charts, gluing, universal property,
composition, extension and finite modifications.
"""

import pytest

from src.algebra.errors import (
    EmptyOverlap,
    ExtensionBoundExceeded,
    InvalidArgument,
    NotAdmissible,
    NotAGenerator,
    NotIntegral,
    NotOpenLocally,
    NotPrincipal,
    TorsionInput,
)
from src.algebra.fpalg import compose, identity_map, make_algebra, maps_equal, ring_map
from src.geometry.blowup import (
    admissible_ideal,
    affine_blowup_algebra,
    blowup_charts,
    chart_transition,
    check_cocycle,
    check_principal,
    check_torsion_free,
    compose_blowups,
    extend_admissible_ideal,
    factor_through_chart,
    finite_modification_to_blowup,
    fraction_subring,
    presentation_iso,
)
from tests.conftest import BLOWUP_CORPUS


@pytest.fixture(params=BLOWUP_CORPUS, ids=lambda case: f"{case[1]}:{case[2]}")
def corpus_atlas(request):
    variables, relations, gens = request.param
    A = make_algebra(variables, relations)
    return blowup_charts(A, gens)


class TestAdmissibleIdeals:
    """Openness is checked on construction"""

    def test_open_ideal_accepted(self, cusp):
        J = admissible_ideal(cusp, ["x", "w"])
        assert str(J) == "(x, w)"

    def test_non_open_ideal_rejected(self, plane):
        with pytest.raises(NotAdmissible):
            admissible_ideal(plane, ["x"])


class TestCharts:
    """Chart construction on the cusp and the corpus"""

    def test_cusp_charts(self, cusp):
        atlas = blowup_charts(cusp, ["x", "w"])
        assert len(atlas) == 2
        assert atlas.nonempty() == [0, 1]
        chart = atlas.chart(1)
        assert chart.rees_names == ("t0", "t1")
        B = chart.algebra
        # on the chart at w, t0 = x / w and t0^2 = w
        assert B.is_zero("t0^2 - w")
        assert B.is_zero("t1 - 1")
        assert B.is_zero("x - w*t0")

    def test_chart_index_out_of_range(self, cusp):
        with pytest.raises(InvalidArgument):
            blowup_charts(cusp, ["x", "w"]).chart(2)

    def test_affine_blowup_algebra_by_generator(self, cusp):
        J = admissible_ideal(cusp, ["x", "w"])
        B, structure = affine_blowup_algebra(cusp, J, "w")
        assert B.is_zero("t0^2 - w")
        assert structure("x") == B.reduce(B.element("w*t0"))

    def test_not_a_generator(self, cusp):
        J = admissible_ideal(cusp, ["x", "w"])
        with pytest.raises(NotAGenerator):
            affine_blowup_algebra(cusp, J, "x + w")

    def test_integers_are_elements_not_indices(self, cusp):
        J = admissible_ideal(cusp, ["x", "w"])
        with pytest.raises(NotAGenerator):
            affine_blowup_algebra(cusp, J, 1)
        unit = admissible_ideal(cusp, ["x", 1])
        B, _ = affine_blowup_algebra(cusp, unit, 1)
        assert B.is_zero("t0 - x")

    def test_charts_are_principal(self, corpus_atlas):
        assert all(check_principal(corpus_atlas))

    def test_charts_are_torsion_free(self, corpus_atlas):
        assert all(check_torsion_free(corpus_atlas))

    def test_rees_chart_matches_subring(self, corpus_atlas):
        A = corpus_atlas.base
        for chart in corpus_atlas.charts:
            if chart.empty:
                continue
            g = corpus_atlas.ideal.generators[chart.index]
            subring = fraction_subring(A, corpus_atlas.ideal.generators, g)
            iso = presentation_iso(subring, chart.algebra)
            assert iso is not None
            assert iso.is_inverse_pair()


class TestGluing:
    """Transition isomorphisms and the cocycle condition"""

    def test_transition_is_inverse_pair(self, cusp):
        atlas = blowup_charts(cusp, ["x", "w"])
        iso = chart_transition(atlas, 0, 1)
        assert iso.is_inverse_pair()
        assert iso.forward.image_of("x") == iso.forward.target.element("x")

    def test_self_transition_is_identity(self, cusp):
        atlas = blowup_charts(cusp, ["x", "w"])
        iso = chart_transition(atlas, 1, 1)
        assert maps_equal(iso.forward, identity_map(atlas.chart(1).algebra))

    def test_empty_overlap(self, crossing):
        atlas = blowup_charts(crossing, ["x", "x - w"])
        with pytest.raises(EmptyOverlap):
            chart_transition(atlas, 0, 1)

    def test_cocycle_three_charts(self, space):
        atlas = blowup_charts(space, ["x", "y", "w"])
        assert check_cocycle(atlas, 0, 1, 2)
        assert check_cocycle(atlas, 2, 0, 1)

    def test_cocycle_degenerate_triple(self, cusp):
        atlas = blowup_charts(cusp, ["x", "w"])
        assert check_cocycle(atlas, 0, 0, 1)


class TestUniversalProperty:
    """Maps on which J becomes principal factor uniquely through a chart"""

    def test_chart_factors_through_itself(self, cusp):
        atlas = blowup_charts(cusp, ["x", "w"])
        chart = atlas.chart(1)
        psi = factor_through_chart(atlas, 1, chart.structure)
        assert maps_equal(psi, identity_map(chart.algebra))

    def test_every_chart_factors_through_itself(self, corpus_atlas):
        for i in corpus_atlas.nonempty():
            chart = corpus_atlas.chart(i)
            psi = factor_through_chart(corpus_atlas, i, chart.structure)
            assert maps_equal(psi, identity_map(chart.algebra))
            assert maps_equal(compose(psi, chart.structure), chart.structure)

    def test_normalization_factors_through_w_chart(self, cusp):
        atlas = blowup_charts(cusp, ["x", "w"])
        C = make_algebra(["w", "y"], ["y^2 - w"])
        phi = ring_map(cusp, C, {"x": "w*y"})
        psi = factor_through_chart(atlas, 1, phi)
        assert psi.image_of("t0") == C.element("y")
        assert maps_equal(compose(psi, atlas.chart(1).structure), phi)

    def test_not_principal(self, cusp):
        atlas = blowup_charts(cusp, ["x", "w"])
        with pytest.raises(NotPrincipal) as info:
            factor_through_chart(atlas, 1, identity_map(cusp))
        assert info.value.index == 1

    def test_torsion_target_rejected(self, cusp):
        atlas = blowup_charts(cusp, ["x", "w"])
        C = make_algebra(["w", "x"], ["x^2 - w^3", "w*x"])
        with pytest.raises(TorsionInput):
            factor_through_chart(atlas, 1, ring_map(cusp, C, {}))


class TestComposition:
    """Blowing up a product ideal"""

    @pytest.mark.parametrize(
        "variables, relations, first, second",
        [
            (["w", "x"], ["x^2 - w^3"], ["x", "w"], ["x", "w"]),
            (["w", "x"], [], ["x", "w"], ["w"]),
            (["w", "x"], ["x^2 - w*x"], ["x", "w"], ["w"]),
            (["w", "x", "y"], [], ["x", "w"], ["y", "w"]),
            (["w", "u"], ["u^2 - w^2"], ["u", "w"], ["w"]),
            pytest.param(["w", "x"], [], ["x", "w"], ["x^2", "w"], marks=pytest.mark.slow),
            pytest.param(["w", "x"], ["x^3 - w^4"], ["x", "w"], ["x^2", "w"], marks=pytest.mark.slow),
        ],
    )
    def test_maps_commute_with_structure(self, variables, relations, first, second):
        A = make_algebra(variables, relations)
        J1, J2 = admissible_ideal(A, first), admissible_ideal(A, second)
        atlas, maps = compose_blowups(A, J1, J2)
        base = blowup_charts(A, J1)
        assert len(atlas) == len(first) * len(second)
        for chart, phi in zip(atlas.charts, maps):
            a = chart.index // len(second)
            assert maps_equal(compose(phi, base.charts[a].structure), chart.structure)


class TestExtension:
    """Extending admissible ideals from basic opens"""

    def test_w_over_x(self, line):
        J = extend_admissible_ideal(line, "x", [("w", 1)])
        assert [str(g) for g in J.generators] == ["w"]

    def test_restriction_recovers_local_ideal(self, line):
        J = extend_admissible_ideal(line, "x", [("w^2", 1), ("w*x", 0)])
        assert J.ambient is line
        assert [str(g) for g in J.generators] == ["w^2", "w*x^2", "w"]

    def test_not_open_locally(self, plane):
        with pytest.raises(NotOpenLocally):
            extend_admissible_ideal(plane, "w", [("x", 1)])

    def test_bound_exceeded(self, line):
        with pytest.raises(ExtensionBoundExceeded) as info:
            extend_admissible_ideal(line, "x", [("w^3", 0)], bound=2)
        assert info.value.bound == 2


class TestFiniteModifications:
    """Finite modifications are blow-ups"""

    def test_node(self, node):
        J, index, iso = finite_modification_to_blowup(node, [("u", 1)])
        assert [str(g) for g in J.generators] == ["w", "u"]
        assert index == 0
        assert iso.is_inverse_pair()
        assert iso.backward.image_of("z0") == iso.forward.source.element("t1")

    @pytest.mark.parametrize(
        "variables, relations, fractions",
        [
            (["w", "x"], ["x^2 - w^3"], [("x", 1)]),
            (["w", "x"], ["x^2 - w^3"], [("x^2", 2)]),
            (["w", "x"], ["x^3 - w^4"], [("x^2", 2), ("x", 1)]),
        ],
    )
    def test_round_trip(self, variables, relations, fractions):
        A = make_algebra(variables, relations)
        J, index, iso = finite_modification_to_blowup(A, fractions)
        assert index == 0
        assert iso.is_inverse_pair()

    def test_not_integral(self, cusp):
        with pytest.raises(NotIntegral) as info:
            finite_modification_to_blowup(cusp, [("x", 1), ("x", 2)])
        assert info.value.subject == 1
