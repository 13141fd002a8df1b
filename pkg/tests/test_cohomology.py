import pytest

from vvforms.calculus import c_bracket, delta, embed_j, fn_bracket, traceless_part
from vvforms.coeffs import ChartSpec
from vvforms.cohomology import (
    class_bracket,
    delta_class,
    delta_cocycle_check,
    derham_class,
    derham_dimension,
    direct_extension_split,
    extension_bracket,
    is_closed,
    is_exact,
    primitive,
    sigma,
    theta_action,
)
from vvforms.errors import DegreeOutOfRange, NotClosed, NotCocycle, NotExact, NotTraceless
from vvforms.forms import ScalarForm, VectorForm, ext_d, identity_vform
from vvforms.generators import GenSpec

from helpers import CHARTS, F, FOUR1, FOUR2, POLY2, POLY3


class TestDeRham:
    def test_closedness_examples(self):
        assert is_closed(F("dx1"))
        assert not is_closed(F("x1 dx2"))
        assert is_closed(F("E[1,0] dx1", FOUR2))

    def test_polynomial_primitive(self):
        phi = F("x2 dx1 + x1 dx2")
        eta = primitive(phi)
        assert eta == F("x1*x2")
        assert ext_d(eta) == phi

    def test_torus_primitive(self):
        assert primitive(F("E[1,0] dx1", FOUR2)) == F("-i*E[1,0]", FOUR2)

    def test_harmonic_forms_are_not_exact(self):
        with pytest.raises(NotExact):
            primitive(F("dx1", FOUR2))
        assert not is_exact(F("dx1", FOUR2))

    def test_primitive_errors(self):
        with pytest.raises(NotClosed):
            primitive(F("x1 dx2"))
        with pytest.raises(DegreeOutOfRange):
            primitive(F("x1"))

    def test_class_examples(self):
        assert derham_class(F("2 dx1 + E[3] dx1", FOUR1)) == F("2 dx1", FOUR1)
        assert derham_class(F("x2 dx1 + x1 dx2")).is_zero
        assert derham_class(F("5")) == F("5")

    @pytest.mark.parametrize("chart", CHARTS)
    def test_primitive_inverts_d_on_exact_part(self, chart):
        gen = GenSpec(seed=1, chart=chart).generator("primitive")
        for k in range(1, chart.m + 1):
            for _ in range(4):
                phi = gen.closed(k)
                diff = phi - derham_class(phi)
                assert ext_d(primitive(diff)) == diff

    def test_torus_dimensions(self):
        chart = ChartSpec.fourier(3)
        gen = GenSpec(seed=2, chart=chart).generator("dims")
        dims = [derham_dimension([gen.closed(k) for _ in range(12)]) for k in range(4)]
        assert dims == [1, 3, 3, 1]


class TestDeltaClasses:
    def test_cocycle_examples(self):
        gen = GenSpec(seed=3, chart=POLY2).generator("cocycle")
        assert delta_cocycle_check(gen.traceless(1))
        assert not delta_cocycle_check(F("x2 dx1 @ e1"))
        assert delta_cocycle_check(embed_j(F("dx1", POLY3)))

    def test_identity_class_on_torus(self):
        cls = delta_class(identity_vform(FOUR2))
        assert cls.dr_part == F("1", FOUR2)
        assert cls.traceless_part.is_zero

    def test_traceless_class(self):
        K = traceless_part(F("x1 dx1 @ e1 + dx1 @ e2"))
        cls = delta_class(K)
        assert cls.dr_part.is_zero and cls.traceless_part == K

    def test_coboundaries_have_zero_class(self):
        gen = GenSpec(seed=4, chart=FOUR2).generator("coboundary")
        for k in range(2):
            cls = delta_class(delta(gen.vector_form(k)))
            assert cls.dr_part.is_zero and cls.traceless_part.is_zero

    def test_non_cocycle_rejected(self):
        with pytest.raises(NotCocycle):
            delta_class(F("x2 dx1 @ e1"))

    def test_class_bracket_kills_de_rham_part(self):
        a, b = delta_class(identity_vform(FOUR2)), delta_class(embed_j(F("dx1", FOUR2)))
        cls = class_bracket(a, b)
        assert cls.dr_part.is_zero and cls.traceless_part.is_zero

    def test_class_bracket_on_traceless_parts(self):
        K, L = F("x2 dx1 @ e2", POLY3), F("dx2 @ e1", POLY3)
        cls = class_bracket(delta_class(K), delta_class(L))
        assert cls.traceless_part == c_bracket(K, L)

    def test_class_of_bracket_is_bracket_of_classes(self):
        gen = GenSpec(seed=6, chart=ChartSpec.fourier(3)).generator("classes")
        for k, l in [(1, 1), (1, 2), (0, 2)]:
            K, L = gen.cocycle(k), gen.cocycle(l)
            assert delta_class(fn_bracket(K, L)) == class_bracket(delta_class(K), delta_class(L))


class TestExtension:
    def test_sigma_examples(self):
        assert sigma(F("x2 @ e1"), F("x1 @ e2")).is_zero
        assert sigma(F("x2 dx1 @ e2", POLY3), F("dx2 @ e1", POLY3)) == F("-1/2 dx2", POLY3)

    def test_sigma_errors(self):
        with pytest.raises(NotTraceless):
            sigma(F("x2 dx1 @ e1"), F("dx1 @ e2"))
        with pytest.raises(DegreeOutOfRange):
            sigma(VectorForm.zero(POLY2, 2), F("dx1 @ e2"))

    def test_theta_action_examples(self):
        assert theta_action(F("x1 @ e1"), F("dx1")) == F("dx1")
        assert theta_action(F("dx1 @ e2"), F("1")).is_zero
        with pytest.raises(NotClosed):
            theta_action(F("x1 @ e1"), F("x1 dx2"))

    def test_vector_field_extension(self):
        X, Y = F("x2 @ e1"), F("x1 @ e2")
        z0 = ScalarForm.zero(POLY2, -1)
        z, bracket = extension_bracket(z0, X, z0, Y)
        assert z.is_zero and bracket == fn_bracket(X, Y)

    def test_closed_parts_commute(self):
        zero = VectorForm.zero(POLY2, 2)
        z, bracket = extension_bracket(F("dx1"), zero, F("dx2"), zero)
        assert z.is_zero and bracket.is_zero

    def test_three_dimensional_example(self):
        K, L = F("x2 dx1 @ e2", POLY3), F("dx2 @ e1", POLY3)
        z0 = ScalarForm.zero(POLY3, 0)
        z, bracket = extension_bracket(z0, K, z0, L)
        assert z == F("-1/2 dx2", POLY3)
        assert bracket == F("1/2 dx1^dx2 @ e1 + 1/2 dx2^dx3 @ e3", POLY3)
        assert (z, bracket) == direct_extension_split(z0, K, z0, L)
