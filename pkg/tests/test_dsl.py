import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vvforms.coeffs import ChartSpec
from vvforms.dsl import dumps, from_record, loads, parse_diffeo, parse_form, print_form, to_record
from vvforms.errors import ChartMismatch, DegreeMismatch, FormSyntaxError, MixedKind, NotUnimodular
from vvforms.forms import ScalarForm, VectorForm, identity_vform
from vvforms.generators import GenSpec

from helpers import CHARTS, F, FOUR2, POLY2, POLY3, scalar_forms, vector_forms


class TestParsing:
    def test_basic_vector_form(self):
        K = F("dx1^dx2 @ e1")
        assert isinstance(K, VectorForm) and K.degree == 2
        assert K.components[0] == ScalarForm.basis(POLY2, (1, 2))

    def test_two_terms(self):
        K = F("3/2*x1^2*x2 dx1 @ e2 + dx2 @ e1")
        assert print_form(K) == "dx2 @ e1 + 3/2*x1^2*x2 dx1 @ e2"

    def test_fourier_mode(self):
        phi = F("E[1,-2] dx1", FOUR2)
        assert print_form(phi) == "E[1,-2] dx1"

    def test_complex_coefficients(self):
        phi = F("(1/2+3*i)*E[1,0] dx2", FOUR2)
        assert print_form(phi) == "(1/2+3*i)*E[1,0] dx2"
        assert print_form(F("2*i*E[0,1]", FOUR2)) == "2*i*E[0,1]"

    def test_zero_hints(self):
        assert F("0").degree == 0
        z = F("0", degree=2, vector=True)
        assert isinstance(z, VectorForm) and z.degree == 2 and z.is_zero

    def test_wedge_sorting(self):
        assert F("dx2^dx1") == F("-dx1^dx2")

    def test_mixed_kinds(self):
        with pytest.raises(MixedKind):
            F("dx1 @ e1 + dx2")

    def test_inhomogeneous(self):
        with pytest.raises(DegreeMismatch):
            F("dx1 + x1")

    @pytest.mark.parametrize("text", ["x3 dx1", "dx3", "dx1 @ e3", "E[1,0]"])
    def test_out_of_chart(self, text):
        with pytest.raises(ChartMismatch):
            F(text)

    def test_fourier_rejects_variables(self):
        with pytest.raises(ChartMismatch):
            F("x1 dx1", FOUR2)

    def test_syntax_error_position(self):
        with pytest.raises(FormSyntaxError) as info:
            F("dx1 +\n  * dx2")
        assert (info.value.line, info.value.column) == (2, 3)

    def test_trailing_garbage(self):
        with pytest.raises(FormSyntaxError):
            F("dx1 dx2")


class TestPrinting:
    def test_zero(self):
        assert print_form(ScalarForm.zero(POLY2, 1)) == "0"
        assert print_form(VectorForm.zero(POLY2, 1)) == "0"

    def test_identity(self):
        assert print_form(identity_vform(POLY2)) == "dx1 @ e1 + dx2 @ e2"

    def test_canonical_order(self):
        K = F("dx1 @ e2 - 1/2*x1 dx2 @ e2 + 1/2*x1 dx1 @ e1")
        assert print_form(K) == "1/2*x1 dx1 @ e1 + dx1 @ e2 - 1/2*x1 dx2 @ e2"

    def test_leading_negative_unit(self):
        assert print_form(F("-dx1^dx2 @ e1")) == "-1 dx1^dx2 @ e1"


class TestDiffeoParsing:
    def test_swap(self):
        f = parse_diffeo("map:(x2,x1); inv:(x2,x1)", POLY2)
        assert f.pull_function(F("x1").coefficient(())) == F("x2").coefficient(())

    def test_shear(self):
        parse_diffeo("map:(x1, x2+x1^2); inv:(x1, x2-x1^2)", POLY2)

    def test_matrix(self):
        parse_diffeo("matrix:[[1,1],[0,1]]", FOUR2)
        with pytest.raises(NotUnimodular):
            parse_diffeo("matrix:[[2,0],[0,1]]", FOUR2)

    def test_wrong_arity(self):
        with pytest.raises(FormSyntaxError):
            parse_diffeo("map:(x1); inv:(x1)", POLY2)


def _sample(gen, chart):
    k = gen.rng.randint(0, chart.m)
    value = gen.vector_form(k) if gen.rng.random() < 0.5 else gen.scalar_form(k)
    if gen.rng.random() < 0.1:
        value = value.scale(0)
    return value


def _reparse(value):
    return parse_form(print_form(value), value.chart, degree=value.degree, vector=isinstance(value, VectorForm))


class TestRoundTrip:
    def test_five_hundred_random_values(self):
        count = 0
        for chart in CHARTS:
            gen = GenSpec(seed=21, chart=chart).generator("roundtrip")
            for _ in range(84):
                value = _sample(gen, chart)
                assert _reparse(value) == value
                assert loads(dumps(value)) == value
                count += 1
        assert count >= 500

    def test_printing_is_stable(self):
        gen = GenSpec(seed=3, chart=FOUR2).generator("stable")
        for _ in range(20):
            value = _sample(gen, FOUR2)
            assert print_form(_reparse(value)) == print_form(value)
            assert dumps(loads(dumps(value))) == dumps(value)

    @given(data=st.data())
    def test_hypothesis_values(self, data):
        chart = data.draw(st.sampled_from([POLY3, FOUR2]))
        k = data.draw(st.integers(0, chart.m))
        value = data.draw(st.one_of(scalar_forms(chart, k), vector_forms(chart, k)))
        assert _reparse(value) == value

    def test_record_layout(self):
        record = to_record(F("1/2*x1 dx1 @ e2"))
        assert record == {
            "chart": "poly:2",
            "type": "vector",
            "degree": 1,
            "terms": [{"dx": [1], "key": [1, 0], "coeff": "1/2", "slot": 2}],
        }
        fourier = to_record(F("(1+i)*E[1,0]", FOUR2))
        assert fourier["terms"][0]["coeff"] == {"re": "1", "im": "1"}
        assert from_record(json.loads(json.dumps(fourier))) == F("(1+i)*E[1,0]", FOUR2)
