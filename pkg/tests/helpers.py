"""Shared shorthands and hypothesis strategies for the test-suite."""

from fractions import Fraction

from hypothesis import strategies as st

from vvforms.coeffs import ChartSpec, CoeffFn, GaussianRational
from vvforms.dsl import parse_coeff, parse_form
from vvforms.forms import ScalarForm, VectorForm

POLY2 = ChartSpec.poly(2)
POLY3 = ChartSpec.poly(3)
FOUR1 = ChartSpec.fourier(1)
FOUR2 = ChartSpec.fourier(2)
CHARTS = [ChartSpec.poly(m) for m in (2, 3, 4)] + [ChartSpec.fourier(m) for m in (2, 3, 4)]


def F(text: str, chart: ChartSpec = POLY2, **hints):
    """Parse DSL text; the workhorse for writing literal forms in tests."""
    return parse_form(text, chart, **hints)


def C(text: str, chart: ChartSpec = POLY2) -> CoeffFn:
    return parse_coeff(text, chart)


small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def gaussian():
    return st.builds(GaussianRational, small_fractions, small_fractions)


def coeff_fns(chart: ChartSpec, max_terms: int = 3):
    if chart.is_fourier:
        keys = st.tuples(*[st.integers(-2, 2)] * chart.m)
        values = gaussian()
    else:
        keys = st.tuples(*[st.integers(0, 2)] * chart.m)
        values = small_fractions
    return st.dictionaries(keys, values, max_size=max_terms).map(lambda t: CoeffFn(chart, t))


def multi_indices(m: int, k: int):
    return st.lists(st.integers(1, m), min_size=k, max_size=k, unique=True).map(lambda xs: tuple(sorted(xs)))


def scalar_forms(chart: ChartSpec, k: int, max_terms: int = 2):
    if k < 0 or k > chart.m:
        return st.just(ScalarForm.zero(chart, k))
    return st.dictionaries(multi_indices(chart.m, k), coeff_fns(chart, 2), max_size=max_terms).map(
        lambda comps: ScalarForm(chart, k, comps)
    )


def vector_forms(chart: ChartSpec, k: int):
    return st.lists(scalar_forms(chart, k), min_size=chart.m, max_size=chart.m).map(
        lambda comps: VectorForm(chart, k, comps)
    )
