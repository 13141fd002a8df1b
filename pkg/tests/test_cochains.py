import random
from fractions import Fraction

import pytest

from vvforms.calculus import traceless_part
from vvforms.cochains import (
    FIXTURES,
    MODULE,
    Cochain,
    FiniteGLA,
    GradedElement,
    TracelessContext,
    Vector,
    alternation_defect,
    coboundary,
    cochain_partial,
    d_squared_check,
    sigma_cochain,
)
from vvforms.errors import (
    ArityMismatch,
    DegreeInconsistent,
    DegreeOutOfRange,
    InvalidStructure,
    NotClosed,
    NotTraceless,
)
from vvforms.generators import GenSpec

from helpers import F, POLY2, POLY3


@pytest.fixture(params=sorted(FIXTURES))
def gla(request):
    return FIXTURES[request.param]()


class TestFixtures:
    def test_jacobi_violation_is_rejected(self):
        # [a,b] = b, [b,c] = a, [a,c] = 0 fails Jacobi in degree 0
        br = {(0, 1): {1: 1}, (1, 0): {1: -1}, (1, 2): {0: 1}, (2, 1): {0: -1}}
        with pytest.raises(InvalidStructure):
            FiniteGLA([0, 0, 0], br, [], {})

    def test_antisymmetry_violation_is_rejected(self):
        with pytest.raises(InvalidStructure):
            FiniteGLA([0, 0], {(0, 1): {1: 1}}, [], {})

    def test_degree_law(self, gla):
        rng = random.Random(0)
        a, b = gla.random_element(rng), gla.random_element(rng)
        assert gla.bracket(a, b).degree == a.degree + b.degree


class TestDifferential:
    def test_zero_cochain(self):
        # (dv)(X) = X.v
        gla = FIXTURES["affine-line"]()
        v = gla.module_element(1, Fraction(3))
        phi = Cochain(gla, 0, 0, lambda: v)
        X = gla.element(0)
        assert cochain_partial(phi, [X]) == gla.act(X, v)

    def test_one_cochain_matches_classical_formula(self):
        gla = FIXTURES["affine-line"]()
        rng = random.Random(1)
        for _ in range(20):
            phi = gla.random_cochain(rng, 1, 0)
            X, Y = gla.random_element(rng, 0), gla.random_element(rng, 0)
            classical = gla.act(X, phi(Y)) - gla.act(Y, phi(X)) - phi(gla.bracket(X, Y))
            assert cochain_partial(phi, [X, Y]) == classical

    def test_abelian_trivial_action(self):
        gla = FIXTURES["abelian"]()
        rng = random.Random(2)
        phi = gla.random_cochain(rng, 2, 0)
        args = [gla.random_element(rng) for _ in range(3)]
        assert cochain_partial(phi, args).is_zero

    @pytest.mark.parametrize("arity", [0, 1, 2])
    def test_square_is_zero(self, gla, arity):
        rng = random.Random(arity)
        for _ in range(25):
            phi = gla.random_cochain(rng, arity, rng.choice([-1, 0, 1]))
            args = [gla.random_element(rng) for _ in range(arity + 2)]
            assert d_squared_check(gla, phi, args)

    def test_coboundary_is_a_cochain(self, gla):
        rng = random.Random(5)
        phi = gla.random_cochain(rng, 1, 0)
        dphi = coboundary(phi)
        assert dphi.arity == 2 and dphi.degree == 0

    def test_random_cochains_are_alternating(self, gla):
        rng = random.Random(6)
        phi = gla.random_cochain(rng, 2, 0)
        for _ in range(10):
            args = [gla.random_element(rng), gla.random_element(rng)]
            assert not alternation_defect(phi, args)

    def test_arity_checked(self, gla):
        phi = gla.random_cochain(random.Random(0), 1, 0)
        with pytest.raises(ArityMismatch):
            cochain_partial(phi, [gla.random_element(random.Random(1))])

    def test_degree_law_checked(self):
        gla = FIXTURES["graded-three"]()
        bad = Cochain(gla, 1, 0, lambda X: GradedElement(MODULE, X.degree + 5, Vector({0: 1})))
        with pytest.raises(DegreeInconsistent):
            bad(gla.element(0))


class TestTracelessContext:
    def test_rejects_bad_elements(self):
        ctx = TracelessContext(POLY2)
        with pytest.raises(NotTraceless):
            ctx.algebra(F("x2 dx1 @ e1"))
        with pytest.raises(NotClosed):
            ctx.module(F("x1 dx2"))
        with pytest.raises(DegreeOutOfRange):
            ctx.module(F("dx1^dx2"))

    def test_sigma_is_a_cocycle(self):
        ctx = TracelessContext(POLY3)
        gen = GenSpec(seed=9, chart=POLY3).generator("sigma")
        s = sigma_cochain(ctx)
        for k, l, n in [(0, 0, 0), (1, 0, 1), (1, 1, 1), (2, 1, 0), (0, 1, 2)]:
            args = [ctx.algebra(gen.traceless(d)) for d in (k, l, n)]
            assert cochain_partial(s, args).is_zero

    def test_sigma_alternates(self):
        ctx = TracelessContext(POLY3)
        K = ctx.algebra(F("x2 dx1 @ e2", POLY3))
        L = ctx.algebra(F("dx2 @ e1", POLY3))
        assert not alternation_defect(sigma_cochain(ctx), [K, L])

    def test_act_truncates_past_top_degree(self):
        ctx = TracelessContext(POLY2)
        K = ctx.algebra(traceless_part(F("x1 dx1 @ e2")))
        z = ctx.module(F("dx1"))
        assert ctx.act(K, z).is_zero
