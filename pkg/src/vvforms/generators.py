"""Deterministic random samples of coefficients, forms and diffeomorphisms."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .calculus import embed_j, traceless_part
from .coeffs import ChartSpec, CoeffFn, GaussianRational
from .forms import Diffeo, ScalarForm, VectorForm, ext_d


@dataclass(frozen=True)
class GenSpec:
    seed: int = 0
    chart: ChartSpec = ChartSpec.poly(2)
    max_poly_degree: int = 2
    max_mode: int = 2
    coeff_bound: int = 5
    min_form_degree: int = 0
    max_form_degree: int | None = None
    trials: int = 100

    def rng(self, *labels) -> random.Random:
        """Independent stream per (seed, labels); stable across runs and platforms."""
        return random.Random(":".join(str(x) for x in (self.seed,) + labels))

    def generator(self, *labels) -> FormGenerator:
        return FormGenerator(self, self.rng(*labels))

    def degree_range(self) -> range:
        top = self.chart.m if self.max_form_degree is None else min(self.max_form_degree, self.chart.m)
        return range(max(self.min_form_degree, 0), top + 1)

    def degree_tuples(self, count: int, total_max: int | None = None) -> list[tuple[int, ...]]:
        """All degree tuples in range whose sum is at most ``total_max`` (default ``m``)."""
        bound = self.chart.m if total_max is None else total_max
        return [t for t in itertools.product(self.degree_range(), repeat=count) if sum(t) <= bound]


class FormGenerator:
    """Random exact objects on one chart, sparse enough for nested brackets."""

    def __init__(self, spec: GenSpec, rng: random.Random, max_terms: int = 3):
        self.spec = spec
        self.chart = spec.chart
        self.rng = rng
        self.max_terms = max_terms

    def rational(self) -> Fraction:
        b = self.spec.coeff_bound
        num = 0
        while num == 0:
            num = self.rng.randint(-b, b)
        return Fraction(num, self.rng.randint(1, b))

    def scalar(self):
        if self.chart.is_fourier:
            if self.rng.random() < 0.5:
                return GaussianRational(self.rational(), 0)
            return GaussianRational(self.rational(), self.rational())
        return self.rational()

    def key(self) -> tuple[int, ...]:
        m = self.chart.m
        if self.chart.is_fourier:
            n = self.spec.max_mode
            return tuple(self.rng.randint(-n, n) for _ in range(m))
        total = self.rng.randint(0, self.spec.max_poly_degree)
        key = [0] * m
        for _ in range(total):
            key[self.rng.randrange(m)] += 1
        return tuple(key)

    def coeff_fn(self, max_terms: int | None = None) -> CoeffFn:
        count = self.rng.randint(1, max_terms or self.max_terms)
        terms: dict = {}
        for _ in range(count):
            k = self.key()
            terms[k] = terms.get(k, 0) + self.scalar()
        return CoeffFn(self.chart, terms)

    def multi_index(self, k: int) -> tuple[int, ...]:
        return tuple(sorted(self.rng.sample(range(1, self.chart.m + 1), k)))

    def scalar_form(self, k: int) -> ScalarForm:
        if k < 0 or k > self.chart.m:
            return ScalarForm.zero(self.chart, k)
        count = self.rng.randint(1, self.max_terms)
        comps: dict = {}
        for _ in range(count):
            idx = self.multi_index(k)
            f = self.coeff_fn(2)
            comps[idx] = comps[idx] + f if idx in comps else f
        return ScalarForm(self.chart, k, comps)

    def vector_form(self, k: int) -> VectorForm:
        if k < 0 or k > self.chart.m:
            return VectorForm.zero(self.chart, k)
        total = VectorForm.zero(self.chart, k)
        for _ in range(self.rng.randint(1, self.max_terms)):
            total = total + VectorForm.decomposable(self.scalar_form(k), self.rng.randint(1, self.chart.m))
        return total

    def traceless(self, k: int) -> VectorForm:
        return traceless_part(self.vector_form(k))

    def harmonic(self, k: int) -> ScalarForm:
        """Random constant-coefficient form (zero-mode on the torus; constants in degree 0 on R^m)."""
        if k < 0 or k > self.chart.m:
            return ScalarForm.zero(self.chart, k)
        if not self.chart.is_fourier and k > 0:
            return ScalarForm.zero(self.chart, k)
        comps = {}
        for _ in range(self.rng.randint(0, 2)):
            comps[self.multi_index(k)] = CoeffFn.constant(self.chart, self.scalar())
        return ScalarForm(self.chart, k, comps)

    def exact(self, k: int) -> ScalarForm:
        if k < 1:
            return ScalarForm.zero(self.chart, k)
        return ext_d(self.scalar_form(k - 1))

    def closed(self, k: int) -> ScalarForm:
        return self.exact(k) + self.harmonic(k)

    def cocycle(self, k: int) -> VectorForm:
        """Random delta-cocycle ``z ^ I + K'`` with ``z`` closed and ``K'`` traceless."""
        return embed_j(self.closed(k - 1)) + self.traceless(k)

    def diffeo(self) -> Diffeo:
        return self.rng.choice(standard_diffeos(self.chart))


def _var(chart: ChartSpec, j: int) -> CoeffFn:
    return CoeffFn.variable(chart, j)


def standard_diffeos(chart: ChartSpec) -> list[Diffeo]:
    """Fixed sample: on R^m a permutation, an affine map and a nonlinear shear;
    on T^m two unimodular matrices (plus the reflection when m = 1)."""
    m = chart.m
    if chart.is_fourier:
        if m == 1:
            return [Diffeo.torus(chart, [[-1]]), Diffeo.torus(chart, [[1]])]
        shear = [[int(r == c) for c in range(m)] for r in range(m)]
        shear[0][1] = 1
        perm = [[int(c == (r + 1) % m) for c in range(m)] for r in range(m)]
        mixed = [[int(r == c) for c in range(m)] for r in range(m)]
        mixed[m - 1][0] = -2
        mixed[0][0], mixed[0][m - 1] = 1, 0
        return [Diffeo.torus(chart, shear), Diffeo.torus(chart, perm), Diffeo.torus(chart, mixed)]
    xs = [_var(chart, j) for j in range(1, m + 1)]
    one = CoeffFn.constant(chart, 1)
    reversal = list(reversed(xs))
    # affine: x_i -> 2 x_i + x_{i+1} + 1 (last: 2 x_m + 1); inverse solved backwards
    forward = [xs[i].scale(2) + (xs[i + 1] if i + 1 < m else CoeffFn.zero(chart)) + one for i in range(m)]
    inverse = [None] * m
    for i in reversed(range(m)):
        rest = inverse[i + 1] if i + 1 < m else CoeffFn.zero(chart)
        inverse[i] = (xs[i] - rest - one).scale(Fraction(1, 2))
    samples = [Diffeo.polynomial(chart, reversal, reversal), Diffeo.polynomial(chart, forward, inverse)]
    if m >= 2:
        # nonlinear triangular shear: x_i -> x_i + x_1 x_{i-1} for i >= 2
        fwd = [xs[0]] + [xs[i] + xs[0] * xs[i - 1] for i in range(1, m)]
        inv = [xs[0]]
        for i in range(1, m):
            inv.append(xs[i] - inv[0] * inv[i - 1])
        samples.append(Diffeo.polynomial(chart, fwd, inv))
    return samples
