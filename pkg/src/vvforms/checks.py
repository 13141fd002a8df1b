"""Seeded property suites: each identity of the calculus as a runnable check."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from .calculus import (
    c_bracket,
    delta,
    embed_j,
    fn_bracket,
    fn_bracket_sum,
    induced_fn_omega,
    induced_nr_omega,
    is_traceless,
    nr_bracket,
    project_P,
    s_concomitant,
    trace_c,
    trace_cbar,
    traceless_part,
)
from .cochains import (
    FIXTURES,
    MODULE,
    Cochain,
    GradedElement,
    TracelessContext,
    alternation_defect,
    cochain_partial,
    d_squared_check,
    sigma_cochain,
)
from .coeffs import CoeffFn
from .cohomology import (
    class_bracket,
    delta_class,
    derham_class,
    derham_dimension,
    direct_extension_split,
    extension_bracket,
    is_closed,
    primitive,
    sigma,
)
from .dsl import print_form
from .errors import UnknownSuite
from .forms import (
    ScalarForm,
    VectorForm,
    ext_d,
    identity_vform,
    lie_theta,
    pullback_scalar,
    pullback_vform,
    wedge,
)
from .generators import FormGenerator, GenSpec, standard_diffeos


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass
class SuiteReport:
    suite: str
    spec: GenSpec
    checks: int = 0
    failures: int = 0
    counterexample: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def format(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [
            f"[{self.suite}] chart={self.spec.chart} seed={self.spec.seed} trials={self.spec.trials} "
            f"checks={self.checks} failures={self.failures} {status}"
        ]
        lines.extend(f"  {note}" for note in self.notes)
        if self.counterexample:
            lines.append(f"  counterexample: {self.counterexample}")
        return "\n".join(lines)


class _Recorder:
    def __init__(self, report: SuiteReport):
        self.report = report

    def check(self, identity: str, ok: bool, **inputs) -> None:
        self.report.checks += 1
        if ok:
            return
        self.report.failures += 1
        if self.report.counterexample is None:
            shown = "; ".join(f"{name} = {_show(v)}" for name, v in inputs.items())
            self.report.counterexample = f"{identity}: {shown}"


def _show(v) -> str:
    if isinstance(v, (ScalarForm, VectorForm)):
        return print_form(v)
    return str(v)


SuiteFn = Callable[[GenSpec, _Recorder, FormGenerator, int], None]
SUITES: dict[str, SuiteFn] = {}


def suite(name: str):
    def register(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = fn
        return fn

    return register


def run_suite(name: str, spec: GenSpec) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))} or all")
    report = SuiteReport(name, spec)
    rec = _Recorder(report)
    for trial in range(spec.trials):
        SUITES[name](spec, rec, spec.generator(name, trial), trial)
    if name == "derham":
        _derham_summary(spec, rec)
    return report


def run_all(spec: GenSpec) -> list[SuiteReport]:
    return [run_suite(name, spec) for name in SUITES]


def suite_names() -> list[str]:
    return list(SUITES) + ["all"]


# individual suites


@suite("lemma21")
def _lemma21(spec, rec, gen, trial):
    chart = spec.chart
    m = chart.m
    k = gen.rng.randint(0, m)
    phi = gen.scalar_form(k)
    rec.check("c(phi^I) = (-1)^k (m-k) phi", trace_c(embed_j(phi)) == phi.scale(_sign(k) * (m - k)), phi=phi)
    if k <= m - 1:
        rec.check("cbar(j(phi)) = phi", trace_cbar(embed_j(phi)) == phi, phi=phi)
        rec.check(
            "delta(j(phi)) = (m-k) j(d phi)",
            delta(embed_j(phi)) == embed_j(ext_d(phi)).scale(m - k),
            phi=phi,
        )
    kk = gen.rng.randint(0, m - 1)
    K = gen.vector_form(kk)
    rec.check(
        "cbar(delta K) = (m-k+1) d cbar(K)",
        trace_cbar(delta(K)) == ext_d(trace_cbar(K)).scale(m - kk + 1),
        K=K,
    )
    rec.check("P(P(K)) = P(K)", project_P(project_P(K)) == project_P(K), K=K)


@suite("delta-derivation")
def _delta_derivation(spec, rec, gen, trial):
    k, l = gen.rng.choice(spec.degree_tuples(2))
    K, L = gen.vector_form(k), gen.vector_form(l)
    rec.check("delta(delta K) = 0", delta(delta(K)).is_zero, K=K)
    lhs = delta(fn_bracket(K, L))
    rhs = fn_bracket(delta(K), L) + fn_bracket(K, delta(L)).scale(_sign(k))
    rec.check("delta[K,L] = [dK,L] + (-1)^k [K,dL]", lhs == rhs, K=K, L=L)


def _theta_commutator(K: VectorForm, L: VectorForm) -> VectorForm:
    """Oracle: ``[K,L]_i = Theta(K) L_i - (-1)^(kl) Theta(L) K_i``."""
    k, l = K.degree, L.degree
    if k + l > K.chart.m:
        return VectorForm.zero(K.chart, k + l)
    comps = [lie_theta(K, Li) - lie_theta(L, Ki).scale(_sign(k * l)) for Ki, Li in zip(K.components, L.components)]
    return VectorForm(K.chart, k + l, comps)


def decompositions(K: VectorForm, gen: FormGenerator) -> list[list[tuple[ScalarForm, VectorForm]]]:
    """Three rewritings of ``K`` as a sum of decomposables ``form (x) field``.

    For every term ``f dx^I (x) d_j``: the coefficient on the form, on the
    field, or split at random between both.
    """
    chart = K.chart
    out: list[list] = [[], [], []]
    one = CoeffFn.constant(chart, 1)
    for j, Kj in enumerate(K.components, start=1):
        field_coeffs = [CoeffFn.zero(chart)] * chart.m

        def field(c: CoeffFn) -> VectorForm:
            coeffs = list(field_coeffs)
            coeffs[j - 1] = c
            return VectorForm.vector_field(chart, coeffs)

        for index, f in Kj.components.items():
            basis = ScalarForm.basis(chart, index)
            out[0].append((basis.scale(f), field(one)))
            out[1].append((basis, field(f)))
            part = CoeffFn(chart, {key: v for key, v in f.terms.items() if gen.rng.random() < 0.5})
            out[2].append((basis.scale(part), field(one)))
            out[2].append((basis, field(f - part)))
    return [d if d else [(ScalarForm.zero(chart, K.degree), VectorForm.zero(chart, 0))] for d in out]


@suite("fn-jacobi")
def _fn_jacobi(spec, rec, gen, trial):
    k, l, n = gen.rng.choice(spec.degree_tuples(3))
    K, L, N = gen.vector_form(k), gen.vector_form(l), gen.vector_form(n)
    KL = fn_bracket(K, L)
    rec.check("[K,L] = -(-1)^(kl) [L,K]", KL == fn_bracket(L, K).scale(-_sign(k * l)), K=K, L=L)
    lhs = fn_bracket(K, fn_bracket(L, N))
    rhs = fn_bracket(KL, N) + fn_bracket(L, fn_bracket(K, N)).scale(_sign(k * l))
    rec.check("[K,[L,N]] = [[K,L],N] + (-1)^(kl) [L,[K,N]]", lhs == rhs, K=K, L=L, N=N)
    rec.check("[K,L] agrees with the Theta-commutator oracle", KL == _theta_commutator(K, L), K=K, L=L)
    decs_K, decs_L = decompositions(K, gen), decompositions(L, gen)
    for a, b in ((0, 1), (1, 2), (2, 0)):
        rec.check(
            "[K,L] independent of the decomposition",
            fn_bracket_sum(decs_K[a], decs_L[b]) == KL,
            K=K,
            L=L,
        )


@suite("center")
def _center(spec, rec, gen, trial):
    k = gen.rng.randint(0, spec.chart.m)
    K = gen.vector_form(k)
    ident = identity_vform(spec.chart)
    rec.check("[I,K] = 0", fn_bracket(ident, K).is_zero, K=K)
    rec.check("[K,I] = 0", fn_bracket(K, ident).is_zero, K=K)


def trace_of_bracket_rhs(K: VectorForm, L: VectorForm) -> ScalarForm:
    """``(-1)^k Th(K)c(L) - (-1)^((k+1)l) Th(L)c(K) - (-1)^k dS(K,L)``."""
    k, l = K.degree, L.degree
    return (
        lie_theta(K, trace_c(L)).scale(_sign(k))
        - lie_theta(L, trace_c(K)).scale(_sign((k + 1) * l))
        - ext_d(s_concomitant(K, L)).scale(_sign(k))
    )


@suite("lemma23")
def _lemma23(spec, rec, gen, trial):
    m = spec.chart.m
    k, l = gen.rng.randint(0, m), gen.rng.randint(0, m)
    K, L = gen.vector_form(k), gen.vector_form(l)
    rec.check("c([K,L]) trace identity", trace_c(fn_bracket(K, L)) == trace_of_bracket_rhs(K, L), K=K, L=L)


@suite("cbracket")
def _cbracket(spec, rec, gen, trial):
    m = spec.chart.m
    k, l, n = gen.rng.choice(spec.degree_tuples(3))
    K, L, N = gen.traceless(k), gen.traceless(l), gen.traceless(n)
    KL = c_bracket(K, L)
    rec.check("c([K,L]^c) = 0", trace_c(KL).is_zero, K=K, L=L)
    rec.check("[K,L]^c = -(-1)^(kl) [L,K]^c", KL == c_bracket(L, K).scale(-_sign(k * l)), K=K, L=L)
    lhs = c_bracket(K, c_bracket(L, N))
    rhs = c_bracket(KL, N) + c_bracket(L, c_bracket(K, N)).scale(_sign(k * l))
    rec.check("graded Jacobi for [,]^c", lhs == rhs, K=K, L=L, N=N)
    if k + l <= m:
        factor = Fraction(_sign(l), m - k - l + 1)
        split = embed_j(ext_d(s_concomitant(K, L))).scale(factor) + KL
        rec.check("[K,L] = sigma-part ^ I + [K,L]^c", fn_bracket(K, L) == split, K=K, L=L)


@suite("naturality")
def _naturality(spec, rec, gen, trial):
    chart = spec.chart
    diffeos = standard_diffeos(chart)
    f = diffeos[trial % len(diffeos)]
    k, l = gen.rng.choice(spec.degree_tuples(2))
    K, L = gen.traceless(k), gen.traceless(l)
    rec.check(
        "f*[K,L]^c = [f*K, f*L]^c",
        pullback_vform(f, c_bracket(K, L)) == c_bracket(pullback_vform(f, K), pullback_vform(f, L)),
        K=K,
        L=L,
        f=f,
    )
    A, B = gen.vector_form(k), gen.vector_form(l)
    rec.check(
        "f*[K,L] = [f*K, f*L]",
        pullback_vform(f, fn_bracket(A, B)) == fn_bracket(pullback_vform(f, A), pullback_vform(f, B)),
        K=A,
        L=B,
        f=f,
    )
    rec.check("f*I = I", pullback_vform(f, identity_vform(chart)) == identity_vform(chart), f=f)
    phi, psi = gen.scalar_form(k), gen.scalar_form(l)
    rec.check("f*(d phi) = d(f*phi)", pullback_scalar(f, ext_d(phi)) == ext_d(pullback_scalar(f, phi)), phi=phi, f=f)
    rec.check(
        "f*(phi^psi) = f*phi ^ f*psi",
        pullback_scalar(f, wedge(phi, psi)) == wedge(pullback_scalar(f, phi), pullback_scalar(f, psi)),
        phi=phi,
        psi=psi,
        f=f,
    )


@suite("ideals-31")
def _ideals(spec, rec, gen, trial):
    m = spec.chart.m
    q, r = gen.rng.randint(0, m - 1), gen.rng.randint(0, m - 1)
    z, w, b = gen.closed(q), gen.closed(r), gen.exact(q)
    zI, wI, bI = embed_j(z), embed_j(w), embed_j(b)
    rec.check("[z^I, w^I] = 0", fn_bracket(zI, wI).is_zero, z=z, w=w)
    rec.check("[b^I, w^I] = 0", fn_bracket(bI, wI).is_zero, b=b, w=w)
    K = gen.vector_form(gen.rng.randint(0, m))
    R = fn_bracket(zI, K)
    rec.check("[z^I, K] in Z^I", traceless_part(R).is_zero and is_closed(trace_cbar(R)), z=z, K=K)
    R = fn_bracket(bI, K)
    tr = trace_cbar(R)
    exact = traceless_part(R).is_zero and is_closed(tr) and derham_class(tr).is_zero
    if exact and tr.degree >= 1:
        exact = ext_d(primitive(tr)) == tr
    rec.check("[b^I, K] in B^I", exact, b=b, K=K)


@suite("induced-31")
def _induced31(spec, rec, gen, trial):
    m = spec.chart.m
    k, l = gen.rng.randint(0, m - 1), gen.rng.randint(0, m - 1)
    phi, psi = gen.scalar_form(k), gen.scalar_form(l)
    rec.check(
        "[j phi, j psi] = j([phi, psi])",
        fn_bracket(embed_j(phi), embed_j(psi)) == embed_j(induced_fn_omega(phi, psi)),
        phi=phi,
        psi=psi,
    )


@suite("extension-32")
def _extension(spec, rec, gen, trial):
    k, l = gen.rng.choice(spec.degree_tuples(2))
    zK, zL = gen.closed(k - 1), gen.closed(l - 1)
    Kp, Lp = gen.traceless(k), gen.traceless(l)
    rec.check(
        "extension bracket = direct split of [K,L]",
        extension_bracket(zK, Kp, zL, Lp) == direct_extension_split(zK, Kp, zL, Lp),
        zK=zK,
        Kp=Kp,
        zL=zL,
        Lp=Lp,
    )


@suite("module-32c")
def _module(spec, rec, gen, trial):
    m = spec.chart.m
    k, l = gen.rng.choice(spec.degree_tuples(2))
    K, L = gen.traceless(k), gen.traceless(l)
    z = gen.closed(gen.rng.randint(0, m - 1))
    lhs = lie_theta(c_bracket(K, L), z)
    rhs = lie_theta(K, lie_theta(L, z)) - lie_theta(L, lie_theta(K, z)).scale(_sign(k * l))
    rec.check("Theta([K,L]^c) = [Theta K, Theta L] on closed forms", lhs == rhs, K=K, L=L, z=z)


@suite("sigma-cocycle")
def _sigma(spec, rec, gen, trial):
    ctx = TracelessContext(spec.chart)
    k, l, n = gen.rng.choice(spec.degree_tuples(3))
    K, L, N = gen.traceless(k), gen.traceless(l), gen.traceless(n)
    s = sigma_cochain(ctx)
    args = [ctx.algebra(K), ctx.algebra(L), ctx.algebra(N)]
    rec.check("(d sigma)(K,L,N) = 0", cochain_partial(s, args).is_zero, K=K, L=L, N=N)
    rec.check("sigma graded alternating", not alternation_defect(s, args[:2]), K=K, L=L)
    if k + l <= spec.chart.m:
        rec.check("sigma(K,L) closed", is_closed(sigma(K, L)), K=K, L=L)


def _forms_cochain(ctx: TracelessContext, N: VectorForm) -> Cochain:
    """One-cochain ``K -> d S(K, N)`` of degree ``deg N``."""
    n = N.degree

    def evaluate(K: GradedElement) -> GradedElement:
        degree = K.degree + n
        if degree > ctx.chart.m:
            return ctx.module_zero(degree)
        return GradedElement(MODULE, degree, ext_d(s_concomitant(K.payload, N)))

    return Cochain(ctx, 1, n, evaluate)


def classical_ce(gla, phi: Cochain, X: GradedElement, Y: GradedElement) -> GradedElement:
    """``X.phi(Y) - Y.phi(X) - phi([X,Y])`` for degree-0 data."""
    return gla.act(X, phi(Y)) - gla.act(Y, phi(X)) - phi(gla.bracket(X, Y))


@suite("partial-squared")
def _partial_squared(spec, rec, gen, trial):
    names = list(FIXTURES)
    gla = FIXTURES[names[trial % len(names)]]()
    rng = gen.rng
    p = rng.randint(0, 2)
    q = rng.choice([-1, 0, 1])
    phi = gla.random_cochain(rng, p, q)
    args = [gla.random_element(rng) for _ in range(p + 2)]
    rec.check(f"dd = 0 on {gla.name} (p={p}, q={q})", d_squared_check(gla, phi, args), trial=trial)
    line = FIXTURES["affine-line"]()
    phi1 = line.random_cochain(rng, 1, 0)
    X, Y = line.random_element(rng, 0), line.random_element(rng, 0)
    rec.check("p=1 coboundary = classical formula", cochain_partial(phi1, [X, Y]) == classical_ce(line, phi1, X, Y), trial=trial)
    # the forms context is costly on large torus charts; sample it every fourth trial
    tuples = spec.degree_tuples(4)
    if tuples and trial % 4 == 0:
        ctx = TracelessContext(spec.chart)
        n, a, b, c = rng.choice(tuples)
        N = gen.traceless(n)
        phi2 = _forms_cochain(ctx, N)
        A, B, C = gen.traceless(a), gen.traceless(b), gen.traceless(c)
        ok = d_squared_check(ctx, phi2, [ctx.algebra(A), ctx.algebra(B), ctx.algebra(C)])
        rec.check("dd = 0 on traceless forms", ok, N=N, A=A, B=B, C=C)


@suite("nr-34")
def _nr(spec, rec, gen, trial):
    m = spec.chart.m
    k, l, n = (gen.rng.randint(0, m) for _ in range(3))
    K, L, N = gen.vector_form(k), gen.vector_form(l), gen.vector_form(n)
    sk, sl = k - 1, l - 1
    KL = nr_bracket(K, L)
    rec.check("[K,L]^ = -(-1)^((k-1)(l-1)) [L,K]^", KL == nr_bracket(L, K).scale(-_sign(sk * sl)), K=K, L=L)
    lhs = nr_bracket(K, nr_bracket(L, N))
    rhs = nr_bracket(KL, N) + nr_bracket(L, nr_bracket(K, N)).scale(_sign(sk * sl))
    rec.check("shifted graded Jacobi for [,]^", lhs == rhs, K=K, L=L, N=N)
    Kp, Lp = traceless_part(K), traceless_part(L)
    rec.check("traceless forms close under [,]^", is_traceless(nr_bracket(Kp, Lp)), K=Kp, L=Lp)
    phi, psi = gen.scalar_form(gen.rng.randint(0, m)), gen.scalar_form(gen.rng.randint(0, m))
    rec.check(
        "[j phi, j psi]^ = j((l-k) phi^psi)",
        nr_bracket(embed_j(phi), embed_j(psi)) == embed_j(induced_nr_omega(phi, psi)),
        phi=phi,
        psi=psi,
    )


@suite("derham")
def _derham(spec, rec, gen, trial):
    k = trial % (spec.chart.m + 1)
    phi = gen.closed(k)
    rep = derham_class(phi)
    rec.check("class of an exact form is 0", derham_class(gen.exact(k)).is_zero, phi=phi)
    diff = phi - rep
    if k >= 1:
        rec.check("phi - class(phi) is exact", ext_d(primitive(diff)) == diff, phi=phi)
    else:
        rec.check("phi - class(phi) is exact", diff.is_zero, phi=phi)


def expected_derham_dims(spec: GenSpec) -> tuple[int, ...]:
    m = spec.chart.m
    if spec.chart.is_fourier:
        return tuple(comb(m, k) for k in range(m + 1))
    return (1,) + (0,) * m


def _derham_summary(spec: GenSpec, rec: _Recorder) -> None:
    chart = spec.chart
    m = chart.m
    dims = []
    for k in range(m + 1):
        gen = spec.generator("derham-span", k)
        sample = [ScalarForm.basis(chart, idx) for idx in itertools.combinations(range(1, m + 1), k)]
        sample += [gen.closed(k) for _ in range(max(4, spec.trials // (m + 1)))]
        dims.append(derham_dimension(sample))
    dims = tuple(dims)
    rec.report.notes.append(f"dims: {dims}")
    rec.check("de Rham dimensions", dims == expected_derham_dims(spec), dims=dims)


@suite("class-bracket")
def _class_bracket(spec, rec, gen, trial):
    m = spec.chart.m
    k, l = gen.rng.choice(spec.degree_tuples(2))
    K, L = gen.cocycle(k), gen.cocycle(l)
    lhs = delta_class(fn_bracket(K, L))
    rhs = class_bracket(delta_class(K), delta_class(L))
    rec.check("class([K,L]) = [class K, class L]", lhs == rhs, K=K, L=L)
    j = gen.rng.randint(0, m - 1)
    M = gen.vector_form(j)
    cls = delta_class(delta(M))
    rec.check("coboundaries have zero class", cls.dr_part.is_zero and cls.traceless_part.is_zero, M=M)
    if k >= 1:
        B = gen.vector_form(k - 1)
        rec.check("K + delta(B) has the class of K", delta_class(K + delta(B)) == delta_class(K), K=K, B=B)
