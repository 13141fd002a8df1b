"""Trace operators, the differential ``delta`` and the brackets on vector-valued forms."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .coeffs import same_chart
from .errors import DegreeOutOfRange, NotTraceless
from .forms import (
    ScalarForm,
    VectorForm,
    coordinate_lie,
    ext_d,
    insert_axis,
    insert_vv,
    lie_bracket_fields,
    lie_theta,
    nr_insert,
    tensor,
    vector_sum,
    wedge,
    _add_into,
)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def trace_c(K: VectorForm) -> ScalarForm:
    """Contraction ``c(K) = sum_j i_{d/dx_j} K_j``."""
    total = ScalarForm.zero(K.chart, K.degree - 1)
    for j, Kj in enumerate(K.components, start=1):
        if not Kj.is_zero:
            total = total + insert_axis(j, Kj)
    return total


def cbar_factor(m: int, k: int) -> Fraction:
    """Normalisation ``(-1)^(k-1) / (m-k+1)`` of the trace on ``k``-forms."""
    return Fraction(_sign(k - 1), m - k + 1)


def trace_cbar(K: VectorForm) -> ScalarForm:
    """Normalised trace; a left inverse of :func:`embed_j`."""
    m, k = K.chart.m, K.degree
    if k < 1 or k > m or K.is_zero:
        return ScalarForm.zero(K.chart, k - 1)
    return trace_c(K).scale(cbar_factor(m, k))


def embed_j(phi: ScalarForm) -> VectorForm:
    """``phi ^ I``; component ``j`` is ``phi ^ dx^j``."""
    chart = phi.chart
    return VectorForm._raw(
        chart, phi.degree + 1, tuple(wedge(phi, ScalarForm.dx(chart, j)) for j in range(1, chart.m + 1))
    )


def project_P(K: VectorForm) -> VectorForm:
    return embed_j(trace_cbar(K))


def traceless_part(K: VectorForm) -> VectorForm:
    return K - project_P(K)


def is_traceless(K: VectorForm) -> bool:
    return trace_c(K).is_zero


def delta(K: VectorForm) -> VectorForm:
    """``delta(K) = (-1)^(k-1) d c(K) ^ I``."""
    result = embed_j(ext_d(trace_c(K)))
    return result if (K.degree - 1) % 2 == 0 else -result


def s_concomitant(K: VectorForm, L: VectorForm) -> ScalarForm:
    """``S(K, L) = sum_{j,l} i_{d/dx_l} K_j ^ i_{d/dx_j} L_l``."""
    K._check(L)
    degree = K.degree + L.degree - 2
    total = ScalarForm.zero(K.chart, degree)
    if K.degree == 0 or L.degree == 0:
        return total
    m = K.chart.m
    for j in range(1, m + 1):
        Kj = K.components[j - 1]
        if Kj.is_zero:
            continue
        for l in range(1, m + 1):
            Ll = L.components[l - 1]
            if Ll.is_zero:
                continue
            total = total + wedge(insert_axis(l, Kj), insert_axis(j, Ll))
    return total if total.degree == degree else ScalarForm.zero(K.chart, degree)


def fn_bracket_decomposable(phi: ScalarForm, X: VectorForm, psi: ScalarForm, Y: VectorForm) -> VectorForm:
    """Frölicher-Nijenhuis bracket ``[phi (x) X, psi (x) Y]`` for arbitrary vector fields.

    [phi X, psi Y] = phi^psi [X,Y] + phi^Th(X)psi Y - Th(Y)phi^psi X
                     + (-1)^k (dphi ^ i_X psi Y + i_Y phi ^ dpsi X)
    """
    k = phi.degree
    degree = k + psi.degree
    s = _sign(k)
    parts = [
        tensor(wedge(phi, psi), lie_bracket_fields(X, Y)),
        tensor(wedge(phi, lie_theta(X, psi)), Y),
        -tensor(wedge(lie_theta(Y, phi), psi), X),
        tensor(wedge(ext_d(phi), nr_insert(X, psi)), Y).scale(s),
        tensor(wedge(nr_insert(Y, phi), ext_d(psi)), X).scale(s),
    ]
    total = VectorForm.zero(phi.chart, degree)
    for part in parts:
        total = total + part
    return total if total.degree == degree else VectorForm.zero(phi.chart, degree)


def fn_bracket_sum(
    left: Iterable[tuple[ScalarForm, VectorForm]], right: Sequence[tuple[ScalarForm, VectorForm]]
) -> VectorForm:
    """FN bracket of two forms given as sums of decomposables ``(form, vector field)``."""
    total = None
    for phi, X in left:
        for psi, Y in right:
            term = fn_bracket_decomposable(phi, X, psi, Y)
            total = term if total is None else total + term
    if total is None:
        raise ValueError("empty decomposition")
    return total


def fn_bracket(K: VectorForm, L: VectorForm) -> VectorForm:
    """Frölicher-Nijenhuis bracket, expanded over coordinate decomposables.

    With ``X = d/dx_j`` and ``Y = d/dx_l`` the decomposable formula loses the
    ``[X, Y]`` term and the Lie derivatives become coefficientwise partials.
    """
    K._check(L)
    chart = K.chart
    m = chart.m
    k = K.degree
    degree = k + L.degree
    if degree > m or K.is_zero or L.is_zero:
        return VectorForm.zero(chart, degree)
    s = _sign(k)
    acc: list[dict] = [{} for _ in range(m)]

    def add(slot: int, form: ScalarForm, sign: int) -> None:
        for index, f in form.components.items():
            _add_into(acc[slot], index, f, sign)

    dL = [None if Ll.is_zero else ext_d(Ll) for Ll in L.components]
    for j in range(1, m + 1):
        phi = K.components[j - 1]
        if phi.is_zero:
            continue
        dphi = ext_d(phi)
        for l in range(1, m + 1):
            psi = L.components[l - 1]
            if psi.is_zero:
                continue
            add(l - 1, wedge(phi, coordinate_lie(j, psi)), 1)
            add(j - 1, wedge(coordinate_lie(l, phi), psi), -1)
            add(l - 1, wedge(dphi, insert_axis(j, psi)), s)
            add(j - 1, wedge(insert_axis(l, phi), dL[l - 1]), s)
    return vector_sum(chart, degree, acc)


def nr_bracket(K: VectorForm, L: VectorForm) -> VectorForm:
    """Nijenhuis-Richardson bracket ``i(K)L - (-1)^((k-1)(l-1)) i(L)K``."""
    K._check(L)
    first = insert_vv(K, L)
    second = insert_vv(L, K)
    if ((K.degree - 1) * (L.degree - 1)) % 2:
        return first + second
    return first - second


def _require_traceless(*forms: VectorForm) -> None:
    for K in forms:
        if not is_traceless(K):
            raise NotTraceless(f"{K!r} has nonzero trace")


def c_bracket(K: VectorForm, L: VectorForm) -> VectorForm:
    """Bracket on traceless forms: the FN bracket with its trace part removed.

    ``[K,L]^c = [K,L] - (-1)^l/(m-k-l+1) dS(K,L) ^ I``.  For ``k + l > m`` the
    result is zero by degree and the scalar factor is never formed.
    """
    K._check(L)
    _require_traceless(K, L)
    m, k, l = K.chart.m, K.degree, L.degree
    if k + l >= m + 1:
        return VectorForm.zero(K.chart, k + l)
    correction = embed_j(ext_d(s_concomitant(K, L))).scale(Fraction(_sign(l), m - k - l + 1))
    return fn_bracket(K, L) - correction


def induced_fn_omega(phi: ScalarForm, psi: ScalarForm) -> ScalarForm:
    """Bracket on scalar forms induced through ``j`` by the FN bracket.

    ``[phi, psi] = (-1)^(k-1) (l dphi ^ psi - (-1)^(kl+1) k dpsi ^ phi)``

    The exponent ``kl+1`` is what graded antisymmetry in the shifted degrees
    forces; ``(k-1)(l-1)`` agrees with it only when ``k+l`` is even.
    """
    same_chart(phi.chart, psi.chart)
    m, k, l = phi.chart.m, phi.degree, psi.degree
    if not (0 <= k <= m - 1 and 0 <= l <= m - 1):
        raise DegreeOutOfRange(f"induced FN bracket needs degrees in 0..{m - 1}, got {k}, {l}")
    first = wedge(ext_d(phi), psi).scale(l)
    second = wedge(ext_d(psi), phi).scale(k * _sign(k * l + 1))
    return (first - second).scale(_sign(k - 1))


def induced_nr_omega(phi: ScalarForm, psi: ScalarForm) -> ScalarForm:
    """``[phi, psi]^ = (l - k) phi ^ psi``."""
    return wedge(phi, psi).scale(psi.degree - phi.degree)
