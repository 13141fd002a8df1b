"""de Rham machinery on both chart models and the delta-cohomology decomposition.

A delta-cocycle ``K`` splits as ``cbar(K) ^ I + K'`` with ``cbar(K)`` closed and
``K'`` traceless.  Its class is the pair (de Rham class of ``cbar(K)``, ``K'``);
coboundaries are exactly ``B ^ I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .calculus import c_bracket, is_traceless, s_concomitant, trace_cbar, traceless_part, embed_j, fn_bracket
from .coeffs import ChartKind, ChartSpec, CoeffFn, GaussianRational, same_chart
from .errors import DegreeOutOfRange, NotClosed, NotCocycle, NotExact, NotTraceless
from .forms import ScalarForm, VectorForm, ext_d, insert_axis, lie_theta, _add_into


def is_closed(phi: ScalarForm) -> bool:
    return ext_d(phi).is_zero


def is_exact(phi: ScalarForm) -> bool:
    """Closed with vanishing de Rham class."""
    return is_closed(phi) and derham_class(phi).is_zero


def _require_closed(phi: ScalarForm) -> None:
    if not is_closed(phi):
        raise NotClosed(f"{phi!r} is not closed")


def primitive(phi: ScalarForm) -> ScalarForm:
    """Return ``eta`` with ``d eta = phi``.

    Polynomial charts use the radial homotopy operator: a term ``x^a dx^I`` of
    polynomial degree ``d`` in a ``k``-form contributes ``i_E(x^a dx^I) / (k + d)``
    with ``E`` the Euler field.  Torus charts invert each mode ``n != 0`` by
    ``i_N phi_n / (i |n|^2)`` with ``N = sum n_j d/dx_j``; a nonzero zero-mode
    means the form is not exact.
    """
    k = phi.degree
    if k < 1:
        raise DegreeOutOfRange("primitives exist only for forms of degree >= 1")
    _require_closed(phi)
    chart = phi.chart
    m = chart.m
    acc: dict = {}
    if chart.kind is ChartKind.POLY:
        for index, f in phi.components.items():
            for key, value in f.terms.items():
                weight = Fraction(1, k + sum(key))
                for p, axis in enumerate(index):
                    nk = list(key)
                    nk[axis - 1] += 1
                    sign = -1 if p % 2 else 1
                    slot = acc.setdefault(index[:p] + index[p + 1:], {})
                    nk = tuple(nk)
                    slot[nk] = slot.get(nk, 0) + value * weight * sign
        return ScalarForm._from_acc(chart, k - 1, acc)
    zero_key = (0,) * m
    for index, f in phi.components.items():
        if zero_key in f.terms:
            raise NotExact(f"{phi!r} has a nonzero harmonic part")
    # group by frequency: phi_n is a constant-coefficient form
    for index, f in phi.components.items():
        for key, value in f.terms.items():
            norm = sum(n * n for n in key)
            factor = value / GaussianRational(0, norm)
            for p, axis in enumerate(index):
                n = key[axis - 1]
                if not n:
                    continue
                sign = -1 if p % 2 else 1
                slot = acc.setdefault(index[:p] + index[p + 1:], {})
                slot[key] = slot.get(key, 0) + factor * (n * sign)
    return ScalarForm._from_acc(chart, k - 1, acc)


def harmonic_part(phi: ScalarForm) -> ScalarForm:
    """Canonical constant representative of the (assumed) class of ``phi``."""
    chart = phi.chart
    zero_key = (0,) * chart.m
    if chart.kind is ChartKind.POLY:
        if phi.degree != 0:
            return ScalarForm.zero(chart, phi.degree)
        return ScalarForm.constant(chart, phi.components[()].constant_term()) if () in phi.components else phi
    comps = {}
    for index, f in phi.components.items():
        if zero_key in f.terms:
            comps[index] = CoeffFn._raw(chart, {zero_key: f.terms[zero_key]})
    return ScalarForm._raw(chart, phi.degree, comps)


def derham_class(phi: ScalarForm) -> ScalarForm:
    """Canonical de Rham representative of a closed form."""
    _require_closed(phi)
    return harmonic_part(phi)


def delta_cocycle_check(K: VectorForm) -> bool:
    """``delta(K) == 0``; for ``k < m`` this is ``d cbar(K) == 0``."""
    if K.degree >= K.chart.m:
        return True
    return is_closed(trace_cbar(K))


@dataclass(frozen=True)
class DeltaClass:
    chart: ChartSpec
    degree: int
    dr_part: ScalarForm
    traceless_part: VectorForm


def delta_class(K: VectorForm) -> DeltaClass:
    """Decompose a delta-cocycle into (de Rham class of ``cbar K``, traceless part).

    In top degree every form is a cocycle, but only those with closed
    ``cbar K`` have a class in this model; others raise :class:`NotCocycle`.
    """
    trace = trace_cbar(K)
    if not is_closed(trace):
        raise NotCocycle(f"{K!r} is not a delta-cocycle with closed trace")
    return DeltaClass(K.chart, K.degree, harmonic_part(trace), traceless_part(K))


def class_bracket(a: DeltaClass, b: DeltaClass) -> DeltaClass:
    """Induced bracket: the de Rham summand is an abelian ideal."""
    same_chart(a.chart, b.chart)
    degree = a.degree + b.degree
    return DeltaClass(
        a.chart,
        degree,
        ScalarForm.zero(a.chart, degree - 1),
        c_bracket(a.traceless_part, b.traceless_part),
    )


def _require_traceless(*forms: VectorForm) -> None:
    for K in forms:
        if not is_traceless(K):
            raise NotTraceless(f"{K!r} has nonzero trace")


def sigma(K: VectorForm, L: VectorForm) -> ScalarForm:
    """Extension cocycle ``(-1)^l / (m-k-l+1) dS(K, L)`` on traceless forms."""
    same_chart(K.chart, L.chart)
    _require_traceless(K, L)
    m, k, l = K.chart.m, K.degree, L.degree
    if k + l > m:
        raise DegreeOutOfRange(f"sigma needs k + l <= m, got {k} + {l} > {m}")
    factor = Fraction(-1 if l % 2 else 1, m - k - l + 1)
    return ext_d(s_concomitant(K, L)).scale(factor)


def theta_action(K: VectorForm, z: ScalarForm) -> ScalarForm:
    """Module action of traceless forms on closed scalar forms."""
    _require_traceless(K)
    _require_closed(z)
    return lie_theta(K, z)


def extension_bracket(zK: ScalarForm, Kp: VectorForm, zL: ScalarForm, Lp: VectorForm):
    """FN bracket of ``zK ^ I + Kp`` and ``zL ^ I + Lp`` split into (closed part, traceless part).

    ``z = Th(K') zL - (-1)^(kl) Th(L') zK + sigma(K', L')`` and the traceless
    part is ``[K', L']^c``.
    """
    _require_closed(zK)
    _require_closed(zL)
    k, l = Kp.degree, Lp.degree
    if zK.degree != k - 1 or zL.degree != l - 1:
        raise DegreeOutOfRange("closed parts must have degree one less than the traceless parts")
    m = Kp.chart.m
    if k + l > m:
        return ScalarForm.zero(Kp.chart, k + l - 1), VectorForm.zero(Kp.chart, k + l)
    z = theta_action(Kp, zL)
    second = theta_action(Lp, zK)
    z = z + second if (k * l) % 2 else z - second
    z = z + sigma(Kp, Lp)
    return z, c_bracket(Kp, Lp)


def direct_extension_split(zK: ScalarForm, Kp: VectorForm, zL: ScalarForm, Lp: VectorForm):
    """Same split computed directly from the FN bracket."""
    K = embed_j(zK) + Kp
    L = embed_j(zL) + Lp
    bracket = fn_bracket(K, L)
    return trace_cbar(bracket), traceless_part(bracket)


def _rank(rows: list[list]) -> int:
    """Rank of a matrix over the Gaussian rationals by exact elimination."""
    rows = [list(r) for r in rows if any(x != 0 for x in r)]
    rank = 0
    if not rows:
        return 0
    ncols = len(rows[0])
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / p
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def derham_dimension(closed_forms: list[ScalarForm]) -> int:
    """Dimension of the span of the de Rham classes of the given closed forms."""
    if not closed_forms:
        return 0
    chart = closed_forms[0].chart
    keys = sorted({idx for phi in closed_forms for idx in derham_class(phi).components})
    zero_key = (0,) * chart.m
    rows = []
    for phi in closed_forms:
        rep = derham_class(phi)
        rows.append([rep.components[idx].terms[zero_key] if idx in rep.components else 0 for idx in keys])
    if not keys:
        return 0
    return _rank(rows)
