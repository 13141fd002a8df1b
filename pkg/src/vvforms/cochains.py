"""Cochains of a graded Lie algebra with values in a graded module.

A ``p``-cochain of degree ``q`` sends ``(X_1, ..., X_p)`` with ``X_i`` of degree
``x_i`` to the module in degree ``x_1 + ... + x_p + q`` and is alternating in
the graded sense: swapping neighbours ``X_i, X_{i+1}`` multiplies the value by
``-(-1)^(x_i x_{i+1})``.  The coboundary uses Quillen signs with
``alpha_i = i + x_i (x_0 + ... + x_{i-1})``.

Two contexts are provided: :class:`FiniteGLA` (finite-dimensional algebras with
exact structure constants) and :class:`TracelessContext`, where the algebra is
the traceless forms with ``[.,.]^c`` acting on closed scalar forms via ``Theta``.
A closed ``(q-1)``-form has module degree ``q``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .calculus import c_bracket, is_traceless
from .coeffs import ChartSpec
from .cohomology import is_closed, sigma
from .errors import (
    ArityMismatch,
    DegreeInconsistent,
    DegreeOutOfRange,
    FormError,
    InvalidStructure,
    NotClosed,
    NotTraceless,
)
from .forms import ScalarForm, VectorForm, lie_theta

ALGEBRA = "algebra"
MODULE = "module"


class Vector:
    """Sparse vector over a finite basis with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping | None = None):
        self.coeffs = {k: Fraction(v) for k, v in sorted((coeffs or {}).items()) if v != 0}

    @classmethod
    def basis(cls, i: int) -> Vector:
        return cls({i: 1})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: Vector) -> Vector:
        acc = dict(self.coeffs)
        for k, v in other.coeffs.items():
            acc[k] = acc.get(k, 0) + v
        return Vector(acc)

    def __neg__(self) -> Vector:
        return Vector({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: Vector) -> Vector:
        return self + (-other)

    def scale(self, c) -> Vector:
        return Vector({k: v * c for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, Vector) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __repr__(self):
        return f"Vector({self.coeffs})"


@dataclass(frozen=True)
class GradedElement:
    """Homogeneous element of the algebra or the module together with its degree."""

    kind: str
    degree: int
    payload: object

    @property
    def is_zero(self) -> bool:
        return self.payload.is_zero

    def _compatible(self, other: GradedElement) -> None:
        if self.kind != other.kind:
            raise DegreeInconsistent("cannot combine algebra and module elements")
        if self.degree != other.degree and not (self.is_zero or other.is_zero):
            raise DegreeInconsistent(f"cannot add elements of degree {self.degree} and {other.degree}")

    def __add__(self, other: GradedElement) -> GradedElement:
        self._compatible(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        return GradedElement(self.kind, self.degree, self.payload + other.payload)

    def __neg__(self) -> GradedElement:
        return GradedElement(self.kind, self.degree, -self.payload)

    def __sub__(self, other: GradedElement) -> GradedElement:
        return self + (-other)

    def scale(self, c) -> GradedElement:
        return GradedElement(self.kind, self.degree, self.payload.scale(c))


@dataclass(frozen=True)
class Cochain:
    """A ``p``-linear map given as an evaluation procedure.

    ``evaluate`` receives ``arity`` algebra elements and returns a module element.
    """

    context: object
    arity: int
    degree: int
    evaluate: Callable[..., GradedElement]

    def __call__(self, *args: GradedElement) -> GradedElement:
        if len(args) != self.arity:
            raise ArityMismatch(f"cochain of arity {self.arity} applied to {len(args)} arguments")
        for a in args:
            self.context.check_algebra(a)
        value = self.evaluate(*args)
        expected = sum(a.degree for a in args) + self.degree
        if value.kind != MODULE or (value.degree != expected and not value.is_zero):
            raise DegreeInconsistent(f"cochain value has degree {value.degree}, expected {expected}")
        if value.degree != expected:
            value = self.context.module_zero(expected)
        return value


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def cochain_partial(phi: Cochain, args: Sequence[GradedElement]) -> GradedElement:
    """Evaluate the coboundary ``(d phi)(X_0, ..., X_p)``.

    (d phi)(X_0..X_p) = sum_i (-1)^(alpha_i + x_i q) Th(X_i) phi(..^X_i..)
        + sum_{i<j} (-1)^(alpha_i + alpha_j - x_i x_j) phi([X_i, X_j], ..^X_i..^X_j..)
    """
    ctx = phi.context
    p, q = phi.arity, phi.degree
    if len(args) != p + 1:
        raise ArityMismatch(f"coboundary of a {p}-cochain needs {p + 1} arguments, got {len(args)}")
    for a in args:
        ctx.check_algebra(a)
    x = [a.degree for a in args]
    alpha = [i + x[i] * sum(x[:i]) for i in range(p + 1)]
    total = ctx.module_zero(sum(x) + q)
    for i in range(p + 1):
        rest = args[:i] + args[i + 1:]
        term = ctx.act(args[i], phi(*rest))
        total = total + term.scale(_sign(alpha[i] + x[i] * q))
    for i in range(p + 1):
        for j in range(i + 1, p + 1):
            rest = [a for n, a in enumerate(args) if n != i and n != j]
            term = phi(ctx.bracket(args[i], args[j]), *rest)
            total = total + term.scale(_sign(alpha[i] + alpha[j] - x[i] * x[j]))
    return total


def coboundary(phi: Cochain) -> Cochain:
    """The cochain ``d phi`` as an evaluation procedure."""
    return Cochain(phi.context, phi.arity + 1, phi.degree, lambda *args: cochain_partial(phi, args))


def d_squared_check(context, phi: Cochain, args: Sequence[GradedElement]) -> bool:
    """Evaluate ``(d d phi)(args)`` and report whether it vanishes."""
    if phi.context is not context:
        raise FormError("cochain belongs to a different context")
    return cochain_partial(coboundary(phi), args).is_zero


def alternation_defect(phi: Cochain, args: Sequence[GradedElement]) -> list[int]:
    """Positions ``i`` where swapping ``args[i], args[i+1]`` breaks graded alternation."""
    bad = []
    base = phi(*args)
    for i in range(len(args) - 1):
        swapped = list(args)
        swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
        expected = base.scale(-_sign(args[i].degree * args[i + 1].degree))
        if not (phi(*swapped) - expected).is_zero:
            bad.append(i)
    return bad


class FiniteGLA:
    """Finite graded Lie algebra with a finite graded module.

    ``brackets[(a, b)]`` and ``action[(a, v)]`` map basis indices to sparse
    coefficient dicts; missing entries are zero.  Graded antisymmetry, graded
    Jacobi and the module law are verified at construction.
    """

    def __init__(
        self,
        degrees: Sequence[int],
        brackets: Mapping,
        module_degrees: Sequence[int],
        action: Mapping,
        name: str = "gla",
    ):
        self.name = name
        self.degrees = list(degrees)
        self.module_degrees = list(module_degrees)
        self.brackets = {k: Vector(v) for k, v in brackets.items()}
        self.action = {k: Vector(v) for k, v in action.items()}
        self._validate()

    # basis level

    def _bracket_basis(self, a: int, b: int) -> Vector:
        return self.brackets.get((a, b), Vector())

    def _act_basis(self, a: int, v: int) -> Vector:
        return self.action.get((a, v), Vector())

    def _bracket_vec(self, u: Vector, w: Vector) -> Vector:
        total = Vector()
        for a, ca in u.coeffs.items():
            for b, cb in w.coeffs.items():
                total = total + self._bracket_basis(a, b).scale(ca * cb)
        return total

    def _act_vec(self, u: Vector, w: Vector) -> Vector:
        total = Vector()
        for a, ca in u.coeffs.items():
            for v, cv in w.coeffs.items():
                total = total + self._act_basis(a, v).scale(ca * cv)
        return total

    def _validate(self) -> None:
        n = len(self.degrees)
        for (a, b), val in self.brackets.items():
            for c in val.coeffs:
                if self.degrees[c] != self.degrees[a] + self.degrees[b]:
                    raise DegreeInconsistent(f"[{a},{b}] has a component of the wrong degree")
        for (a, v), val in self.action.items():
            for w in val.coeffs:
                if self.module_degrees[w] != self.degrees[a] + self.module_degrees[v]:
                    raise DegreeInconsistent(f"action of {a} on {v} has the wrong degree")
        for a in range(n):
            for b in range(n):
                s = -_sign(self.degrees[a] * self.degrees[b])
                if self._bracket_basis(a, b) != self._bracket_basis(b, a).scale(s):
                    raise InvalidStructure(f"bracket not graded antisymmetric on ({a},{b})")
        for a, b, c in itertools.product(range(n), repeat=3):
            xa, xb = self.degrees[a], self.degrees[b]
            ea, eb, ec = Vector.basis(a), Vector.basis(b), Vector.basis(c)
            lhs = self._bracket_vec(ea, self._bracket_vec(eb, ec))
            rhs = self._bracket_vec(self._bracket_vec(ea, eb), ec) + self._bracket_vec(
                eb, self._bracket_vec(ea, ec)
            ).scale(_sign(xa * xb))
            if lhs != rhs:
                raise InvalidStructure(f"graded Jacobi fails on ({a},{b},{c})")
        for a, b in itertools.product(range(n), repeat=2):
            xa, xb = self.degrees[a], self.degrees[b]
            ea, eb = Vector.basis(a), Vector.basis(b)
            for v in range(len(self.module_degrees)):
                ev = Vector.basis(v)
                lhs = self._act_vec(self._bracket_vec(ea, eb), ev)
                rhs = self._act_vec(ea, self._act_vec(eb, ev)) - self._act_vec(eb, self._act_vec(ea, ev)).scale(
                    _sign(xa * xb)
                )
                if lhs != rhs:
                    raise InvalidStructure(f"module law fails on ({a},{b};{v})")

    # context protocol

    def element(self, i: int, coeff=1) -> GradedElement:
        return GradedElement(ALGEBRA, self.degrees[i], Vector({i: coeff}))

    def module_element(self, i: int, coeff=1) -> GradedElement:
        return GradedElement(MODULE, self.module_degrees[i], Vector({i: coeff}))

    def check_algebra(self, a: GradedElement) -> None:
        if a.kind != ALGEBRA or any(self.degrees[i] != a.degree for i in a.payload.coeffs):
            raise DegreeInconsistent(f"{a} is not a homogeneous algebra element")

    def module_zero(self, degree: int) -> GradedElement:
        return GradedElement(MODULE, degree, Vector())

    def bracket(self, a: GradedElement, b: GradedElement) -> GradedElement:
        return GradedElement(ALGEBRA, a.degree + b.degree, self._bracket_vec(a.payload, b.payload))

    def act(self, a: GradedElement, v: GradedElement) -> GradedElement:
        return GradedElement(MODULE, a.degree + v.degree, self._act_vec(a.payload, v.payload))

    def random_element(self, rng: random.Random, degree: int | None = None) -> GradedElement:
        if degree is None:
            degree = rng.choice(sorted(set(self.degrees)))
        idx = [i for i, d in enumerate(self.degrees) if d == degree]
        coeffs = {i: _small_rational(rng) for i in idx}
        return GradedElement(ALGEBRA, degree, Vector(coeffs))

    def random_module_element(self, rng: random.Random, degree: int) -> GradedElement:
        idx = [i for i, d in enumerate(self.module_degrees) if d == degree]
        return GradedElement(MODULE, degree, Vector({i: _small_rational(rng) for i in idx}))

    def random_cochain(self, rng: random.Random, arity: int, degree: int) -> Cochain:
        """Random graded-alternating cochain given by a table on basis tuples (arity <= 2)."""
        n = len(self.degrees)
        table: dict = {}
        if arity == 0:
            table[()] = self.random_module_element(rng, degree).payload
        elif arity == 1:
            for a in range(n):
                table[(a,)] = self.random_module_element(rng, self.degrees[a] + degree).payload
        elif arity == 2:
            for a in range(n):
                for b in range(a, n):
                    xa, xb = self.degrees[a], self.degrees[b]
                    if a == b and xa % 2 == 0:
                        continue
                    val = self.random_module_element(rng, xa + xb + degree).payload
                    table[(a, b)] = val
                    if a != b:
                        table[(b, a)] = val.scale(-_sign(xa * xb))
        else:
            raise ArityMismatch("random tables are only generated for arity <= 2")

        def evaluate(*args: GradedElement) -> GradedElement:
            total = Vector()
            for combo in itertools.product(*[a.payload.coeffs.items() for a in args]):
                key = tuple(i for i, _ in combo)
                coeff = Fraction(1)
                for _, c in combo:
                    coeff *= c
                if key in table:
                    total = total + table[key].scale(coeff)
            return GradedElement(MODULE, sum(a.degree for a in args) + degree, total)

        return Cochain(self, arity, degree, evaluate)


def _small_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-5, 5), rng.randint(1, 5))


def _antisymmetrize(degrees: Sequence[int], upper: Mapping) -> dict:
    out = {}
    for (a, b), val in upper.items():
        out[(a, b)] = dict(val)
        if a != b:
            s = -_sign(degrees[a] * degrees[b])
            out[(b, a)] = {c: s * v for c, v in val.items()}
    return out


def abelian_fixture() -> FiniteGLA:
    """Abelian algebra in degrees 0, 1, 1, 2 acting trivially on a module in degrees 0, 1, 2."""
    return FiniteGLA([0, 1, 1, 2], {}, [0, 1, 2], {}, name="abelian")


def affine_line_fixture() -> FiniteGLA:
    """Two-dimensional nonabelian algebra ``[a, b] = b`` in degree 0, adjoint module."""
    degrees = [0, 0]
    brackets = _antisymmetrize(degrees, {(0, 1): {1: 1}})
    return FiniteGLA(degrees, brackets, degrees, dict(brackets), name="affine-line")


def graded_three_fixture() -> FiniteGLA:
    """Degrees {0, 1, 1}: ``[h, e] = e``, ``[h, f] = -f``; adjoint module."""
    degrees = [0, 1, 1]
    brackets = _antisymmetrize(degrees, {(0, 1): {1: 1}, (0, 2): {2: -1}})
    return FiniteGLA(degrees, brackets, degrees, dict(brackets), name="graded-three")


def odd_square_fixture() -> FiniteGLA:
    """Degrees {1, 2} with ``[a, a] = c``; adjoint module."""
    degrees = [1, 2]
    brackets = {(0, 0): {1: 1}}
    return FiniteGLA(degrees, brackets, degrees, dict(brackets), name="odd-square")


FIXTURES = {
    "abelian": abelian_fixture,
    "affine-line": affine_line_fixture,
    "graded-three": graded_three_fixture,
    "odd-square": odd_square_fixture,
}


class TracelessContext:
    """Traceless forms with ``[.,.]^c`` acting on closed scalar forms.

    Module elements of form degree ``>= m`` are outside the module: nonzero
    ones are rejected, and actions landing there are truncated to zero.
    """

    def __init__(self, chart: ChartSpec):
        self.chart = chart

    def algebra(self, K: VectorForm) -> GradedElement:
        if not is_traceless(K):
            raise NotTraceless(f"{K!r} has nonzero trace")
        return GradedElement(ALGEBRA, K.degree, K)

    def module(self, z: ScalarForm) -> GradedElement:
        if z.degree >= self.chart.m and not z.is_zero:
            raise DegreeOutOfRange(f"module elements must have form degree < {self.chart.m}")
        if not is_closed(z):
            raise NotClosed(f"{z!r} is not closed")
        return GradedElement(MODULE, z.degree + 1, z)

    def check_algebra(self, a: GradedElement) -> None:
        if a.kind != ALGEBRA or not isinstance(a.payload, VectorForm) or a.payload.degree != a.degree:
            raise DegreeInconsistent(f"{a} is not a traceless algebra element")

    def module_zero(self, degree: int) -> GradedElement:
        return GradedElement(MODULE, degree, ScalarForm.zero(self.chart, degree - 1))

    def bracket(self, a: GradedElement, b: GradedElement) -> GradedElement:
        return GradedElement(ALGEBRA, a.degree + b.degree, c_bracket(a.payload, b.payload))

    def act(self, a: GradedElement, v: GradedElement) -> GradedElement:
        degree = a.degree + v.degree
        if degree - 1 >= self.chart.m:
            return self.module_zero(degree)
        return GradedElement(MODULE, degree, lie_theta(a.payload, v.payload))


def sigma_cochain(context: TracelessContext) -> Cochain:
    """The extension cocycle as a degree-0 two-cochain."""

    def evaluate(K: GradedElement, L: GradedElement) -> GradedElement:
        degree = K.degree + L.degree
        if degree > context.chart.m:
            return context.module_zero(degree)
        return GradedElement(MODULE, degree, sigma(K.payload, L.payload))

    return Cochain(context, 2, 0, evaluate)
