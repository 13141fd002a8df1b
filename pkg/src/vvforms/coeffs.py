"""Exact scalars and coefficient function algebras.

Two models of smooth functions on a single chart are supported:

* ``poly``: polynomials in ``x1..xm`` with rational coefficients; a term key is
  the exponent vector ``alpha`` and stands for ``x^alpha``.
* ``fourier``: trigonometric polynomials on the torus with Gaussian-rational
  coefficients; a term key is a frequency vector ``n`` and stands for
  ``E[n] = exp(i <n, x>)``.

Both carry exact arithmetic, so zero tests are decidable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import AxisOutOfRange, ChartMismatch, FormError, UnsupportedSubstitution

MAX_DIMENSION = 8

_ZERO = Fraction(0)
_ONE = Fraction(1)


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> GaussianRational:
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @staticmethod
    def coerce(value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational._make(Fraction(value), _ZERO)
        if isinstance(value, Rational):
            return GaussianRational._make(Fraction(value.numerator, value.denominator), _ZERO)
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> GaussianRational:
        return GaussianRational._make(self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._make(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._make(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational._make(other - self.re, -self.im)
        return NotImplemented

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return GaussianRational._make(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return GaussianRational._make(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            norm = other.re * other.re + other.im * other.im
            if norm == 0:
                raise ZeroDivisionError("division by zero")
            num = self * other.conjugate()
            return GaussianRational._make(num.re / norm, num.im / norm)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational.coerce(other) / self
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


I = GaussianRational(0, 1)


class ChartKind(enum.Enum):
    POLY = "poly"
    FOURIER = "fourier"


@dataclass(frozen=True)
class ChartSpec:
    """The ambient model: coefficient algebra kind plus dimension ``m``."""

    kind: ChartKind
    m: int

    def __post_init__(self):
        if not isinstance(self.kind, ChartKind):
            object.__setattr__(self, "kind", ChartKind(self.kind))
        if not 1 <= self.m <= MAX_DIMENSION:
            raise FormError(f"chart dimension must lie in 1..{MAX_DIMENSION}, got {self.m}")

    @classmethod
    def poly(cls, m: int) -> ChartSpec:
        return cls(ChartKind.POLY, m)

    @classmethod
    def fourier(cls, m: int) -> ChartSpec:
        return cls(ChartKind.FOURIER, m)

    @classmethod
    def parse(cls, text: str) -> ChartSpec:
        """Parse ``poly:<m>`` or ``fourier:<m>``."""
        kind, sep, dim = text.strip().partition(":")
        if not sep or not dim.strip().isdigit():
            raise FormError(f"chart must look like poly:<m> or fourier:<m>, got {text!r}")
        try:
            return cls(ChartKind(kind.strip().lower()), int(dim))
        except ValueError as exc:
            if isinstance(exc, FormError):
                raise
            raise FormError(f"unknown chart kind {kind!r}") from None

    @property
    def is_fourier(self) -> bool:
        return self.kind is ChartKind.FOURIER

    def scalar(self, value):
        """Coerce ``value`` into this chart's scalar field."""
        if self.kind is ChartKind.FOURIER:
            return GaussianRational.coerce(value)
        if isinstance(value, GaussianRational):
            if value.im != 0:
                raise FormError("complex scalar on a polynomial chart")
            return value.re
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, Rational)):
            return Fraction(value)
        raise TypeError(f"cannot interpret {value!r} as a rational")

    def check_axis(self, j: int) -> None:
        if not 1 <= j <= self.m:
            raise AxisOutOfRange(f"axis {j} outside 1..{self.m}")

    def __str__(self):
        return f"{self.kind.value}:{self.m}"


def same_chart(a: ChartSpec, b: ChartSpec) -> None:
    if a is not b and a != b:
        raise ChartMismatch(f"chart mismatch: {a} vs {b}")


def _canonical(terms: Mapping) -> dict:
    return {k: terms[k] for k in sorted(terms) if terms[k] != 0}


class CoeffFn:
    """Finite exact linear combination of monomials or Fourier modes.

    Values are immutable; ``terms`` maps keys (length-``m`` integer tuples) to
    nonzero scalars and is always stored in sorted key order.
    """

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: ChartSpec, terms: Mapping | None = None):
        self.chart = chart
        acc: dict = {}
        for key, value in (terms or {}).items():
            key = tuple(int(e) for e in key)
            if len(key) != chart.m:
                raise FormError(f"key {key} does not have length {chart.m}")
            if chart.kind is ChartKind.POLY and any(e < 0 for e in key):
                raise FormError(f"negative exponent in {key}")
            value = chart.scalar(value)
            acc[key] = acc.get(key, 0) + value
        self.terms = _canonical(acc)
        self._hash = None

    @classmethod
    def _raw(cls, chart: ChartSpec, terms: dict) -> CoeffFn:
        obj = object.__new__(cls)
        obj.chart = chart
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def _from_acc(cls, chart: ChartSpec, acc: dict) -> CoeffFn:
        return cls._raw(chart, _canonical(acc))

    @classmethod
    def zero(cls, chart: ChartSpec) -> CoeffFn:
        return cls._raw(chart, {})

    @classmethod
    def constant(cls, chart: ChartSpec, value=1) -> CoeffFn:
        value = chart.scalar(value)
        if value == 0:
            return cls.zero(chart)
        return cls._raw(chart, {(0,) * chart.m: value})

    @classmethod
    def monomial(cls, chart: ChartSpec, key: Sequence[int], value=1) -> CoeffFn:
        return cls(chart, {tuple(key): value})

    @classmethod
    def variable(cls, chart: ChartSpec, j: int) -> CoeffFn:
        """The coordinate function ``x_j`` (polynomial charts only)."""
        if chart.kind is not ChartKind.POLY:
            raise UnsupportedSubstitution("coordinate functions are not torus functions")
        chart.check_axis(j)
        key = [0] * chart.m
        key[j - 1] = 1
        return cls._raw(chart, {tuple(key): _ONE})

    @classmethod
    def mode(cls, chart: ChartSpec, freq: Sequence[int], value=1) -> CoeffFn:
        """The Fourier mode ``E[freq]`` (torus charts only)."""
        if chart.kind is not ChartKind.FOURIER:
            raise FormError("Fourier modes require a fourier chart")
        return cls(chart, {tuple(freq): value})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get((0,) * self.chart.m, self.chart.scalar(0))

    def total_degree(self) -> int:
        """Largest total exponent (poly) or largest max-norm frequency (fourier)."""
        if not self.terms:
            return -1
        if self.chart.kind is ChartKind.POLY:
            return max(sum(k) for k in self.terms)
        return max(max(abs(e) for e in k) for k in self.terms)

    def _check(self, other: CoeffFn) -> None:
        if self.chart is not other.chart and self.chart != other.chart:
            raise ChartMismatch(f"chart mismatch: {self.chart} vs {other.chart}")

    def __add__(self, other: CoeffFn) -> CoeffFn:
        if not isinstance(other, CoeffFn):
            return NotImplemented
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return CoeffFn._from_acc(self.chart, acc)

    def __neg__(self) -> CoeffFn:
        return CoeffFn._raw(self.chart, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: CoeffFn) -> CoeffFn:
        if not isinstance(other, CoeffFn):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> CoeffFn:
        c = self.chart.scalar(c)
        if c == 0:
            return CoeffFn.zero(self.chart)
        if c == 1:
            return self
        return CoeffFn._raw(self.chart, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> CoeffFn:
        if not isinstance(other, CoeffFn):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return CoeffFn.zero(self.chart)
        acc: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                acc[key] = acc.get(key, 0) + v1 * v2
        return CoeffFn._from_acc(self.chart, acc)

    def __rmul__(self, other) -> CoeffFn:
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n: int) -> CoeffFn:
        if n < 0:
            raise FormError("negative powers are not supported")
        result = CoeffFn.constant(self.chart, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def partial(self, j: int) -> CoeffFn:
        """Exact partial derivative along axis ``j`` (1-based)."""
        self.chart.check_axis(j)
        idx = j - 1
        acc: dict = {}
        if self.chart.kind is ChartKind.POLY:
            for key, v in self.terms.items():
                e = key[idx]
                if e:
                    nk = key[:idx] + (e - 1,) + key[idx + 1:]
                    acc[nk] = v * e
        else:
            for key, v in self.terms.items():
                n = key[idx]
                if n:
                    acc[key] = v * GaussianRational._make(_ZERO, Fraction(n))
        return CoeffFn._raw(self.chart, acc)

    def compose(self, mapping) -> CoeffFn:
        """Substitute coordinates.

        On a polynomial chart ``mapping`` is a sequence of ``m`` polynomials.
        On a torus chart it must be an integer ``m x m`` matrix ``A`` acting as
        ``x -> A x``; then ``E[n]`` becomes ``E[A^T n]``.
        """
        m = self.chart.m
        if self.chart.kind is ChartKind.POLY:
            comps = list(mapping)
            if len(comps) != m or not all(isinstance(c, CoeffFn) for c in comps):
                raise UnsupportedSubstitution("polynomial substitution needs m CoeffFn components")
            for c in comps:
                self._check(c)
            powers: dict = {}
            total = CoeffFn.zero(self.chart)
            for key, v in self.terms.items():
                term = CoeffFn.constant(self.chart, v)
                for axis, e in enumerate(key):
                    if e:
                        p = powers.get((axis, e))
                        if p is None:
                            p = powers[(axis, e)] = comps[axis] ** e
                        term = term * p
                total = total + term
            return total
        matrix = _integer_matrix(mapping, m)
        acc: dict = {}
        for key, v in self.terms.items():
            nk = tuple(sum(matrix[r][c] * key[r] for r in range(m)) for c in range(m))
            acc[nk] = acc.get(nk, 0) + v
        return CoeffFn._from_acc(self.chart, acc)

    def __eq__(self, other):
        if not isinstance(other, CoeffFn):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, tuple(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"CoeffFn({self.chart}, {self.terms!r})"


def _integer_matrix(mapping, m: int) -> list[list[int]]:
    try:
        rows = [list(r) for r in mapping]
    except TypeError:
        raise UnsupportedSubstitution("torus substitution needs an integer matrix") from None
    if len(rows) != m or any(len(r) != m for r in rows):
        raise UnsupportedSubstitution(f"torus substitution needs an {m}x{m} matrix")
    out = []
    for r in rows:
        row = []
        for e in r:
            if isinstance(e, CoeffFn) or not isinstance(e, (int, Fraction)) or int(e) != e:
                raise UnsupportedSubstitution("torus substitution entries must be integers")
            row.append(int(e))
        out.append(row)
    return out


def coeff_add(f: CoeffFn, g: CoeffFn) -> CoeffFn:
    return f + g


def coeff_mul(f: CoeffFn, g: CoeffFn) -> CoeffFn:
    return f * g


def coeff_partial(j: int, f: CoeffFn) -> CoeffFn:
    return f.partial(j)


def coeff_compose(f: CoeffFn, mapping) -> CoeffFn:
    return f.compose(mapping)


def canonicalize(f: CoeffFn) -> CoeffFn:
    """Rebuild ``f`` through the public constructor."""
    return CoeffFn(f.chart, f.terms)


def sum_coeffs(chart: ChartSpec, items: Iterable[CoeffFn]) -> CoeffFn:
    acc: dict = {}
    for f in items:
        for k, v in f.terms.items():
            acc[k] = acc.get(k, 0) + v
    return CoeffFn._from_acc(chart, acc)
