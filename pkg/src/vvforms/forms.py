"""Scalar and tangent-valued differential forms on a coordinate chart.

Multi-indices are strictly increasing tuples of 1-based axis numbers, so
``(1, 3)`` is ``dx1^dx3``.  A form whose nominal degree lies outside ``0..m``
exists only as the zero form; it keeps its nominal degree so that sign
conventions downstream stay correct.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .coeffs import ChartKind, ChartSpec, CoeffFn, GaussianRational, same_chart
from .errors import ChartMismatch, DegreeMismatch, FormError, NotInverse, NotUnimodular, UnsupportedSubstitution


def _add_into(acc: dict, index: tuple, f: CoeffFn, sign=1) -> None:
    slot = acc.get(index)
    if slot is None:
        slot = acc[index] = {}
    if sign == 1:
        for k, v in f.terms.items():
            slot[k] = slot.get(k, 0) + v
    elif sign == -1:
        for k, v in f.terms.items():
            slot[k] = slot.get(k, 0) - v
    else:
        for k, v in f.terms.items():
            slot[k] = slot.get(k, 0) + v * sign


def _merge_sign(a: tuple, b: tuple):
    """Sign and sorted union for ``dx^a ^ dx^b``; ``None`` if they overlap."""
    inversions = 0
    for x in a:
        for y in b:
            if x == y:
                return None
            if x > y:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(a + b))


class ScalarForm:
    """Homogeneous differential form ``sum_I f_I dx^I``."""

    __slots__ = ("chart", "degree", "components", "_hash")

    def __init__(self, chart: ChartSpec, degree: int, components: Mapping | None = None):
        self.chart = chart
        self.degree = degree
        comps = {}
        for index, f in (components or {}).items():
            index = tuple(index)
            if len(index) != degree:
                raise DegreeMismatch(f"multi-index {index} in a {degree}-form")
            if any(b <= a for a, b in zip(index, index[1:])):
                raise FormError(f"multi-index {index} is not strictly increasing")
            if index and not (1 <= index[0] and index[-1] <= chart.m):
                raise FormError(f"multi-index {index} outside 1..{chart.m}")
            if not isinstance(f, CoeffFn):
                f = CoeffFn.constant(chart, f)
            same_chart(chart, f.chart)
            if not f.is_zero:
                comps[index] = comps[index] + f if index in comps else f
        self.components = {k: comps[k] for k in sorted(comps) if not comps[k].is_zero}
        self._hash = None

    @classmethod
    def _raw(cls, chart: ChartSpec, degree: int, components: dict) -> ScalarForm:
        obj = object.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj.components = components
        obj._hash = None
        return obj

    @classmethod
    def _from_acc(cls, chart: ChartSpec, degree: int, acc: dict) -> ScalarForm:
        comps = {}
        for index in sorted(acc):
            terms = acc[index]
            f = CoeffFn._from_acc(chart, terms)
            if not f.is_zero:
                comps[index] = f
        return cls._raw(chart, degree, comps)

    @classmethod
    def zero(cls, chart: ChartSpec, degree: int) -> ScalarForm:
        return cls._raw(chart, degree, {})

    @classmethod
    def function(cls, f: CoeffFn) -> ScalarForm:
        return cls._raw(f.chart, 0, {} if f.is_zero else {(): f})

    @classmethod
    def constant(cls, chart: ChartSpec, value=1) -> ScalarForm:
        return cls.function(CoeffFn.constant(chart, value))

    @classmethod
    def basis(cls, chart: ChartSpec, index: Sequence[int], coeff=1) -> ScalarForm:
        """``coeff * dx^{i1} ^ ... ^ dx^{ik}`` for an arbitrary index order."""
        index = tuple(index)
        if len(set(index)) != len(index):
            return cls.zero(chart, len(index))
        for j in index:
            chart.check_axis(j)
        inversions = sum(1 for a in range(len(index)) for b in range(a + 1, len(index)) if index[a] > index[b])
        f = coeff if isinstance(coeff, CoeffFn) else CoeffFn.constant(chart, coeff)
        if inversions & 1:
            f = -f
        return cls(chart, len(index), {tuple(sorted(index)): f})

    @classmethod
    def dx(cls, chart: ChartSpec, j: int) -> ScalarForm:
        return cls.basis(chart, (j,))

    @property
    def is_zero(self) -> bool:
        return not self.components

    def coefficient(self, index: Sequence[int]) -> CoeffFn:
        return self.components.get(tuple(index), CoeffFn.zero(self.chart))

    def _check(self, other: ScalarForm) -> None:
        if self.chart is not other.chart and self.chart != other.chart:
            raise ChartMismatch(f"chart mismatch: {self.chart} vs {other.chart}")

    def __add__(self, other: ScalarForm) -> ScalarForm:
        if not isinstance(other, ScalarForm):
            return NotImplemented
        self._check(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.degree != other.degree:
            raise DegreeMismatch(f"cannot add forms of degree {self.degree} and {other.degree}")
        acc: dict = {}
        for index, f in self.components.items():
            _add_into(acc, index, f)
        for index, f in other.components.items():
            _add_into(acc, index, f)
        return ScalarForm._from_acc(self.chart, self.degree, acc)

    def __neg__(self) -> ScalarForm:
        return ScalarForm._raw(self.chart, self.degree, {k: -f for k, f in self.components.items()})

    def __sub__(self, other: ScalarForm) -> ScalarForm:
        if not isinstance(other, ScalarForm):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> ScalarForm:
        """Multiply by a scalar or by a coefficient function."""
        if isinstance(c, CoeffFn):
            same_chart(self.chart, c.chart)
            comps = {}
            for index, f in self.components.items():
                g = f * c
                if not g.is_zero:
                    comps[index] = g
            return ScalarForm._raw(self.chart, self.degree, comps)
        c = self.chart.scalar(c)
        if c == 0:
            return ScalarForm.zero(self.chart, self.degree)
        if c == 1:
            return self
        return ScalarForm._raw(self.chart, self.degree, {k: f.scale(c) for k, f in self.components.items()})

    def __mul__(self, c) -> ScalarForm:
        if isinstance(c, (ScalarForm, VectorForm)):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other: ScalarForm) -> ScalarForm:
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, ScalarForm):
            return NotImplemented
        return self.chart == other.chart and self.degree == other.degree and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, self.degree, tuple(self.components.items())))
        return self._hash

    def __repr__(self):
        from .dsl import print_form

        return f"ScalarForm[{self.chart}, deg {self.degree}]({print_form(self)})"


class VectorForm:
    """Tangent-valued form ``K = sum_j K_j (x) d/dx_j`` with one scalar slot per axis."""

    __slots__ = ("chart", "degree", "components", "_hash")

    def __init__(self, chart: ChartSpec, degree: int, components: Sequence[ScalarForm] | None = None):
        if components is None:
            components = [ScalarForm.zero(chart, degree)] * chart.m
        components = tuple(components)
        if len(components) != chart.m:
            raise FormError(f"vector form needs {chart.m} components, got {len(components)}")
        fixed = []
        for comp in components:
            same_chart(chart, comp.chart)
            if comp.degree != degree:
                if not comp.is_zero:
                    raise DegreeMismatch(f"component of degree {comp.degree} in a {degree}-form")
                comp = ScalarForm.zero(chart, degree)
            fixed.append(comp)
        self.chart = chart
        self.degree = degree
        self.components = tuple(fixed)
        self._hash = None

    @classmethod
    def _raw(cls, chart: ChartSpec, degree: int, components: tuple) -> VectorForm:
        obj = object.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj.components = components
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, chart: ChartSpec, degree: int) -> VectorForm:
        z = ScalarForm.zero(chart, degree)
        return cls._raw(chart, degree, (z,) * chart.m)

    @classmethod
    def decomposable(cls, form: ScalarForm, j: int) -> VectorForm:
        """``form (x) d/dx_j``."""
        form.chart.check_axis(j)
        z = ScalarForm.zero(form.chart, form.degree)
        comps = [z] * form.chart.m
        comps[j - 1] = form
        return cls._raw(form.chart, form.degree, tuple(comps))

    @classmethod
    def vector_field(cls, chart: ChartSpec, coefficients: Sequence[CoeffFn]) -> VectorForm:
        comps = [ScalarForm.function(c if isinstance(c, CoeffFn) else CoeffFn.constant(chart, c)) for c in coefficients]
        return cls(chart, 0, comps)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def _check(self, other: VectorForm) -> None:
        if self.chart is not other.chart and self.chart != other.chart:
            raise ChartMismatch(f"chart mismatch: {self.chart} vs {other.chart}")

    def __add__(self, other: VectorForm) -> VectorForm:
        if not isinstance(other, VectorForm):
            return NotImplemented
        self._check(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.degree != other.degree:
            raise DegreeMismatch(f"cannot add forms of degree {self.degree} and {other.degree}")
        return VectorForm._raw(self.chart, self.degree, tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> VectorForm:
        return VectorForm._raw(self.chart, self.degree, tuple(-c for c in self.components))

    def __sub__(self, other: VectorForm) -> VectorForm:
        if not isinstance(other, VectorForm):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> VectorForm:
        return VectorForm._raw(self.chart, self.degree, tuple(comp.scale(c) for comp in self.components))

    def __mul__(self, c) -> VectorForm:
        if isinstance(c, (ScalarForm, VectorForm)):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorForm):
            return NotImplemented
        return self.chart == other.chart and self.degree == other.degree and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, self.degree, self.components))
        return self._hash

    def __repr__(self):
        from .dsl import print_form

        return f"VectorForm[{self.chart}, deg {self.degree}]({print_form(self)})"


def vector_sum(chart: ChartSpec, degree: int, acc: list[dict]) -> VectorForm:
    return VectorForm._raw(chart, degree, tuple(ScalarForm._from_acc(chart, degree, a) for a in acc))


# Scalar form operations


def wedge(phi: ScalarForm, psi: ScalarForm) -> ScalarForm:
    """Exterior product; zero of nominal degree ``k + l`` on overflow."""
    phi._check(psi)
    degree = phi.degree + psi.degree
    if phi.is_zero or psi.is_zero or degree > phi.chart.m:
        return ScalarForm.zero(phi.chart, degree)
    acc: dict = {}
    for a, f in phi.components.items():
        for b, g in psi.components.items():
            merged = _merge_sign(a, b)
            if merged is None:
                continue
            sign, index = merged
            _add_into(acc, index, f * g, sign)
    return ScalarForm._from_acc(phi.chart, degree, acc)


def ext_d(phi: ScalarForm) -> ScalarForm:
    """Exterior derivative."""
    chart = phi.chart
    acc: dict = {}
    for index, f in phi.components.items():
        for j in range(1, chart.m + 1):
            if j in index:
                continue
            df = f.partial(j)
            if df.is_zero:
                continue
            before = sum(1 for i in index if i < j)
            _add_into(acc, tuple(sorted(index + (j,))), df, -1 if before & 1 else 1)
    return ScalarForm._from_acc(chart, phi.degree + 1, acc)


def insert_axis(j: int, phi: ScalarForm) -> ScalarForm:
    """Interior product with the coordinate field ``d/dx_j``."""
    phi.chart.check_axis(j)
    comps = {}
    for index, f in phi.components.items():
        if j in index:
            p = index.index(j)
            comps[index[:p] + index[p + 1:]] = -f if p & 1 else f
    return ScalarForm._raw(phi.chart, phi.degree - 1, dict(sorted(comps.items())))


def coordinate_lie(j: int, phi: ScalarForm) -> ScalarForm:
    """Lie derivative along ``d/dx_j``: differentiate every coefficient."""
    comps = {}
    for index, f in phi.components.items():
        g = f.partial(j)
        if not g.is_zero:
            comps[index] = g
    return ScalarForm._raw(phi.chart, phi.degree, comps)


def nr_insert(K: VectorForm, psi: ScalarForm) -> ScalarForm:
    """``i(K) psi = sum_j K_j ^ i_{d/dx_j} psi``."""
    same_chart(K.chart, psi.chart)
    degree = K.degree + psi.degree - 1
    total = ScalarForm.zero(K.chart, degree)
    if psi.degree == 0:
        return total
    for j, Kj in enumerate(K.components, start=1):
        if Kj.is_zero:
            continue
        total = total + wedge(Kj, insert_axis(j, psi))
    return total if total.degree == degree else ScalarForm.zero(K.chart, degree)


def insert_vv(K: VectorForm, L: VectorForm) -> VectorForm:
    """``i(K) L`` acting componentwise on the vector slot of ``L``."""
    K._check(L)
    degree = K.degree + L.degree - 1
    return VectorForm._raw(K.chart, degree, tuple(nr_insert(K, Lj) for Lj in L.components))


def lie_theta(K: VectorForm, psi: ScalarForm) -> ScalarForm:
    """Lie derivative ``Theta(K) = i(K) d - (-1)^(k-1) d i(K)``."""
    same_chart(K.chart, psi.chart)
    first = nr_insert(K, ext_d(psi))
    second = ext_d(nr_insert(K, psi))
    result = first + second if (K.degree - 1) % 2 else first - second
    degree = K.degree + psi.degree
    return result if result.degree == degree else ScalarForm.zero(K.chart, degree)


def tensor(form: ScalarForm, X: VectorForm) -> VectorForm:
    """``form (x) X`` for a vector field ``X``."""
    same_chart(form.chart, X.chart)
    if X.degree != 0:
        raise DegreeMismatch("tensor expects a vector field (degree 0)")
    comps = []
    for Xl in X.components:
        c = Xl.components.get(())
        comps.append(form.scale(c) if c is not None else ScalarForm.zero(form.chart, form.degree))
    return VectorForm._raw(form.chart, form.degree, tuple(comps))


def identity_vform(chart: ChartSpec) -> VectorForm:
    """The identity endomorphism ``I = sum_j dx^j (x) d/dx_j``."""
    return VectorForm._raw(chart, 1, tuple(ScalarForm.dx(chart, j) for j in range(1, chart.m + 1)))


def lie_bracket_fields(X: VectorForm, Y: VectorForm) -> VectorForm:
    """Lie bracket of two vector fields."""
    X._check(Y)
    if X.degree or Y.degree:
        raise DegreeMismatch("lie_bracket_fields expects vector fields")
    chart = X.chart
    zero = CoeffFn.zero(chart)
    xs = [c.components.get((), zero) for c in X.components]
    ys = [c.components.get((), zero) for c in Y.components]
    out = []
    for l in range(chart.m):
        acc = zero
        for j in range(chart.m):
            acc = acc + xs[j] * ys[l].partial(j + 1) - ys[j] * xs[l].partial(j + 1)
        out.append(acc)
    return VectorForm.vector_field(chart, out)


# Diffeomorphisms and pullback


def _int_det(matrix: list[list[int]]) -> Fraction:
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] / a[col][col]
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return det


def _int_inverse(matrix: list[list[int]]) -> list[list[int]]:
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == r)) for i in range(n)] for r, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    inv = [[a[r][n + c] for c in range(n)] for r in range(n)]
    if any(x.denominator != 1 for row in inv for x in row):
        raise NotUnimodular("inverse matrix is not integral")
    return [[int(x) for x in row] for row in inv]


class Diffeo:
    """Explicit diffeomorphism of the chart.

    Polynomial charts store forward and inverse polynomial maps; torus charts
    store a unimodular integer matrix ``A`` acting as ``x -> A x``.  Both are
    validated exactly at construction.
    """

    def __init__(self, chart: ChartSpec, *, forward=None, inverse=None, matrix=None):
        self.chart = chart
        m = chart.m
        if chart.kind is ChartKind.POLY:
            if forward is None or inverse is None or matrix is not None:
                raise UnsupportedSubstitution("polynomial charts need forward and inverse maps")
            self.forward = tuple(_as_coeff(chart, c) for c in forward)
            self.inverse = tuple(_as_coeff(chart, c) for c in inverse)
            if len(self.forward) != m or len(self.inverse) != m:
                raise FormError(f"diffeomorphism needs {m} components")
            coords = [CoeffFn.variable(chart, j) for j in range(1, m + 1)]
            if [g.compose(self.forward) for g in self.inverse] != coords:
                raise NotInverse("inverse o forward is not the identity")
            if [f.compose(self.inverse) for f in self.forward] != coords:
                raise NotInverse("forward o inverse is not the identity")
            self.matrix = None
            # (J_inv o f)[l][j] = d(inv^l)/dx^j evaluated at f(x)
            self.inverse_jacobian = [
                [g.partial(j).compose(self.forward) for j in range(1, m + 1)] for g in self.inverse
            ]
            jac = [[f.partial(j) for j in range(1, m + 1)] for f in self.forward]
            one, zero = CoeffFn.constant(chart, 1), CoeffFn.zero(chart)
            for r in range(m):
                for c in range(m):
                    entry = zero
                    for t in range(m):
                        entry = entry + jac[r][t] * self.inverse_jacobian[t][c]
                    if entry != (one if r == c else zero):
                        raise NotInverse("Jacobian of the inverse does not invert the forward Jacobian")
            self.differentials = [ext_d(ScalarForm.function(f)) for f in self.forward]
        else:
            if matrix is None or forward is not None or inverse is not None:
                raise UnsupportedSubstitution("torus charts only support integer matrix maps")
            from .coeffs import _integer_matrix

            self.matrix = _integer_matrix(matrix, m)
            if abs(_int_det(self.matrix)) != 1:
                raise NotUnimodular(f"matrix {self.matrix} is not unimodular")
            self.forward = self.inverse = None
            inv = _int_inverse(self.matrix)
            self.inverse_matrix = inv
            self.inverse_jacobian = [[CoeffFn.constant(chart, inv[l][j]) for j in range(m)] for l in range(m)]
            self.differentials = [
                ScalarForm(chart, 1, {(j + 1,): self.matrix[i][j] for j in range(m) if self.matrix[i][j]})
                for i in range(m)
            ]

    @classmethod
    def polynomial(cls, chart: ChartSpec, forward, inverse) -> Diffeo:
        return cls(chart, forward=forward, inverse=inverse)

    @classmethod
    def torus(cls, chart: ChartSpec, matrix) -> Diffeo:
        return cls(chart, matrix=matrix)

    def pull_function(self, f: CoeffFn) -> CoeffFn:
        same_chart(self.chart, f.chart)
        if self.matrix is not None:
            return f.compose(self.matrix)
        return f.compose(self.forward)

    def __repr__(self):
        if self.matrix is not None:
            return f"Diffeo({self.chart}, matrix={self.matrix})"
        return f"Diffeo({self.chart}, forward={self.forward}, inverse={self.inverse})"


def _as_coeff(chart: ChartSpec, c) -> CoeffFn:
    if isinstance(c, CoeffFn):
        same_chart(chart, c.chart)
        return c
    return CoeffFn.constant(chart, c)


def pullback_scalar(f: Diffeo, phi: ScalarForm) -> ScalarForm:
    same_chart(f.chart, phi.chart)
    frames: dict = {}
    total = ScalarForm.zero(phi.chart, phi.degree)
    for index, coeff in phi.components.items():
        frame = frames.get(index)
        if frame is None:
            frame = ScalarForm.constant(phi.chart, 1)
            for i in index:
                frame = wedge(frame, f.differentials[i - 1])
            frames[index] = frame
        total = total + frame.scale(f.pull_function(coeff))
    return total


def pullback_vform(f: Diffeo, K: VectorForm) -> VectorForm:
    """Pull back the form part and push the vector part through the inverse Jacobian."""
    same_chart(f.chart, K.chart)
    m = K.chart.m
    pulled = [pullback_scalar(f, Kj) for Kj in K.components]
    out = []
    for l in range(m):
        acc = ScalarForm.zero(K.chart, K.degree)
        for j in range(m):
            if pulled[j].is_zero:
                continue
            acc = acc + pulled[j].scale(f.inverse_jacobian[l][j])
        out.append(acc)
    return VectorForm._raw(K.chart, K.degree, tuple(out))
