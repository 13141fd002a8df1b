"""Text syntax for forms and diffeomorphisms.

Grammar (ASCII)::

    form    := ['-'] term (('+' | '-') term)*
    term    := [coeff ['*']] wedge ['@' 'e' INT] | coeff ['@' 'e' INT]
    coeff   := factor (['*'] factor)*
    factor  := INT ['/' NAT] | 'i' | 'x' INT ['^' NAT]
             | 'E' '[' INT (',' INT)* ']' | '(' coeffsum ')'
    coeffsum:= ['-'] coeff (('+' | '-') coeff)*
    wedge   := 'dx' INT ('^' 'dx' INT)*

A caret followed by digits is a power, a caret followed by ``dx`` is a wedge.
The printer emits one term per (vector slot, multi-index, monomial) in that
order, so printing is deterministic and ``parse(print(v)) == v``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .coeffs import ChartKind, ChartSpec, CoeffFn, GaussianRational
from .errors import ChartMismatch, DegreeMismatch, FormSyntaxError, MixedKind
from .forms import Diffeo, ScalarForm, VectorForm

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<kw>map|inv|matrix)
  | (?P<dx>dx(?P<dxn>\d+))
  | (?P<var>x(?P<varn>\d+))
  | (?P<slot>e(?P<slotn>\d+))
  | (?P<mode>E)
  | (?P<imag>i)
  | (?P<int>\d+)
  | (?P<sym>[-+*/^()\[\],@:;])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    value: int | None = None


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        match = _TOKEN.match(src, pos)
        col = pos - line_start + 1
        if match is None:
            raise FormSyntaxError(f"unexpected character {src[pos]!r}", line, col)
        kind = match.lastgroup
        text = match.group()
        if kind == "nl":
            line += 1
            line_start = match.end()
        elif kind != "ws":
            value = None
            for group in ("dxn", "varn", "slotn"):
                if match.group(group) is not None:
                    kind = group[:-1]
                    value = int(match.group(group))
            if kind == "int":
                value = int(text)
            if kind == "sym" or kind == "kw":
                kind = text
            tokens.append(Token(kind, text, line, col, value))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class _Term:
    coeff: CoeffFn
    wedge: tuple[int, ...]
    slot: int | None
    token: Token


class _Parser:
    def __init__(self, src: str, chart: ChartSpec):
        self.chart = chart
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        return FormSyntaxError(message, tok.line, tok.column)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {shown!r}")
        return self.advance()

    def integer(self) -> int:
        sign = 1
        if self.tok.kind == "-":
            self.advance()
            sign = -1
        return sign * self.expect("int").value

    # coefficients

    def starts_factor(self) -> bool:
        return self.tok.kind in ("int", "var", "mode", "imag", "(")

    def factor(self) -> CoeffFn:
        chart = self.chart
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            value = Fraction(tok.value)
            if self.tok.kind == "/":
                self.advance()
                den = self.expect("int")
                if den.value == 0:
                    raise self.error("zero denominator", den)
                value /= den.value
            return CoeffFn.constant(chart, value)
        if tok.kind == "imag":
            self.advance()
            if not chart.is_fourier:
                raise ChartMismatch(f"imaginary unit on a {chart} chart (line {tok.line}, column {tok.column})")
            return CoeffFn.constant(chart, GaussianRational(0, 1))
        if tok.kind == "var":
            self.advance()
            if chart.is_fourier or not 1 <= tok.value <= chart.m:
                raise ChartMismatch(f"unknown variable {tok.text} on {chart} (line {tok.line}, column {tok.column})")
            power = 1
            if self.tok.kind == "^" and self.tokens[self.pos + 1].kind == "int":
                self.advance()
                power = self.advance().value
            key = [0] * chart.m
            key[tok.value - 1] = power
            return CoeffFn.monomial(chart, key)
        if tok.kind == "mode":
            self.advance()
            self.expect("[")
            freq = [self.integer()]
            while self.tok.kind == ",":
                self.advance()
                freq.append(self.integer())
            self.expect("]")
            if not chart.is_fourier or len(freq) != chart.m:
                raise ChartMismatch(f"mode {freq} does not fit chart {chart} (line {tok.line}, column {tok.column})")
            return CoeffFn.mode(chart, freq)
        if tok.kind == "(":
            self.advance()
            value = self.coeffsum()
            self.expect(")")
            return value
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    def coeff(self) -> CoeffFn:
        value = self.factor()
        while True:
            if self.tok.kind == "*" and self.tokens[self.pos + 1].kind != "dx":
                self.advance()
                value = value * self.factor()
            elif self.starts_factor():
                value = value * self.factor()
            else:
                return value

    def coeffsum(self) -> CoeffFn:
        negate = False
        if self.tok.kind == "-":
            self.advance()
            negate = True
        total = self.coeff()
        if negate:
            total = -total
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            nxt = self.coeff()
            total = total + nxt if op == "+" else total - nxt
        return total

    # forms

    def wedge(self) -> tuple[int, ...]:
        axes = []
        tok = self.expect("dx")
        axes.append(tok)
        while self.tok.kind == "^" and self.tokens[self.pos + 1].kind == "dx":
            self.advance()
            axes.append(self.advance())
        for t in axes:
            if not 1 <= t.value <= self.chart.m:
                raise ChartMismatch(f"unknown differential {t.text} on {self.chart} (line {t.line}, column {t.column})")
        return tuple(t.value for t in axes)

    def term(self) -> _Term:
        start = self.tok
        start_pos = self.pos
        coeff = CoeffFn.constant(self.chart, 1)
        wedge: tuple[int, ...] = ()
        if self.starts_factor():
            coeff = self.coeff()
            if self.tok.kind == "*" and self.tokens[self.pos + 1].kind == "dx":
                self.advance()
        if self.tok.kind == "dx":
            wedge = self.wedge()
        elif self.pos == start_pos:
            raise self.error(f"expected a term, found {self.tok.text or 'end of input'!r}")
        slot = None
        if self.tok.kind == "@":
            self.advance()
            stok = self.expect("slot")
            if not 1 <= stok.value <= self.chart.m:
                raise ChartMismatch(f"unknown vector slot {stok.text} on {self.chart} (line {stok.line}, column {stok.column})")
            slot = stok.value
        return _Term(coeff, wedge, slot, start)

    def form(self) -> list[_Term]:
        negate = False
        if self.tok.kind == "-":
            self.advance()
            negate = True
        first = self.term()
        if negate:
            first.coeff = -first.coeff
        terms = [first]
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            t = self.term()
            if op == "-":
                t.coeff = -t.coeff
            terms.append(t)
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return terms


def parse_coeff(src: str, chart: ChartSpec) -> CoeffFn:
    parser = _Parser(src, chart)
    value = parser.coeffsum()
    if parser.tok.kind != "eof":
        raise parser.error(f"unexpected {parser.tok.text!r}")
    return value


def parse_form(src: str, chart: ChartSpec, *, degree: int | None = None, vector: bool | None = None):
    """Parse text into a canonical :class:`ScalarForm` or :class:`VectorForm`.

    ``degree`` and ``vector`` only matter for the text ``"0"``, which carries
    no degree or kind of its own; for nonzero input they must agree with it.
    """
    terms = _Parser(src, chart).form()
    slotted = [t.slot is not None for t in terms]
    if any(slotted) and not all(slotted):
        bad = terms[slotted.index(False) if slotted[0] else slotted.index(True)]
        raise MixedKind(f"terms with and without vector slots (line {bad.token.line}, column {bad.token.column})")
    is_vector = slotted[0]
    degrees = {len(t.wedge) for t in terms if not (t.coeff.is_zero and not t.wedge)}
    if len(degrees) > 1:
        raise DegreeMismatch(f"inhomogeneous input with degrees {sorted(degrees)}")
    deg = degrees.pop() if degrees else 0
    all_zero = all(t.coeff.is_zero for t in terms)
    if all_zero and not any(t.wedge for t in terms):
        if is_vector and vector is False:
            raise MixedKind("expected a scalar form")
        deg = degree if degree is not None else 0
        return VectorForm.zero(chart, deg) if (vector or is_vector) else ScalarForm.zero(chart, deg)
    else:
        if degree is not None and degree != deg:
            raise DegreeMismatch(f"expected degree {degree}, parsed degree {deg}")
        if vector is not None and vector != is_vector:
            raise MixedKind("expected a " + ("vector" if vector else "scalar") + "-valued form")
    if is_vector:
        slots = [ScalarForm.zero(chart, deg) for _ in range(chart.m)]
        for t in terms:
            slots[t.slot - 1] = slots[t.slot - 1] + ScalarForm.basis(chart, t.wedge, t.coeff)
        return VectorForm(chart, deg, slots)
    total = ScalarForm.zero(chart, deg)
    for t in terms:
        total = total + ScalarForm.basis(chart, t.wedge, t.coeff)
    return total


def parse_diffeo(src: str, chart: ChartSpec) -> Diffeo:
    """Parse ``map:(...); inv:(...)`` (poly) or ``matrix:[[...]]`` (fourier)."""
    parser = _Parser(src, chart)
    tok = parser.tok
    if tok.kind == "matrix":
        parser.advance()
        parser.expect(":")
        parser.expect("[")
        rows = [_int_row(parser)]
        while parser.tok.kind == ",":
            parser.advance()
            rows.append(_int_row(parser))
        parser.expect("]")
        parser.expect("eof")
        return Diffeo.torus(chart, rows)
    parts = {}
    for expected in ("map", "inv"):
        kw = parser.expect(expected)
        parser.expect(":")
        parser.expect("(")
        comps = [parser.coeffsum()]
        while parser.tok.kind == ",":
            parser.advance()
            comps.append(parser.coeffsum())
        parser.expect(")")
        if len(comps) != chart.m:
            raise FormSyntaxError(f"{expected} needs {chart.m} components, got {len(comps)}", kw.line, kw.column)
        parts[expected] = comps
        if expected == "map":
            parser.expect(";")
    parser.expect("eof")
    return Diffeo.polynomial(chart, parts["map"], parts["inv"])


def _int_row(parser: _Parser) -> list[int]:
    parser.expect("[")
    row = [parser.integer()]
    while parser.tok.kind == ",":
        parser.advance()
        row.append(parser.integer())
    parser.expect("]")
    return row


# printing


def _monomial_text(chart: ChartSpec, key: tuple[int, ...]) -> str:
    if not any(key):
        return ""
    if chart.is_fourier:
        return "E[" + ",".join(str(n) for n in key) + "]"
    parts = []
    for axis, e in enumerate(key, start=1):
        if e == 1:
            parts.append(f"x{axis}")
        elif e:
            parts.append(f"x{axis}^{e}")
    return "*".join(parts)


def _monomial_order(chart: ChartSpec, key: tuple[int, ...]):
    if chart.is_fourier:
        return key
    return (sum(key), tuple(-e for e in key))


def _scalar_parts(value) -> tuple[bool, str | None]:
    """Split a scalar into (is negative, magnitude text); ``None`` means unit."""
    if isinstance(value, GaussianRational):
        if value.im == 0:
            value = value.re
        elif value.re == 0:
            b = value.im
            mag = "i" if abs(b) == 1 else f"{abs(b)}*i"
            return b < 0, mag
        else:
            return False, f"({value})"
    if abs(value) == 1:
        return value < 0, None
    return value < 0, str(abs(value))


def _term_texts(form: ScalarForm, slot: int | None) -> list[tuple[bool, str]]:
    chart = form.chart
    out = []
    for index, f in form.components.items():
        wedge = "^".join(f"dx{j}" for j in index)
        for key in sorted(f.terms, key=lambda k: _monomial_order(chart, k)):
            neg, mag = _scalar_parts(f.terms[key])
            mono = _monomial_text(chart, key)
            if mag is None:
                body = mono or None
            else:
                body = mag + ("*" + mono if mono else "")
            out.append((neg, body, wedge, slot))
    return out


def print_form(v) -> str:
    """Deterministic canonical text for a scalar or vector-valued form."""
    if isinstance(v, VectorForm):
        pieces = []
        for j, comp in enumerate(v.components, start=1):
            pieces.extend(_term_texts(comp, j))
    else:
        pieces = _term_texts(v, None)
    if not pieces:
        return "0"
    chunks = []
    for n, (neg, body, wedge, slot) in enumerate(pieces):
        if n == 0:
            if neg:
                body = "-" + (body if body is not None else "1")
            prefix = ""
        else:
            prefix = " - " if neg else " + "
        if wedge:
            text = f"{body} {wedge}" if body is not None else wedge
        else:
            text = body if body is not None else "1"
        if slot is not None:
            text += f" @ e{slot}"
        chunks.append(prefix + text)
    return "".join(chunks)


# structured serialization


def _scalar_json(chart: ChartSpec, value):
    if chart.is_fourier:
        g = GaussianRational.coerce(value)
        return {"im": str(g.im), "re": str(g.re)}
    return str(value)


def _scalar_from_json(chart: ChartSpec, data):
    if chart.is_fourier:
        return GaussianRational(Fraction(data["re"]), Fraction(data["im"]))
    return Fraction(data)


def to_record(v) -> dict:
    """Nested key/value record for a form; every number is an exact string."""
    chart = v.chart
    terms = []
    slots = enumerate(v.components, start=1) if isinstance(v, VectorForm) else [(None, v)]
    for slot, comp in slots:
        for index, f in comp.components.items():
            for key, value in f.terms.items():
                term = {"dx": list(index), "key": list(key), "coeff": _scalar_json(chart, value)}
                if slot is not None:
                    term["slot"] = slot
                terms.append(term)
    return {
        "chart": str(chart),
        "type": "vector" if isinstance(v, VectorForm) else "scalar",
        "degree": v.degree,
        "terms": terms,
    }


def from_record(data: dict):
    chart = ChartSpec.parse(data["chart"])
    degree = int(data["degree"])
    if data["type"] == "vector":
        acc = [{} for _ in range(chart.m)]
        for t in data["terms"]:
            _record_term(chart, acc[int(t["slot"]) - 1], t)
        return VectorForm(chart, degree, [ScalarForm(chart, degree, _coeffs(chart, a)) for a in acc])
    if data["type"] != "scalar":
        raise ValueError(f"unknown record type {data['type']!r}")
    acc: dict = {}
    for t in data["terms"]:
        _record_term(chart, acc, t)
    return ScalarForm(chart, degree, _coeffs(chart, acc))


def _record_term(chart: ChartSpec, acc: dict, t: dict) -> None:
    acc.setdefault(tuple(t["dx"]), {})[tuple(t["key"])] = _scalar_from_json(chart, t["coeff"])


def _coeffs(chart: ChartSpec, acc: dict) -> dict:
    return {index: CoeffFn(chart, terms) for index, terms in acc.items()}


def dumps(v) -> str:
    """Bit-stable JSON text (sorted keys, no insignificant whitespace)."""
    return json.dumps(to_record(v), sort_keys=True, separators=(",", ":"))


def loads(text: str):
    return from_record(json.loads(text))
