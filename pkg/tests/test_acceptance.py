"""Acceptance gate: every criterion at exact arithmetic, one PASS/FAIL line each.

Run through pytest (the lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import io
import sys

import pytest

from vvforms import checks
from vvforms.cli import main as cli_main
from vvforms.coeffs import ChartSpec
from vvforms.dsl import dumps, loads, parse_form, print_form
from vvforms.forms import VectorForm
from vvforms.generators import GenSpec, standard_diffeos

TRIALS = 100
SEED = 0
CHARTS = [ChartSpec.poly(m) for m in (2, 3, 4)] + [ChartSpec.fourier(m) for m in (2, 3, 4)]

SUITE_CRITERIA = {
    1: ("trace law and the commuting squares for j, cbar, delta", ["lemma21"]),
    2: ("delta squares to zero and is a graded derivation", ["delta-derivation"]),
    3: ("FN bracket: antisymmetry, Jacobi, centre, decomposition independence", ["fn-jacobi", "center"]),
    4: ("trace of the FN bracket", ["lemma23"]),
    5: ("traceless bracket: closure, antisymmetry, Jacobi, naturality", ["cbracket", "naturality"]),
    6: ("class of a bracket, zero class of coboundaries, de Rham dimensions", ["class-bracket", "derham"]),
    7: ("Z^I and B^I ideals, induced bracket on scalar forms", ["ideals-31", "induced-31"]),
    8: ("extension bracket, module law, sigma cocycle", ["extension-32", "module-32c", "sigma-cocycle"]),
    9: ("cochain differential squares to zero; classical case for p=1", ["partial-squared"]),
    10: ("NR bracket: traceless closure, induced formula, shifted Jacobi", ["nr-34"]),
}
TITLES = {**{n: t for n, (t, _) in SUITE_CRITERIA.items()}, 11: "DSL round trip and CLI worked examples"}

CLI_EXAMPLES = [
    (["bracket", "--op", "fn", "x2*dx1 @ e1", "dx1 @ e2", "--chart", "poly:2"], "dx1^dx2 @ e2\n"),
    (["delta", "x2*dx1 @ e1", "--chart", "poly:2"], "-1 dx1^dx2 @ e1\n"),
    (
        ["decompose", "x1*dx1 @ e1 + dx1 @ e2", "--chart", "poly:2"],
        "trace: 1/2*x1\ntraceless: 1/2*x1 dx1 @ e1 + dx1 @ e2 - 1/2*x1 dx2 @ e2\n",
    ),
]

RESULTS: dict[int, tuple[bool, str]] = {}


@functools.lru_cache(maxsize=None)
def _report(suite: str, chart: ChartSpec) -> checks.SuiteReport:
    return checks.run_suite(suite, GenSpec(seed=SEED, chart=chart, trials=TRIALS))


def _extra_conditions(number: int) -> list[str]:
    """Criterion-specific requirements beyond a clean suite run."""
    problems = []
    if number == 5:
        for chart in CHARTS:
            maps = standard_diffeos(chart)
            if chart.is_fourier and len(maps) < 2:
                problems.append(f"only {len(maps)} torus maps on {chart}")
            if not chart.is_fourier and len(maps) < 3:
                problems.append(f"only {len(maps)} polynomial maps on {chart}")
    if number == 6:
        notes = _report("derham", ChartSpec.fourier(2)).notes
        if "dims: (1, 2, 1)" not in notes:
            problems.append(f"fourier:2 de Rham dimensions reported as {notes}")
    return problems


def _suite_criterion(number: int) -> tuple[bool, str]:
    _, suites = SUITE_CRITERIA[number]
    total = 0
    for suite in suites:
        for chart in CHARTS:
            report = _report(suite, chart)
            total += report.checks
            if not report.passed:
                return False, report.format()
    problems = _extra_conditions(number)
    if problems:
        return False, "; ".join(problems)
    return True, f"{total} exact checks over {len(suites)} suite(s) x {len(CHARTS)} charts"


def _roundtrip_and_cli() -> tuple[bool, str]:
    values = 0
    for chart in CHARTS:
        gen = GenSpec(seed=SEED, chart=chart).generator("acceptance-roundtrip")
        for _ in range(84):
            k = gen.rng.randint(0, chart.m)
            vector = gen.rng.random() < 0.5
            value = gen.vector_form(k) if vector else gen.scalar_form(k)
            if gen.rng.random() < 0.1:
                value = value.scale(0)
            text = print_form(value)
            back = parse_form(text, chart, degree=k, vector=isinstance(value, VectorForm))
            if back != value or loads(dumps(value)) != value:
                return False, f"round trip failed for {text!r} on {chart}"
            values += 1
    for argv, expected in CLI_EXAMPLES:
        out, err = io.StringIO(), io.StringIO()
        code = cli_main(argv, stdout=out, stderr=err)
        if code != 0 or out.getvalue() != expected:
            return False, f"{argv[0]}: exit {code}, output {out.getvalue()!r}"
    return True, f"{values} values round-tripped; {len(CLI_EXAMPLES)} CLI outputs byte-identical"


def evaluate(number: int) -> tuple[bool, str]:
    if number not in RESULTS:
        RESULTS[number] = _roundtrip_and_cli() if number == 11 else _suite_criterion(number)
    return RESULTS[number]


def line(number: int) -> str:
    ok, detail = RESULTS[number]
    return f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {TITLES[number]} ({detail})"


def summary_lines() -> list[str]:
    return [line(n) for n in sorted(RESULTS)]


@pytest.mark.parametrize("number", sorted(TITLES))
def test_criterion(number):
    ok, detail = evaluate(number)
    print(f"criterion {number} {'PASS' if ok else 'FAIL'}: {TITLES[number]}")
    assert ok, detail


if __name__ == "__main__":
    for n in sorted(TITLES):
        evaluate(n)
        print(line(n), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
