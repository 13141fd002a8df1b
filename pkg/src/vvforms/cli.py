"""Command-line front end: evaluate the calculus on DSL input and run check suites."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .calculus import c_bracket, delta, fn_bracket, nr_bracket, s_concomitant, trace_c, trace_cbar, traceless_part
from .checks import SuiteReport, run_all, run_suite, suite_names
from .coeffs import ChartSpec
from .cohomology import delta_class
from .dsl import parse_diffeo, parse_form, print_form, to_record
from .errors import FormError, InvariantBreach, MixedKind
from .forms import VectorForm, pullback_scalar, pullback_vform
from .generators import GenSpec

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_BREACH = 2


def _chart(text: str) -> ChartSpec:
    try:
        return ChartSpec.parse(text)
    except (FormError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _vector(text: str, chart: ChartSpec) -> VectorForm:
    value = parse_form(text, chart, vector=True)
    if not isinstance(value, VectorForm):
        raise MixedKind(f"expected a vector-valued form, got {text!r}")
    return value


class _Output:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def form(self, value) -> None:
        if self.fmt == "json":
            self.stream.write(json.dumps(to_record(value), sort_keys=True, separators=(",", ":")) + "\n")
        else:
            self.stream.write(print_form(value) + "\n")

    def labelled(self, parts: dict) -> None:
        if self.fmt == "json":
            record = {name: to_record(v) for name, v in parts.items()}
            self.stream.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
        else:
            for name, v in parts.items():
                self.stream.write(f"{name}: {print_form(v)}\n")


def cmd_eval(args, out: _Output) -> int:
    out.form(parse_form(args.form, args.chart))
    return EXIT_OK


def cmd_bracket(args, out: _Output) -> int:
    K, L = _vector(args.left, args.chart), _vector(args.right, args.chart)
    op = {"fn": fn_bracket, "nr": nr_bracket, "c": c_bracket}[args.op]
    out.form(op(K, L))
    return EXIT_OK


def cmd_delta(args, out: _Output) -> int:
    out.form(delta(_vector(args.form, args.chart)))
    return EXIT_OK


def cmd_trace(args, out: _Output) -> int:
    K = _vector(args.form, args.chart)
    out.form(trace_cbar(K) if args.bar else trace_c(K))
    return EXIT_OK


def cmd_decompose(args, out: _Output) -> int:
    K = _vector(args.form, args.chart)
    out.labelled({"trace": trace_cbar(K), "traceless": traceless_part(K)})
    return EXIT_OK


def cmd_sconc(args, out: _Output) -> int:
    out.form(s_concomitant(_vector(args.left, args.chart), _vector(args.right, args.chart)))
    return EXIT_OK


def cmd_class(args, out: _Output) -> int:
    cls = delta_class(_vector(args.form, args.chart))
    out.labelled({"derham": cls.dr_part, "traceless": cls.traceless_part})
    return EXIT_OK


def cmd_pullback(args, out: _Output) -> int:
    f = parse_diffeo(args.diffeo, args.chart)
    value = parse_form(args.form, args.chart)
    out.form(pullback_vform(f, value) if isinstance(value, VectorForm) else pullback_scalar(f, value))
    return EXIT_OK


def _report_record(r: SuiteReport) -> dict:
    return {
        "suite": r.suite,
        "chart": str(r.spec.chart),
        "seed": r.spec.seed,
        "trials": r.spec.trials,
        "checks": r.checks,
        "failures": r.failures,
        "counterexample": r.counterexample,
        "notes": r.notes,
    }


def cmd_check(args, out: _Output) -> int:
    spec = GenSpec(
        seed=args.seed,
        chart=args.chart,
        max_poly_degree=args.max_degree,
        max_mode=args.max_mode,
        trials=args.trials,
    )
    reports = run_all(spec) if args.suite == "all" else [run_suite(args.suite, spec)]
    if out.fmt == "json":
        out.stream.write(json.dumps([_report_record(r) for r in reports], sort_keys=True, indent=1) + "\n")
    else:
        for r in reports:
            out.stream.write(r.format() + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_BREACH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--chart", type=_chart, default=ChartSpec.poly(2), help="poly:<m> or fourier:<m> (default poly:2)")
    common.add_argument("--format", choices=["text", "json"], default="text")

    parser = argparse.ArgumentParser(prog="vvforms", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("eval", parents=[common], help="parse a form and print it canonically")
    p.add_argument("form")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("bracket", parents=[common], help="bracket of two vector-valued forms")
    p.add_argument("--op", choices=["fn", "nr", "c"], default="fn")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(run=cmd_bracket)

    p = sub.add_parser("delta", parents=[common], help="the differential delta")
    p.add_argument("form")
    p.set_defaults(run=cmd_delta)

    p = sub.add_parser("trace", parents=[common], help="trace c, or the normalised trace with --bar")
    p.add_argument("--bar", action="store_true")
    p.add_argument("form")
    p.set_defaults(run=cmd_trace)

    p = sub.add_parser("decompose", parents=[common], help="split K into normalised trace and traceless part")
    p.add_argument("form")
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("sconc", parents=[common], help="the scalar concomitant S(K, L)")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(run=cmd_sconc)

    p = sub.add_parser("class", parents=[common], help="cohomology class of a delta-cocycle")
    p.add_argument("form")
    p.set_defaults(run=cmd_class)

    p = sub.add_parser("pullback", parents=[common], help="pull a form back along a diffeomorphism")
    p.add_argument("--diffeo", required=True, help='"map:(..); inv:(..)" or "matrix:[[..],..]"')
    p.add_argument("form")
    p.set_defaults(run=cmd_pullback)

    p = sub.add_parser("check", parents=[common], help="run a seeded property suite")
    p.add_argument("--suite", default="all", help=", ".join(suite_names()))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-degree", type=int, default=2, help="polynomial total degree bound")
    p.add_argument("--max-mode", type=int, default=2, help="Fourier frequency bound")
    p.set_defaults(run=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, _Output(args.format, stdout))
    except InvariantBreach as exc:
        stderr.write(f"invariant breach: {exc}\n")
        return EXIT_BREACH
    except FormError as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
