"""Command line entry point: ``ramsey-forge VERB [SUBVERB] ...``.

Exit codes: 0 answer found, 1 definitive negative, 2 usage or format error.
Every run prints one report of ``key: value`` lines (``--human`` aligns them
for reading).
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import ipr, lift, pattern, sat
from .coloring import default_jobs, parse_coloring
from .errors import ForgeError, LiftVerificationFailed, PipelineIncomplete, WellDefinednessViolation
from .exact import parse_matrix


class UsageError(Exception):
    def __init__(self, flag, problem, fix):
        self.flag, self.problem, self.fix = flag, problem, fix
        super().__init__(f"{flag}: {problem}")


@dataclass
class RunReport:
    verb: str
    inputs: str
    outcome: list[tuple[str, str]] = field(default_factory=list)
    elapsed_ms: int = 0

    def add(self, key, value):
        self.outcome.append((key, str(value)))

    def render(self, human: bool = False) -> str:
        rows = [("verb", self.verb), ("inputs", self.inputs), *self.outcome, ("elapsed_ms", str(self.elapsed_ms))]
        if human:
            width = max(len(k) for k, _ in rows)
            return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"
        return "\n".join(f"{k}: {v}".rstrip() for k, v in rows) + "\n"


class Inputs:
    """Reads input files once and digests them in the order they are requested."""

    def __init__(self):
        self._hash = hashlib.sha256()

    def read(self, flag: str, path: str | None) -> str:
        if path is None:
            raise UsageError(flag, "missing file", f"pass {flag} PATH")
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise UsageError(flag, f"cannot read {path!r} ({exc.strerror})", "check the path") from None
        self._hash.update(flag.encode() + b"\0" + data + b"\0")
        return data.decode()

    def parse(self, flag, path, parser):
        text = self.read(flag, path)
        try:
            return parser(text)
        except ForgeError as exc:
            raise UsageError(flag, f"{path}: {exc}", "fix the file to match the documented format") from None

    @property
    def digest(self) -> str:
        return "sha256:" + self._hash.hexdigest()[:16]


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _spec_from_args(args, inputs: Inputs) -> pattern.PatternSpec:
    A = inputs.parse("--matrix-a", args.matrix_a, parse_matrix)
    B = inputs.parse("--matrix-b", args.matrix_b, parse_matrix) if args.matrix_b else A
    words = args.pattern
    try:
        if words[0] == "custom":
            if len(words) < 2:
                raise UsageError("--pattern", "custom needs a component list", "use --pattern custom ImageA,Sum")
            names = [n for w in words[1:] for n in w.split(",") if n]
            comps = frozenset(pattern.Component.parse(n) for n in names)
            return pattern.PatternSpec(A, B, comps, args.distinct)
        if len(words) != 1:
            raise UsageError("--pattern", f"unexpected extra words {words[1:]}", "only custom takes a list")
        return pattern.PatternSpec.named(words[0], A, B, args.distinct)
    except ForgeError as exc:
        raise UsageError("--pattern", str(exc), "pick a named pattern or custom with components ImageA,ImageB,Sum,Product,CrossSet") from None


def _write(path, text):
    if path:
        Path(path).write_text(text)


def cmd_ipr_check(args, report, inputs):
    A = inputs.parse("--matrix", args.matrix, parse_matrix)
    run_fec = args.fec or not (args.columns or args.refute)
    if run_fec:
        v = ipr.fec_verdict(A)
        report.add("verdict", f"{v.status} method: {v.method}")
    if args.columns:
        try:
            holds = ipr.columns_condition(A)
        except ForgeError as exc:
            raise UsageError("--columns", str(exc), "drop --columns for wide matrices") from None
        report.add("verdict", "Unknown method: ColumnsCondition")
        report.add("columns_condition", str(holds).lower())
    if args.refute:
        if args.colors is None or args.range is None:
            raise UsageError("--refute", "needs --colors and --range", "add --colors R --range N")
        v = ipr.refute_verdict(A, args.colors, args.range, args.x_bound, args.jobs)
        report.add("verdict", str(v)[len("verdict: "):])
        if v.coloring is not None:
            report.add("coloring", v.coloring.body())
            _write(args.output, v.coloring.to_text())
    return 0


def _add_witness(report, w: pattern.Witness):
    report.add("X", " ".join(map(str, w.X)))
    if w.Y:
        report.add("Y", " ".join(map(str, w.Y)))
    report.add("color", w.color)
    report.add("values", " ".join(map(str, w.values)))


def cmd_search_witness(args, report, inputs):
    c = inputs.parse("--coloring", args.coloring, parse_coloring)
    spec = _spec_from_args(args, inputs)
    report.add("pattern", spec.describe())
    w = pattern.find_witness(c, spec, args.x_bound)
    if w is None:
        report.add("witness", "absent")
        return 1
    report.add("witness", "found")
    _add_witness(report, w)
    _write(args.output, w.to_text())
    return 0


def cmd_search_ramsey(args, report, inputs):
    spec = _spec_from_args(args, inputs)
    report.add("pattern", spec.describe())
    report.add("colors", args.colors)
    report.add("max_range", args.max_range)
    res = pattern.min_forcing_R(spec, args.colors, args.max_range, args.x_bound, args.jobs)
    if res.avoiding is not None:
        _write(args.output, res.avoiding.to_text())
    if res.forced:
        report.add("minimal_R", res.minimal_R)
        if res.avoiding is not None:
            report.add("avoiding_range", res.avoiding.n_max)
            report.add("avoiding_coloring", res.avoiding.body())
        return 0
    report.add("minimal_R", f"not forced <= {args.max_range}")
    report.add("avoiding_range", res.avoiding.n_max)
    report.add("avoiding_coloring", res.avoiding.body())
    return 1


def cmd_encode_sat(args, report, inputs):
    spec = _spec_from_args(args, inputs)
    cnf = sat.sat_encode(spec, args.colors, args.range, args.x_bound)
    _write(args.output, cnf.to_dimacs())
    report.add("pattern", spec.describe())
    report.add("num_vars", cnf.num_vars)
    report.add("num_clauses", len(cnf.clauses))
    if args.solve:
        model = sat.dpll(cnf)
        report.add("dpll", "SAT" if model is not None else "UNSAT")
        if model is not None:
            report.add("coloring", "".join(map(str, sat.decode_coloring(model, args.range, args.colors))))
    return 0


def cmd_verify(args, report, inputs):
    w = inputs.parse("--witness", args.witness, pattern.parse_witness)
    c = inputs.parse("--coloring", args.coloring, parse_coloring)
    spec = _spec_from_args(args, inputs)
    ok = pattern.verify_witness(c, spec, w)
    report.add("verified", str(ok).lower())
    return 0 if ok else 1


def cmd_lift_run(args, report, inputs):
    omega = inputs.parse("--coloring", args.coloring, parse_coloring)
    A = inputs.parse("--matrix-a", args.matrix_a, parse_matrix)
    B = inputs.parse("--matrix-b", args.matrix_b, parse_matrix)
    F = inputs.parse("--poly-set", args.poly_set, lift.parse_poly_set)
    try:
        res = lift.run_pipeline(omega, A, B, args.window, F, args.q, args.min_count, args.y_bound)
    except (PipelineIncomplete, LiftVerificationFailed, WellDefinednessViolation) as exc:
        report.add("lift", "incomplete" if isinstance(exc, PipelineIncomplete) else "failed")
        report.add("reason", str(exc))
        return 1
    except ForgeError as exc:
        raise UsageError("lift run", str(exc), "check --window against the coloring range") from None
    report.add("lift", "complete")
    report.add("num_classes", res.compound.num_classes)
    report.add("q", res.q)
    report.add("moreira_y", res.y)
    report.add("moreira_xs", " ".join(map(str, res.xs)))
    report.add("chi", "".join(map(str, res.chi.colors)))
    report.add("inner_X", " ".join(map(str, res.inner.X)))
    report.add("inner_Y", " ".join(map(str, res.inner.Y)))
    _add_witness(report, res.outer)
    report.add("verified", "true")
    if args.trace:
        Path(args.trace).write_text(json.dumps(res.trace(), indent=2) + "\n")
    return 0


def cmd_lift_omega_prime(args, report, inputs):
    omega = inputs.parse("--coloring", args.coloring, parse_coloring)
    try:
        comp = lift.compound_coloring(omega, args.window, args.range)
    except ForgeError as exc:
        raise UsageError("--window", str(exc), "use a smaller --window or --range") from None
    report.add("num_classes", comp.num_classes)
    report.add("derived", comp.derived.body())
    _write(args.output, comp.derived.to_text())
    return 0


def cmd_lift_chi(args, report, inputs):
    omega = inputs.parse("--coloring", args.coloring, parse_coloring)
    try:
        family = [int(t) for t in args.family.split(",") if t.strip()]
    except ValueError:
        raise UsageError("--family", f"bad list {args.family!r}", 'use --family "1,3,5"') from None
    if not family or min(family) < 1:
        raise UsageError("--family", "needs positive integers", 'use --family "1,3,5"')
    try:
        chi = lift.chi_from_family(omega, family, args.range)
    except WellDefinednessViolation as exc:
        report.add("violation", f"m={exc.m} e1={exc.e1} e2={exc.e2}")
        return 1
    except ForgeError as exc:
        raise UsageError("--range", str(exc), "use a smaller --range or family") from None
    report.add("chi", "".join(map(str, chi.colors)) if chi.num_colors <= 10 else " ".join(map(str, chi.colors)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="aligned human-readable report")
    common.add_argument("--jobs", type=_positive, default=None, help="worker processes (default: $RAMSEY_FORGE_JOBS or CPU count)")

    pat = argparse.ArgumentParser(add_help=False)
    pat.add_argument("--matrix-a", required=True)
    pat.add_argument("--matrix-b")
    pat.add_argument("--pattern", nargs="+", required=True, metavar="P",
                     help="moreira|lemma|schur-add|schur-mul|cross|full|image|custom LIST")
    pat.add_argument("--distinct", action="store_true")
    pat.add_argument("--x-bound", type=_positive)

    parser = argparse.ArgumentParser(prog="ramsey-forge", description=__doc__.splitlines()[0])
    verbs = parser.add_subparsers(dest="verb", required=True)

    ipr_p = verbs.add_parser("ipr").add_subparsers(dest="sub", required=True)
    p = ipr_p.add_parser("check", parents=[common])
    p.add_argument("--matrix", required=True)
    p.add_argument("--fec", action="store_true")
    p.add_argument("--columns", action="store_true")
    p.add_argument("--refute", action="store_true")
    p.add_argument("--colors", type=_positive)
    p.add_argument("--range", type=_positive)
    p.add_argument("--x-bound", type=_positive)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ipr_check, name="ipr check")

    search = verbs.add_parser("search").add_subparsers(dest="sub", required=True)
    p = search.add_parser("witness", parents=[common, pat])
    p.add_argument("--coloring", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_search_witness, name="search witness")
    p = search.add_parser("ramsey", parents=[common, pat])
    p.add_argument("--colors", type=_positive, required=True)
    p.add_argument("--max-range", type=_positive, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_search_ramsey, name="search ramsey")

    enc = verbs.add_parser("encode").add_subparsers(dest="sub", required=True)
    p = enc.add_parser("sat", parents=[common, pat])
    p.add_argument("--colors", type=_positive, required=True)
    p.add_argument("--range", type=_positive, required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--solve", action="store_true", help="also run the bundled DPLL")
    p.set_defaults(func=cmd_encode_sat, name="encode sat")

    p = verbs.add_parser("verify", parents=[common, pat])
    p.add_argument("--witness", required=True)
    p.add_argument("--coloring", required=True)
    p.set_defaults(func=cmd_verify, name="verify")

    lf = verbs.add_parser("lift").add_subparsers(dest="sub", required=True)
    p = lf.add_parser("run", parents=[common])
    p.add_argument("--coloring", required=True)
    p.add_argument("--matrix-a", required=True)
    p.add_argument("--matrix-b", required=True)
    p.add_argument("--window", type=_positive, required=True)
    p.add_argument("--poly-set", required=True)
    p.add_argument("--q", type=_positive)
    p.add_argument("--min-count", type=_positive, default=1)
    p.add_argument("--y-bound", type=_positive)
    p.add_argument("--trace")
    p.set_defaults(func=cmd_lift_run, name="lift run")
    p = lf.add_parser("omega-prime", parents=[common])
    p.add_argument("--coloring", required=True)
    p.add_argument("--window", type=_positive, required=True)
    p.add_argument("--range", type=_positive)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lift_omega_prime, name="lift omega-prime")
    p = lf.add_parser("chi", parents=[common])
    p.add_argument("--coloring", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--range", type=_positive, required=True)
    p.set_defaults(func=cmd_lift_chi, name="lift chi")
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs is None:
        args.jobs = default_jobs()
    inputs = Inputs()
    report = RunReport(args.name, "")
    start = time.perf_counter()
    try:
        code = args.func(args, report, inputs)
    except UsageError as exc:
        print(f"error: {exc.flag}: {exc.problem}", file=stderr)
        print(f"fix: {exc.fix}", file=stderr)
        return 2
    except ForgeError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    report.inputs = inputs.digest
    report.elapsed_ms = round((time.perf_counter() - start) * 1000)
    stdout.write(report.render(args.human))
    return code


if __name__ == "__main__":
    sys.exit(main())
