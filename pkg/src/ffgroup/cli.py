"""Command-line front end.

Exit codes: 0 all pass, 1 at least one failure record, 2 usage error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from . import __version__, config
from .errors import BudgetExceeded, FFGroupError, SingularMatrix
from .gf import parse_field_descriptor
from .matgf import parse_matrices
from .ntheory import divisors, is_prime, prime_power
from .permgrp import gl_order, group_order, matrix_to_perm
from .poly import enumerate_nonzero_const, enumerate_primitive
from .verify import (
    Report,
    kantor_scan,
    verify_degos,
    verify_fixed_point_lemma,
    verify_main_theorem,
    verify_singer_lemma,
    verify_two_companion,
    verify_unique_extension,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

GRAMMAR = """\
usage:
  ffgroup verify main --q Q --n N
  ffgroup verify degos --p P --n N
  ffgroup verify singer-lemma --q Q --n N
  ffgroup verify fixed-points --q Q --a A --d D
  ffgroup verify two-companion --q Q --n N
  ffgroup verify unique-ext --q Q --n N --d D
  ffgroup verify kantor --q Q --n N
  ffgroup list primitive --q Q --n N
  ffgroup list nonzero-const --q Q --n N
  ffgroup order --q Q --n N --gens PATH
  ffgroup report --qmax QM --nmax NM [--budget-points B] --out PATH
global flags: --format json|csv|text, --workers W, --budget-points B, --budget-scan S
"""

CSV_FIELDS = ["harness", "params", "cases_total", "cases_checked", "failures", "elapsed_ms", "budget_hit", "tool_version"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    point_budget: int = config.DEFAULT_POINT_BUDGET
    scan_budget: int = config.DEFAULT_SCAN_BUDGET
    worker_count: int = 1
    output_format: str = "text"
    output_path: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _field_arg(text: str) -> str:
    try:
        parse_field_descriptor(text)
    except (ValueError, FFGroupError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a prime power") from None
    return text


def _q_value(text: str) -> int:
    return parse_field_descriptor(text).q


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return value


def _prime(text: str) -> int:
    value = _positive(text)
    if not is_prime(value):
        raise argparse.ArgumentTypeError(f"{text!r} is not prime")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default=argparse.SUPPRESS)
    common.add_argument("--workers", type=_positive, default=argparse.SUPPRESS)
    common.add_argument("--budget-points", type=_positive, default=argparse.SUPPRESS)
    common.add_argument("--budget-scan", type=_positive, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)

    parser = _Parser(prog="ffgroup", parents=[common], usage=GRAMMAR)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", parents=[common])
    harness = verify.add_subparsers(dest="harness", required=True, parser_class=_Parser)
    for name in ("main", "singer-lemma", "two-companion", "kantor"):
        h = harness.add_parser(name, parents=[common])
        h.add_argument("--q", type=_field_arg, required=True)
        h.add_argument("--n", type=_positive, required=True)
    h = harness.add_parser("degos", parents=[common])
    h.add_argument("--p", type=_prime, required=True)
    h.add_argument("--n", type=_positive, required=True)
    h = harness.add_parser("fixed-points", parents=[common])
    h.add_argument("--q", type=_field_arg, required=True)
    h.add_argument("--a", type=_positive, required=True)
    h.add_argument("--d", type=_positive, required=True)
    h = harness.add_parser("unique-ext", parents=[common])
    h.add_argument("--q", type=_field_arg, required=True)
    h.add_argument("--n", type=_positive, required=True)
    h.add_argument("--d", type=_positive, required=True)

    lister = sub.add_parser("list", parents=[common])
    kinds = lister.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for name in ("primitive", "nonzero-const"):
        k = kinds.add_parser(name, parents=[common])
        k.add_argument("--q", type=_field_arg, required=True)
        k.add_argument("--n", type=_positive, required=True)

    order = sub.add_parser("order", parents=[common])
    order.add_argument("--q", type=_field_arg, required=True)
    order.add_argument("--n", type=_positive, required=True)
    order.add_argument("--gens", required=True)

    report = sub.add_parser("report", parents=[common])
    report.add_argument("--qmax", type=_positive, required=True)
    report.add_argument("--nmax", type=_positive, required=True)
    return parser


def _run_config(args) -> RunConfig:
    opt = vars(args)
    cfg = RunConfig(
        point_budget=opt.get("budget_points") or config.point_budget(),
        scan_budget=opt.get("budget_scan") or config.scan_budget(),
        worker_count=opt.get("workers") or os.cpu_count() or 1,
        output_format=opt.get("format") or ("json" if args.command == "report" else "text"),
        output_path=opt.get("out"),
    )
    if args.command == "report" and not cfg.output_path:
        raise UsageError("report requires --out PATH")
    return cfg


# output


def _report_text(report: Report) -> str:
    params = " ".join(f"{k}={v}" for k, v in report.params.items() if "\n" not in str(v))
    status = "PASS" if report.passed else ("BUDGET" if report.budget_hit else "FAIL")
    lines = [
        f"{report.harness} {params}: {status} {report.cases_checked}/{report.cases_total} cases, "
        f"{len(report.failures)} failures ({report.elapsed_ms} ms)"
    ]
    for x in report.failures:
        label = " ".join(t for t in (x.f, x.g) if t) or x.witness.replace("\n", "; ")
        lines.append(f"  failure {label}: observed {x.observed}, expected {x.expected}")
    return "\n".join(lines) + "\n"


def _csv_rows(reports: list[Report]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        d = r.to_dict(__version__)
        d["params"] = ";".join(f"{k}={v}" for k, v in d["params"].items())
        d["failures"] = str(len(r.failures))
        d["budget_hit"] = "true" if r.budget_hit else "false"
        writer.writerow(d)
    return buf.getvalue()


def render(reports: list[Report], fmt: str, as_array: bool) -> str:
    if fmt == "json":
        payload = [r.to_dict(__version__) for r in reports]
        return json.dumps(payload if as_array else payload[0], indent=2) + "\n"
    if fmt == "csv":
        return _csv_rows(reports)
    return "".join(_report_text(r) for r in reports)


def _emit(text: str, path: str | None, stdout) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _exit_code(reports: list[Report]) -> int:
    if any(r.failures for r in reports):
        return EXIT_FAIL
    if any(r.budget_hit for r in reports):
        return EXIT_BUDGET
    return EXIT_OK


# commands


def _run_verify(args, cfg: RunConfig) -> Report:
    pts, scan, w = cfg.point_budget, cfg.scan_budget, cfg.worker_count
    h = args.harness
    if h == "main":
        return verify_main_theorem(_q_value(args.q), args.n, workers=w, budget=pts)
    if h == "degos":
        return verify_degos(args.p, args.n, workers=w, budget=pts)
    if h == "singer-lemma":
        return verify_singer_lemma(_q_value(args.q), args.n, budget=pts)
    if h == "fixed-points":
        if args.d < 2:
            raise UsageError("--d must be >= 2")
        return verify_fixed_point_lemma(_q_value(args.q), args.a, args.d, budget=pts)
    if h == "two-companion":
        return verify_two_companion(_q_value(args.q), args.n, workers=w, budget=pts)
    if h == "unique-ext":
        if args.d < 2 or args.n % args.d:
            raise UsageError("--d must be > 1 and divide --n")
        return verify_unique_extension(_q_value(args.q), args.n, args.d, budget=pts, scan_budget=scan)
    return kantor_scan(_q_value(args.q), args.n, budget=pts, scan_budget=scan)


def sweep(qmax: int, nmax: int, cfg: RunConfig) -> list[Report]:
    """Every harness at every (q, n) with q <= qmax, n <= nmax, q^n within the point budget."""
    pts, scan, w = cfg.point_budget, cfg.scan_budget, cfg.worker_count
    out = []
    for q in range(2, qmax + 1):
        if prime_power(q) is None:
            continue
        for n in range(1, nmax + 1):
            if q**n > pts:
                continue
            out.append(verify_main_theorem(q, n, workers=w, budget=pts))
            if is_prime(q):
                out.append(verify_degos(q, n, workers=w, budget=pts))
            out.append(verify_singer_lemma(q, n, budget=pts))
            for d in divisors(n):
                if d > 1:
                    out.append(verify_fixed_point_lemma(q, n // d, d, budget=pts))
            out.append(verify_two_companion(q, n, workers=w, budget=pts))
            if gl_order(n, q) <= scan:
                for d in divisors(n):
                    if d > 1:
                        out.append(verify_unique_extension(q, n, d, budget=pts, scan_budget=scan))
                out.append(kantor_scan(q, n, budget=pts, scan_budget=scan))
    return out


def _run_order(args, cfg: RunConfig, stdout) -> int:
    ctx = parse_field_descriptor(args.q)
    try:
        with open(args.gens, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.gens}: {exc.strerror}") from None
    try:
        mats = parse_matrices(ctx, text, args.n)
    except ValueError as exc:
        raise UsageError(f"{args.gens}: {exc}") from None
    if not mats:
        raise UsageError(f"{args.gens}: no generator matrices")
    try:
        perms = [matrix_to_perm(m, cfg.point_budget) for m in mats]
    except SingularMatrix as exc:
        raise UsageError(f"{args.gens}: {exc}") from None
    order = group_order(perms, gl_order(args.n, ctx.q))
    fmt = cfg.output_format
    if fmt == "json":
        text = json.dumps({"q": str(ctx.q), "n": str(args.n), "order": str(order)}) + "\n"
    elif fmt == "csv":
        text = f"q,n,order\n{ctx.q},{args.n},{order}\n"
    else:
        text = f"{order}\n"
    _emit(text, cfg.output_path, stdout)
    return EXIT_OK


def _run_list(args, cfg: RunConfig, stdout) -> int:
    ctx = parse_field_descriptor(args.q)
    enum = enumerate_primitive if args.kind == "primitive" else enumerate_nonzero_const
    polys = [f.to_text() for f in enum(ctx, args.n, cfg.point_budget)]
    fmt = cfg.output_format
    if fmt == "json":
        text = json.dumps(polys) + "\n"
    elif fmt == "csv":
        text = "poly\n" + "".join(f'"{p}"\n' for p in polys)
    else:
        text = "".join(p + "\n" for p in polys)
    _emit(text, cfg.output_path, stdout)
    return EXIT_OK


def run_command(argv: list[str], stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = _run_config(args)
        if args.command == "verify":
            reports, as_array = [_run_verify(args, cfg)], False
        elif args.command == "report":
            reports, as_array = sweep(args.qmax, args.nmax, cfg), True
        elif args.command == "order":
            return _run_order(args, cfg, stdout)
        else:
            return _run_list(args, cfg, stdout)
        _emit(render(reports, cfg.output_format, as_array), cfg.output_path, stdout)
        return _exit_code(reports)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n{GRAMMAR}")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET


def main(argv: list[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
