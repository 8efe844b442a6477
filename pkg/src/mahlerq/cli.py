"""Command-line interface.

Subcommands: enumerate, series, pf, verify, batch, measure.  Exit codes
follow a fixed contract so the tool stays scriptable: 0 success, 2 for
usage or validation problems, 3 for an internal-consistency fault (two
independent computation routes disagreed), 4 when an evaluation point
falls outside the disk of convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .inversion import (
    ConsistencyError,
    IntegralityReport,
    format_rational,
    integrality_report,
)
from .mirror import ConvergenceError, MirrorData, mahler_measure, pf_operator, pf2_applicable
from .weights import KVector, Model, aut_order, counts, enumerate_solutions

DEFAULT_CACHE = "~/.cache/mahlerq"


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}")


def parse_model_args(args: argparse.Namespace) -> Model:
    """Build a Model from --model k1,k2,.. or --weights k:w1,w2,.."""
    if getattr(args, "weights", None):
        head, _, tail = args.weights.partition(":")
        if not tail:
            raise ValueError("--weights expects the form k:w1,w2,...")
        return Model.from_weights(int(head), _parse_int_list(tail))
    if getattr(args, "model", None):
        return Model.from_kvector(KVector(_parse_int_list(args.model)))
    raise ValueError("a model is required (--model or --weights)")


def _add_model_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--model", help="k-vector, e.g. 2,3,6 (reciprocals sum to 1)")
    sub.add_argument("--weights", help="direct weights, e.g. 12:4,3,3,2 (sum w = k)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mahlerq",
        description="Exact series engine for Mahler-measure variations and"
        " mirror-map integrality tables",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("enumerate", help="list weight systems for a dimension")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")

    p = subs.add_parser("series", help="print one series of the model pipeline")
    _add_model_options(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument(
        "--which",
        choices=("g0", "h", "f", "Q", "q", "zq", "zQ"),
        default="Q",
    )
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")

    p = subs.add_parser("pf", help="derive the Picard-Fuchs operator parameters")
    _add_model_options(p)
    p.add_argument("--format", choices=("table", "json"), default="table")

    p = subs.add_parser("verify", help="integrality report for one model")
    _add_model_options(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--out", help="also write the JSON report to this path")

    p = subs.add_parser("batch", help="verify every weight system of a dimension")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument(
        "--cache",
        help=f"report cache directory (default $MAHLER_CACHE or {DEFAULT_CACHE})",
    )

    p = subs.add_parser("measure", help="numeric logarithmic Mahler measure")
    _add_model_options(p)
    p.add_argument("--psi", required=True, help="positive rational, e.g. 2 or 5/2")
    p.add_argument("--order", type=int, default=32)

    return parser


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt_fraction_list(values) -> str:
    return "[" + ", ".join(format_rational(Fraction(v)) for v in values) + "]"


def render_enumerate(n: int, fmt: str) -> str:
    sols = enumerate_solutions(n)
    if fmt == "json":
        payload = [Model.from_kvector(kv).to_json_dict() for kv in sols]
        return json.dumps(payload, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["k", "lcm", "w", "aut"])
        for kv in sols:
            model = Model.from_kvector(kv)
            writer.writerow(
                [str(kv), model.k, ",".join(map(str, model.w)), aut_order(kv)]
            )
        return buf.getvalue().rstrip("\n")
    lines = []
    for kv in sols:
        model = Model.from_kvector(kv)
        lines.append(
            f"k=({kv})  w=({','.join(map(str, model.w))})  "
            f"lcm={model.k}  |Aut|={aut_order(kv)}"
        )
    simple, weighted = counts(n)
    lines.append(f"simple={simple} weighted={format_rational(weighted)}")
    return "\n".join(lines)


def render_series(model: Model, order: int, which: str, fmt: str) -> str:
    md = MirrorData.build(model, order)
    series = md.series(which)
    values = [format_rational(c) for c in series.coeffs]
    if fmt == "json":
        return json.dumps(values)
    if fmt == "csv":
        return "\n".join(f"{m},{v}" for m, v in enumerate(values))
    return "\n".join(values)


def render_pf(model: Model, fmt: str) -> str:
    ops = {form: pf_operator(model, form) for form in ("reduced", "local")}
    flag = pf2_applicable(model)
    if fmt == "json":
        payload = {
            "model": model.to_json_dict(),
            "pf2_applicable": flag,
        }
        for form, op in ops.items():
            payload[form] = {
                "C": format_rational(op.constant),
                "a": [format_rational(x) for x in op.a],
                "b": [format_rational(x) for x in op.b],
            }
        return json.dumps(payload, indent=2)
    lines = [f"model: {model.name} (k={model.k}, w=({','.join(map(str, model.w))}))"]
    for form, op in ops.items():
        lines.append(
            f"{form}: C={format_rational(op.constant)} "
            f"a={_fmt_fraction_list(op.a)} b={_fmt_fraction_list(op.b)}"
        )
    lines.append(f"pf2_applicable: {'true' if flag else 'false'}")
    return "\n".join(lines)


def _row_flags(row: dict) -> str:
    flags = [key for key in ("b", "bhat", "c", "chat") if not row[f"{key}_integer"]]
    return ";".join(flags) if flags else "-"


def render_report_csv(report: IntegralityReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["m", "b", "bhat", "c", "chat", "b_over_m", "chat_over_m", "flags"])
    for row in report.rows():
        writer.writerow(
            [
                row["m"],
                row["b"],
                row["bhat"],
                row["c"],
                row["chat"],
                row["b_over_m"],
                row["chat_over_m"],
                _row_flags(row),
            ]
        )
    return buf.getvalue().rstrip("\n")


def render_report_table(report: IntegralityReport) -> str:
    header = ["m", "b", "bhat", "c", "chat", "b/m", "chat/m", "flags"]
    rows = [
        [
            str(row["m"]),
            row["b"],
            row["bhat"],
            row["c"],
            row["chat"],
            row["b_over_m"],
            row["chat_over_m"],
            _row_flags(row),
        ]
        for row in report.rows()
    ]
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for r in rows:
        lines.append("  ".join(x.rjust(w) for x, w in zip(r, widths)))
    checks = " ".join(
        f"{key}={'true' if val else 'false'}" for key, val in report.checks.items()
    )
    lines.append(f"checks: {checks}")
    return "\n".join(lines)


def report_json_text(report: IntegralityReport) -> str:
    return json.dumps(report.to_json_dict(), indent=2) + "\n"


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------

def cache_path(cache_dir: Path, model: Model, order: int) -> Path:
    safe = model.name.replace(",", "-").replace(":", "_")
    return cache_dir / f"{safe}__order{order}__v{__version__}.json"


def write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _batch_compute(spec: tuple[tuple[int, ...], int]) -> str:
    parts, order = spec
    model = Model.from_kvector(KVector(parts))
    return report_json_text(integrality_report(model, order))


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------

def cmd_enumerate(args) -> int:
    if args.n < 2:
        raise ValueError("need --n at least 2")
    print(render_enumerate(args.n, args.format))
    return 0


def cmd_series(args) -> int:
    if args.order < 1:
        raise ValueError("need --order at least 1")
    model = parse_model_args(args)
    print(render_series(model, args.order, args.which, args.format))
    return 0


def cmd_pf(args) -> int:
    model = parse_model_args(args)
    print(render_pf(model, args.format))
    return 0


def cmd_verify(args) -> int:
    if args.order < 1:
        raise ValueError("need --order at least 1")
    model = parse_model_args(args)
    report = integrality_report(model, args.order)
    if args.format == "json":
        print(report_json_text(report), end="")
    elif args.format == "csv":
        print(render_report_csv(report))
    else:
        print(render_report_table(report))
    if args.out:
        write_atomic(Path(args.out), report_json_text(report))
    return 0


def _report_all_integer(payload: dict) -> bool:
    return all(
        row["b_integer"] and row["bhat_integer"]
        and row["c_integer"] and row["chat_integer"]
        for row in payload["rows"]
    )


def cmd_batch(args) -> int:
    if args.n < 2:
        raise ValueError("need --n at least 2")
    if args.order < 1 or args.jobs < 1:
        raise ValueError("--order and --jobs must be positive")
    cache_dir = Path(
        args.cache or os.environ.get("MAHLER_CACHE") or DEFAULT_CACHE
    ).expanduser()
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
        probe = cache_dir / ".write-probe"
        probe.touch()
        probe.unlink()
    except OSError as exc:
        raise ValueError(f"cache directory {cache_dir} is not writable: {exc}")

    sols = enumerate_solutions(args.n)
    todo: list[tuple[tuple[int, ...], int]] = []
    texts: dict[tuple[int, ...], str] = {}
    cached = 0
    for kv in sols:
        model = Model.from_kvector(kv)
        path = cache_path(cache_dir, model, args.order)
        if path.exists():
            texts[kv.parts] = path.read_text()
            cached += 1
        else:
            todo.append((kv.parts, args.order))

    if todo:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_batch_compute, todo))
        else:
            results = [_batch_compute(spec) for spec in todo]
        for (parts, _), text in zip(todo, results):
            model = Model.from_kvector(KVector(parts))
            write_atomic(cache_path(cache_dir, model, args.order), text)
            texts[parts] = text

    all_integer = 0
    for kv in sols:
        payload = json.loads(texts[kv.parts])
        if _report_all_integer(payload):
            all_integer += 1
    print(f"{cached} cached, {len(todo)} computed")
    print(
        f"models={len(sols)} all_integer={all_integer} "
        f"with_fractional={len(sols) - all_integer}"
    )
    return 0


def cmd_measure(args) -> int:
    model = parse_model_args(args)
    psi = Fraction(args.psi)
    result = mahler_measure(model, psi, args.order)
    print(f"m(F_psi) = {result.log_measure!r}")
    print(f"M(F_psi) = {result.measure!r}")
    print(f"tail_bound <= {result.tail_bound!r}")
    print(f"z = {format_rational(result.z)}")
    return 0


_HANDLERS = {
    "enumerate": cmd_enumerate,
    "series": cmd_series,
    "pf": cmd_pf,
    "verify": cmd_verify,
    "batch": cmd_batch,
    "measure": cmd_measure,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except ConsistencyError as exc:
        print(f"internal-consistency fault: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"outside disk of convergence: {exc}", file=sys.stderr)
        return 4
    except (ValueError, ZeroDivisionError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
