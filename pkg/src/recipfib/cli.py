"""Command-line interface.

Usage:
    recipfib compute --p 3 --q -1 --s 3 --n 3
    recipfib identity --family gen-cubed --a 3 --n 3
    recipfib verify --family gen-cubed --a 3..5 --n 2..20
    recipfib proofcheck --a 3..6 --n 2..20 --format json

Exit codes: 0 success, 1 mismatch or failed check, 2 usage error,
3 undecided floor.  Set RECIPFIB_LOG (e.g. DEBUG) for diagnostics.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .identities import IdentityFamily, IdentityQuery, closed_form
from .proofcheck import CHECK_IDS, CheckReport, run_proof_suite, summarize
from .quadfield import QuadElem
from .sequence import SequenceParams, UnsupportedParamsError
from .tailsum import DEFAULT_MAX_TERMS, PowerSumQuery, RationalInterval, Undecided, floor_recip_sum

__all__ = ["main", "parse_range"]

log = logging.getLogger("recipfib")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_UNDECIDED = 3


class UsageError(Exception):
    pass


def parse_range(text: str) -> range:
    """``lo..hi`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
        else:
            lo_i = hi_i = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi or an integer, got {text!r}")
    return range(lo_i, hi_i + 1)


# -- serialization --------------------------------------------------------------


def _decimal(v: Fraction, digits: int = 20) -> str:
    return QuadElem.rational(v, 5).approx(digits)


def _fraction_record(v: Fraction) -> dict[str, str]:
    return {
        "numerator": str(v.numerator),
        "denominator": str(v.denominator),
        "decimal": _decimal(v),
    }


def _enclosure_record(enc: RationalInterval) -> dict[str, Any]:
    return {"lo": _fraction_record(enc.lo), "hi": _fraction_record(enc.hi)}


def _report_record(r: CheckReport) -> dict[str, Any]:
    rec: dict[str, Any] = {
        "check_id": r.check_id,
        "params": dict(r.params),
        "status": r.status,
        "passed": r.passed,
        "claimed": r.claimed,
        "witness": r.witness,
    }
    if r.enclosure is not None:
        rec["enclosure"] = _enclosure_record(r.enclosure)
    return rec


def render_json(record: dict[str, Any]) -> str:
    return json.dumps(record, indent=2, ensure_ascii=False) + "\n"


def _render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- commands -------------------------------------------------------------------


def cmd_compute(args: argparse.Namespace) -> tuple[dict[str, Any], str, int]:
    params = SequenceParams(args.p, args.q)
    query = PowerSumQuery(params, args.s, args.n, args.max_terms)
    record: dict[str, Any] = {
        "command": "compute",
        "params": {"p": args.p, "q": args.q, "s": args.s, "n": args.n, "max_terms": args.max_terms},
    }
    try:
        res = floor_recip_sum(query)
    except Undecided as exc:
        record["result"] = None
        record["evidence"] = {"terms_used": exc.terms_used, "enclosure": _enclosure_record(exc.enclosure)}
        text = f"undecided after {exc.terms_used} terms\n"
        return record, text, EXIT_UNDECIDED
    record["result"] = res.value
    record["evidence"] = {"terms_used": res.terms_used, "enclosure": _enclosure_record(res.enclosure)}
    text = (
        f"{res.value}\n"
        f"  terms used: {res.terms_used}\n"
        f"  enclosure:  [{_decimal(res.enclosure.lo)}, {_decimal(res.enclosure.hi)}]\n"
    )
    return record, text, EXIT_OK


_FAMILY_BY_NAME = {
    ("fib", 1): IdentityFamily.FIB_S1,
    ("fib", 2): IdentityFamily.FIB_S2,
    ("pell", 1): IdentityFamily.PELL_S1,
    ("pell", 2): IdentityFamily.PELL_S2,
    ("pell", 3): IdentityFamily.PELL_S3,
}


def _identity_family(name: str, s: int | None) -> IdentityFamily:
    if name == "gen-cubed":
        if s not in (None, 3):
            raise UsageError("gen-cubed is the s=3 family")
        return IdentityFamily.GEN_CUBED
    if s is None:
        raise UsageError(f"--s is required for family {name}")
    try:
        return _FAMILY_BY_NAME[(name, s)]
    except KeyError:
        raise UsageError(f"no closed form for family {name} with s={s}")


def cmd_identity(args: argparse.Namespace) -> tuple[dict[str, Any], str, int]:
    fam = _identity_family(args.family, args.s)
    if fam is not IdentityFamily.GEN_CUBED and args.a is not None:
        raise UsageError("--a applies only to gen-cubed")
    query = IdentityQuery(fam, args.n, args.a)
    value = closed_form(query)
    record = {
        "command": "identity",
        "params": {"family": args.family, "a": args.a, "s": query.s, "n": args.n},
        "result": value,
        "evidence": None,
    }
    return record, f"{value}\n", EXIT_OK


def _verify_row(query: IdentityQuery) -> dict[str, Any]:
    expected = closed_form(query)
    row: dict[str, Any] = {
        "a": query.a,
        "s": query.s,
        "n": query.n,
        "closed_form": expected,
    }
    try:
        res = floor_recip_sum(PowerSumQuery(query.params, query.s, query.n))
    except Undecided as exc:
        row.update(certified=None, match=None, status="undecided", terms_used=exc.terms_used)
        return row
    match = res.value == expected
    row.update(
        certified=res.value,
        match=match,
        status="match" if match else "mismatch",
        terms_used=res.terms_used,
    )
    return row


def _parallel_map(fn: Callable[[Any], Any], items: list[Any], jobs: int) -> list[Any]:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def cmd_verify(args: argparse.Namespace) -> tuple[dict[str, Any], str, int]:
    fam = _identity_family(args.family, args.s)
    if fam is IdentityFamily.GEN_CUBED:
        if args.a is None:
            raise UsageError("--a is required for gen-cubed")
        a_values: list[int | None] = list(args.a)
    else:
        if args.a is not None:
            raise UsageError("--a applies only to gen-cubed")
        a_values = [None]
    queries = [IdentityQuery(fam, n, a) for a in a_values for n in args.n]
    rows = _parallel_map(_verify_row, queries, args.jobs)
    rows.sort(key=lambda r: (r["a"] or 0, r["n"]))
    counts = {k: sum(1 for r in rows if r["status"] == k) for k in ("match", "mismatch", "undecided")}
    if counts["mismatch"]:
        code = EXIT_MISMATCH
    elif counts["undecided"]:
        code = EXIT_UNDECIDED
    else:
        code = EXIT_OK
    record = {
        "command": "verify",
        "params": {
            "family": args.family,
            "a": _range_text(args.a),
            "s": queries[0].s if queries else args.s,
            "n": _range_text(args.n),
        },
        "result": rows,
        "summary": counts,
    }
    lines = [f"{'a':>4} {'s':>2} {'n':>4}  {'closed form':>24} {'certified':>24}  status"]
    for r in rows:
        lines.append(
            f"{'' if r['a'] is None else r['a']:>4} {r['s']:>2} {r['n']:>4}  "
            f"{r['closed_form']:>24} {'' if r['certified'] is None else r['certified']:>24}  {r['status']}"
        )
    lines.append(f"{counts['match']} match, {counts['mismatch']} mismatch, {counts['undecided']} undecided")
    return record, "\n".join(lines) + "\n", code


def _range_text(r: range | None) -> str | None:
    if r is None:
        return None
    if len(r) == 0:
        return f"{r.start}..{r.stop - 1}"
    return f"{r[0]}..{r[-1]}"


def cmd_proofcheck(args: argparse.Namespace) -> tuple[dict[str, Any], str, int]:
    only = None
    if args.only:
        only = [c.strip() for c in args.only.split(",") if c.strip()]
        unknown = set(only) - set(CHECK_IDS)
        if unknown:
            raise UsageError(f"unknown checks {sorted(unknown)}; choose from {', '.join(CHECK_IDS)}")
    reports = run_proof_suite(args.a, args.n, only=only, jobs=args.jobs)
    summary = summarize(reports)
    record = {
        "command": "proofcheck",
        "params": {"a": _range_text(args.a), "n": _range_text(args.n), "only": only},
        "result": [_report_record(r) for r in reports],
        "summary": {"passed": summary.passed, "failed": summary.failed, "probes": summary.probes},
    }
    lines = []
    for r in reports:
        idx = ", ".join(f"{k}={v}" for k, v in r.params.items())
        lines.append(f"{r.status.upper():5} {r.check_id:16} {idx:14} {r.witness}")
    lines.append(f"{summary.passed} passed, {summary.failed} failed, {summary.probes} probes (not asserted)")
    return record, "\n".join(lines) + "\n", EXIT_OK if summary.ok else EXIT_MISMATCH


def _csv_for(record: dict[str, Any]) -> str:
    cmd = record["command"]
    if cmd == "verify":
        header = ["a", "s", "n", "closed_form", "certified", "status", "terms_used"]
        return _render_csv(header, ([r.get(h) for h in header] for r in record["result"]))
    if cmd == "proofcheck":
        header = ["check_id", "a", "index", "status", "witness"]
        return _render_csv(
            header,
            (
                [r["check_id"], r["params"]["a"], next(v for k, v in r["params"].items() if k != "a"),
                 r["status"], r["witness"]]
                for r in record["result"]
            ),
        )
    raise UsageError("--format csv is available for verify and proofcheck")


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recipfib",
        description="Certified floors of reciprocal sums of generalized Fibonacci numbers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: argparse.ArgumentParser, csv_ok: bool) -> None:
        choices = ["text", "json", "csv"] if csv_ok else ["text", "json"]
        p.add_argument("--format", choices=choices, default="text")

    p = sub.add_parser("compute", help="certified floor for one (p, q, s, n)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS)
    add_format(p, csv_ok=False)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("identity", help="evaluate a closed form")
    p.add_argument("--family", choices=["fib", "pell", "gen-cubed"], required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int, required=True)
    add_format(p, csv_ok=False)
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("verify", help="compare closed forms with certified values")
    p.add_argument("--family", choices=["fib", "pell", "gen-cubed"], required=True)
    p.add_argument("--a", type=parse_range)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--jobs", type=int, default=1)
    add_format(p, csv_ok=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("proofcheck", help="exact checks of the proof inequalities")
    p.add_argument("--a", type=parse_range, required=True)
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--only", help=f"comma-separated subset of: {', '.join(CHECK_IDS)}")
    p.add_argument("--jobs", type=int, default=1)
    add_format(p, csv_ok=True)
    p.set_defaults(func=cmd_proofcheck)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("RECIPFIB_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if hasattr(sys, "set_int_max_str_digits"):
        # exact enclosure endpoints can run to tens of thousands of digits
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) < 1:
        print("recipfib: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        record, text, code = args.func(args)
        if args.format == "json":
            out = render_json(record)
        elif args.format == "csv":
            out = _csv_for(record)
        else:
            out = text
    except (UsageError, UnsupportedParamsError, ValueError) as exc:
        print(f"recipfib {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
