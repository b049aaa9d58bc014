"""Command-line front end.

Exit status is 0 on success and 2 on a domain error (bad group spec, class
bound out of range, ...), with the message on stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import checks, collect, construct, numth, structure, witness
from .perm import DEFAULT_CAP, PermError

DOMAIN_ERRORS = (
    construct.ConstructError,
    collect.CollectionError,
    PermError,
    witness.WitnessError,
    structure.StructureError,
    numth.NumberTheoryError,
)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=False)


def _kv_table(d: dict) -> str:
    width = max((len(k) for k in d), default=0)
    return "\n".join(f"{k.ljust(width)}  {json.dumps(v) if isinstance(v, (dict, list)) else v}" for k, v in d.items())


def _flat_csv(records: list[dict]) -> str:
    if not records:
        return ""
    buf = io.StringIO()
    fields = list(records[0])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in records:
        w.writerow([json.dumps(r[f]) if isinstance(r[f], (dict, list)) else r[f] for f in fields])
    return buf.getvalue()


# ------------------------------------------------------------------ commands


def cmd_witness(args) -> str:
    G = construct.parse_group_spec(args.spec, cap=args.cap)
    rep = witness.witness_set(G, threads=args.threads).to_json()
    if args.show:
        rep["witnesses"] = [G.element(int(w)).to_cycles() for w in witness.witness_set(G).witnesses]
    if args.format == "json":
        return _dump_json(rep)
    if args.format == "csv":
        return _flat_csv([rep]).rstrip("\n")
    return _kv_table(rep)


def cmd_table(args) -> str:
    c = args.c
    if args.format == "json":
        return collect.table_json(c)
    if args.format == "csv":
        return collect.table_csv(c).rstrip("\n")
    rows = collect.table_records(c)
    width = max(len(r["commutator"]) for r in rows)
    lines = []
    for r in rows:
        coeffs = " ".join(f"{a:>6}" for a in r["coefficients"])
        lines.append(f"{r['i']:>3}  {r['commutator'].ljust(width)}  {r['m']:>2}  {coeffs}")
    return "\n".join(lines)


def cmd_survey(args) -> str:
    if args.bound > 200:
        raise construct.ConstructError(f"catalog bound must be <= 200, got {args.bound}")
    recs = checks.survey_records(args.bound, threads=args.threads, controls=not args.no_controls)
    if args.format == "csv":
        return _flat_csv(recs).rstrip("\n")
    if args.format == "table":
        lines = [f"{'group':<22}{'order':>6}  {'class':<14}{'exp':>4}  {'J':<2}{'|W|':>6}{'|B|':>6}"]
        for r in recs:
            lines.append(
                f"{r['group'] + (' *' if r['control'] else ''):<22}{r['order']:>6}  {str(r['class']):<14}"
                f"{r['exponent']:>4}  {'y' if r['is_j'] else 'n':<2}{r['witness_count']:>6}{r['big_count']:>6}"
            )
        return "\n".join(lines)
    lines = [_dump_json(r) for r in recs]
    non_j = sorted(r["order"] for r in recs if not r["is_j"] and not r["control"])
    lines.append(_dump_json({"summary": {"groups": len(recs), "non_j_orders": non_j}}))
    return "\n".join(lines)


def cmd_series(args) -> str:
    G = construct.parse_group_spec(args.spec, cap=args.cap)
    rep = structure.lower_central_series(G).to_json()
    rep = {"group": G.name, "order": G.order, **rep}
    return _dump_json(rep) if args.format != "table" else _kv_table(rep)


def cmd_conditions(args) -> str:
    G = construct.parse_group_spec(args.spec, cap=args.cap)
    conds = [c.to_json() for c in witness.sufficient_conditions(G)]
    if args.format == "json":
        return _dump_json({"group": G.name, "order": G.order, "conditions": conds})
    if args.format == "csv":
        return _flat_csv(conds).rstrip("\n")
    return "\n".join(f"{c['name']:<28}{c['status']:<32}{'implies J' if c['implies_j'] else ''}" for c in conds)


def cmd_divisibility(args) -> str:
    rep = collect.theorem_divisibility_report(args.p, args.e, args.c)
    lines = [
        {
            "commutator": ln.commutator,
            "exponent": ln.value,
            "valuation": ln.valuation,
            "required": ln.required,
            "divides": ln.divides,
            "residual": [list(t) for t in ln.residual],
        }
        for ln in rep.lines
    ]
    summary = {"p": rep.p, "e": rep.e, "c": rep.c, "n": rep.n, "all_divide": rep.all_divide,
               "survivors_mod_p": [[s, v] for s, v in rep.survivors(rep.p)]}
    if args.format == "json":
        return _dump_json({**summary, "lines": lines})
    if args.format == "csv":
        return _flat_csv(lines).rstrip("\n")
    out = [f"{ln['commutator']:<24}{'ok' if ln['divides'] else 'FAILS':<6}v_p={ln['valuation']}" for ln in lines]
    out.append(_kv_table(summary))
    return "\n".join(out)


def cmd_valuation(args) -> str:
    r = numth.kummer_valuation(args.n, args.j, args.p)
    d = {"n": r.n, "j": r.j, "p": r.p, "carries": r.carries, "valuation": r.valuation}
    return _dump_json(d) if args.format != "table" else _kv_table(d)


def cmd_check(args) -> tuple[str, int]:
    results = checks.run_checks()
    text = "\n".join(r.line() for r in results)
    return text, 0 if all(r.passed for r in results) else 1


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    # shared flags are accepted before or after the sub-command
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--cap", type=int, default=argparse.SUPPRESS, help="largest group order to enumerate")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="write output to a file")
    parser = argparse.ArgumentParser(prog="jgroups", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--check-paper", action="store_true", help="run the acceptance self checks and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("witness", parents=[common], help="witness set of a group")
    p.add_argument("spec")
    p.add_argument("--show", action="store_true", help="list witnesses in cycle notation")
    p.set_defaults(func=cmd_witness, default_format="json")

    p = sub.add_parser("table", parents=[common], help="binomial coefficient table for class c")
    p.add_argument("c", type=int)
    p.set_defaults(func=cmd_table, default_format="csv")

    p = sub.add_parser("survey", parents=[common], help="witness survey of the odd-order catalog below BOUND")
    p.add_argument("bound", type=int)
    p.add_argument("--no-controls", action="store_true", help="omit the even-order control groups")
    p.set_defaults(func=cmd_survey, default_format="json")

    p = sub.add_parser("series", parents=[common], help="lower central series summary")
    p.add_argument("spec")
    p.set_defaults(func=cmd_series, default_format="json")

    p = sub.add_parser("conditions", parents=[common], help="sufficient conditions for being a J-group")
    p.add_argument("spec")
    p.set_defaults(func=cmd_conditions, default_format="table")

    p = sub.add_parser("divisibility", parents=[common], help="p-adic bookkeeping of the collected exponents at n = p^e")
    p.add_argument("p", type=int)
    p.add_argument("e", type=int)
    p.add_argument("c", type=int)
    p.set_defaults(func=cmd_divisibility, default_format="json")

    p = sub.add_parser("valuation", parents=[common], help="p-adic valuation of C(n, j) by carries")
    p.add_argument("n", type=int)
    p.add_argument("j", type=int)
    p.add_argument("p", type=int)
    p.set_defaults(func=cmd_valuation, default_format="json")
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        out.write_text(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # defaults are filled here: parent-parser actions are shared objects, so
    # set_defaults on one parser would leak into the sub-command parsers
    for name, value in (("format", None), ("threads", 1), ("cap", DEFAULT_CAP), ("out", None)):
        if not hasattr(args, name):
            setattr(args, name, value)
    if args.check_paper:
        text, code = cmd_check(args)
        _emit(text, args.out)
        return code
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.format is None:
        args.format = args.default_format
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        text = args.func(args)
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
