"""Command line front end: analyze, table, mersenne, verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from sympy import factorint

from . import table as tbl
from .field import FieldError, format_element, parse_element, parse_field
from .poly import DEFAULT_DEGREE_CAP, parse_poly
from .stability import (
    UnsupportedDegree,
    early_stable_bound,
    lambda_solutions,
    mersenne_report,
    normalize_nonmonic,
    stability_verdict,
)

VERDICT_COLUMNS = (
    "field", "d", "a", "orbit", "n0", "m0", "verdict", "failing_index", "failing_prime", "stable",
)
SWEEP_COLUMNS = ("q", "modulus", "d", "a", "analyzer_verdict", "oracle_verdict", "agree")
MERSENNE_COLUMNS = (
    "m", "q", "mersenne", "factors", "prime", "checked", "sampled",
    "all_irreducible", "all_stable", "counterexample", "counterexample_order", "equivalence_holds",
)

EXIT_STABLE, EXIT_REDUCIBLE, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


# --- argument helpers ------------------------------------------------------------


def parse_range(text):
    """"3-27", "2,3,5" or "2,5-7" as a sorted list of ints."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.update(range(int(lo), int(hi) + 1))
        else:
            out.add(int(part))
    return sorted(out)


def q_range(text):
    """Prime powers >= 3 within a range expression."""
    return [q for q in parse_range(text) if q >= 3 and len(factorint(q)) == 1]


def _modulus_list(text):
    return [int(c) for c in text.split(",")] if text else None


def _csv(rows, columns):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (" ".join(v) if isinstance(v, list) else ("" if v is None else v))
                    for k, v in r.items()})
    return buf.getvalue()


def _emit(text):
    sys.stdout.write(text)


# --- analyze ---------------------------------------------------------------------


def _split_tokens(tokens):
    """key=value tokens; a "p=...,e=...,mod=..." token stays whole."""
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise InputError(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        key = key.strip().lower()
        if key in ("p", "q"):
            out["field"] = tok
        else:
            out[key] = val
    return out


def _binomial_from_poly(spec, text):
    """(d, b, c) for a polynomial b x^d - c."""
    f = parse_poly(spec, text)
    nonzero = [k for k in range(f.degree + 1) if f[k]]
    if f.degree < 2 or set(nonzero) - {0, f.degree}:
        raise InputError(f"{text!r} is not a binomial b*x^d - c with d >= 2")
    return f.degree, f[f.degree], -f[0]


def analyze(tokens, fmt="text", modulus=None):
    kv = _split_tokens(tokens)
    if "field" not in kv:
        raise InputError("missing field (q=... or p=...,e=...,mod=...)")
    spec = parse_field(kv["field"], _modulus_list(modulus))
    notes = []
    if "f" in kv:
        d, b, c = _binomial_from_poly(spec, kv["f"])
    else:
        if "d" not in kv:
            raise InputError("missing d")
        d = int(kv["d"])
        if "a" in kv:
            b, c = spec.one, parse_element(spec, kv["a"])
        elif "c" in kv:
            b = parse_element(spec, kv.get("b", "1"))
            c = parse_element(spec, kv["c"])
        else:
            raise InputError("missing a (or b, c)")
    if d < 2:
        raise InputError("d must be >= 2")
    if b.is_one():
        a = c
    else:
        res = normalize_nonmonic(b, c, d)
        sols = lambda_solutions(b, d)
        if res is None:
            raise InputError(
                f"lambda^{d - 1} = {format_element(b)} has no solution in {spec}; "
                "no scaling u(x) = lambda*x turns this into a monic binomial"
            )
        lam, a = res
        notes.append(
            f"normalized: lambda = {format_element(lam)} ({len(sols)} solution(s)), "
            f"conjugate to x^{d} - {format_element(a)}"
        )
    verdict = stability_verdict(a, d)
    rec = verdict.record()
    if fmt == "json":
        rec = dict(rec, early_stable_bound=early_stable_bound(a, d), notes=notes)
        _emit(json.dumps(rec, indent=1) + "\n")
    elif fmt == "csv":
        _emit(_csv([rec], VERDICT_COLUMNS))
    else:
        lines = list(notes)
        lines.append(f"field: {rec['field']}")
        lines.append(f"f(x) = x^{d} - {rec['a']}")
        if verdict.orbit:
            orbit = [format_element(v) for v in verdict.orbit.printed]
            lines.append(f"orbit P_1..P_m0: [{','.join(orbit)}]")
            lines.append(f"n0 = {rec['n0']}, m0 = {rec['m0']}")
        lines.append(f"verdict: {rec['verdict']}")
        if not verdict.stable:
            lines.append(
                f"cause: {rec['cause']}, failing index: {rec['failing_index']}, "
                f"failing prime: {rec['failing_prime']}"
            )
            w = verdict.witness()
            if w is not None:
                lines.append(
                    f"witness: {format_element(w)}^{rec['failing_prime']} = P_{rec['failing_index']}(a)"
                )
        lines.append(f"early stability bound: f_1..f_{early_stable_bound(a, d)} irreducible suffices")
        _emit("\n".join(lines) + "\n")
    return EXIT_STABLE if verdict.stable else EXIT_REDUCIBLE


# --- subcommands -----------------------------------------------------------------


def cmd_analyze(args):
    return analyze(args.tokens, args.format, args.modulus)


def cmd_table(args):
    qs = q_range(args.q)
    ds = parse_range(args.d)
    modulus = _modulus_list(args.modulus)
    if modulus and len(qs) != 1:
        raise InputError("--modulus needs a single q")
    cells = tbl.generate_table(qs, ds, modulus, workers=args.workers)
    if args.diff_paper_table:
        if modulus:
            raise InputError("--diff-paper-table compares against the published moduli")
        rows = tbl.diff_paper_table(cells, args.degree_cap)
        _emit(tbl.render_diff(rows, args.format))
        return 0 if all(r.confirmed for r in rows) else 1
    _emit(tbl.RENDERERS[args.format](cells))
    return 0


def cmd_mersenne(args):
    ms = parse_range(args.m)
    recs = [mersenne_report(m).record() for m in ms]
    if args.format == "json":
        _emit(json.dumps(recs, indent=1) + "\n")
    elif args.format == "csv":
        _emit(_csv(recs, MERSENNE_COLUMNS))
    else:
        for r in recs:
            kind = "prime" if r["prime"] else f"composite ({r['factors']})"
            line = f"m={r['m']:<2} 2^m-1={r['mersenne']} {kind}; all stable: {r['all_stable']}"
            if r["counterexample"]:
                line += f"; counterexample alpha={r['counterexample']} (order {r['counterexample_order']})"
            if r["sampled"]:
                line += f"; sampled {r['checked']} alphas"
            _emit(line + "\n")
    return 0 if all(r["equivalence_holds"] for r in recs) else 1


def cmd_verify(args):
    qs = q_range(args.q)
    ds = parse_range(args.d)
    modulus = _modulus_list(args.modulus)
    t0 = time.perf_counter()
    recs = []
    writer = None
    if args.format == "csv":
        writer = csv.DictWriter(sys.stdout, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
    for rec in tbl.sweep(qs, ds, args.degree_cap, args.horizon, modulus, args.workers, args.a):
        recs.append(rec)
        if writer:
            writer.writerow(rec)
            sys.stdout.flush()
        elif args.format == "text" and (args.verbose or not rec["agree"]):
            _emit(
                f"q={rec['q']} d={rec['d']} a={rec['a']}: analyzer {rec['analyzer_verdict']}, "
                f"oracle {rec['oracle_verdict']}, {'agree' if rec['agree'] else 'DISAGREE'}\n"
            )
    bad = sum(1 for r in recs if not r["agree"])
    elapsed = time.perf_counter() - t0
    if args.format == "json":
        _emit(json.dumps({"cells": recs, "agree": len(recs) - bad, "disagree": bad}, indent=1) + "\n")
    elif args.format == "text":
        _emit(
            f"{len(recs)} cells checked (degree cap {args.degree_cap}, horizon {args.horizon}): "
            f"{len(recs) - bad} agree, {bad} disagree, {elapsed:.1f} s\n"
        )
    return 1 if bad else 0


# --- parser ----------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(
        prog="ffstab",
        description="Irreducibility and stability of binomials x^d - a over finite fields.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "csv", "json"), default="text")
        sp.add_argument("--modulus", help="ascending monic modulus coefficients, e.g. 1,2,0,1")

    a = sub.add_parser("analyze", help="verdict for one binomial",
                       description="Tokens: q=9 | p=3,e=3,mod=1,2,0,1; d=2; a=..., or b=... c=..., "
                                   "or f=<polynomial>. Exit 0 stable, 1 reducible, 2 input error.")
    a.add_argument("tokens", nargs="+")
    common(a)
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("table", help="regenerate the stable-binomial table")
    t.add_argument("--q", default=",".join(map(str, tbl.TABLE_QS)), help="q range, e.g. 3-27")
    t.add_argument("--d", default="2-10", help="d range, e.g. 2-10")
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--diff-paper-table", action="store_true",
                   help="list cells where the published table differs from recomputation")
    t.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    common(t)
    t.set_defaults(func=cmd_table)

    m = sub.add_parser("mersenne", help="Mersenne characterization over F_{2^m}")
    m.add_argument("--m", default="2-11", help="m range within 2..20")
    m.add_argument("--format", choices=("text", "csv", "json"), default="text")
    m.set_defaults(func=cmd_mersenne)

    v = sub.add_parser("verify", help="cross-check analyzer and brute-force oracle")
    v.add_argument("--q", default=",".join(map(str, tbl.TABLE_QS)))
    v.add_argument("--d", default="2-10")
    v.add_argument("--a", help="restrict to one element label, e.g. 6 or a^3")
    v.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    v.add_argument("--horizon", choices=("cap", "verdict"), default="cap",
                   help="cap: every iterate up to the degree cap; verdict: only the iterates the "
                        "analyzer's verdict depends on")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--verbose", action="store_true", help="print every cell in text mode")
    common(v)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FieldError, UnsupportedDegree, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
