"""The stable-binomial table: generation, rendering and comparison with the published one."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from importlib import resources

from sympy import factorint

from .field import (
    MAX_FIELD_ORDER,
    FieldError,
    format_element,
    make_field,
    parse_element,
    prime_factors,
)
from .oracle import cross_check
from .poly import DEFAULT_DEGREE_CAP
from .stability import stability_verdict

TABLE_QS = (3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27)
TABLE_DS = tuple(range(2, 11))

CSV_COLUMNS = ("q", "modulus", "d", "a", "orbit", "marker_index", "tag")


@dataclass(frozen=True)
class TableCell:
    q: int
    modulus: str
    d: int
    a: str
    orbit: tuple  # P_1(a), ..., P_{m0}(a) in print form
    marker: int | None  # 1-based index of the first failing value
    tag: str  # "s." or "ns."

    @property
    def stable(self):
        return self.tag == "s."

    def text(self):
        vals = [("*" + v if i == self.marker else v) for i, v in enumerate(self.orbit, start=1)]
        return f"{self.a}: [{','.join(vals)}] {self.tag}"

    def record(self):
        rec = asdict(self)
        rec["orbit"] = list(self.orbit)
        rec["marker_index"] = rec.pop("marker")
        return rec


def field_for(q, modulus=None):
    fac = factorint(q)
    if len(fac) != 1:
        raise FieldError(f"q = {q} is not a prime power")
    ((p, e),) = fac.items()
    return make_field(p, e, modulus)


def table_degrees(q, ds=TABLE_DS):
    """d values kept in the table: d != 0 mod 4 and every prime l | d divides q - 1."""
    return [d for d in ds if d >= 2 and d % 4 and all((q - 1) % l == 0 for l in prime_factors(d))]


def table_elements(spec):
    """F_q minus {0, 1}: 2..p-1 for prime fields, gen^1..gen^(q-2) otherwise."""
    if spec.e == 1:
        return [spec(i) for i in range(2, spec.p)]
    g = spec.gen
    out, x = [], g
    for _ in range(spec.q - 2):
        out.append(x)
        x = x * g
    return out


def make_cell(a, d):
    v = stability_verdict(a, d)
    spec = a.spec
    orbit = tuple(format_element(x) for x in v.orbit.printed)
    return TableCell(
        spec.q, spec.modulus_str(), d, format_element(a), orbit,
        v.failing_index, "s." if v.stable else "ns.",
    )


def _block(args):
    q, d, modulus = args
    spec = field_for(q, modulus)
    return [make_cell(a, d) for a in table_elements(spec)]


def _blocks(qs, ds, modulus=None):
    out = []
    for q in qs:
        if q > MAX_FIELD_ORDER:
            raise FieldError(f"q = {q} above the 2^20 guard")
        field_for(q, modulus)  # validate before fanning out
        out.extend((q, d, modulus) for d in table_degrees(q, ds))
    return out


def generate_table(qs=TABLE_QS, ds=TABLE_DS, modulus=None, workers=1):
    """All cells ordered by q, then d, then a in generator-power order."""
    jobs = _blocks(qs, ds, modulus)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_block, jobs))
    else:
        blocks = [_block(j) for j in jobs]
    return [cell for block in blocks for cell in block]


# --- rendering -------------------------------------------------------------------


def render_text(cells):
    lines = []
    last_q = last_d = None
    for c in cells:
        if c.q != last_q:
            head = f"q={c.q}" + (f" M(X)={c.modulus}" if c.modulus else "")
            lines.append(head)
            last_q, last_d = c.q, None
        if c.d != last_d:
            lines.append(f"  d={c.d}")
            last_d = c.d
        lines.append("    " + c.text())
    return "\n".join(lines) + "\n"


def render_csv(cells):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for c in cells:
        w.writerow([c.q, c.modulus, c.d, c.a, " ".join(c.orbit), c.marker or "", c.tag])
    return buf.getvalue()


def render_json(cells):
    return json.dumps([c.record() for c in cells], indent=1) + "\n"


RENDERERS = {"text": render_text, "csv": render_csv, "json": render_json}


# --- the published table ---------------------------------------------------------


@dataclass(frozen=True)
class PaperCell:
    q: int
    d: int
    a: str
    orbit: tuple
    marker: int | None
    tag: str | None  # "s.", "ns." or None when the cell prints no tag


def load_paper_table():
    text = resources.files("ffstab").joinpath("data/paper_table.txt").read_text()
    cells = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, orbit, mark, tag = (s.strip() for s in line.split("|"))
        q, d, a = head.split()
        cells.append(PaperCell(
            int(q), int(d), a, tuple(orbit.split(",")),
            None if mark == "-" else int(mark),
            None if tag == "?" else tag + ".",
        ))
    return cells


@dataclass(frozen=True)
class DiffRow:
    q: int
    d: int
    a: str
    issues: tuple  # subset of orbit, marker, tag, no-tag, absent
    paper: str
    recomputed: str
    oracle: str
    confirmed: bool
    within_cap: bool  # False when the deciding iterate lies beyond the degree cap

    def record(self):
        rec = asdict(self)
        rec["issues"] = "+".join(self.issues)
        return rec


def _paper_text(pc):
    vals = [("*" + v if i == pc.marker else v) for i, v in enumerate(pc.orbit, start=1)]
    return f"[{','.join(vals)}] {pc.tag or '(no tag)'}"


def diff_paper_table(cells=None, degree_cap=DEFAULT_DEGREE_CAP):
    """Cells where the published table and the recomputation differ.

    Each flagged cell is rerun through the oracle; ``confirmed`` means the
    oracle agrees with the recomputed verdict. ``within_cap`` is False when
    that verdict rests on an iterate above the degree cap, so the oracle only
    vouches for the iterates below it.
    """
    if cells is None:
        cells = generate_table()
    ours = {(c.q, c.d, c.a): c for c in cells}
    qs, ds = {c.q for c in cells}, {c.d for c in cells}
    # only compare the part of the published table the given cells cover
    paper = {(pc.q, pc.d, pc.a): pc for pc in load_paper_table() if pc.q in qs and pc.d in ds}
    rows = []
    for key, c in ours.items():
        pc = paper.get(key)
        issues = []
        if pc is None:
            issues.append("absent")
        else:
            if pc.orbit != c.orbit:
                issues.append("orbit")
            if pc.marker != c.marker:
                issues.append("marker")
            if pc.tag is None:
                issues.append("no-tag")
            elif pc.tag != c.tag:
                issues.append("tag")
        if not issues:
            continue
        spec = field_for(c.q)
        a = parse_element(spec, c.a)
        report = cross_check(a, c.d, degree_cap, horizon="verdict")
        v = report.analyzer
        deciding = v.orbit.m0 - 1 if v.stable else v.reducible_at
        rows.append(DiffRow(
            c.q, c.d, c.a, tuple(issues),
            _paper_text(pc) if pc else "(missing)", c.text().split(": ", 1)[1],
            report.oracle_label, report.agree, c.d**deciding <= degree_cap,
        ))
    extra = sorted(set(paper) - set(ours))
    if extra:
        raise ValueError(f"published cells outside the recomputed table: {extra}")
    return rows


def render_diff(rows, fmt="text"):
    if fmt == "json":
        return json.dumps([r.record() for r in rows], indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("q", "d", "a", "issues", "paper", "recomputed", "oracle", "confirmed", "within_cap"))
        for r in rows:
            w.writerow([
                r.q, r.d, r.a, "+".join(r.issues), r.paper, r.recomputed, r.oracle,
                r.confirmed, r.within_cap,
            ])
        return buf.getvalue()
    kinds = Counter(i for r in rows for i in r.issues)
    verdict_level = sum(1 for r in rows if set(r.issues) & {"tag", "marker", "no-tag", "absent"})
    lines = [
        f"{len(rows)} cells differ from the published table "
        f"({verdict_level} in tag, marker or presence; the rest are orbit print slips)",
        "issue counts: " + ", ".join(f"{k}={kinds[k]}" for k in sorted(kinds)),
    ]
    for r in rows:
        status = "confirmed" if r.confirmed else "NOT confirmed"
        if r.confirmed and not r.within_cap:
            status = "confirmed up to the degree cap only"
        lines.append(
            f"q={r.q} d={r.d} a={r.a} [{'+'.join(r.issues)}]\n"
            f"    paper:      {r.paper}\n"
            f"    recomputed: {r.recomputed}\n"
            f"    oracle:     {r.oracle} ({status})"
        )
    return "\n".join(lines) + "\n"


# --- master sweep ----------------------------------------------------------------


def _sweep_block(args):
    q, d, modulus, degree_cap, horizon, only = args
    spec = field_for(q, modulus)
    elems = table_elements(spec) if only is None else [parse_element(spec, only)]
    return [cross_check(a, d, degree_cap, horizon).record() for a in elems]


def sweep(qs=TABLE_QS, ds=TABLE_DS, degree_cap=DEFAULT_DEGREE_CAP, horizon="cap",
          modulus=None, workers=1, only=None):
    """Cross-check every table cell; yields one record per (q, d, a) in table order.

    ``only`` restricts each block to one element label.
    """
    jobs = [(q, d, m, degree_cap, horizon, only) for q, d, m in _blocks(qs, ds, modulus)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for block in pool.map(_sweep_block, jobs):
                yield from block
    else:
        for job in jobs:
            yield from _sweep_block(job)
