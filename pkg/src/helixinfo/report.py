"""Text, delimited and JSON-lines renderings of computed results.

Information values are printed in millibits with four decimals unless
full precision is requested. Output is deterministic: the same results
always render to the same bytes.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .aggregate import Census, SubsetTable
from .classify import SectorLabel
from .entropy import CellCube, InformationValue
from .errors import ConfigurationError
from .overlap import CELL_PATTERNS, COUNT_FIELDS, ConsistencyReport, ReadingResult
from .systemness import SeriesFrame, SystemnessResult, TransmissionRow, TrendFit

FORMATS = ("table", "delimited", "records")
KINDS = (
    "systemness", "subsets", "transmission", "counts", "census",
    "readings", "decomposition", "classification", "trend",
)
CELL_ORDER = ("u", "i", "g", "ui", "ug", "ig", "uig", "none")


@dataclass(frozen=True)
class DecompositionRow:
    year: int | None
    cube: CellCube
    report: ConsistencyReport


@dataclass(frozen=True)
class ClassifiedAddress:
    record_id: str
    address: str
    sector: SectorLabel
    tags: frozenset[str]


@dataclass(frozen=True)
class TrendReport:
    fit: TrendFit
    window: tuple[int, int] | None
    points: int
    mode: str | None = None


class _Fmt:
    def __init__(self, full_precision: bool):
        self.full = full_precision

    def mbit(self, value: InformationValue | float | None) -> str:
        if value is None:
            return ""
        x = value.millibits if isinstance(value, InformationValue) else float(value)
        return repr(x) if self.full else f"{x:.4f}"

    def real(self, x: float | None) -> str:
        if x is None:
            return ""
        return repr(float(x)) if self.full else f"{x:.4f}"

    def pct(self, x: float, table: bool) -> str:
        return f"{x:.1f}" if table and not self.full else self.real(x)

    @staticmethod
    def count(x: float | None) -> str:
        if x is None:
            return ""
        if float(x).is_integer():
            return str(int(x))
        return repr(float(x))


def _numeric(cell: str) -> bool:
    head = cell.split(" ", 1)[0]
    try:
        float(head)
    except ValueError:
        return head == ""
    return True


def _text_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]

    def line(cells):
        first = cells[0].ljust(widths[0])
        rest = [c.rjust(w) if _numeric(c) else c.ljust(w) for c, w in zip(cells[1:], widths[1:])]
        return "  ".join([first] + rest).rstrip()

    out = [line(header), "  ".join("-" * w for w in widths)]
    out += [line(r) for r in rows]
    return "\n".join(out) + "\n"


def _delimited(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _records(objs: Sequence[dict]) -> str:
    return "".join(json.dumps(o, sort_keys=True, ensure_ascii=False) + "\n" for o in objs)


def _infer_kind(results: Any) -> str:
    if isinstance(results, SeriesFrame):
        return "counts"
    if isinstance(results, Census):
        return "census"
    if isinstance(results, TrendReport):
        return "trend"
    if not results:
        raise ConfigurationError("cannot infer the report kind of an empty result list; pass kind=")
    first = results[0]
    for cls, kind in (
        (SystemnessResult, "systemness"),
        (SubsetTable, "subsets"),
        (TransmissionRow, "transmission"),
        (ReadingResult, "readings"),
        (DecompositionRow, "decomposition"),
        (ClassifiedAddress, "classification"),
    ):
        if isinstance(first, cls):
            return kind
    raise ConfigurationError(f"no report layout for {type(first).__name__}")


def report(results: Any, fmt: str = "table", *, kind: str | None = None, full_precision: bool = False) -> str:
    """Render results as a text table, comma-delimited text, or JSON lines."""
    if fmt not in FORMATS:
        raise ConfigurationError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    kind = kind or _infer_kind(results)
    if kind not in KINDS:
        raise ConfigurationError(f"unknown report kind {kind!r}")
    return _RENDERERS[kind](results, fmt, _Fmt(full_precision))


def write_report(text: str, destination: str | Path | None) -> None:
    """Write to a file, or to stdout when destination is None or '-'."""
    if destination is None or str(destination) == "-":
        sys.stdout.write(text)
        return
    with open(destination, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


_SYSTEMNESS_ROWS = (
    "univariate time series",
    "previous year (Markov property)",
    "hypothesis of systemness",
)


def _render_systemness(results: Sequence[SystemnessResult], fmt: str, f: _Fmt) -> str:
    if fmt == "table":
        header = ["prediction (mbit)"] + [r.category_mode or "-" for r in results]
        stat_cells = []
        for r in results:
            cell = f.mbit(r.statistic)
            if r.verdict.value != "corroborated":
                cell += f" ({r.verdict.value})"
            stat_cells.append(cell)
        rows = [
            [_SYSTEMNESS_ROWS[0]] + [f.mbit(r.i_timeseries) for r in results],
            [_SYSTEMNESS_ROWS[1]] + [f.mbit(r.i_markov) for r in results],
            [_SYSTEMNESS_ROWS[2]] + stat_cells,
        ]
        if any(r.chosen_start_year is not None for r in results):
            rows.append(["best starting year"] + [f.count(r.chosen_start_year) for r in results])
        return _text_table(header, rows)
    objs = [
        {
            "target_year": r.target_year,
            "mode": r.category_mode,
            "method": r.method,
            "i_timeseries_mbit": f.mbit(r.i_timeseries),
            "i_markov_mbit": f.mbit(r.i_markov),
            "statistic_mbit": f.mbit(r.statistic),
            "verdict": r.verdict.value,
            "start_year": r.chosen_start_year,
        }
        for r in results
    ]
    if fmt == "records":
        return _records(objs)
    cols = list(objs[0]) if objs else [
        "target_year", "mode", "method", "i_timeseries_mbit", "i_markov_mbit",
        "statistic_mbit", "verdict", "start_year",
    ]
    return _delimited(cols, [[_plain(o[c]) for c in cols] for o in objs])


def _plain(x) -> str:
    return "" if x is None else str(x)


_SUBSET_HEADER = (
    "subset", "number", "% titles retrieved", "T(uig) in mbits",
    "UI", "UG", "IG", "UIG", "Univers", "Industry", "Govern",
)


def _render_subsets(tables: Sequence[SubsetTable], fmt: str, f: _Fmt) -> str:
    if fmt == "table":
        # Published layout: pair columns exclusive of the triple, singles inclusive.
        rows = []
        for t in tables:
            c = t.counts
            trans = f.mbit(t.transmission()) if t.records_identified else ""
            rows.append([
                t.name, f.count(t.records_identified), f.pct(t.pct_identified, True), trans,
                f.count(c.ui - c.uig), f.count(c.ug - c.uig), f.count(c.ig - c.uig), f.count(c.uig),
                f.count(c.u), f.count(c.i), f.count(c.g),
            ])
        return _text_table(_SUBSET_HEADER, rows)
    objs = []
    for t in tables:
        obj = {
            "subset": t.name,
            "records_in_subset": t.records_in_subset,
            "records_identified": t.records_identified,
            "pct_identified": f.real(t.pct_identified),
            "t_uig_mbit": f.mbit(t.transmission()) if t.records_identified else None,
            "normalization": "closed7",
        }
        obj.update({name: getattr(t.counts, name) for name in COUNT_FIELDS})
        objs.append(obj)
    if fmt == "records":
        return _records(objs)
    cols = ["subset", "records_in_subset", "records_identified", "pct_identified", "t_uig_mbit",
            "normalization", *COUNT_FIELDS]
    return _delimited(cols, [[_plain(o[c]) for c in cols] for o in objs])


def _render_transmission(rows: Sequence[TransmissionRow], fmt: str, f: _Fmt) -> str:
    if fmt == "delimited":
        return _delimited(["year", "T_uig_mbit"], [[_plain(r.year), f.mbit(r.t_uig)] for r in rows])
    if fmt == "table":
        return _text_table(
            ["year", "mode", "T(uig) mbit", "T(ui) mbit", "T(ug) mbit", "T(ig) mbit"],
            [
                [_plain(r.year), r.mode, f.mbit(r.t_uig), f.mbit(r.t_ui), f.mbit(r.t_ug), f.mbit(r.t_ig)]
                for r in rows
            ],
        )
    return _records([
        {
            "year": r.year, "mode": r.mode, "t_uig_mbit": f.mbit(r.t_uig), "t_ui_mbit": f.mbit(r.t_ui),
            "t_ug_mbit": f.mbit(r.t_ug), "t_ig_mbit": f.mbit(r.t_ig),
        }
        for r in rows
    ])


def _render_counts(frame: SeriesFrame, fmt: str, f: _Fmt) -> str:
    has_total = any(v.total is not None for v in frame.vectors)
    cols = ["year", *COUNT_FIELDS] + (["total"] if has_total else [])
    rows = []
    for v in frame.vectors:
        row = [str(v.year)] + [f.count(getattr(v, c)) for c in COUNT_FIELDS]
        if has_total:
            row.append(f.count(v.total))
        rows.append(row)
    if fmt == "delimited":
        return _delimited(cols, rows)
    if fmt == "table":
        return _text_table(cols, rows)
    return _records([
        {c: (v.year if c == "year" else getattr(v, c)) for c in cols} for v in frame.vectors
    ])


def _render_census(census: Census, fmt: str, f: _Fmt) -> str:
    rows = census.rows()
    if fmt == "table":
        body = [
            ["- (not identified)" if label is SectorLabel.UNCLASSIFIED else label.value,
             str(n), f.pct(pct, True)]
            for label, n, pct in rows
        ]
        body.append(["Total", str(census.total), "100" if census.total else "0"])
        return _text_table(["sector", "addresses", "percentage"], body)
    if fmt == "delimited":
        return _delimited(
            ["sector", "addresses", "percentage"],
            [[label.value, str(n), f.real(pct)] for label, n, pct in rows],
        )
    return _records([{"sector": label.value, "addresses": n, "percentage": f.real(pct)} for label, n, pct in rows])


def _render_readings(results: Sequence[ReadingResult], fmt: str, f: _Fmt) -> str:
    objs = [
        {
            "subset": r.subset,
            "reading": r.reading,
            "t_uig_mbit": f.mbit(r.transmission),
            "target_mbit": f.real(r.target_mbit),
            "residual_mbit": f.real(r.residual_mbit),
            "union": f.count(r.union),
            "number": f.count(r.number),
            "union_residual": f.count(r.union_residual),
            "consistency": r.report.describe() or "consistent",
        }
        for r in results
    ]
    cols = ["subset", "reading", "t_uig_mbit", "target_mbit", "residual_mbit",
            "union", "number", "union_residual", "consistency"]
    if fmt == "records":
        return _records(objs)
    rows = [[o[c] for c in cols] for o in objs]
    if fmt == "delimited":
        return _delimited(cols, rows)
    return _text_table(cols, rows)


def _render_decomposition(rows: Sequence[DecompositionRow], fmt: str, f: _Fmt) -> str:
    objs = []
    for r in rows:
        obj = {"year": r.year}
        for name in CELL_ORDER:
            obj[name] = r.cube[CELL_PATTERNS[name]]
        obj["consistency"] = r.report.describe() or "consistent"
        objs.append(obj)
    if fmt == "records":
        return _records(objs)
    cols = ["year", *CELL_ORDER, "consistency"]
    table = [
        [_plain(o["year"])] + [f.count(o[c]) for c in CELL_ORDER] + [o["consistency"]]
        for o in objs
    ]
    if fmt == "delimited":
        return _delimited(cols, table)
    return _text_table(cols, table)


def _render_classification(rows: Sequence[ClassifiedAddress], fmt: str, f: _Fmt) -> str:
    objs = [
        {"id": r.record_id, "address": r.address, "sector": r.sector.value, "tags": sorted(r.tags)}
        for r in rows
    ]
    if fmt == "records":
        return _records(objs)
    cols = ["id", "address", "sector", "tags"]
    table = [[o["id"], o["address"], o["sector"], ";".join(o["tags"])] for o in objs]
    if fmt == "delimited":
        return _delimited(cols, table)
    return _text_table(cols, table)


def _render_trend(t: TrendReport, fmt: str, f: _Fmt) -> str:
    window = "" if t.window is None else f"{t.window[0]}-{t.window[1]}"
    obj = {
        "slope": f.real(t.fit.slope),
        "intercept": f.real(t.fit.intercept),
        "r_squared": f.real(t.fit.r_squared),
        "window": window,
        "points": t.points,
        "mode": t.mode or "",
    }
    if fmt == "records":
        return _records([obj])
    cols = list(obj)
    row = [str(obj[c]) for c in cols]
    if fmt == "delimited":
        return _delimited(cols, [row])
    return _text_table(cols, [row])


_RENDERERS = {
    "systemness": _render_systemness,
    "subsets": _render_subsets,
    "transmission": _render_transmission,
    "counts": _render_counts,
    "census": _render_census,
    "readings": _render_readings,
    "decomposition": _render_decomposition,
    "classification": _render_classification,
    "trend": _render_trend,
}
