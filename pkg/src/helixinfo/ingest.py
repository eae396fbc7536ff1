"""Readers for count files and line-delimited record files."""
from __future__ import annotations

import csv
import json
import math
from importlib import resources
from pathlib import Path
from typing import Iterator

from .aggregate import AddressRecord, label_record
from .classify import Coverage, HelixConfig, default_config
from .errors import ParseError, ValidationError
from .overlap import COUNT_FIELDS, CountVector, PublishedRow
from .systemness import SeriesFrame

COUNT_HEADER = ("year",) + COUNT_FIELDS
BUNDLED = {
    "table5": "table5_uspto.csv",
    "table3": "table3_sci2000.csv",
    "table1": "table1_systemness.csv",
    "table2": "table2_census.csv",
    "corpus": "address_corpus.csv",
}


def bundled_path(name: str):
    """Traversable for one of the data files shipped with the package."""
    return resources.files("helixinfo.data").joinpath(BUNDLED.get(name, name))


def _number(text: str, column: str, line: int, path) -> int | float:
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"column {column!r}: {text!r} is not a number", line, path) from None
    if not math.isfinite(value):
        raise ParseError(f"column {column!r}: {text!r} is not finite", line, path)
    return value


def _open_text(path):
    if hasattr(path, "open") and not isinstance(path, (str, Path)):
        return path.open("r", encoding="utf-8", newline="")
    return open(path, "r", encoding="utf-8", newline="")


def ingest_counts(path, category_mode: str = "seven") -> SeriesFrame:
    """Read ``year,u,i,g,ui,ug,ig,uig[,total]`` rows into a SeriesFrame.

    Rows are sorted by year. Boolean consistency is not checked here; that
    happens when the counts are decomposed.
    """
    vectors = []
    seen: dict[int, int] = {}
    with _open_text(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("file is empty; expected a header row", 1, path)
        header = tuple(h.strip().lower() for h in header)
        has_total = header == COUNT_HEADER + ("total",)
        if header != COUNT_HEADER and not has_total:
            raise ParseError(
                f"header must be {','.join(COUNT_HEADER)}[,total], got {','.join(header)}", 1, path
            )
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line, path)
            year = _number(row[0], "year", line, path)
            if not isinstance(year, int):
                raise ParseError(f"year {row[0]!r} is not an integer", line, path)
            if year in seen:
                raise ParseError(f"duplicate year {year} (first on line {seen[year]})", line, path)
            seen[year] = line
            counts = [_number(cell, col, line, path) for cell, col in zip(row[1:8], COUNT_FIELDS)]
            total = None
            if has_total and row[8].strip():
                total = _number(row[8], "total", line, path)
            try:
                vectors.append(CountVector(*counts, total=total, year=year))
            except ValidationError as exc:
                raise ParseError(str(exc), line, path) from None
    if not vectors:
        raise ValidationError(f"{path}: no data rows; the frame would be empty")
    return SeriesFrame.from_vectors(vectors, category_mode)


def ingest_published_rows(path=None) -> list:
    """Table-3-shaped rows (subset,number,pct_retrieved,t_mbit,ui,ug,ig,uig,univ,ind,gov)."""
    path = bundled_path("table3") if path is None else path
    required = ("subset", "number", "ui", "ug", "ig", "uig", "univ", "ind", "gov")
    rows = []
    with _open_text(path) as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in required if c not in (reader.fieldnames or ())]
        if missing:
            raise ParseError(f"missing columns {missing}", 1, path)
        for rec in reader:
            line = reader.line_num

            def num(col, optional=False):
                text = (rec.get(col) or "").strip()
                if optional and not text:
                    return None
                return _number(text, col, line, path)

            rows.append(
                PublishedRow(
                    name=rec["subset"].strip(),
                    number=num("number"),
                    ui=num("ui"), ug=num("ug"), ig=num("ig"), uig=num("uig"),
                    univ=num("univ"), ind=num("ind"), gov=num("gov"),
                    t_mbit=num("t_mbit", optional=True),
                    pct_retrieved=num("pct_retrieved", optional=True),
                )
            )
    return rows


def _parse_record_line(text: str, line: int, path) -> tuple[str, list[str], list | None]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON ({exc.msg})", line, path) from None
    if not isinstance(obj, dict):
        raise ParseError("record must be a JSON object", line, path)
    for name in ("id", "addresses"):
        if name not in obj:
            raise ParseError(f"missing field {name!r}", line, path)
    addresses = obj["addresses"]
    if (
        not isinstance(addresses, list)
        or not addresses
        or not all(isinstance(a, str) and a.strip() for a in addresses)
    ):
        raise ParseError("field 'addresses' must be a non-empty list of non-empty strings", line, path)
    countries = obj.get("countries")
    if countries is not None:
        if not isinstance(countries, list) or not all(c is None or isinstance(c, str) for c in countries):
            raise ParseError("field 'countries' must be a list of strings or nulls", line, path)
        if len(countries) != len(addresses):
            raise ParseError(
                f"field 'countries' has {len(countries)} entries for {len(addresses)} addresses",
                line,
                path,
            )
    return str(obj["id"]), addresses, countries


def ingest_records(
    path,
    config: HelixConfig | None = None,
    *,
    skip_malformed: bool = False,
    skipped: list | None = None,
    coverage: Coverage | None = None,
) -> Iterator[AddressRecord]:
    """Stream labelled records from a JSON-lines file, one record per line.

    Each line holds ``{"id": ..., "addresses": [...], "countries": [...]}``
    with ``countries`` optional and aligned to ``addresses``. With
    ``skip_malformed`` bad lines are appended to ``skipped`` instead of
    raising.
    """
    cfg = config or default_config()
    with _open_text(path) as fh:
        for line, text in enumerate(fh, start=1):
            if not text.strip():
                continue
            try:
                record_id, addresses, countries = _parse_record_line(text, line, path)
            except ParseError as exc:
                if not skip_malformed:
                    raise
                if skipped is not None:
                    skipped.append(exc)
                continue
            yield label_record(record_id, addresses, cfg, countries, coverage)
