"""Overlapping hit counts <-> exclusive 2x2x2 cells by inclusion-exclusion.

Search engines report how many documents contain each term and each
combination of terms. Those figures overlap; the entropy calculations need
the eight mutually exclusive presence patterns instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .entropy import CellCube, InformationValue, transmission3
from .errors import ConfigurationError, ConsistencyError, ValidationError

STRICT = "strict"
CLAMP = "clamp"
POLICIES = (STRICT, CLAMP)

CUBE = "cube"
CLOSED7 = "closed7"
MODES = (CUBE, CLOSED7)

COUNT_FIELDS = ("u", "i", "g", "ui", "ug", "ig", "uig")

CELL_PATTERNS = {
    "u": (1, 0, 0),
    "i": (0, 1, 0),
    "g": (0, 0, 1),
    "ui": (1, 1, 0),
    "ug": (1, 0, 1),
    "ig": (0, 1, 1),
    "uig": (1, 1, 1),
    "none": (0, 0, 0),
}


@dataclass(frozen=True)
class CountVector:
    """Overlapping counts for one time point or subset.

    ``ui`` is the number of hits containing both U and I (whether or not G is
    also present), and so on. ``total`` is the size of the whole domain.
    """

    u: float
    i: float
    g: float
    ui: float
    ug: float
    ig: float
    uig: float
    total: float | None = None
    year: int | None = None

    def __post_init__(self):
        for name in COUNT_FIELDS + ("total",):
            value = getattr(self, name)
            if value is None and name == "total":
                continue
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value < 0:
                raise ValidationError(f"count {name!r} must be a non-negative number, got {value!r}")

    @property
    def counts(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in COUNT_FIELDS)

    @property
    def union(self) -> float:
        """Hits containing at least one term."""
        return self.u + self.i + self.g - self.ui - self.ug - self.ig + self.uig

    def violations(self) -> list[Violation]:
        """Inequalities that Boolean-consistent counts must satisfy, where broken."""
        checks = [
            ("uig <= ui", self.uig, self.ui),
            ("uig <= ug", self.uig, self.ug),
            ("uig <= ig", self.uig, self.ig),
            ("ui <= u", self.ui, self.u),
            ("ui <= i", self.ui, self.i),
            ("ug <= u", self.ug, self.u),
            ("ug <= g", self.ug, self.g),
            ("ig <= i", self.ig, self.i),
            ("ig <= g", self.ig, self.g),
        ]
        out = [Violation(name, lhs - rhs) for name, lhs, rhs in checks if lhs > rhs]
        if self.total is not None and self.union > self.total:
            out.append(Violation("union <= total", self.union - self.total))
        return out


@dataclass(frozen=True)
class Violation:
    constraint: str
    magnitude: float


@dataclass(frozen=True)
class ClampedCell:
    cell: str
    original: float


@dataclass(frozen=True)
class ConsistencyReport:
    violated_constraints: tuple[Violation, ...] = ()
    clamped_cells: tuple[ClampedCell, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.violated_constraints and not self.clamped_cells

    def describe(self) -> str:
        parts = [f"{v.constraint} violated by {v.magnitude:g}" for v in self.violated_constraints]
        parts += [f"cell {c.cell} clamped from {c.original:g}" for c in self.clamped_cells]
        return "; ".join(parts)


def _check_policy(policy: str) -> None:
    if policy not in POLICIES:
        raise ConfigurationError(f"unknown policy {policy!r}; expected strict or clamp")


def raw_cells(v: CountVector) -> dict[str, float]:
    """Exclusive occupied-cell counts, possibly negative for inconsistent input."""
    return {
        "uig": v.uig,
        "ui": v.ui - v.uig,
        "ug": v.ug - v.uig,
        "ig": v.ig - v.uig,
        "u": v.u - v.ui - v.ug + v.uig,
        "i": v.i - v.ui - v.ig + v.uig,
        "g": v.g - v.ug - v.ig + v.uig,
    }


def decompose(v: CountVector, policy: str = STRICT) -> tuple[CellCube, ConsistencyReport]:
    """Split overlapping counts into the eight exclusive cells.

    Without a total the none-cell is 0. Under ``clamp`` negative cells are
    floored to zero and listed in the report; under ``strict`` they raise.
    A total smaller than the union always raises.
    """
    _check_policy(policy)
    cells = raw_cells(v)
    union = math.fsum(cells.values())
    if v.total is not None and v.total < union:
        raise ConsistencyError(
            f"total {v.total:g} is smaller than the union of the three terms ({union:g})"
        )
    negative = [name for name, c in cells.items() if c < 0]
    if negative and policy == STRICT:
        detail = ", ".join(f"{name}={cells[name]:g}" for name in negative)
        raise ConsistencyError(f"Boolean consistency violated: negative exclusive cell(s) {detail}")

    clamped = [ClampedCell(name, cells[name]) for name in negative]
    for name in negative:
        cells[name] = 0.0
    if v.total is None:
        cells["none"] = 0.0
    else:
        none = v.total - math.fsum(cells.values())
        if none < 0:
            clamped.append(ClampedCell("none", none))
            none = 0.0
        cells["none"] = none

    cube = CellCube.from_mapping({CELL_PATTERNS[name]: c for name, c in cells.items()})
    report = ConsistencyReport(tuple(v.violations()), tuple(clamped))
    return cube, report


def recompose(cube: CellCube, *, keep_total: bool = True, year: int | None = None) -> CountVector:
    """Overlapping counts recovered from exclusive cells.

    ``keep_total=False`` drops the grand total, which is how a vector that had
    no total round-trips.
    """

    def having(*axes):
        return math.fsum(c for pattern, c in cube.items() if all(pattern[a] for a in axes))

    return CountVector(
        u=having(0),
        i=having(1),
        g=having(2),
        ui=having(0, 1),
        ug=having(0, 2),
        ig=having(1, 2),
        uig=having(0, 1, 2),
        total=cube.total if keep_total else None,
        year=year,
    )


def resolve_mode(v: CountVector, mode: str | None) -> str:
    """The normalization actually used: cube when a total is known, else closed7."""
    if mode is None:
        return CUBE if v.total is not None else CLOSED7
    if mode not in MODES:
        raise ConfigurationError(f"unknown normalization mode {mode!r}; expected cube or closed7")
    return mode


def transmission_from_counts(
    v: CountVector,
    mode: str | None = None,
    policy: str = STRICT,
    *,
    exhaustive: bool = False,
) -> InformationValue:
    """Three-way transmission of overlapping counts.

    ``cube`` normalizes over all eight cells and needs the domain total, unless
    ``exhaustive`` asserts that every item carries at least one term (the none-
    cell is then structurally empty). ``closed7`` normalizes over the seven
    occupied patterns only.
    """
    mode = resolve_mode(v, mode)
    if mode == CUBE and v.total is None and not exhaustive:
        raise ConfigurationError(
            "cube mode needs a total, or exhaustive=True when every item carries a term"
        )
    cube, _ = decompose(v, policy)
    if mode == CLOSED7:
        cube = cube.without_none()
    return transmission3(cube)


# Table-3-style published rows: singles are inclusive record counts, pair
# columns may or may not include the triple overlap.

PAIRS_INCLUDE_TRIPLE = "pairs-include-triple"
PAIRS_EXCLUDE_TRIPLE = "pairs-exclude-triple"
READINGS = (PAIRS_INCLUDE_TRIPLE, PAIRS_EXCLUDE_TRIPLE)


@dataclass(frozen=True)
class PublishedRow:
    name: str
    number: float
    ui: float
    ug: float
    ig: float
    uig: float
    univ: float
    ind: float
    gov: float
    t_mbit: float | None = None
    pct_retrieved: float | None = None


def counts_for_reading(row: PublishedRow, reading: str) -> CountVector:
    if reading == PAIRS_INCLUDE_TRIPLE:
        ui, ug, ig = row.ui, row.ug, row.ig
    elif reading == PAIRS_EXCLUDE_TRIPLE:
        ui, ug, ig = row.ui + row.uig, row.ug + row.uig, row.ig + row.uig
    else:
        raise ConfigurationError(f"unknown reading {reading!r}; expected one of {READINGS}")
    return CountVector(row.univ, row.ind, row.gov, ui, ug, ig, row.uig)


@dataclass(frozen=True)
class ReadingResult:
    subset: str
    reading: str
    transmission: InformationValue
    target_mbit: float | None
    union: float
    number: float
    report: ConsistencyReport = field(default_factory=ConsistencyReport)

    @property
    def residual_mbit(self) -> float | None:
        if self.target_mbit is None:
            return None
        return self.transmission.millibits - self.target_mbit

    @property
    def union_residual(self) -> float:
        """How far the reconstructed record union is from the published number."""
        return self.union - self.number


def evaluate_reading(row: PublishedRow, reading: str) -> ReadingResult:
    """T (closed7) for one reading; inconsistent readings are clamped and reported."""
    v = counts_for_reading(row, reading)
    cube, report = decompose(v, CLAMP)
    return ReadingResult(
        subset=row.name,
        reading=reading,
        transmission=transmission3(cube.without_none()),
        target_mbit=row.t_mbit,
        union=cube.total,
        number=row.number,
        report=report,
    )


def interpretation_search(
    rows: Iterable[PublishedRow], readings: Sequence[str] = READINGS
) -> list[ReadingResult]:
    """Evaluate every reading on every row, in row then reading order."""
    return [evaluate_reading(row, reading) for row in rows for reading in readings]


def best_readings(results: Iterable[ReadingResult]) -> dict[str, str]:
    """Per subset, the reading with the smallest absolute residual to its target."""
    best: dict[str, ReadingResult] = {}
    for r in results:
        if r.residual_mbit is None:
            continue
        current = best.get(r.subset)
        if current is None or abs(r.residual_mbit) < abs(current.residual_mbit):
            best[r.subset] = r
    return {name: r.reading for name, r in best.items()}


def with_total(v: CountVector, total: float | None) -> CountVector:
    return replace(v, total=total)
