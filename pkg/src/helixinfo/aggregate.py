"""Roll labelled address records up into per-subset overlap counts.

A record counts once in U if any of its addresses is a university address,
whatever else it carries; pair and triple cells follow from the set of
distinct sectors on the record.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .classify import (
    SECTORS,
    Coverage,
    HelixConfig,
    SectorLabel,
    classify_address,
    country_tags,
    default_config,
    match_country,
)
from .entropy import InformationValue
from .errors import ConfigurationError, ValidationError
from .overlap import CLOSED7, CountVector, transmission_from_counts

ALL = "All"
INTERNATIONAL = "internationally coauthored"


@dataclass(frozen=True)
class AddressRecord:
    record_id: str
    addresses: tuple[str, ...]
    sector_labels: tuple[SectorLabel, ...]
    country_tags: tuple[frozenset[str], ...]
    countries: tuple[str | None, ...]

    def __post_init__(self):
        if not self.addresses:
            raise ValidationError(f"record {self.record_id!r} has no addresses")
        n = len(self.addresses)
        if not (len(self.sector_labels) == len(self.country_tags) == len(self.countries) == n):
            raise ValidationError(f"record {self.record_id!r}: labels and tags must align with addresses")

    @property
    def sectors(self) -> frozenset[SectorLabel]:
        """Distinct classified sectors on the record."""
        return frozenset(s for s in self.sector_labels if s is not SectorLabel.UNCLASSIFIED)

    @property
    def tags(self) -> frozenset[str]:
        return frozenset().union(*self.country_tags)

    @property
    def distinct_countries(self) -> frozenset[str]:
        return frozenset(c for c in self.countries if c is not None)


def label_record(
    record_id: str,
    addresses: Sequence[str],
    config: HelixConfig | None = None,
    countries: Sequence[str | None] | None = None,
    coverage: Coverage | None = None,
) -> AddressRecord:
    """Classify and country-tag every address of one record.

    ``countries``, when given, aligns with ``addresses`` and overrides the
    country found in the address text; entries may be None.
    """
    cfg = config or default_config()
    addresses = tuple(addresses)
    if countries is not None and len(countries) != len(addresses):
        raise ValidationError(
            f"record {record_id!r}: {len(countries)} countries for {len(addresses)} addresses"
        )
    labels = tuple(classify_address(a, cfg.rules) for a in addresses)
    found: list[str | None] = []
    for k, address in enumerate(addresses):
        if countries is not None and countries[k] is not None:
            country = cfg.gazetteer.lookup(countries[k])
        else:
            country = match_country(address, cfg.gazetteer)
        if coverage is not None:
            coverage.record(country is not None)
        found.append(country)
    tags = tuple(country_tags(c, cfg.groups) for c in found)
    return AddressRecord(str(record_id), addresses, labels, tags, tuple(found))


def _is_international(record: AddressRecord) -> bool:
    return len(record.distinct_countries) >= 2


def international_subset(records: Iterable[AddressRecord]) -> Iterator[AddressRecord]:
    """Records whose recognized addresses span at least two countries."""
    return (r for r in records if _is_international(r))


@dataclass(frozen=True)
class SubsetTable:
    name: str
    records_in_subset: int
    records_identified: int
    counts: CountVector

    @property
    def pct_identified(self) -> float:
        if self.records_in_subset == 0:
            return 0.0
        return 100.0 * self.records_identified / self.records_in_subset

    def transmission(self) -> InformationValue:
        return transmission_from_counts(self.counts, CLOSED7)


_U, _I, _G = SECTORS


@dataclass
class SubsetAccumulator:
    """Partial tallies for one subset; partitions combine with ``merge``."""

    name: str
    records: int = 0
    patterns: Counter = field(default_factory=Counter)

    def add(self, record: AddressRecord) -> None:
        self.records += 1
        sectors = record.sectors
        if sectors:
            self.patterns[sectors] += 1

    def merge(self, other: SubsetAccumulator) -> SubsetAccumulator:
        if other.name != self.name:
            raise ValidationError(f"cannot merge subset {other.name!r} into {self.name!r}")
        return SubsetAccumulator(self.name, self.records + other.records, self.patterns + other.patterns)

    def table(self) -> SubsetTable:
        def having(*wanted):
            return sum(n for s, n in self.patterns.items() if all(w in s for w in wanted))

        counts = CountVector(
            u=having(_U),
            i=having(_I),
            g=having(_G),
            ui=having(_U, _I),
            ug=having(_U, _G),
            ig=having(_I, _G),
            uig=having(_U, _I, _G),
        )
        return SubsetTable(self.name, self.records, sum(self.patterns.values()), counts)


def _member_test(name: str, config: HelixConfig):
    if name == ALL:
        return lambda r: True
    if name == INTERNATIONAL:
        return _is_international
    if name not in config.known_tags:
        raise ConfigurationError(f"unknown subset {name!r}")
    return lambda r: name in r.tags


def accumulate(
    records: Iterable[AddressRecord],
    subsets: Sequence[str],
    config: HelixConfig | None = None,
) -> list[SubsetAccumulator]:
    cfg = config or default_config()
    tests = [(_member_test(name, cfg), SubsetAccumulator(name)) for name in subsets]
    for record in records:
        for belongs, acc in tests:
            if belongs(record):
                acc.add(record)
    return [acc for _, acc in tests]


def aggregate(
    records: Iterable[AddressRecord],
    subsets: Sequence[str],
    config: HelixConfig | None = None,
) -> list[SubsetTable]:
    """One SubsetTable per requested subset, in the order requested.

    Subset names are "All", "internationally coauthored", a group (UK, EU,
    Scandinavia) or a country known to the gazetteer.
    """
    return [acc.table() for acc in accumulate(records, subsets, config)]


@dataclass(frozen=True)
class Census:
    """Address counts per sector label."""

    counts: dict[SectorLabel, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def percentage(self, label: SectorLabel) -> float:
        total = self.total
        return 100.0 * self.counts.get(label, 0) / total if total else 0.0

    def rows(self) -> list[tuple[SectorLabel, int, float]]:
        order = SECTORS + (SectorLabel.UNCLASSIFIED,)
        return [(label, self.counts.get(label, 0), self.percentage(label)) for label in order]


def census_from_counts(counts: dict) -> Census:
    return Census({SectorLabel(k): int(v) for k, v in counts.items()})


def address_census(records: Iterable[AddressRecord]) -> Census:
    tally: Counter = Counter({label: 0 for label in SECTORS + (SectorLabel.UNCLASSIFIED,)})
    for record in records:
        tally.update(record.sector_labels)
    return Census(dict(tally))
