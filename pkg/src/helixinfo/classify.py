"""Rule-based University / Industry / Government attribution of addresses.

Sectors are tried in precedence order and the first one with a matching
identifier wins, so "UNIV HOSP" is a university address even though HOSP
is a government identifier.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ConfigurationError, ValidationError


class SectorLabel(str, Enum):
    UNIVERSITY = "University"
    INDUSTRY = "Industry"
    GOVERNMENT = "Government"
    UNCLASSIFIED = "Unclassified"

    def __str__(self):
        return self.value


SECTORS = (SectorLabel.UNIVERSITY, SectorLabel.INDUSTRY, SectorLabel.GOVERNMENT)
MATCH_MODES = ("token", "prefix", "substring")
PRESETS = ("default", "portuguese", "german", "dutch")

_TOKEN = re.compile(r"\w+")


def tokenize(address: str) -> list[str]:
    """Uppercased tokens split on whitespace and punctuation."""
    return _TOKEN.findall(address.upper())


def _normalize_tokens(tokens: Iterable[str]) -> tuple[str, ...]:
    return tuple(t.strip().upper() for t in tokens if t.strip())


@dataclass(frozen=True)
class RuleSet:
    """Identifier tokens per sector.

    A trailing ``*`` makes an entry a prefix (``Universit*`` matches
    UNIVERSITEIT and UNIVERSITAT) whatever the match mode.
    """

    university_tokens: tuple[str, ...]
    industry_tokens: tuple[str, ...]
    government_tokens: tuple[str, ...]
    precedence: tuple[SectorLabel, ...] = SECTORS
    match: str = "token"

    def __post_init__(self):
        for name in ("university_tokens", "industry_tokens", "government_tokens"):
            tokens = _normalize_tokens(getattr(self, name))
            if not tokens:
                raise ConfigurationError(f"{name} must not be empty")
            object.__setattr__(self, name, tokens)
        try:
            precedence = tuple(SectorLabel(p) for p in self.precedence)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        if sorted(precedence) != sorted(SECTORS):
            raise ConfigurationError(
                f"precedence must order University, Industry and Government exactly once, got {precedence}"
            )
        object.__setattr__(self, "precedence", precedence)
        if self.match not in MATCH_MODES:
            raise ConfigurationError(f"unknown match mode {self.match!r}; expected one of {MATCH_MODES}")
        seen: dict[str, SectorLabel] = {}
        for sector in SECTORS:
            for token in self.tokens_for(sector):
                if token in seen and seen[token] != sector:
                    raise ConfigurationError(
                        f"token {token!r} listed for both {seen[token]} and {sector}"
                    )
                seen[token] = sector

    def tokens_for(self, sector: SectorLabel) -> tuple[str, ...]:
        return {
            SectorLabel.UNIVERSITY: self.university_tokens,
            SectorLabel.INDUSTRY: self.industry_tokens,
            SectorLabel.GOVERNMENT: self.government_tokens,
        }[sector]

    def matches(self, sector: SectorLabel, address: str, tokens: list[str] | None = None) -> bool:
        upper = address.upper()
        if tokens is None:
            tokens = tokenize(address)
        for rule in self.tokens_for(sector):
            if rule.endswith("*"):
                stem = rule[:-1]
                if any(t.startswith(stem) for t in tokens):
                    return True
            elif self.match == "token":
                if rule in tokens:
                    return True
            elif self.match == "prefix":
                if any(t.startswith(rule) for t in tokens):
                    return True
            elif rule in upper:
                return True
        return False


@dataclass(frozen=True)
class CountryGroups:
    uk_members: frozenset[str]
    eu_members: frozenset[str]
    scandinavia_members: frozenset[str]

    def __post_init__(self):
        for name in ("uk_members", "eu_members", "scandinavia_members"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.uk_members <= self.eu_members:
            raise ConfigurationError("every UK member must also be an EU member")

    @property
    def names(self) -> tuple[str, ...]:
        return ("UK", "EU", "Scandinavia")

    def groups_for(self, country: str) -> frozenset[str]:
        out = set()
        if country in self.uk_members:
            out.add("UK")
        if country in self.eu_members:
            out.add("EU")
        if country in self.scandinavia_members:
            out.add("Scandinavia")
        return frozenset(out)


def _alias_key(text: str) -> str:
    return text.strip().rstrip(".").upper()


@dataclass(frozen=True)
class Gazetteer:
    """Country names and their spellings in address strings."""

    aliases: Mapping[str, str]  # uppercased alias -> canonical country
    us_states: frozenset[str] = frozenset()
    us_name: str = "USA"

    @classmethod
    def from_mapping(cls, names: Mapping[str, Iterable[str]], us_states: Iterable[str] = ()):
        aliases: dict[str, str] = {}
        for canonical, spellings in names.items():
            for alias in list(spellings) + [canonical]:
                key = _alias_key(alias)
                if key in aliases and aliases[key] != canonical:
                    raise ConfigurationError(f"alias {alias!r} maps to {aliases[key]} and {canonical}")
                aliases[key] = canonical
        return cls(aliases, frozenset(s.upper() for s in us_states))

    @property
    def countries(self) -> frozenset[str]:
        return frozenset(self.aliases.values())

    def lookup(self, name: str) -> str | None:
        """Canonical country for a free-text country field, or None."""
        field_ = _alias_key(name)
        if not field_:
            return None
        words = field_.split()
        # "MA 02115 USA": try the longest trailing phrase first
        for start in range(len(words)):
            hit = self.aliases.get(" ".join(words[start:]))
            if hit is not None:
                return hit
        if self.us_states and _US_STATE.match(field_) and words[0] in self.us_states:
            return self.us_name
        return None


_US_STATE = re.compile(r"^[A-Z]{2}(\s+\d{5}(-\d{4})?)?$")


@dataclass
class Coverage:
    """Running tally of country-tagging hits and misses."""

    matched: int = 0
    unmatched: int = 0

    def record(self, hit: bool) -> None:
        if hit:
            self.matched += 1
        else:
            self.unmatched += 1

    @property
    def rate(self) -> float:
        n = self.matched + self.unmatched
        return self.matched / n if n else 0.0


@dataclass(frozen=True)
class HelixConfig:
    rules: RuleSet
    groups: CountryGroups
    gazetteer: Gazetteer
    name: str = "default"

    @property
    def known_tags(self) -> frozenset[str]:
        return self.gazetteer.countries | frozenset(self.groups.names)


def classify_address(address: str, rules: RuleSet | None = None) -> SectorLabel:
    if rules is None:
        rules = default_config().rules
    if not isinstance(address, str) or not address.strip():
        raise ValidationError("address must be a non-empty string")
    tokens = tokenize(address)
    for sector in rules.precedence:
        if rules.matches(sector, address, tokens):
            return sector
    return SectorLabel.UNCLASSIFIED


def match_country(address: str, gazetteer: Gazetteer) -> str | None:
    """Country named in the last comma-separated field of an address."""
    return gazetteer.lookup(address.rsplit(",", 1)[-1])


def country_tags(country: str | None, groups: CountryGroups) -> frozenset[str]:
    if country is None:
        return frozenset()
    return frozenset({country}) | groups.groups_for(country)


def tag_countries(
    address: str,
    groups: CountryGroups | None = None,
    gazetteer: Gazetteer | None = None,
    coverage: Coverage | None = None,
) -> frozenset[str]:
    """Country tag plus every group containing it; empty when unrecognized."""
    if not isinstance(address, str) or not address.strip():
        raise ValidationError("address must be a non-empty string")
    if groups is None or gazetteer is None:
        cfg = default_config()
        groups = groups or cfg.groups
        gazetteer = gazetteer or cfg.gazetteer
    country = match_country(address, gazetteer)
    if coverage is not None:
        coverage.record(country is not None)
    return country_tags(country, groups)


def _parse_config(data: Mapping, name: str, base: HelixConfig | None) -> HelixConfig:
    if not isinstance(data, Mapping):
        raise ConfigurationError(f"{name}: configuration must be an object")
    try:
        sectors = data["sectors"]
        rules = RuleSet(
            university_tokens=tuple(sectors["University"]),
            industry_tokens=tuple(sectors["Industry"]),
            government_tokens=tuple(sectors["Government"]),
            precedence=tuple(data.get("precedence", [s.value for s in SECTORS])),
            match=data.get("match", "token"),
        )
    except KeyError as exc:
        raise ConfigurationError(f"{name}: missing key {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"{name}: {exc}") from None

    if "country_groups" in data:
        cg = data["country_groups"]
        try:
            groups = CountryGroups(cg["UK"], cg["EU"], cg["Scandinavia"])
        except KeyError as exc:
            raise ConfigurationError(f"{name}: country_groups missing {exc}") from None
    elif base is not None:
        groups = base.groups
    else:
        raise ConfigurationError(f"{name}: missing country_groups")

    if "gazetteer" in data:
        gazetteer = Gazetteer.from_mapping(data["gazetteer"], data.get("us_states", ()))
    elif base is not None:
        gazetteer = base.gazetteer
    else:
        raise ConfigurationError(f"{name}: missing gazetteer")
    return HelixConfig(rules, groups, gazetteer, name)


_DEFAULT: HelixConfig | None = None


def default_config() -> HelixConfig:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_preset("default")
    return _DEFAULT


def load_preset(name: str) -> HelixConfig:
    """One of the bundled rule presets (default, portuguese, german, dutch)."""
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset {name!r}; expected one of {PRESETS}")
    text = resources.files("helixinfo.data").joinpath("rules", f"{name}.json").read_text("utf-8")
    base = None if name == "default" else default_config()
    return _parse_config(json.loads(text), name, base)


def load_config(path: str | Path) -> HelixConfig:
    """Read a rules file; country sections fall back to the bundled defaults."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: not valid JSON ({exc})") from None
    return _parse_config(data, str(path), default_config())
