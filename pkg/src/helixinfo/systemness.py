"""Markov versus univariate-trend prediction of next-period category shares.

If a set of categories develops as one system, last period's distribution
should predict the next one better than extrapolating each category on its
own. Both predictions are scored by the information of the message against
what was actually observed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Sequence

from .entropy import Distribution, InformationValue, info_of_message, transmission2, transmission3
from .errors import ConfigurationError, ConsistencyError, DegenerateDistributionError, ValidationError
from .overlap import POLICIES, STRICT, CountVector, decompose, raw_cells, resolve_mode

CATEGORY_MODES: dict[str, tuple[str, ...]] = {
    "seven": ("u", "i", "g", "ui", "ug", "ig", "uig"),
    "four": ("ui", "ug", "ig", "uig"),
    "three": ("ui", "ug", "ig"),
}
METHODS = ("linear", "loglinear")
BASES = ("shares", "counts")

SMOOTHING_FLOOR = 1e-6
VERDICT_TOLERANCE_MBIT = 0.005
# start years whose information differs by less than this count as tied
TIE_TOLERANCE_BITS = 1e-12


class Verdict(str, Enum):
    CORROBORATED = "corroborated"
    REJECTED = "rejected"
    INDETERMINATE = "indeterminate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SeriesFrame:
    """Year-indexed overlap counts for one data source."""

    years: tuple[int, ...]
    vectors: tuple[CountVector, ...]
    category_mode: str = "seven"

    def __post_init__(self):
        years = tuple(int(y) for y in self.years)
        vectors = tuple(self.vectors)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "vectors", vectors)
        if len(years) != len(vectors):
            raise ValidationError(f"{len(years)} years for {len(vectors)} count vectors")
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValidationError("years must be strictly increasing")
        if self.category_mode not in CATEGORY_MODES:
            raise ConfigurationError(
                f"unknown category mode {self.category_mode!r}; expected one of {tuple(CATEGORY_MODES)}"
            )

    @classmethod
    def from_vectors(cls, vectors: Iterable[CountVector], category_mode: str = "seven") -> SeriesFrame:
        vectors = sorted(vectors, key=lambda v: v.year if v.year is not None else -math.inf)
        if any(v.year is None for v in vectors):
            raise ValidationError("every count vector needs a year")
        return cls(tuple(v.year for v in vectors), tuple(vectors), category_mode)

    def with_mode(self, category_mode: str) -> SeriesFrame:
        return SeriesFrame(self.years, self.vectors, category_mode)

    @property
    def categories(self) -> tuple[str, ...]:
        return CATEGORY_MODES[self.category_mode]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.upper() for c in self.categories)

    def __len__(self):
        return len(self.years)

    def __contains__(self, year):
        return year in self.years

    def vector(self, year: int) -> CountVector:
        try:
            return self.vectors[self.years.index(year)]
        except ValueError:
            raise ValidationError(f"year {year} is not in the frame") from None

    def category_counts(self, year: int, policy: str = STRICT) -> list[float]:
        """Exclusive counts of the selected categories for one year."""
        if policy not in POLICIES:
            raise ConfigurationError(f"unknown policy {policy!r}; expected strict or clamp")
        v = self.vector(year)
        cells = raw_cells(v)
        negative = [c for c in self.categories if cells[c] < 0]
        if negative:
            if policy == STRICT:
                raise ConsistencyError(
                    f"year {year}: Boolean consistency violated for cell(s) {', '.join(negative)}"
                )
            for c in negative:
                cells[c] = 0.0
        return [float(cells[c]) for c in self.categories]


def observed_distribution(frame: SeriesFrame, year: int, policy: str = STRICT) -> Distribution:
    counts = frame.category_counts(year, policy)
    if math.fsum(counts) <= 0:
        raise DegenerateDistributionError(
            f"year {year}: all {frame.category_mode}-mode categories are zero"
        )
    return Distribution.from_counts(counts, frame.labels)


def predict_markov(frame: SeriesFrame, target_year: int, policy: str = STRICT) -> Distribution:
    """Last period's observation as the prediction for the next."""
    if target_year - 1 not in frame:
        raise ValidationError(f"Markov prediction of {target_year} needs year {target_year - 1}")
    return observed_distribution(frame, target_year - 1, policy)


def _ols(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ValidationError("x values are constant; slope undefined")
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, my - slope * mx


def _window(frame: SeriesFrame, target_year: int, start_year: int) -> list[int]:
    if start_year > target_year - 2:
        raise ValidationError(
            f"start year {start_year} leaves fewer than 2 fitting points before {target_year}"
        )
    years = list(range(start_year, target_year))
    missing = [y for y in years if y not in frame]
    if missing:
        raise ValidationError(f"window {start_year}-{target_year - 1} lacks years {missing}")
    return years


def _floor_and_normalize(values: Sequence[float], labels) -> Distribution:
    floored = [v if v > SMOOTHING_FLOOR else SMOOTHING_FLOOR for v in values]
    total = math.fsum(floored)
    return Distribution(tuple(v / total for v in floored), labels)


def predict_timeseries(
    frame: SeriesFrame,
    target_year: int,
    start_year: int,
    *,
    method: str = "linear",
    basis: str = "shares",
    policy: str = STRICT,
) -> Distribution:
    """Extrapolate each category separately from [start_year, target_year - 1].

    ``method="linear"`` fits an OLS line to the series; ``"loglinear"`` fits
    it to the logarithm. ``basis`` chooses whether the series are relative
    frequencies (default) or raw counts. Extrapolated values below 1e-6 are
    floored before renormalizing.
    """
    if method not in METHODS:
        raise ConfigurationError(f"unknown method {method!r}; expected one of {METHODS}")
    if basis not in BASES:
        raise ConfigurationError(f"unknown basis {basis!r}; expected one of {BASES}")
    years = _window(frame, target_year, start_year)
    if basis == "shares":
        rows = [observed_distribution(frame, y, policy).probs for y in years]
    else:
        rows = [frame.category_counts(y, policy) for y in years]

    predicted = []
    for k in range(len(frame.categories)):
        series = [row[k] for row in rows]
        if method == "loglinear":
            series = [math.log(max(s, SMOOTHING_FLOOR)) for s in series]
        slope, intercept = _ols(years, series)
        value = intercept + slope * target_year
        predicted.append(math.exp(value) if method == "loglinear" else value)
    return _floor_and_normalize(predicted, frame.labels)


def admissible_start_years(frame: SeriesFrame, target_year: int) -> list[int]:
    """Start years leaving at least two contiguous fitting points before the target."""
    out = []
    for y in frame.years:
        if y > target_year - 2:
            break
        if all(k in frame for k in range(y, target_year)):
            out.append(y)
    return out


def scan_start_years(frame: SeriesFrame, target_year: int, **kwargs) -> list[tuple[int, InformationValue]]:
    """Information of the trend prediction for every admissible start year."""
    observed = observed_distribution(frame, target_year, kwargs.get("policy", STRICT))
    return [
        (start, info_of_message(observed, predict_timeseries(frame, target_year, start, **kwargs)))
        for start in admissible_start_years(frame, target_year)
    ]


def best_start_prediction(frame: SeriesFrame, target_year: int, **kwargs) -> tuple[Distribution, int]:
    """The trend prediction that fits the observed target best.

    Picking the best start year makes the trend model as strong as possible,
    so the systemness hypothesis faces its hardest test. Ties go to the
    earliest start year.
    """
    starts = admissible_start_years(frame, target_year)
    if not starts:
        raise ValidationError(
            f"no start year leaves two contiguous years of history before {target_year}"
        )
    observed = observed_distribution(frame, target_year, kwargs.get("policy", STRICT))
    best = None
    for start in starts:
        prediction = predict_timeseries(frame, target_year, start, **kwargs)
        info = info_of_message(observed, prediction).bits
        if best is None or info < best[0] - TIE_TOLERANCE_BITS:
            best = (info, prediction, start)
    return best[1], best[2]


def verdict_for(statistic: InformationValue) -> Verdict:
    mbit = statistic.millibits
    if abs(mbit) < VERDICT_TOLERANCE_MBIT:
        return Verdict.INDETERMINATE
    return Verdict.CORROBORATED if mbit > 0 else Verdict.REJECTED


@dataclass(frozen=True)
class SystemnessResult:
    i_timeseries: InformationValue
    i_markov: InformationValue
    statistic: InformationValue
    verdict: Verdict
    chosen_start_year: int | None = None
    target_year: int | None = None
    category_mode: str | None = None
    method: str = "linear"

    @classmethod
    def from_values(
        cls, i_timeseries: InformationValue, i_markov: InformationValue, **kwargs
    ) -> SystemnessResult:
        statistic = i_timeseries - i_markov
        return cls(i_timeseries, i_markov, statistic, verdict_for(statistic), **kwargs)


def systemness_test(
    frame: SeriesFrame,
    target_year: int,
    *,
    method: str = "linear",
    basis: str = "shares",
    policy: str = STRICT,
) -> SystemnessResult:
    """Positive statistic: the Markov prediction wins and systemness is corroborated."""
    observed = observed_distribution(frame, target_year, policy)
    ts_prediction, start = best_start_prediction(
        frame, target_year, method=method, basis=basis, policy=policy
    )
    markov = predict_markov(frame, target_year, policy)
    return SystemnessResult.from_values(
        info_of_message(observed, ts_prediction),
        info_of_message(observed, markov),
        chosen_start_year=start,
        target_year=target_year,
        category_mode=frame.category_mode,
        method=method,
    )


class TrendFit(NamedTuple):
    slope: float
    intercept: float
    r_squared: float


def trend_fit(
    series: Mapping[int, float] | Iterable[tuple[float, float]],
    window: tuple[int, int] | None = None,
) -> TrendFit:
    """Least-squares line through (year, value) points with its r².

    ``window`` is an inclusive (first, last) year range. A constant series has
    r² = 0.
    """
    pairs = list(series.items()) if isinstance(series, Mapping) else list(series)
    if window is not None:
        lo, hi = window
        pairs = [(x, y) for x, y in pairs if lo <= x <= hi]
    if len(pairs) < 2:
        raise ValidationError(f"trend fit needs at least 2 points, got {len(pairs)}")
    xs = [float(x) for x, _ in pairs]
    ys = [float(y) for _, y in pairs]
    slope, intercept = _ols(xs, ys)
    my = math.fsum(ys) / len(ys)
    ss_tot = math.fsum((y - my) ** 2 for y in ys)
    if ss_tot == 0:
        return TrendFit(0.0, my, 0.0)
    ss_res = math.fsum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    return TrendFit(slope, intercept, max(0.0, 1.0 - ss_res / ss_tot))


@dataclass(frozen=True)
class TransmissionRow:
    year: int | None
    mode: str
    t_uig: InformationValue
    t_ui: InformationValue
    t_ug: InformationValue
    t_ig: InformationValue


def transmission_row(
    v: CountVector, mode: str | None = None, policy: str = STRICT, *, exhaustive: bool = False
) -> TransmissionRow:
    """Bilateral and trilateral transmissions of one count vector."""
    mode = resolve_mode(v, mode)
    if mode == "cube" and v.total is None and not exhaustive:
        raise ConfigurationError(
            "cube mode needs a total, or exhaustive=True when every item carries a term"
        )
    cube, _ = decompose(v, policy)
    if mode == "closed7":
        cube = cube.without_none()
    return TransmissionRow(
        v.year,
        mode,
        transmission3(cube),
        transmission2(cube, "UI"),
        transmission2(cube, "UG"),
        transmission2(cube, "IG"),
    )


def transmission_series(
    frame: SeriesFrame, mode: str | None = None, policy: str = STRICT, *, exhaustive: bool = False
) -> list[TransmissionRow]:
    return [transmission_row(v, mode, policy, exhaustive=exhaustive) for v in frame.vectors]
