"""Shannon entropies and transmissions over the 2x2x2 presence/absence cube.

All quantities are in bits (log base 2). Cells may be exactly zero; the
convention 0 * log 0 = 0 applies throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

from .errors import DomainError, ValidationError

TOLERANCE = 1e-9
AXES = ("U", "I", "G")
# (u, i, g) presence patterns; position in this tuple is the cell index.
PATTERNS: tuple[tuple[int, int, int], ...] = tuple(product((0, 1), repeat=3))

AxisSpec = Union[str, Iterable[str]]


@dataclass(frozen=True, order=True)
class InformationValue:
    """An amount of information, stored in bits."""

    bits: float

    def __post_init__(self):
        if not math.isfinite(self.bits):
            raise DomainError(f"information value is not finite: {self.bits!r}")

    @classmethod
    def from_millibits(cls, mbit: float) -> InformationValue:
        return cls(mbit / 1000.0)

    @property
    def millibits(self) -> float:
        return self.bits * 1000.0

    @property
    def nats(self) -> float:
        return self.bits * math.log(2)

    def __float__(self):
        return float(self.bits)

    def __add__(self, other: InformationValue) -> InformationValue:
        return InformationValue(self.bits + other.bits)

    def __sub__(self, other: InformationValue) -> InformationValue:
        return InformationValue(self.bits - other.bits)

    def __neg__(self) -> InformationValue:
        return InformationValue(-self.bits)


@dataclass(frozen=True)
class Distribution:
    """Category probabilities, optionally labelled."""

    probs: tuple[float, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise ValidationError("distribution needs at least one entry")
        for k, p in enumerate(probs):
            if not math.isfinite(p) or p < 0:
                raise ValidationError(f"probability at index {k} is invalid: {p!r}")
        s = math.fsum(probs)
        if abs(s - 1.0) > TOLERANCE:
            raise ValidationError(f"probabilities sum to {s!r}, not 1")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(probs):
                raise ValidationError(
                    f"{len(labels)} labels given for {len(probs)} probabilities"
                )
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_counts(
        cls, counts: Sequence[float], labels: Sequence[str] | None = None
    ) -> Distribution:
        """Normalize non-negative counts to a distribution."""
        counts = [float(c) for c in counts]
        for k, c in enumerate(counts):
            if not math.isfinite(c) or c < 0:
                raise ValidationError(f"count at index {k} is invalid: {c!r}")
        total = math.fsum(counts)
        if total <= 0:
            raise ValidationError("counts sum to zero; no distribution defined")
        return cls(tuple(c / total for c in counts), None if labels is None else tuple(labels))

    def __len__(self):
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, k):
        return self.probs[k]

    def as_dict(self) -> dict[str, float]:
        labels = self.labels or tuple(str(k) for k in range(len(self.probs)))
        return dict(zip(labels, self.probs))


def _pattern_index(pattern: Sequence[int]) -> int:
    if len(pattern) != 3 or any(b not in (0, 1) for b in pattern):
        raise ValidationError(f"cell pattern must be three 0/1 flags, got {pattern!r}")
    u, i, g = pattern
    return 4 * u + 2 * i + g


@dataclass(frozen=True)
class CellCube:
    """Exclusive counts for the eight presence patterns (u, i, g).

    ``cells[4*u + 2*i + g]`` holds the count for pattern (u, i, g); index 0 is
    the none-cell. Counts may be real-valued.
    """

    cells: tuple[float, ...]

    def __post_init__(self):
        cells = tuple(float(c) for c in self.cells)
        if len(cells) != 8:
            raise ValidationError(f"a cell cube has 8 cells, got {len(cells)}")
        for pattern, c in zip(PATTERNS, cells):
            if not math.isfinite(c) or c < 0:
                raise ValidationError(f"cell {pattern} is invalid: {c!r}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_mapping(cls, mapping: Mapping[tuple[int, int, int], float]) -> CellCube:
        cells = [0.0] * 8
        for pattern, count in mapping.items():
            cells[_pattern_index(pattern)] = count
        return cls(tuple(cells))

    def __getitem__(self, pattern: Sequence[int]) -> float:
        return self.cells[_pattern_index(pattern)]

    def items(self):
        return zip(PATTERNS, self.cells)

    @property
    def total(self) -> float:
        return math.fsum(self.cells)

    def scaled(self, factor: float) -> CellCube:
        return CellCube(tuple(c * factor for c in self.cells))

    def without_none(self) -> CellCube:
        return CellCube((0.0,) + self.cells[1:])


def _parse_axes(axes: AxisSpec) -> tuple[int, ...]:
    if isinstance(axes, str):
        names = list(axes.upper())
    else:
        names = [str(a).upper() for a in axes]
    if not names:
        raise ValidationError("axis subset must not be empty")
    out = []
    for name in names:
        if name not in AXES:
            raise ValidationError(f"unknown axis {name!r}; expected one of U, I, G")
        idx = AXES.index(name)
        if idx in out:
            raise ValidationError(f"axis {name!r} given twice")
        out.append(idx)
    return tuple(sorted(out))


def _require_mass(cube: CellCube) -> float:
    total = cube.total
    if total <= 0:
        raise ValidationError("cube total is zero; probabilities undefined")
    return total


def _margin_counts(cube: CellCube, axes: tuple[int, ...]) -> list[float]:
    sums = {key: 0.0 for key in product((0, 1), repeat=len(axes))}
    for pattern, count in cube.items():
        sums[tuple(pattern[a] for a in axes)] += count
    return [sums[key] for key in sorted(sums)]


def _entropy_of_counts(counts: Iterable[float], total: float) -> float:
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def shannon_entropy(d: Distribution) -> InformationValue:
    """H = -sum p log2 p, in bits."""
    h = 0.0
    for p in d.probs:
        if p > 0:
            h -= p * math.log2(p)
    return InformationValue(h + 0.0)


def marginalize(cube: CellCube, axes: AxisSpec) -> Distribution:
    """Distribution over the requested axes, other axes summed out.

    Outcomes are ordered lexicographically on the selected axes in U, I, G
    order, so ``marginalize(cube, "U")`` is (absent, present).
    """
    idx = _parse_axes(axes)
    total = _require_mass(cube)
    counts = _margin_counts(cube, idx)
    labels = [
        ",".join(f"{AXES[a]}{bit}" for a, bit in zip(idx, key))
        for key in product((0, 1), repeat=len(idx))
    ]
    return Distribution(tuple(c / total for c in counts), tuple(labels))


def joint_entropy(cube: CellCube, axes: AxisSpec) -> InformationValue:
    idx = _parse_axes(axes)
    total = _require_mass(cube)
    return InformationValue(_entropy_of_counts(_margin_counts(cube, idx), total))


def transmission2(cube: CellCube, axis_pair: AxisSpec) -> InformationValue:
    """Mutual information between two axes: H_X + H_Y - H_XY."""
    idx = _parse_axes(axis_pair)
    if len(idx) != 2:
        raise ValidationError(f"transmission2 needs exactly two axes, got {axis_pair!r}")
    total = _require_mass(cube)
    hx = _entropy_of_counts(_margin_counts(cube, idx[:1]), total)
    hy = _entropy_of_counts(_margin_counts(cube, idx[1:]), total)
    hxy = _entropy_of_counts(_margin_counts(cube, idx), total)
    return InformationValue(hx + hy - hxy)


def transmission3(cube: CellCube) -> InformationValue:
    """Three-way transmission H_U + H_I + H_G - H_UI - H_IG - H_UG + H_UIG.

    Signed: negative values mean the pairwise relations jointly reduce
    uncertainty.
    """
    total = _require_mass(cube)

    def h(axes):
        return _entropy_of_counts(_margin_counts(cube, axes), total)

    singles = h((0,)) + h((1,)) + h((2,))
    pairs = h((0, 1)) + h((1, 2)) + h((0, 2))
    return InformationValue(singles - pairs + h((0, 1, 2)))


def info_of_message(observed: Distribution, predicted: Distribution) -> InformationValue:
    """Expected information I = sum q log2(q / p) of observation q given prediction p.

    Raises DomainError when the prediction puts zero mass on an observed
    category; floor and renormalize the prediction before calling.
    """
    if len(observed) != len(predicted):
        raise ValidationError(
            f"length mismatch: {len(observed)} observed vs {len(predicted)} predicted categories"
        )
    if observed.labels is not None and predicted.labels is not None:
        if observed.labels != predicted.labels:
            raise ValidationError(
                f"label mismatch: {observed.labels} vs {predicted.labels}"
            )
    total = 0.0
    for k, (q, p) in enumerate(zip(observed.probs, predicted.probs)):
        if q <= 0:
            continue
        if p <= 0:
            raise DomainError(
                f"predicted probability is zero at index {k} where {q!r} was observed; "
                "smooth the prediction first"
            )
        total += q * math.log2(q / p)
    # Gibbs' inequality: negatives are rounding noise.
    return InformationValue(max(total, 0.0))
