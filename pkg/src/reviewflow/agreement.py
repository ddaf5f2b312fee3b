"""Inter-rater agreement metrics and the escalation threshold policy.

Cohen's kappa is defined for exactly two raters with complete ratings;
Krippendorff's alpha (nominal data, coincidence-matrix form) tolerates
missing cells and more raters.  Either can be degenerate: kappa when the
expected agreement is 1, alpha when all pairable values fall in one
category.  Degeneracy is reported explicitly instead of dividing by
zero, because this number decides whether a third reviewer is recruited.
"""

from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import (
    AgreementError,
    MissingValues,
    NoPairableValues,
    RaterCountUnsupported,
)


class AgreementMetric(Enum):
    PERCENT_AGREEMENT = "percent"
    COHEN_KAPPA = "kappa"
    KRIPPENDORFF_ALPHA = "alpha"


class AgreementScope(Enum):
    """Which answers feed the ratings matrix."""

    ESSENTIAL_ROOTS = "essential_roots"
    STATUSES = "statuses"


class Recommendation(Enum):
    SUFFICIENT = "sufficient"
    RECRUIT_THIRD_REVIEWER = "recruit_third_reviewer"


@dataclass(frozen=True)
class RatingsMatrix:
    """Nominal ratings, raters x units; absent cells are missing values."""

    raters: tuple[str, ...]
    units: tuple[str, ...]
    values: Mapping[tuple[str, str], str]
    domain: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "raters", tuple(self.raters))
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "domain", tuple(self.domain))
        if len(self.raters) < 2:
            raise RaterCountUnsupported("a ratings matrix needs at least two raters")
        if not self.units:
            raise AgreementError("a ratings matrix needs at least one unit")
        for rater, unit in self.values:
            if rater not in self.raters or unit not in self.units:
                raise AgreementError(
                    f"cell ({rater!r}, {unit!r}) names an unknown rater or unit"
                )
        if self.domain:
            bad = sorted({v for v in self.values.values() if v not in self.domain})
            if bad:
                raise AgreementError(f"values outside the rating domain: {bad}")


def _two_complete(matrix: RatingsMatrix) -> tuple[list[str], list[str]]:
    if len(matrix.raters) != 2:
        raise RaterCountUnsupported(
            f"operation defined for exactly 2 raters, matrix has {len(matrix.raters)}"
        )
    first, second = matrix.raters
    gaps = [
        unit
        for unit in matrix.units
        if (first, unit) not in matrix.values or (second, unit) not in matrix.values
    ]
    if gaps:
        raise MissingValues("units missing a rating: " + ", ".join(gaps))
    return (
        [matrix.values[(first, unit)] for unit in matrix.units],
        [matrix.values[(second, unit)] for unit in matrix.units],
    )


def percent_agreement(matrix: RatingsMatrix) -> float:
    """Fraction of units the two raters rated identically."""
    a, b = _two_complete(matrix)
    return sum(x == y for x, y in zip(a, b)) / len(a)


def cohen_kappa(matrix: RatingsMatrix) -> float | None:
    """kappa = (p_o - p_e) / (1 - p_e); None when p_e = 1 (degenerate)."""
    a, b = _two_complete(matrix)
    n = len(a)
    p_o = sum(x == y for x, y in zip(a, b)) / n
    count_a = Counter(a)
    count_b = Counter(b)
    p_e = sum(count_a[c] * count_b.get(c, 0) for c in count_a) / (n * n)
    if p_e == 1.0:
        return None
    return (p_o - p_e) / (1.0 - p_e)


def _pairable_units(matrix: RatingsMatrix) -> list[list[str]]:
    out = []
    for unit in matrix.units:
        vals = [
            matrix.values[(rater, unit)]
            for rater in matrix.raters
            if (rater, unit) in matrix.values
        ]
        if len(vals) >= 2:
            out.append(vals)
    return out


def krippendorff_alpha(matrix: RatingsMatrix) -> float | None:
    """Nominal-data alpha = 1 - D_o/D_e over the coincidence matrix.

    None when every pairable value falls in a single category (D_e = 0).
    """
    units = _pairable_units(matrix)
    if not units:
        raise NoPairableValues("no unit carries two or more ratings")

    coincidence: dict[tuple[str, str], float] = defaultdict(float)
    n_total = 0.0
    for vals in units:
        weight = 1.0 / (len(vals) - 1)
        for i, x in enumerate(vals):
            for j, y in enumerate(vals):
                if i != j:
                    coincidence[(x, y)] += weight
        n_total += len(vals)

    totals: dict[str, float] = defaultdict(float)
    for (x, _), v in coincidence.items():
        totals[x] += v
    if len(totals) <= 1:
        return None

    d_o = sum(v for (x, y), v in coincidence.items() if x != y) / n_total
    d_e = sum(
        totals[x] * totals[y] for x in totals for y in totals if x != y
    ) / (n_total * (n_total - 1.0))
    return 1.0 - d_o / d_e


def _pairwise_share(matrix: RatingsMatrix) -> float:
    """Share of agreeing rater pairs across units; equals two-rater
    percent agreement on a complete two-rater matrix."""
    agree = 0
    total = 0
    for vals in _pairable_units(matrix):
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                total += 1
                agree += vals[i] == vals[j]
    if total == 0:
        raise NoPairableValues("no unit carries two or more ratings")
    return agree / total


_RANGES = {
    AgreementMetric.PERCENT_AGREEMENT: (0.0, 1.0),
    AgreementMetric.COHEN_KAPPA: (-1.0, 1.0),
    AgreementMetric.KRIPPENDORFF_ALPHA: (-1.0, 1.0),
}


@dataclass(frozen=True)
class ThresholdPolicy:
    metric: AgreementMetric = AgreementMetric.COHEN_KAPPA
    threshold: float = 0.6
    scope: AgreementScope = AgreementScope.ESSENTIAL_ROOTS
    treat_degenerate_as_pass: bool = True

    def __post_init__(self) -> None:
        lo, hi = _RANGES[self.metric]
        if not lo <= self.threshold <= hi:
            raise AgreementError(
                f"threshold {self.threshold} outside [{lo}, {hi}] for {self.metric.value}"
            )


@dataclass(frozen=True)
class AgreementReport:
    percent: float
    kappa: float | None
    alpha: float | None
    degenerate: bool
    recommendation: Recommendation

    def to_json(self) -> dict:
        return {
            "percent": self.percent,
            "kappa": self.kappa,
            "alpha": self.alpha,
            "degenerate": self.degenerate,
            "recommendation": self.recommendation.value,
        }


def evaluate_threshold(matrix: RatingsMatrix, policy: ThresholdPolicy) -> AgreementReport:
    """Compute the policy metric and recommend escalation when it falls
    strictly below the threshold.

    A degenerate metric cannot be compared against the threshold; the
    policy flag decides (pass when agreement is in fact perfect).
    """
    percent = _pairwise_share(matrix)
    soft_kappa = None
    if len(matrix.raters) == 2:
        try:
            soft_kappa = cohen_kappa(matrix)
        except MissingValues:
            soft_kappa = None
    alpha = krippendorff_alpha(matrix)

    if policy.metric is AgreementMetric.PERCENT_AGREEMENT:
        value: float | None = percent
    elif policy.metric is AgreementMetric.COHEN_KAPPA:
        value = cohen_kappa(matrix)
        soft_kappa = value
    else:
        value = alpha

    degenerate = policy.metric is not AgreementMetric.PERCENT_AGREEMENT and value is None
    if degenerate:
        passed = policy.treat_degenerate_as_pass and percent == 1.0
        recommendation = (
            Recommendation.SUFFICIENT if passed else Recommendation.RECRUIT_THIRD_REVIEWER
        )
    else:
        recommendation = (
            Recommendation.RECRUIT_THIRD_REVIEWER
            if value < policy.threshold
            else Recommendation.SUFFICIENT
        )
    return AgreementReport(
        percent=percent,
        kappa=soft_kappa,
        alpha=alpha,
        degenerate=degenerate,
        recommendation=recommendation,
    )


# -- delimited text io ------------------------------------------------------

MISSING_TOKEN = "NA"


def parse_ratings_text(text: str, missing: str = MISSING_TOKEN) -> RatingsMatrix:
    """Rectangular delimited ratings: header `rater,<unit>...`, one row
    per rater, `NA` marking a missing cell."""
    rows = [row for row in csv.reader(io.StringIO(text)) if any(c.strip() for c in row)]
    if len(rows) < 2:
        raise AgreementError("ratings need a header row and at least one rater row")
    header = rows[0]
    if len(header) < 2:
        raise AgreementError("header must name at least one unit column")
    units = tuple(cell.strip() for cell in header[1:])
    raters: list[str] = []
    values: dict[tuple[str, str], str] = {}
    for row in rows[1:]:
        if len(row) != len(header):
            raise AgreementError(
                f"row {row[0]!r} has {len(row) - 1} columns, expected {len(units)}"
            )
        rater = row[0].strip()
        if rater in raters:
            raise AgreementError(f"duplicate rater {rater!r}")
        raters.append(rater)
        for unit, cell in zip(units, row[1:]):
            cell = cell.strip()
            if cell != missing:
                values[(rater, unit)] = cell
    return RatingsMatrix(raters=tuple(raters), units=units, values=values)


def ratings_to_text(matrix: RatingsMatrix, missing: str = MISSING_TOKEN) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rater", *matrix.units])
    for rater in matrix.raters:
        writer.writerow(
            [rater] + [matrix.values.get((rater, unit), missing) for unit in matrix.units]
        )
    return out.getvalue()
