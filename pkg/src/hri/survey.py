"""Expert-survey ingestion and aggregation.

Responses rate how the absence or degradation of each infrastructure
attribute would affect automated-driving operation, separately for the
assisted (SAE 1-2) and automated (SAE 3-4) groups, on a 0/1/2 impact scale.
A second section rates how far cooperative Day 1/2/3 services could extend
vehicle capabilities.

Aggregation is plain arithmetic means. Missing ratings are excluded from
the denominator, never imputed as zero.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ValidationError
from .taxonomy import (
    PROVENANCE_CUSTOM,
    AutomationLevelGroup,
    WeightTable,
    attribute_ids,
    is_known_attribute,
)


class Region(Enum):
    EUROPE = "europe"
    USA = "usa"
    OTHER = "other"

    @classmethod
    def parse(cls, text: str) -> "Region":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown region {text!r} (expected europe, usa or other)") from None


class DayService(Enum):
    DAY1 = "day1"
    DAY2 = "day2"
    DAY3 = "day3"


_VALID_RATINGS = (0, 1, 2)


@dataclass(frozen=True)
class SurveyResponse:
    """One expert's profile and ratings. Attribute coverage may be partial."""

    respondent_id: str
    role: str
    region: Region
    av_expertise: int
    cits_expertise: int
    attribute_ratings: Mapping[tuple[str, AutomationLevelGroup], int] = field(default_factory=dict)
    cits_day_ratings: Mapping[DayService, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, value in (("av_expertise", self.av_expertise), ("cits_expertise", self.cits_expertise)):
            if not 1 <= value <= 5:
                raise ValueError(f"{name} must be in [1, 5], got {value}")
        for key, rating in self.attribute_ratings.items():
            if rating not in _VALID_RATINGS:
                raise ValueError(f"rating for {key} must be 0, 1 or 2, got {rating}")
        for day, rating in self.cits_day_ratings.items():
            if rating not in _VALID_RATINGS:
                raise ValueError(f"rating for {day.value} must be 0, 1 or 2, got {rating}")
        object.__setattr__(self, "attribute_ratings", MappingProxyType(dict(self.attribute_ratings)))
        object.__setattr__(self, "cits_day_ratings", MappingProxyType(dict(self.cits_day_ratings)))


def aggregate_mean_impact(
    responses: Sequence[SurveyResponse],
    attributes: Iterable[str] | None = None,
) -> WeightTable:
    """Column means of attribute ratings, as a ``custom`` weight table.

    Every (attribute, group) cell must have at least one rating; uncovered
    cells are reported together in one error.
    """
    ids = tuple(attributes) if attributes is not None else attribute_ids()
    if not responses:
        raise ValidationError("cannot aggregate an empty response list")
    sums: dict[tuple[AutomationLevelGroup, str], int] = {}
    counts: dict[tuple[AutomationLevelGroup, str], int] = {}
    for response in responses:
        for (attr, group), rating in response.attribute_ratings.items():
            if attr not in ids:
                continue
            key = (group, attr)
            sums[key] = sums.get(key, 0) + rating
            counts[key] = counts.get(key, 0) + 1
    missing = [
        (group, attr)
        for attr in ids
        for group in AutomationLevelGroup
        if counts.get((group, attr), 0) == 0
    ]
    if missing:
        listed = ", ".join(f"({g.value}, {a})" for g, a in missing)
        raise ValidationError(f"no ratings for: {listed}")
    weights = {
        (group, attr): sums[(group, attr)] / counts[(group, attr)]
        for group in AutomationLevelGroup
        for attr in ids
    }
    return WeightTable(weights, provenance=PROVENANCE_CUSTOM)


def impact_difference(table: WeightTable) -> dict[str, float]:
    """Per-attribute automated-minus-assisted weight difference."""
    diffs: dict[str, float] = {}
    for attr in table.attribute_ids_present():
        try:
            aud = table.lookup(AutomationLevelGroup.AUD, attr)
            asd = table.lookup(AutomationLevelGroup.ASD, attr)
        except KeyError as exc:
            raise ValidationError(str(exc)) from None
        diffs[attr] = aud - asd
    return diffs


def grouped_mean(
    responses: Sequence[SurveyResponse],
) -> dict[tuple[Region, DayService], float]:
    """Mean Day-service rating per (region, day).

    Groups with no ratings at all are absent from the result rather than
    reported as zero.
    """
    sums: dict[tuple[Region, DayService], int] = {}
    counts: dict[tuple[Region, DayService], int] = {}
    for response in responses:
        for day, rating in response.cits_day_ratings.items():
            key = (response.region, day)
            sums[key] = sums.get(key, 0) + rating
            counts[key] = counts.get(key, 0) + 1
    return {key: sums[key] / counts[key] for key in sums}


# ---------------------------------------------------------------------------
# File interchange
#
# Ratings CSV: one row per (respondent, attribute, group, rating).
# Respondents CSV: respondent_id,role,region,av_expertise,cits_expertise,
# day1,day2,day3 (day cells may be empty when unanswered).
# ---------------------------------------------------------------------------

_RATINGS_HEADER = ["respondent_id", "attribute", "group", "rating"]
_RESPONDENTS_HEADER = [
    "respondent_id",
    "role",
    "region",
    "av_expertise",
    "cits_expertise",
    "day1",
    "day2",
    "day3",
]


def _read_rows(text: str, source: str | None) -> list[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(text))
    rows = []
    for row in reader:
        if not row or row[0].lstrip().startswith("#"):
            continue
        rows.append((reader.line_num, row))
    if not rows:
        raise ParseError("empty file", source=source)
    return rows


def _parse_rating(text: str, *, source: str | None, line: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"malformed rating {text!r}", source=source, line=line) from None
    if value not in _VALID_RATINGS:
        raise ParseError(f"rating {value} outside 0..2", source=source, line=line)
    return value


def load_survey(
    ratings_path: str | Path,
    respondents_path: str | Path,
) -> list[SurveyResponse]:
    """Load responses from the two-file CSV form, strictly.

    Errors carry the offending file and line number; ratings must reference
    respondents declared in the sidecar file.
    """
    respondents_src = str(respondents_path)
    rows = _read_rows(Path(respondents_path).read_text(encoding="utf-8"), respondents_src)
    header_line, header = rows[0]
    if [c.strip() for c in header] != _RESPONDENTS_HEADER:
        raise ParseError(
            f"expected header {','.join(_RESPONDENTS_HEADER)!r}",
            source=respondents_src,
            line=header_line,
        )
    profiles: dict[str, dict] = {}
    order: list[str] = []
    for line_num, row in rows[1:]:
        if len(row) != len(_RESPONDENTS_HEADER):
            raise ParseError(
                f"expected {len(_RESPONDENTS_HEADER)} fields, got {len(row)}",
                source=respondents_src,
                line=line_num,
            )
        rid = row[0].strip()
        if rid in profiles:
            raise ParseError(f"duplicate respondent {rid!r}", source=respondents_src, line=line_num)
        try:
            region = Region.parse(row[2])
        except ValueError as exc:
            raise ParseError(str(exc), source=respondents_src, line=line_num) from None
        try:
            av_exp = int(row[3])
            cits_exp = int(row[4])
        except ValueError:
            raise ParseError("malformed expertise value", source=respondents_src, line=line_num) from None
        days: dict[DayService, int] = {}
        for day, cell in zip(DayService, row[5:8]):
            cell = cell.strip()
            if cell:
                days[day] = _parse_rating(cell, source=respondents_src, line=line_num)
        profiles[rid] = {
            "role": row[1].strip(),
            "region": region,
            "av_expertise": av_exp,
            "cits_expertise": cits_exp,
            "days": days,
            "line": line_num,
        }
        order.append(rid)

    ratings_src = str(ratings_path)
    rows = _read_rows(Path(ratings_path).read_text(encoding="utf-8"), ratings_src)
    header_line, header = rows[0]
    if [c.strip() for c in header] != _RATINGS_HEADER:
        raise ParseError(
            f"expected header {','.join(_RATINGS_HEADER)!r}",
            source=ratings_src,
            line=header_line,
        )
    ratings: dict[str, dict[tuple[str, AutomationLevelGroup], int]] = {rid: {} for rid in order}
    for line_num, row in rows[1:]:
        if len(row) != len(_RATINGS_HEADER):
            raise ParseError(
                f"expected {len(_RATINGS_HEADER)} fields, got {len(row)}",
                source=ratings_src,
                line=line_num,
            )
        rid = row[0].strip()
        if rid not in ratings:
            raise ParseError(f"unknown respondent {rid!r}", source=ratings_src, line=line_num)
        attr = row[1].strip()
        if not is_known_attribute(attr):
            raise ParseError(f"unknown attribute {attr!r}", source=ratings_src, line=line_num)
        try:
            group = AutomationLevelGroup.parse(row[2])
        except ValueError as exc:
            raise ParseError(str(exc), source=ratings_src, line=line_num) from None
        key = (attr, group)
        if key in ratings[rid]:
            raise ParseError(
                f"duplicate rating for ({rid}, {attr}, {group.value})",
                source=ratings_src,
                line=line_num,
            )
        ratings[rid][key] = _parse_rating(row[3], source=ratings_src, line=line_num)

    responses = []
    for rid in order:
        profile = profiles[rid]
        try:
            responses.append(
                SurveyResponse(
                    respondent_id=rid,
                    role=profile["role"],
                    region=profile["region"],
                    av_expertise=profile["av_expertise"],
                    cits_expertise=profile["cits_expertise"],
                    attribute_ratings=ratings[rid],
                    cits_day_ratings=profile["days"],
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), source=respondents_src, line=profile["line"]) from None
    return responses


def dump_survey(responses: Sequence[SurveyResponse]) -> tuple[str, str]:
    """Render responses as (ratings CSV, respondents CSV) text."""
    resp_out = io.StringIO()
    writer = csv.writer(resp_out, lineterminator="\n")
    writer.writerow(_RESPONDENTS_HEADER)
    for r in responses:
        days = [r.cits_day_ratings.get(day, "") for day in DayService]
        writer.writerow(
            [r.respondent_id, r.role, r.region.value, r.av_expertise, r.cits_expertise, *days]
        )
    ratings_out = io.StringIO()
    writer = csv.writer(ratings_out, lineterminator="\n")
    writer.writerow(_RATINGS_HEADER)
    for r in responses:
        for (attr, group), rating in r.attribute_ratings.items():
            writer.writerow([r.respondent_id, attr, group.value, rating])
    return ratings_out.getvalue(), resp_out.getvalue()


def dump_impact_difference(diffs: Mapping[str, float]) -> str:
    """Difference report CSV, rounded to the 2-decimal display convention."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["attribute", "impact_difference"])
    for attr, diff in diffs.items():
        writer.writerow([attr, f"{diff:.2f}"])
    return out.getvalue()


def dump_grouped_means(means: Mapping[tuple[Region, DayService], float]) -> str:
    """Region/day mean report CSV, 2-decimal display rounding."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["region", "day_service", "mean_rating"])
    for region in Region:
        for day in DayService:
            if (region, day) in means:
                writer.writerow([region.value, day.value, f"{means[(region, day)]:.2f}"])
    return out.getvalue()
