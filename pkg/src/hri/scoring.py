"""Readiness scoring, classification and SAE-level recommendation.

The readiness score of a segment for an automation-level group is the
weighted adequacy ratio, in percent:

    score = 100 * sum_i(w_i * v_i) / sum_i(w_i * v_max)

with ``v_max = 2`` (the adequacy scale maximum) and the sum running over the
attribute set shared by the observation and the weight table. The score is
kept at full precision; only presentation layers round.

Scores fall into three uniform interpretation bands — unlikely [0, 33),
may-be [33, 66) and highly-likely [66, 100] — and a group's SAE level pair
is recommended when its score reaches the 66% threshold (inclusive, so the
recommendation rule agrees with the highly-likely lower bound).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .corridor import CorridorProfile, SegmentObservation
from .errors import ParseError, ValidationError
from .taxonomy import (
    V_MAX,
    AutomationLevelGroup,
    MacroCategory,
    WeightTable,
    macro_weight_table,
)

DEFAULT_THRESHOLD = 66.0


class ReadinessClass(Enum):
    UNLIKELY = "unlikely"
    MAY_BE = "may-be"
    HIGHLY_LIKELY = "highly-likely"

    @classmethod
    def parse(cls, text: str) -> "ReadinessClass":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown readiness class {text!r}") from None


@dataclass(frozen=True)
class ReadinessScore:
    """A readiness percentage for one group; ``segment_index`` is None for
    scores detached from a corridor (e.g. sensitivity scenarios)."""

    group: AutomationLevelGroup
    value: float
    segment_index: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 100.0:
            raise ValueError(f"readiness score {self.value} outside [0, 100]")


@dataclass(frozen=True)
class Recommendation:
    """Allowed SAE levels for one segment; levels always enter in group pairs."""

    segment_index: int | None
    allowed_sae_levels: frozenset[int]
    scores: Mapping[AutomationLevelGroup, ReadinessScore]

    def __post_init__(self) -> None:
        levels = self.allowed_sae_levels
        if (1 in levels) != (2 in levels) or (3 in levels) != (4 in levels):
            raise ValueError(f"unpaired SAE levels {sorted(levels)}")
        if not levels <= {1, 2, 3, 4}:
            raise ValueError(f"invalid SAE levels {sorted(levels)}")
        object.__setattr__(self, "allowed_sae_levels", frozenset(levels))
        object.__setattr__(self, "scores", MappingProxyType(dict(self.scores)))


def score_segment(
    obs: SegmentObservation,
    weights: WeightTable,
    group: AutomationLevelGroup,
) -> ReadinessScore:
    """Weighted adequacy ratio for one segment and group, in [0, 100].

    The observation and the weight table must cover the same attribute set;
    a zero weight sum (degenerate custom table) is an error.
    """
    group_weights = weights.group_weights(group)
    if set(group_weights) != set(obs.values):
        missing = set(obs.values) - set(group_weights)
        extra = set(group_weights) - set(obs.values)
        detail = []
        if missing:
            detail.append(f"weights missing for {sorted(missing)}")
        if extra:
            detail.append(f"observation missing {sorted(extra)}")
        raise ValidationError(
            f"attribute mismatch between observation and weights: {'; '.join(detail)}"
        )
    numerator = 0.0
    denominator = 0.0
    for attr, weight in group_weights.items():
        numerator += weight * obs.values[attr]
        denominator += weight * V_MAX
    if denominator <= 0.0:
        raise ValidationError(f"weight sum for group {group.value} is not positive")
    # summation round-off can push the ratio a few ulp past its exact bounds
    value = min(100.0, max(0.0, 100.0 * numerator / denominator))
    return ReadinessScore(group=group, value=value, segment_index=obs.index)


def classify(score: ReadinessScore | float) -> ReadinessClass:
    """Band a score: [0,33) unlikely, [33,66) may-be, [66,100] highly-likely."""
    value = score.value if isinstance(score, ReadinessScore) else float(score)
    if not 0.0 <= value <= 100.0:
        raise ValueError(f"score {value} outside [0, 100]")
    if value < 33.0:
        return ReadinessClass.UNLIKELY
    if value < 66.0:
        return ReadinessClass.MAY_BE
    return ReadinessClass.HIGHLY_LIKELY


def recommend(
    scores: Mapping[AutomationLevelGroup, ReadinessScore],
    threshold: float = DEFAULT_THRESHOLD,
    *,
    threshold_inclusive: bool = True,
) -> Recommendation:
    """Allowed SAE levels from both group scores, evaluated independently.

    A group passing the threshold contributes its level pair; an empty set
    is a valid outcome (no recommendation).
    """
    for group in AutomationLevelGroup:
        if group not in scores:
            raise ValidationError(f"missing score for group {group.value}")
    levels: set[int] = set()
    for group, score in scores.items():
        passed = score.value >= threshold if threshold_inclusive else score.value > threshold
        if passed:
            levels.update(group.sae_levels)
    indexes = {score.segment_index for score in scores.values()}
    segment_index = indexes.pop() if len(indexes) == 1 else None
    return Recommendation(
        segment_index=segment_index,
        allowed_sae_levels=frozenset(levels),
        scores=dict(scores),
    )


@dataclass(frozen=True)
class SegmentAssessment:
    """Scores, classes and recommendation for one segment."""

    segment_index: int
    start_m: float
    length_m: float
    scores: Mapping[AutomationLevelGroup, ReadinessScore]
    classes: Mapping[AutomationLevelGroup, ReadinessClass]
    recommendation: Recommendation

    def __post_init__(self) -> None:
        object.__setattr__(self, "scores", MappingProxyType(dict(self.scores)))
        object.__setattr__(self, "classes", MappingProxyType(dict(self.classes)))

    @property
    def end_m(self) -> float:
        return self.start_m + self.length_m


@dataclass(frozen=True)
class CorridorAssessment:
    """Per-segment assessment of a whole corridor, in segment order."""

    corridor_id: str
    length_km: float
    segment_length_m: float
    threshold: float
    weight_provenance: str
    segments: tuple[SegmentAssessment, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))


def score_corridor(
    profile: CorridorProfile,
    weights: WeightTable,
    *,
    threshold: float = DEFAULT_THRESHOLD,
    threshold_inclusive: bool = True,
) -> CorridorAssessment:
    """Score, classify and recommend for every segment, preserving order."""
    assessments = []
    for segment in profile.segments:
        scores = {
            group: score_segment(segment, weights, group) for group in AutomationLevelGroup
        }
        classes = {group: classify(score) for group, score in scores.items()}
        recommendation = recommend(scores, threshold, threshold_inclusive=threshold_inclusive)
        assessments.append(
            SegmentAssessment(
                segment_index=segment.index,
                start_m=segment.start_m,
                length_m=segment.length_m,
                scores=scores,
                classes=classes,
                recommendation=recommendation,
            )
        )
    return CorridorAssessment(
        corridor_id=profile.corridor_id,
        length_km=profile.length_km,
        segment_length_m=profile.segment_length_m,
        threshold=threshold,
        weight_provenance=weights.provenance,
        segments=tuple(assessments),
    )


# ---------------------------------------------------------------------------
# Macro-category sensitivity analysis
# ---------------------------------------------------------------------------


class SensitivityScenario(Enum):
    COMPLIANT_NO_HD = "compliant-no-hd"
    DEGRADED_WITH_HD = "degraded-with-hd"
    DEGRADED_NO_HD = "degraded-no-hd"


_PHYSICAL_CATEGORIES = (
    MacroCategory.ROAD_MARKINGS_SIGNAGE,
    MacroCategory.ROAD_MAINTENANCE_MANAGEMENT,
    MacroCategory.ROADWAY_DESIGN_SAFETY,
)

DEFAULT_DEGRADED_LEVELS: Mapping[MacroCategory, int] = MappingProxyType(
    {category: 1 for category in _PHYSICAL_CATEGORIES}
)


@dataclass(frozen=True)
class SensitivityConfig:
    """Scenario plus the adequacy assigned to degraded physical categories."""

    scenario: SensitivityScenario
    degraded_levels: Mapping[MacroCategory, int] = field(
        default_factory=lambda: dict(DEFAULT_DEGRADED_LEVELS)
    )

    def __post_init__(self) -> None:
        for category, level in self.degraded_levels.items():
            if category not in _PHYSICAL_CATEGORIES:
                raise ValueError(f"degraded level given for non-physical category {category}")
            if level not in (0, 1, 2):
                raise ValueError(f"degraded level for {category.value} must be 0, 1 or 2")
        merged = dict(DEFAULT_DEGRADED_LEVELS)
        merged.update(self.degraded_levels)
        object.__setattr__(self, "degraded_levels", MappingProxyType(merged))

    def category_values(self) -> dict[MacroCategory, int]:
        if self.scenario is SensitivityScenario.COMPLIANT_NO_HD:
            values = {category: 2 for category in _PHYSICAL_CATEGORIES}
            hd = 0
        elif self.scenario is SensitivityScenario.DEGRADED_NO_HD:
            values = dict(self.degraded_levels)
            hd = 0
        else:
            values = dict(self.degraded_levels)
            hd = 2
        values[MacroCategory.PRELOADED_HD_MAPS] = hd
        return values


def macro_sensitivity(
    config: SensitivityConfig,
    macro_weights: Mapping[tuple[AutomationLevelGroup, MacroCategory], float] | None = None,
) -> dict[AutomationLevelGroup, ReadinessScore]:
    """Evaluate the readiness ratio over the four macro-categories.

    Category adequacy is fixed by the scenario (compliant physical
    categories at 2, degraded ones per config, HD maps 0 or 2); weights
    default to the built-in macro table.
    """
    weights = macro_weights if macro_weights is not None else macro_weight_table()
    values = config.category_values()
    result = {}
    for group in AutomationLevelGroup:
        numerator = 0.0
        denominator = 0.0
        for category in MacroCategory:
            weight = weights[(group, category)]
            numerator += weight * values[category]
            denominator += weight * V_MAX
        if denominator <= 0.0:
            raise ValidationError(f"macro weight sum for group {group.value} is not positive")
        value = min(100.0, max(0.0, 100.0 * numerator / denominator))
        result[group] = ReadinessScore(group=group, value=value)
    return result


# ---------------------------------------------------------------------------
# Score-profile interchange (the plotting substrate)
# ---------------------------------------------------------------------------

_PROFILE_HEADER = [
    "segment_index",
    "start_km",
    "asd_score",
    "aud_score",
    "asd_class",
    "aud_class",
    "allowed_levels",
]


def dump_score_profile_csv(assessment: CorridorAssessment) -> str:
    """CSV score profile; scores are display-rounded to two decimals."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_PROFILE_HEADER)
    for seg in assessment.segments:
        writer.writerow(
            [
                seg.segment_index,
                f"{seg.start_m / 1000.0:.3f}",
                f"{seg.scores[AutomationLevelGroup.ASD].value:.2f}",
                f"{seg.scores[AutomationLevelGroup.AUD].value:.2f}",
                seg.classes[AutomationLevelGroup.ASD].value,
                seg.classes[AutomationLevelGroup.AUD].value,
                ",".join(str(l) for l in sorted(seg.recommendation.allowed_sae_levels)),
            ]
        )
    return out.getvalue()


def dump_score_profile_json(assessment: CorridorAssessment) -> str:
    """JSON score profile with full float precision."""
    doc = {
        "corridor_id": assessment.corridor_id,
        "length_km": assessment.length_km,
        "segment_length_m": assessment.segment_length_m,
        "threshold": assessment.threshold,
        "weight_provenance": assessment.weight_provenance,
        "segments": [
            {
                "segment_index": seg.segment_index,
                "start_m": seg.start_m,
                "length_m": seg.length_m,
                "asd_score": seg.scores[AutomationLevelGroup.ASD].value,
                "aud_score": seg.scores[AutomationLevelGroup.AUD].value,
                "asd_class": seg.classes[AutomationLevelGroup.ASD].value,
                "aud_class": seg.classes[AutomationLevelGroup.AUD].value,
                "allowed_sae_levels": sorted(seg.recommendation.allowed_sae_levels),
            }
            for seg in assessment.segments
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_score_profile_json(path: str | Path) -> CorridorAssessment:
    """Reconstruct an assessment from its JSON profile."""
    source = str(path)
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", source=source, line=exc.lineno, column=exc.colno) from None
    try:
        segments = []
        for item in doc["segments"]:
            index = int(item["segment_index"])
            scores = {
                AutomationLevelGroup.ASD: ReadinessScore(
                    group=AutomationLevelGroup.ASD, value=float(item["asd_score"]), segment_index=index
                ),
                AutomationLevelGroup.AUD: ReadinessScore(
                    group=AutomationLevelGroup.AUD, value=float(item["aud_score"]), segment_index=index
                ),
            }
            classes = {
                AutomationLevelGroup.ASD: ReadinessClass.parse(item["asd_class"]),
                AutomationLevelGroup.AUD: ReadinessClass.parse(item["aud_class"]),
            }
            recommendation = Recommendation(
                segment_index=index,
                allowed_sae_levels=frozenset(int(l) for l in item["allowed_sae_levels"]),
                scores=scores,
            )
            segments.append(
                SegmentAssessment(
                    segment_index=index,
                    start_m=float(item["start_m"]),
                    length_m=float(item["length_m"]),
                    scores=scores,
                    classes=classes,
                    recommendation=recommendation,
                )
            )
        return CorridorAssessment(
            corridor_id=str(doc["corridor_id"]),
            length_km=float(doc["length_km"]),
            segment_length_m=float(doc["segment_length_m"]),
            threshold=float(doc.get("threshold", DEFAULT_THRESHOLD)),
            weight_provenance=str(doc.get("weight_provenance", "unknown")),
            segments=tuple(segments),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad score profile: {exc}", source=source) from None
