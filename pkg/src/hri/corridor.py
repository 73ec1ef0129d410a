"""Corridor model: fixed-length segments with per-attribute adequacy values.

A corridor is a 1-D chainage model — an ordered, gap-free sequence of
segments (default 100 m) each carrying an adequacy value in {0,1,2} for
every registered attribute. Scenario overlays mutate adequacy over a km
range (roadworks, degraded maintenance) without touching geometry; rubrics
map raw field measurements onto the adequacy scale.

Profiles are immutable; overlay application returns a new profile.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import ParseError, ValidationError
from .taxonomy import attribute_ids, is_known_attribute

_ADEQUACY_VALUES = (0, 1, 2)

DEFAULT_SEGMENT_LENGTH_M = 100.0

_GEOM_EPS = 1e-6  # float slack for chainage arithmetic on metre grids


@dataclass(frozen=True)
class SegmentObservation:
    """Adequacy values observed on one segment."""

    index: int
    start_m: float
    length_m: float
    values: Mapping[str, int]

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"segment index must be non-negative, got {self.index}")
        if self.length_m <= 0:
            raise ValueError(f"segment length must be positive, got {self.length_m}")
        if abs(self.start_m - self.index * self.length_m) > _GEOM_EPS:
            raise ValueError(
                f"segment {self.index}: start_m {self.start_m} != index * length_m"
            )
        for attr, value in self.values.items():
            if value not in _ADEQUACY_VALUES:
                raise ValueError(
                    f"segment {self.index}: adequacy for {attr!r} must be 0, 1 or 2, got {value}"
                )
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))

    @property
    def end_m(self) -> float:
        return self.start_m + self.length_m


@dataclass(frozen=True)
class CorridorProfile:
    """An ordered, contiguous partition of a corridor into segments."""

    corridor_id: str
    length_km: float
    segment_length_m: float
    segments: tuple[SegmentObservation, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        expected = expected_segment_count(self.length_km, self.segment_length_m)
        if len(self.segments) != expected:
            raise ValidationError(
                f"corridor {self.corridor_id!r}: {len(self.segments)} segments, "
                f"expected {expected} for {self.length_km} km at {self.segment_length_m} m"
            )
        for position, segment in enumerate(self.segments):
            if segment.index != position:
                raise ValidationError(
                    f"corridor {self.corridor_id!r}: segment at position {position} "
                    f"has index {segment.index}"
                )
            if abs(segment.length_m - self.segment_length_m) > _GEOM_EPS:
                raise ValidationError(
                    f"corridor {self.corridor_id!r}: segment {segment.index} length "
                    f"{segment.length_m} != {self.segment_length_m}"
                )

    @property
    def length_m(self) -> float:
        return self.length_km * 1000.0


def expected_segment_count(length_km: float, segment_length_m: float) -> int:
    if segment_length_m <= 0:
        raise ValidationError(f"segment length must be positive, got {segment_length_m}")
    return math.ceil(length_km * 1000.0 / segment_length_m - _GEOM_EPS)


@dataclass(frozen=True)
class OverlayOp:
    """One attribute mutation: ``set`` replaces, ``cap`` applies min(value, max)."""

    op: str
    attribute: str
    value: int

    def __post_init__(self) -> None:
        if self.op not in ("set", "cap"):
            raise ValueError(f"overlay op must be 'set' or 'cap', got {self.op!r}")
        if self.value not in _ADEQUACY_VALUES:
            raise ValueError(f"overlay value must be 0, 1 or 2, got {self.value}")
        if not is_known_attribute(self.attribute):
            raise ValueError(f"unknown attribute {self.attribute!r}")

    def apply(self, value: int) -> int:
        return self.value if self.op == "set" else min(value, self.value)


@dataclass(frozen=True)
class ScenarioOverlay:
    """A named adequacy mutation over the half-open km range [from_km, to_km)."""

    name: str
    from_km: float
    to_km: float
    ops: tuple[OverlayOp, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.from_km < self.to_km:
            raise ValueError(f"overlay range [{self.from_km}, {self.to_km}) is empty or inverted")


def apply_overlay(profile: CorridorProfile, overlay: ScenarioOverlay) -> CorridorProfile:
    """Return a new profile with the overlay applied to intersecting segments.

    Segment intervals are half-open [start, end), so a km range partitions
    the corridor deterministically. Geometry is never changed.
    """
    if overlay.from_km < -_GEOM_EPS or overlay.to_km > profile.length_km + _GEOM_EPS:
        raise ValidationError(
            f"overlay {overlay.name!r} range [{overlay.from_km}, {overlay.to_km}) km "
            f"outside corridor [0, {profile.length_km}) km"
        )
    from_m = overlay.from_km * 1000.0
    to_m = overlay.to_km * 1000.0
    segments = []
    for segment in profile.segments:
        if segment.start_m < to_m - _GEOM_EPS and segment.end_m > from_m + _GEOM_EPS:
            values = dict(segment.values)
            for op in overlay.ops:
                if op.attribute not in values:
                    raise ValidationError(
                        f"overlay {overlay.name!r}: segment {segment.index} has no "
                        f"value for {op.attribute!r}"
                    )
                values[op.attribute] = op.apply(values[op.attribute])
            segments.append(replace(segment, values=values))
        else:
            segments.append(segment)
    return replace(profile, segments=tuple(segments))


# ---------------------------------------------------------------------------
# Rubrics: raw field measurement -> adequacy level
# ---------------------------------------------------------------------------

DIRECTION_HIGHER = "higher-is-better"
DIRECTION_LOWER = "lower-is-better"


@dataclass(frozen=True)
class RubricEntry:
    """Breakpoints mapping a raw measurement to an adequacy level.

    ``breakpoints`` are (threshold, level) pairs ordered by ascending
    threshold; the first threshold is None (unbounded below). Each interval
    is closed on its lower bound, so a measurement exactly on a threshold
    falls in the higher measurement interval. Levels must cover {0,1,2}
    exactly once, ascending for higher-is-better and descending otherwise.
    """

    direction: str
    breakpoints: tuple[tuple[float | None, int], ...]
    unit: str | None = None

    def __post_init__(self) -> None:
        if self.direction not in (DIRECTION_HIGHER, DIRECTION_LOWER):
            raise ValueError(f"unknown direction {self.direction!r}")
        object.__setattr__(self, "breakpoints", tuple(self.breakpoints))
        if len(self.breakpoints) != 3 or self.breakpoints[0][0] is not None:
            raise ValueError("rubric needs 3 breakpoints, the first with threshold null")
        thresholds = [t for t, _ in self.breakpoints[1:]]
        if any(t is None for t in thresholds) or not thresholds[0] < thresholds[1]:
            raise ValueError("rubric thresholds must be strictly increasing")
        levels = [level for _, level in self.breakpoints]
        expected = [0, 1, 2] if self.direction == DIRECTION_HIGHER else [2, 1, 0]
        if levels != expected:
            raise ValueError(
                f"rubric levels {levels} do not cover 0..2 in {self.direction} order"
            )

    def level_for(self, measurement: float) -> int:
        level = self.breakpoints[0][1]
        for threshold, candidate in self.breakpoints[1:]:
            if measurement >= threshold:
                level = candidate
        return level


def operationalize(
    raw: Mapping[str, float],
    rubric: Mapping[str, RubricEntry],
) -> dict[str, int]:
    """Map raw measurements onto adequacy values via the rubric."""
    values: dict[str, int] = {}
    for attr, measurement in raw.items():
        entry = rubric.get(attr)
        if entry is None:
            raise ValidationError(f"no rubric entry for attribute {attr!r}")
        values[attr] = entry.level_for(measurement)
    return values


def load_rubric(path: str | Path) -> dict[str, RubricEntry]:
    """Load a rubric JSON file: {attribute: {direction, unit?, breakpoints}}."""
    source = str(path)
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", source=source, line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("rubric document must be a JSON object", source=source)
    rubric: dict[str, RubricEntry] = {}
    for attr, spec in doc.items():
        if not is_known_attribute(attr):
            raise ParseError(f"unknown attribute {attr!r}", source=source)
        try:
            breakpoints = tuple(
                (None if bp["threshold"] is None else float(bp["threshold"]), int(bp["level"]))
                for bp in spec["breakpoints"]
            )
            rubric[attr] = RubricEntry(
                direction=spec["direction"],
                breakpoints=breakpoints,
                unit=spec.get("unit"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad rubric for {attr!r}: {exc}", source=source) from None
    return rubric


# ---------------------------------------------------------------------------
# Corridor CSV interchange
#
# Header: segment_index,attribute,value — one row per (segment, attribute).
# Metadata (corridor_id, length_km, segment_length_m) comes from a leading
# '# {json}' comment line or an explicit mapping/sidecar file.
# ---------------------------------------------------------------------------

_CORRIDOR_HEADER = ["segment_index", "attribute", "value"]
_META_KEYS = ("corridor_id", "length_km", "segment_length_m")


def _parse_meta(doc: object, *, source: str | None, line: int | None = None) -> dict:
    if not isinstance(doc, dict) or any(key not in doc for key in _META_KEYS):
        raise ParseError(
            f"corridor metadata must provide {', '.join(_META_KEYS)}",
            source=source,
            line=line,
        )
    try:
        return {
            "corridor_id": str(doc["corridor_id"]),
            "length_km": float(doc["length_km"]),
            "segment_length_m": float(doc["segment_length_m"]),
        }
    except (TypeError, ValueError):
        raise ParseError("malformed corridor metadata values", source=source, line=line) from None


def load_corridor(
    path: str | Path,
    meta: str | Path | Mapping | None = None,
) -> CorridorProfile:
    """Load a corridor CSV, enforcing attribute totality per segment.

    ``meta`` may be a JSON sidecar path or a mapping; it is ignored when the
    CSV itself starts with a ``# {...}`` metadata line.
    """
    source = str(path)
    text = Path(path).read_text(encoding="utf-8")

    metadata: dict | None = None
    first_line = text.split("\n", 1)[0].strip()
    if first_line.startswith("#"):
        candidate = first_line.lstrip("#").strip()
        if candidate.startswith("{"):
            try:
                metadata = _parse_meta(json.loads(candidate), source=source, line=1)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid metadata JSON: {exc.msg}", source=source, line=1) from None
    if metadata is None:
        if meta is None:
            raise ParseError(
                "no metadata: expected a leading '# {json}' line or a sidecar", source=source
            )
        if isinstance(meta, Mapping):
            metadata = _parse_meta(dict(meta), source="<meta>")
        else:
            meta_source = str(meta)
            try:
                doc = json.loads(Path(meta).read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"invalid JSON: {exc.msg}", source=meta_source, line=exc.lineno, column=exc.colno
                ) from None
            metadata = _parse_meta(doc, source=meta_source)

    reader = csv.reader(io.StringIO(text))
    rows = []
    for row in reader:
        if not row or row[0].lstrip().startswith("#"):
            continue
        rows.append((reader.line_num, row))
    if not rows:
        raise ParseError("no data rows", source=source)
    header_line, header = rows[0]
    if [c.strip() for c in header] != _CORRIDOR_HEADER:
        raise ParseError(
            "expected header 'segment_index,attribute,value'", source=source, line=header_line
        )

    registry = attribute_ids()
    per_segment: dict[int, dict[str, int]] = {}
    for line_num, row in rows[1:]:
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", source=source, line=line_num)
        try:
            index = int(row[0])
        except ValueError:
            raise ParseError(f"malformed segment index {row[0]!r}", source=source, line=line_num) from None
        if index < 0:
            raise ParseError(f"negative segment index {index}", source=source, line=line_num)
        attr = row[1].strip()
        if not is_known_attribute(attr):
            raise ParseError(f"unknown attribute {attr!r}", source=source, line=line_num)
        try:
            value = int(row[2])
        except ValueError:
            raise ParseError(f"malformed adequacy value {row[2]!r}", source=source, line=line_num) from None
        if value not in _ADEQUACY_VALUES:
            raise ParseError(f"adequacy value {value} outside 0..2", source=source, line=line_num)
        bucket = per_segment.setdefault(index, {})
        if attr in bucket:
            raise ParseError(
                f"duplicate row for segment {index}, attribute {attr!r}", source=source, line=line_num
            )
        bucket[attr] = value

    expected = expected_segment_count(metadata["length_km"], metadata["segment_length_m"])
    for index in range(expected):
        if index not in per_segment:
            raise ParseError(f"gap: segment {index} missing", source=source)
    extras = sorted(set(per_segment) - set(range(expected)))
    if extras:
        raise ParseError(
            f"corridor length {metadata['length_km']} km implies {expected} segments, "
            f"but segment {extras[0]} is present",
            source=source,
        )
    segments = []
    for index in range(expected):
        values = per_segment[index]
        missing = [attr for attr in registry if attr not in values]
        if missing:
            raise ParseError(
                f"segment {index} missing attributes: {', '.join(missing)}", source=source
            )
        ordered = {attr: values[attr] for attr in registry}
        segments.append(
            SegmentObservation(
                index=index,
                start_m=index * metadata["segment_length_m"],
                length_m=metadata["segment_length_m"],
                values=ordered,
            )
        )
    return CorridorProfile(
        corridor_id=metadata["corridor_id"],
        length_km=metadata["length_km"],
        segment_length_m=metadata["segment_length_m"],
        segments=tuple(segments),
    )


def dump_corridor(profile: CorridorProfile) -> str:
    """Render a corridor CSV with a leading metadata comment line."""
    meta = {
        "corridor_id": profile.corridor_id,
        "length_km": profile.length_km,
        "segment_length_m": profile.segment_length_m,
    }
    out = io.StringIO()
    out.write("# " + json.dumps(meta) + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_CORRIDOR_HEADER)
    for segment in profile.segments:
        for attr, value in segment.values.items():
            writer.writerow([segment.index, attr, value])
    return out.getvalue()


def load_overlay(path: str | Path) -> ScenarioOverlay:
    """Load an overlay JSON file: {name, from_km, to_km, ops: [...]}."""
    source = str(path)
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", source=source, line=exc.lineno, column=exc.colno) from None
    try:
        ops = tuple(
            OverlayOp(op=str(op["op"]), attribute=str(op["attribute"]), value=int(op["value"]))
            for op in doc["ops"]
        )
        return ScenarioOverlay(
            name=str(doc["name"]),
            from_km=float(doc["from_km"]),
            to_km=float(doc["to_km"]),
            ops=ops,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad overlay: {exc}", source=source) from None
