from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hri.corridor import (
    CorridorProfile,
    OverlayOp,
    RubricEntry,
    ScenarioOverlay,
    SegmentObservation,
    apply_overlay,
    dump_corridor,
    load_corridor,
    load_overlay,
    load_rubric,
    operationalize,
)
from hri.errors import ParseError, ValidationError
from hri.fixtures import RUBRIC_EXAMPLE_FILE, fixture_path
from hri.taxonomy import attribute_ids


def tiny_profile(n_segments=4, fill=2, length_m=100.0):
    segments = tuple(
        SegmentObservation(
            index=i,
            start_m=i * length_m,
            length_m=length_m,
            values={attr: fill for attr in attribute_ids()},
        )
        for i in range(n_segments)
    )
    return CorridorProfile(
        corridor_id="tiny",
        length_km=n_segments * length_m / 1000.0,
        segment_length_m=length_m,
        segments=segments,
    )


def write_corridor_csv(tmp_path, rows, *, length_km=0.2, name="c.csv"):
    meta = {"corridor_id": "t", "length_km": length_km, "segment_length_m": 100.0}
    lines = ["# " + json.dumps(meta), "segment_index,attribute,value"]
    lines.extend(rows)
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return path


def full_rows(index):
    return [f"{index},{attr},2" for attr in attribute_ids()]


class TestLoadCorridor:
    def test_fixture_has_240_segments(self, corridor):
        assert len(corridor.segments) == 240
        assert corridor.length_km == 24.0
        assert corridor.segment_length_m == 100.0

    def test_round_trip(self, corridor, tmp_path):
        path = tmp_path / "dump.csv"
        path.write_text(dump_corridor(corridor))
        assert load_corridor(path) == corridor

    def test_out_of_range_value_names_row(self, tmp_path):
        rows = full_rows(0) + full_rows(1)
        rows[5] = rows[5][:-1] + "3"  # adequacy 3 on data line 6
        path = write_corridor_csv(tmp_path, rows)
        with pytest.raises(ParseError, match="adequacy value 3") as excinfo:
            load_corridor(path)
        assert excinfo.value.line == 2 + 5 + 1  # meta + header + offset

    def test_missing_segment_names_index(self, tmp_path):
        path = write_corridor_csv(tmp_path, full_rows(0), length_km=0.2)
        with pytest.raises(ParseError, match="segment 1 missing"):
            load_corridor(path)

    def test_unknown_attribute_rejected(self, tmp_path):
        rows = full_rows(0) + full_rows(1) + ["1,potholes,1"]
        path = write_corridor_csv(tmp_path, rows)
        with pytest.raises(ParseError, match="unknown attribute 'potholes'"):
            load_corridor(path)

    def test_duplicate_row_rejected(self, tmp_path):
        rows = full_rows(0) + full_rows(1) + ["0,hd-maps,1"]
        path = write_corridor_csv(tmp_path, rows)
        with pytest.raises(ParseError, match="duplicate row"):
            load_corridor(path)

    def test_length_mismatch_rejected(self, tmp_path):
        rows = full_rows(0) + full_rows(1) + full_rows(2)
        path = write_corridor_csv(tmp_path, rows, length_km=0.2)
        with pytest.raises(ParseError, match="segment 2 is present"):
            load_corridor(path)

    def test_missing_attribute_rejected(self, tmp_path):
        rows = full_rows(0) + full_rows(1)[:-1]  # drop one attribute of segment 1
        path = write_corridor_csv(tmp_path, rows)
        with pytest.raises(ParseError, match="segment 1 missing attributes"):
            load_corridor(path)

    def test_sidecar_metadata(self, tmp_path):
        data = "segment_index,attribute,value\n" + "\n".join(full_rows(0)) + "\n"
        csv_path = tmp_path / "c.csv"
        csv_path.write_text(data)
        meta_path = tmp_path / "c.meta.json"
        meta_path.write_text(
            json.dumps({"corridor_id": "t", "length_km": 0.1, "segment_length_m": 100.0})
        )
        profile = load_corridor(csv_path, meta=meta_path)
        assert profile.corridor_id == "t"
        with pytest.raises(ParseError, match="no metadata"):
            load_corridor(csv_path)


class TestApplyOverlay:
    def test_km_range_affects_exact_segments(self, corridor):
        overlay = ScenarioOverlay(
            name="x",
            from_km=11.0,
            to_km=17.0,
            ops=(OverlayOp("set", "lane-mark-consistency", 0),),
        )
        result = apply_overlay(corridor, overlay)
        changed = [
            s.index
            for s, t in zip(corridor.segments, result.segments)
            if s.values != t.values
        ]
        assert changed == list(range(110, 170))

    def test_cap_at_max_is_identity(self, corridor):
        overlay = ScenarioOverlay(
            name="x", from_km=0.0, to_km=24.0, ops=(OverlayOp("cap", "pavement-maintenance", 2),)
        )
        assert apply_overlay(corridor, overlay) == corridor

    def test_empty_ops_is_identity(self, corridor):
        overlay = ScenarioOverlay(name="x", from_km=1.0, to_km=2.0, ops=())
        assert apply_overlay(corridor, overlay) == corridor

    def test_set_is_idempotent(self, corridor):
        overlay = ScenarioOverlay(
            name="x",
            from_km=3.0,
            to_km=9.5,
            ops=(OverlayOp("set", "guard-rail", 0), OverlayOp("set", "lighting", 1)),
        )
        once = apply_overlay(corridor, overlay)
        assert apply_overlay(once, overlay) == once

    def test_input_not_mutated(self, corridor):
        snapshot = [dict(s.values) for s in corridor.segments]
        overlay = ScenarioOverlay(
            name="x", from_km=0.0, to_km=24.0, ops=(OverlayOp("set", "hd-maps", 0),)
        )
        apply_overlay(corridor, overlay)
        assert [dict(s.values) for s in corridor.segments] == snapshot

    def test_geometry_preserved(self, corridor, roadworks):
        result = apply_overlay(corridor, roadworks)
        assert [(s.index, s.start_m, s.length_m) for s in result.segments] == [
            (s.index, s.start_m, s.length_m) for s in corridor.segments
        ]

    def test_out_of_bounds_rejected(self, corridor):
        overlay = ScenarioOverlay(
            name="x", from_km=20.0, to_km=25.0, ops=(OverlayOp("set", "hd-maps", 0),)
        )
        with pytest.raises(ValidationError, match="outside corridor"):
            apply_overlay(corridor, overlay)

    @given(st.integers(min_value=0, max_value=2))
    def test_cap_never_increases(self, cap_value):
        profile = tiny_profile()
        overlay = ScenarioOverlay(
            name="x",
            from_km=0.0,
            to_km=profile.length_km,
            ops=(OverlayOp("cap", "lighting", cap_value),),
        )
        result = apply_overlay(profile, overlay)
        for before, after in zip(profile.segments, result.segments):
            assert after.values["lighting"] <= before.values["lighting"]

    def test_inverted_range_rejected(self):
        with pytest.raises(ValueError, match="empty or inverted"):
            ScenarioOverlay(name="x", from_km=2.0, to_km=2.0, ops=())

    def test_overlay_file(self, roadworks):
        assert roadworks.from_km == 11.0
        assert roadworks.to_km == 17.0
        assert any(op.attribute == "lane-mark-consistency" and op.op == "set" for op in roadworks.ops)

    def test_bad_overlay_file(self, tmp_path):
        path = tmp_path / "o.json"
        path.write_text(json.dumps({"name": "x", "from_km": 0, "to_km": 1, "ops": [{"op": "zap", "attribute": "hd-maps", "value": 1}]}))
        with pytest.raises(ParseError, match="bad overlay"):
            load_overlay(path)


class TestRubrics:
    retro = RubricEntry(
        direction="higher-is-better",
        breakpoints=((None, 0), (100.0, 1), (200.0, 2)),
        unit="mcd/m2/lx",
    )
    curvature = RubricEntry(
        direction="lower-is-better",
        breakpoints=((None, 2), (0.8, 1), (2.0, 0)),
        unit="1/km",
    )

    def test_higher_is_better(self):
        rubric = {"lane-mark-retroreflectivity": self.retro}
        assert operationalize({"lane-mark-retroreflectivity": 300.0}, rubric) == {
            "lane-mark-retroreflectivity": 2
        }
        assert operationalize({"lane-mark-retroreflectivity": 99.9}, rubric) == {
            "lane-mark-retroreflectivity": 0
        }

    def test_breakpoint_belongs_to_higher_interval(self):
        rubric = {"lane-mark-retroreflectivity": self.retro}
        assert operationalize({"lane-mark-retroreflectivity": 200.0}, rubric) == {
            "lane-mark-retroreflectivity": 2
        }
        assert operationalize({"lane-mark-retroreflectivity": 100.0}, rubric) == {
            "lane-mark-retroreflectivity": 1
        }

    def test_lower_is_better_below_best_threshold(self):
        rubric = {"horizontal-curvature": self.curvature}
        assert operationalize({"horizontal-curvature": 0.2}, rubric) == {"horizontal-curvature": 2}
        assert operationalize({"horizontal-curvature": 2.0}, rubric) == {"horizontal-curvature": 0}

    def test_missing_entry_rejected(self):
        with pytest.raises(ValidationError, match="no rubric entry"):
            operationalize({"hd-maps": 1.0}, {})

    def test_non_monotone_rejected(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            RubricEntry(direction="higher-is-better", breakpoints=((None, 0), (200.0, 1), (100.0, 2)))

    def test_level_order_must_match_direction(self):
        with pytest.raises(ValueError, match="do not cover"):
            RubricEntry(direction="lower-is-better", breakpoints=((None, 0), (1.0, 1), (2.0, 2)))

    def test_load_example_rubric(self):
        rubric = load_rubric(fixture_path(RUBRIC_EXAMPLE_FILE))
        assert rubric["lane-mark-retroreflectivity"].direction == "higher-is-better"
        assert rubric["horizontal-curvature"].level_for(0.5) == 2


class TestSegmentCount:
    def test_partial_final_segment_rounds_up(self):
        from hri.corridor import expected_segment_count

        assert expected_segment_count(0.25, 100.0) == 3
        assert expected_segment_count(24.0, 100.0) == 240
        assert expected_segment_count(0.1, 100.0) == 1


class TestSegmentObservation:
    def test_rejects_bad_adequacy(self):
        with pytest.raises(ValueError, match="must be 0, 1 or 2"):
            SegmentObservation(index=0, start_m=0.0, length_m=100.0, values={"hd-maps": 5})

    def test_rejects_misaligned_start(self):
        with pytest.raises(ValueError, match="start_m"):
            SegmentObservation(index=2, start_m=150.0, length_m=100.0, values={})

    def test_profile_rejects_gap(self):
        good = tiny_profile()
        with pytest.raises(ValidationError, match="position 1"):
            CorridorProfile(
                corridor_id="bad",
                length_km=good.length_km,
                segment_length_m=good.segment_length_m,
                segments=(good.segments[0], good.segments[2], good.segments[1], good.segments[3]),
            )

    def test_profile_rejects_wrong_count(self):
        good = tiny_profile()
        with pytest.raises(ValidationError, match="expected 4"):
            CorridorProfile(
                corridor_id="bad",
                length_km=good.length_km,
                segment_length_m=good.segment_length_m,
                segments=good.segments[:3],
            )
