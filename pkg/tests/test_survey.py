from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hri.errors import ParseError, ValidationError
from hri.fixtures import (
    SURVEY17_RATINGS_FILE,
    SURVEY17_RESPONDENTS_FILE,
    build_survey_responses,
    fixture_path,
    rating_cell_plan,
)
from hri.survey import (
    DayService,
    Region,
    SurveyResponse,
    aggregate_mean_impact,
    grouped_mean,
    impact_difference,
    load_survey,
)
from hri.taxonomy import AutomationLevelGroup, WeightTable, attribute_ids

ASD = AutomationLevelGroup.ASD
AUD = AutomationLevelGroup.AUD


def response(rid, ratings, region=Region.OTHER, days=None):
    return SurveyResponse(
        respondent_id=rid,
        role="Researcher",
        region=region,
        av_expertise=3,
        cits_expertise=3,
        attribute_ratings=ratings,
        cits_day_ratings=days or {},
    )


class TestAggregateMeanImpact:
    def test_two_point_mean(self):
        responses = [
            response("a", {("hd-maps", AUD): 2, ("hd-maps", ASD): 1}),
            response("b", {("hd-maps", AUD): 1, ("hd-maps", ASD): 1}),
        ]
        table = aggregate_mean_impact(responses, attributes=["hd-maps"])
        assert table.lookup(AUD, "hd-maps") == 1.5
        assert table.provenance == "custom"

    def test_constant_input(self):
        ratings = {(attr, group): 2 for attr in attribute_ids() for group in AutomationLevelGroup}
        table = aggregate_mean_impact([response("a", ratings)])
        assert all(w == 2.0 for w in table.weights.values())

    def test_20_respondent_reconstruction_is_exact(self, weights):
        table = aggregate_mean_impact(build_survey_responses(20))
        assert dict(table.weights) == dict(weights.weights)

    def test_17_respondent_reconstruction(self, weights):
        # Five target means have denominator 20 in lowest terms, so they
        # cannot be hit exactly with at most 17 integer ratings; everything
        # else must be exact.
        inexact = {
            (AUD, "vegetation-maintenance"),
            (AUD, "lane-mark-consistency"),
            (AUD, "sign-maintenance"),
            (AUD, "lighting"),
            (ASD, "horizontal-curvature"),
        }
        table = aggregate_mean_impact(build_survey_responses(17))
        for key, expected in weights.weights.items():
            if key in inexact:
                assert abs(table.weights[key] - expected) < 0.01
            else:
                assert table.weights[key] == expected

    def test_empty_list_rejected(self):
        with pytest.raises(ValidationError, match="empty response list"):
            aggregate_mean_impact([])

    def test_uncovered_pair_reported(self):
        responses = [response("a", {("hd-maps", AUD): 2})]
        with pytest.raises(ValidationError, match=r"\(asd, hd-maps\)"):
            aggregate_mean_impact(responses, attributes=["hd-maps"])

    def test_missing_ratings_excluded_from_denominator(self):
        responses = [
            response("a", {("hd-maps", AUD): 2, ("hd-maps", ASD): 0}),
            response("b", {("hd-maps", AUD): 2, ("hd-maps", ASD): 0}),
            response("c", {("hd-maps", ASD): 0}),  # did not rate the AUD cell
        ]
        table = aggregate_mean_impact(responses, attributes=["hd-maps"])
        assert table.lookup(AUD, "hd-maps") == 2.0

    @given(st.permutations(range(6)))
    def test_permutation_invariance(self, order):
        rng = random.Random(7)
        base = [
            response(
                f"r{i}",
                {
                    (attr, group): rng.choice((0, 1, 2))
                    for attr in ("hd-maps", "lighting")
                    for group in AutomationLevelGroup
                },
            )
            for i in range(6)
        ]
        shuffled = [base[i] for i in order]
        left = aggregate_mean_impact(base, attributes=("hd-maps", "lighting"))
        right = aggregate_mean_impact(shuffled, attributes=("hd-maps", "lighting"))
        assert dict(left.weights) == dict(right.weights)

    @settings(max_examples=200)
    @given(st.lists(st.sampled_from([0, 1, 2]), min_size=1, max_size=30))
    def test_means_stay_on_rating_scale(self, ratings):
        responses = [
            response(f"r{i}", {("hd-maps", AUD): value, ("hd-maps", ASD): value})
            for i, value in enumerate(ratings)
        ]
        table = aggregate_mean_impact(responses, attributes=["hd-maps"])
        assert 0.0 <= table.lookup(AUD, "hd-maps") <= 2.0


class TestImpactDifference:
    def test_builtin_spot_values(self, weights):
        diffs = impact_difference(weights)
        assert diffs["hd-maps"] == pytest.approx(0.7, abs=1e-9)
        assert diffs["horizontal-curvature"] == pytest.approx(-0.15, abs=1e-9)

    def test_identical_groups_give_zero(self):
        table = WeightTable({(g, "hd-maps"): 1.3 for g in AutomationLevelGroup})
        assert impact_difference(table) == {"hd-maps": 0.0}

    def test_linear_in_per_respondent_differences(self):
        # with full coverage, diff(mean) == mean(per-respondent diffs)
        rng = random.Random(11)
        attrs = ("hd-maps", "lighting", "lane-width")
        responses = [
            response(
                f"r{i}",
                {(a, g): rng.choice((0, 1, 2)) for a in attrs for g in AutomationLevelGroup},
            )
            for i in range(9)
        ]
        diffs = impact_difference(aggregate_mean_impact(responses, attributes=attrs))
        for attr in attrs:
            per_resp = [
                r.attribute_ratings[(attr, AUD)] - r.attribute_ratings[(attr, ASD)]
                for r in responses
            ]
            assert diffs[attr] == pytest.approx(sum(per_resp) / len(per_resp), abs=1e-12)


class TestGroupedMean:
    def test_constructed_region_day_means(self):
        responses = build_survey_responses(17)
        means = grouped_mean(responses)
        assert means[(Region.EUROPE, DayService.DAY3)] == pytest.approx(1.70, abs=1e-9)
        assert round(means[(Region.USA, DayService.DAY3)], 2) == 0.33
        assert round(means[(Region.USA, DayService.DAY1)], 2) == 1.33

    def test_singleton_mean(self):
        responses = [
            response("a", {}, days={day: 1 for day in DayService}, region=Region.EUROPE)
        ]
        means = grouped_mean(responses)
        assert means == {(Region.EUROPE, day): 1.0 for day in DayService}

    def test_groups_without_data_absent(self):
        responses = [
            response("a", {}, days={DayService.DAY1: 2}, region=Region.EUROPE)
        ]
        means = grouped_mean(responses)
        assert (Region.USA, DayService.DAY1) not in means
        assert (Region.EUROPE, DayService.DAY2) not in means


class TestCellPlan:
    def test_exact_when_representable(self):
        n, total = rating_cell_plan(140, 17)  # mean 1.4 = 7/5
        assert (n, total) == (5, 7)

    def test_falls_back_to_nearest(self):
        n, total = rating_cell_plan(95, 17)  # mean 0.95 unreachable under 19 raters
        assert (n, total) == (17, 16)

    @given(st.integers(min_value=0, max_value=200), st.integers(min_value=1, max_value=20))
    def test_plan_always_valid(self, cents, n_resp):
        n, total = rating_cell_plan(cents, n_resp)
        assert 1 <= n <= n_resp
        assert 0 <= total <= 2 * n


class TestSurveyFiles:
    def test_fixture_round_trip(self):
        loaded = load_survey(
            fixture_path(SURVEY17_RATINGS_FILE), fixture_path(SURVEY17_RESPONDENTS_FILE)
        )
        assert loaded == build_survey_responses(17)

    def test_bad_rating_has_line_number(self, tmp_path):
        respondents = tmp_path / "resp.csv"
        respondents.write_text(
            "respondent_id,role,region,av_expertise,cits_expertise,day1,day2,day3\n"
            "r1,Professor,europe,5,4,1,1,1\n"
        )
        ratings = tmp_path / "ratings.csv"
        ratings.write_text(
            "respondent_id,attribute,group,rating\n"
            "r1,hd-maps,aud,2\n"
            "r1,hd-maps,asd,7\n"
        )
        with pytest.raises(ParseError, match="rating 7 outside") as excinfo:
            load_survey(ratings, respondents)
        assert excinfo.value.line == 3

    def test_unknown_respondent_rejected(self, tmp_path):
        respondents = tmp_path / "resp.csv"
        respondents.write_text(
            "respondent_id,role,region,av_expertise,cits_expertise,day1,day2,day3\n"
            "r1,Professor,europe,5,4,,,\n"
        )
        ratings = tmp_path / "ratings.csv"
        ratings.write_text("respondent_id,attribute,group,rating\nr9,hd-maps,aud,2\n")
        with pytest.raises(ParseError, match="unknown respondent 'r9'") as excinfo:
            load_survey(ratings, respondents)
        assert excinfo.value.line == 2

    def test_duplicate_rating_rejected(self, tmp_path):
        respondents = tmp_path / "resp.csv"
        respondents.write_text(
            "respondent_id,role,region,av_expertise,cits_expertise,day1,day2,day3\n"
            "r1,Professor,usa,5,4,,,\n"
        )
        ratings = tmp_path / "ratings.csv"
        ratings.write_text(
            "respondent_id,attribute,group,rating\n"
            "r1,hd-maps,aud,2\n"
            "r1,hd-maps,aud,1\n"
        )
        with pytest.raises(ParseError, match="duplicate rating"):
            load_survey(ratings, respondents)

    def test_empty_ratings_rejected(self, tmp_path):
        respondents = tmp_path / "resp.csv"
        respondents.write_text(
            "respondent_id,role,region,av_expertise,cits_expertise,day1,day2,day3\n"
            "r1,Professor,usa,5,4,,,\n"
        )
        ratings = tmp_path / "ratings.csv"
        ratings.write_text("")
        with pytest.raises(ParseError, match="empty file"):
            load_survey(ratings, respondents)

    def test_bad_expertise_rejected(self):
        with pytest.raises(ValueError, match="av_expertise"):
            SurveyResponse(
                respondent_id="x",
                role="Researcher",
                region=Region.OTHER,
                av_expertise=6,
                cits_expertise=3,
            )
