"""Tests for parameter-family surveys and published-list reproduction."""

import pytest

from tusv.core.errors import AnchorError, WitnessContradiction
from tusv.core.generators import Generator, GeneratorKind
from tusv.core.grammar import parse_term
from tusv.schemas.catalog import Caps, WitnessClaim
from tusv.services import classifier
from tusv.services.catalog import errata_for, load_catalog
from tusv.services.classifier import (
    FamilyKind,
    cap_from_anchor,
    confirm_published_witnesses,
    confirm_two_term_witnesses,
    diff_survivors,
    enumerate_survivors,
    family_form,
    family_tuples,
    min_positive_value,
    open_cases,
    reproduce_theorem_list,
    verify_anchor_caps,
)


class TestFamilyTuples:
    """Tests for candidate enumeration."""

    def test_gp_family_skips_divisible(self):
        """Type I with a <= b, and only odd c when d = 2."""
        tuples = family_tuples(FamilyKind.TYPE_I, Caps(a=2, b=2, c=3, d=2))
        assert tuples == [
            (1, 1, 1, 2),
            (1, 1, 3, 2),
            (1, 2, 1, 2),
            (1, 2, 3, 2),
            (2, 2, 1, 2),
            (2, 2, 3, 2),
        ]

    def test_type_three_is_unordered(self):
        tuples = family_tuples(FamilyKind.TYPE_III, Caps(a=2, b=2, c=1, d=2))
        assert {(a, b) for a, b, _, _ in tuples} == {(1, 1), (1, 2), (2, 1), (2, 2)}

    def test_excluded_pairs(self):
        tuples = family_tuples(
            FamilyKind.TYPE_III, Caps(a=2, b=1, c=1, d=2), exclude_ab=[(2, 1)]
        )
        assert tuples == [(1, 1, 1, 2)]

    def test_triangular_triples(self):
        tuples = family_tuples(FamilyKind.TRI_TRIPLE, Caps(a=2, b=2, c=2))
        assert tuples == [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)]

    def test_gp_family_needs_d_cap(self):
        with pytest.raises(ValueError):
            family_tuples(FamilyKind.TYPE_II, Caps(a=1, b=1, c=1))

    def test_family_form_arity(self):
        with pytest.raises(ValueError):
            family_form(FamilyKind.TYPE_I, (1, 1, 3))

    def test_family_form(self):
        form = family_form(FamilyKind.TYPE_III, (1, 2, 15, 2))
        assert form.terms == (
            Generator(GeneratorKind.triangular()),
            Generator(GeneratorKind.square(), 2),
            Generator(GeneratorKind.genpoly(15, 2)),
        )


class TestAnchors:
    """Tests for caps derived from anchor values."""

    def test_two_squares_anchor(self):
        """14 and 12 miss x^2+y^2, so with d = 2 the cap is 14 - 4."""
        fixed = (parse_term("1*sq"), parse_term("1*sq"))
        assert cap_from_anchor(fixed, 2, [14]) == 10

    def test_smallest_cap_wins(self):
        fixed = (parse_term("1*tri"), parse_term("1*tri"))
        assert cap_from_anchor(fixed, 2, [35, 19]) == 15

    def test_attained_anchor_raises(self):
        """2 = 1 + 1 is attained, so it cannot serve as an anchor."""
        fixed = (parse_term("1*sq"), parse_term("1*sq"))
        with pytest.raises(AnchorError) as excinfo:
            cap_from_anchor(fixed, 1, [2])
        assert excinfo.value.anchor == 2

    def test_anchor_minus_d_attained_raises(self):
        """3 misses x^2+y^2 but 3 - 1 = 2 does not."""
        fixed = (parse_term("1*sq"), parse_term("1*sq"))
        with pytest.raises(AnchorError):
            cap_from_anchor(fixed, 1, [3])

    def test_needs_targets(self):
        with pytest.raises(ValueError):
            cap_from_anchor((parse_term("1*sq"), parse_term("1*sq")), 1, [])

    def test_all_recorded_anchor_caps(self):
        verdict = verify_anchor_caps()
        assert verdict.checks
        assert verdict.passed, verdict.failures

    def test_min_positive_value(self):
        assert min_positive_value(parse_term("7*sq")) == 7
        assert min_positive_value(parse_term("2*tri")) == 2
        assert min_positive_value(parse_term("gp(15,2)")) == 2


class TestWitnessTables:
    """Cited non-attained values, checked exhaustively."""

    def test_every_cited_witness_holds(self):
        verdict = confirm_published_witnesses()
        assert len(verdict.checks) >= 60
        assert verdict.passed, verdict.failures

    def test_two_term_sets_are_exact(self):
        verdict = confirm_two_term_witnesses()
        assert verdict.passed, verdict.failures

    def test_contradiction_reported(self, monkeypatch):
        """A representable value fails the check, and raises in strict mode."""
        catalog = load_catalog().model_copy(
            update={
                "witnesses": [WitnessClaim(source="t", form="1*sq+1*sq+1*sq", value=6)],
                "supplementary_witnesses": [],
            }
        )
        monkeypatch.setattr(classifier, "load_catalog", lambda: catalog)
        verdict = confirm_published_witnesses()
        assert not verdict.passed
        assert "attained" in verdict.failures[0].detail
        with pytest.raises(WitnessContradiction) as excinfo:
            confirm_published_witnesses(strict=True)
        assert excinfo.value.value == 6


class TestSurvey:
    """Tests for survivor enumeration and diffs."""

    def test_small_survey(self):
        """x^2+y^2+gp(c,2), c <= 3: only x^2+y^2+z(z+3)/2 survives W = 1000."""
        survey = enumerate_survivors(FamilyKind.TYPE_I, Caps(a=1, b=1, c=3, d=2), 1000)
        assert survey.survivors == ((1, 1, 1, 2),)
        assert set(survey.excluded) == {(1, 1, 3, 2)}
        assert survey.expected_match is None

    def test_parallel_survey_matches_inline(self):
        caps = Caps(a=1, b=2, c=6, d=3)
        inline = enumerate_survivors(FamilyKind.TYPE_II, caps, 300, jobs=1)
        pooled = enumerate_survivors(FamilyKind.TYPE_II, caps, 300, jobs=2)
        assert inline.survivors == pooled.survivors
        assert inline.excluded == pooled.excluded

    def test_larger_witness_bound_only_removes(self):
        """Raising W can exclude more tuples but never revives one."""
        caps = load_catalog().theorems["1.1"].caps
        loose = enumerate_survivors(FamilyKind.TYPE_I, caps, 100)
        tight = enumerate_survivors(FamilyKind.TYPE_I, caps, 1000)
        assert set(tight.survivors) <= set(loose.survivors)
        assert set(loose.excluded) <= set(tight.excluded)

    def test_published_caps_fix_a(self):
        """The first list only surveys a = 1."""
        assert load_catalog().theorems["1.1"].caps.a == 1

    def test_negative_witness_bound(self):
        with pytest.raises(ValueError):
            enumerate_survivors(FamilyKind.TYPE_I, Caps(a=1, b=1, c=1, d=2), -1)

    def test_diff_classifies_errata(self):
        diff = diff_survivors([(1,), (2,), (3,)], [(1,), (4,)], {(3,)})
        assert diff.missing == ((4,),)
        assert diff.extra == ((2,), (3,))
        assert diff.errata == ((3,),)
        assert diff.unresolved == ((2,),)
        assert not diff.expected_match

    @pytest.mark.parametrize("which", ["1.1", "1.2", "1.3i", "1.3ii", "liouville"])
    def test_reproduce_published_list(self, which):
        """Every published form survives and nothing unexplained is added."""
        survey = reproduce_theorem_list(which)
        assert survey.diff.missing == ()
        assert set(survey.diff.extra) <= errata_for(which)
        assert survey.expected_match is True
        assert set(survey.expected) <= set(survey.survivors)

    def test_recorded_errata_survive(self):
        """The omitted survivors really do attain every n <= W."""
        assert (1, 2, 2, 4) in reproduce_theorem_list("1.2").survivors
        assert (1, 1, 4, 6) in reproduce_theorem_list("1.3i").survivors

    def test_display(self):
        survey = enumerate_survivors(FamilyKind.TYPE_II, Caps(a=1, b=2, c=1, d=2), 10)
        assert survey.display((1, 2, 1, 2)) == "T_x+2T_y+z(z+3)/2"


class TestOpenCases:
    """Tuples of one proof case that no list entry or witness accounts for."""

    def test_b25_reading_matters(self):
        """Only the value-list reading cites 68 for z(25z-9)/2."""
        cases = open_cases("1.3i", (1, 1), 8)
        assert cases == {"k_list": [(1, 1, 25, 8)], "value_list": []}

    def test_unaddressed_c19(self):
        cases = open_cases("1.3i", (1, 1), 4)
        assert cases["k_list"] == cases["value_list"] == [(1, 1, 19, 4)]

    def test_omitted_survivors_are_open(self):
        assert open_cases("1.3i", (1, 1), 6)["k_list"] == [(1, 1, 4, 6)]
        assert open_cases("1.2", (1, 2), 4)["value_list"] == [(1, 2, 2, 4)]

    def test_closed_case(self):
        cases = open_cases("1.2", (1, 1), 4)
        assert cases == {"k_list": [], "value_list": []}

    def test_supplementary_witness_closes_c19(self):
        """47 is not T_x+y^2+z(19z-11)/2."""
        supplementary = load_catalog().supplementary_witnesses
        assert [(w.form, w.value) for w in supplementary] == [("1*tri+1*sq+1*gp(19,4)", 47)]

    def test_triangular_family_rejected(self):
        with pytest.raises(ValueError):
            open_cases("liouville", (1, 1), 1)
