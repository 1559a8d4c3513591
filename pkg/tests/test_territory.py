"""Prevailing-territory assignment and scale classification."""
import pytest
from hypothesis import given, strategies as st

from citeflow.model import Scale, TerritoryKind
from citeflow.territory import (
    ABSOLUTE,
    assign_cited_territory,
    assign_citing_territory,
    classify_scale,
)

from conftest import (
    EUROPE,
    LONDON,
    ROME,
    WASHINGTON,
    author,
    build_gazetteer,
    cited_pub,
    citing_pub,
    country,
)


class TestCitedAssignment:
    def test_unanimous_single_affiliations(self, gazetteer):
        pub = cited_pub("p1", authors=[author(f"a{i}", "rome") for i in range(3)])
        a = assign_cited_territory(pub, gazetteer)
        assert a.territory_id == "IT_ROME"
        assert a.weight_table == {"IT_ROME": 3.0}

    def test_single_author_two_territories_is_tie(self, gazetteer):
        pub = cited_pub("p1", authors=[author("a1", "rome", "milan")])
        a = assign_cited_territory(pub, gazetteer)
        assert not a.prevalent and a.territory_id is None
        assert a.weight_table == {"IT_ROME": 0.5, "IT_MILAN": 0.5}

    def test_fractional_counting_hand_computed(self, gazetteer):
        # a1, a2 in A; a3 split across A and B; a4 in B -> {A: 2.5, B: 1.5}
        pub = cited_pub(
            "p1",
            authors=[
                author("a1", "rome"),
                author("a2", "rome"),
                author("a3", "rome", "milan"),
                author("a4", "milan"),
            ],
        )
        a = assign_cited_territory(pub, gazetteer)
        assert a.weight_table == {"IT_ROME": 2.5, "IT_MILAN": 1.5}
        assert a.territory_id == "IT_ROME"

    def test_duplicate_affiliation_strings_do_not_change_weights(self, gazetteer):
        once = cited_pub("p1", authors=[author("a1", "rome", "milan")])
        doubled = cited_pub("p1", authors=[author("a1", "rome", "rome", "milan")])
        assert (
            assign_cited_territory(once, gazetteer).weight_table
            == assign_cited_territory(doubled, gazetteer).weight_table
        )

    @given(st.permutations(["rome", "rome", "milan", "turin"]))
    def test_author_order_never_changes_assignment(self, cities):
        pub = cited_pub("p1", authors=[author(f"a{i}", c) for i, c in enumerate(cities)])
        a = assign_cited_territory(pub, build_gazetteer())
        assert a.territory_id == "IT_ROME"
        assert a.weight_table == {"IT_ROME": 2.0, "IT_MILAN": 1.0, "IT_TURIN": 1.0}

    def test_unresolvable_addresses_logged_not_fatal(self, gazetteer):
        pub = cited_pub("p1", authors=[author("a1", "nowhere"), author("a2", "rome")])
        log = []
        a = assign_cited_territory(pub, gazetteer, unresolved=log)
        assert a.territory_id == "IT_ROME"
        assert a.weight_table == {"IT_ROME": 1.0}
        assert len(log) == 1

    def test_all_unresolvable_gives_none(self, gazetteer):
        pub = cited_pub("p1", authors=[author("a1", "nowhere")])
        a = assign_cited_territory(pub, gazetteer)
        assert not a.prevalent and a.weight_table == {}

    def test_weights_sum_to_counted_authors(self, gazetteer):
        pub = cited_pub(
            "p1",
            authors=[author("a1", "rome", "milan"), author("a2", "turin"), author("a3", "rome")],
        )
        a = assign_cited_territory(pub, gazetteer)
        assert sum(a.weight_table.values()) == pytest.approx(3.0, abs=1e-9)

    def test_absolute_majority_rule(self, gazetteer):
        # plurality winner at 2/5 counted authors is not an absolute majority
        pub = cited_pub(
            "p1",
            authors=[author("a1", "rome"), author("a2", "rome"),
                     author("a3", "milan"), author("a4", "turin"), author("a5", "catania")],
        )
        assert assign_cited_territory(pub, gazetteer).territory_id == "IT_ROME"
        assert assign_cited_territory(pub, gazetteer, majority_rule=ABSOLUTE).territory_id is None


class TestCitingAssignment:
    def test_strict_majority_at_lau_level(self, gazetteer):
        pub = citing_pub("q1", addresses=("rome", "rome", "milan"))
        a = assign_citing_territory(pub, gazetteer, TerritoryKind.LAU)
        assert a.territory_id == "IT_ROME"

    def test_symmetric_country_tie_gives_none(self, gazetteer):
        pub = citing_pub("q1", addresses=("rome", "paris"), countries=("IT", "FR"))
        a = assign_citing_territory(pub, gazetteer, TerritoryKind.COUNTRY)
        assert a.territory_id is None
        assert a.weight_table == {"C_IT": 1.0, "C_FR": 1.0}

    def test_country_level_full_counting(self, gazetteer):
        pub = citing_pub(
            "q1",
            addresses=("rome", "milan", "milan", "lyon"),
            countries=("IT", "IT", "IT", "FR"),
        )
        a = assign_citing_territory(pub, gazetteer, TerritoryKind.COUNTRY)
        assert a.weight_table == {"C_IT": 3.0, "C_FR": 1.0}
        assert a.territory_id == "C_IT"

    @given(st.permutations(["rome", "milan", "milan"]))
    def test_address_order_irrelevant(self, cities):
        pub = citing_pub("q1", addresses=tuple(cities))
        a = assign_citing_territory(pub, build_gazetteer(), TerritoryKind.LAU)
        assert a.territory_id == "IT_MILAN"

    def test_repeated_addresses_full_counted(self, gazetteer):
        # footnote-5 convention: duplicates count twice, distortion accepted
        pub = citing_pub("q1", addresses=("rome", "rome", "milan", "turin"))
        a = assign_citing_territory(pub, gazetteer, TerritoryKind.LAU)
        assert a.weight_table["IT_ROME"] == 2.0


class TestScaleClassification:
    def test_home_is_national(self):
        assert classify_scale(country("IT", "rome", ROME), "IT", EUROPE) == Scale.NATIONAL

    def test_european_is_continental(self):
        assert classify_scale(country("GB", "london", LONDON), "IT", EUROPE) == Scale.CONTINENTAL

    def test_extra_european_is_intercontinental(self):
        assert (
            classify_scale(country("US", "washington", WASHINGTON), "IT", EUROPE)
            == Scale.INTERCONTINENTAL
        )

    def test_continent_set_must_contain_home(self):
        with pytest.raises(ValueError):
            classify_scale(country("GB", "london", LONDON), "IT", frozenset({"FR", "GB"}))

    def test_malformed_country_code_is_error(self):
        bad = country("X1", "x", ROME)
        with pytest.raises(ValueError):
            classify_scale(bad, "IT", EUROPE | {"X1"})
