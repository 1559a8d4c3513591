"""Parsing, normalization and corpus statistics."""
import json

import pytest
from hypothesis import given, strategies as st

from citeflow import corpus as corpus_mod
from citeflow.corpus import (
    AddressError,
    CorpusError,
    corpus_stats,
    map_sc_to_da,
    normalize_address,
    parse_citations,
    parse_publications,
)
from citeflow.model import Address, ScToDaMapping, UnmappedSubjectCategory
from citeflow.territory import TerritoryAssignment

from conftest import cited_pub, citing_pub, make_corpus


def write_jsonl(path, objs):
    path.write_text("".join(json.dumps(o) + "\n" for o in objs), encoding="utf-8")


def cited_obj(pub_id, year=2010, scs=("SC_A",), authors=None):
    if authors is None:
        authors = [{"key": "rossi m", "affils": [{"city": "Rome", "country": "Italy"}]}]
    return {"pub_id": pub_id, "year": year, "scs": list(scs), "authors": authors}


class TestNormalizeAddress:
    def test_case_and_whitespace_folding(self):
        assert normalize_address("Rome ", "ITALY") == Address("rome", "IT")

    def test_idempotent(self):
        assert normalize_address("rome", "IT") == Address("rome", "IT")

    def test_diacritics_folding(self):
        # oracle: character-by-character NFKD fold of the input
        assert normalize_address("Münster", "Germany") == Address("munster", "DE")

    def test_empty_city_rejected(self):
        with pytest.raises(AddressError):
            normalize_address("  ", "IT")

    def test_unknown_country_rejected(self):
        with pytest.raises(AddressError):
            normalize_address("rome", "Atlantis")

    @given(st.text(min_size=1, max_size=30))
    def test_city_normalization_idempotent_on_random_strings(self, raw):
        try:
            once = corpus_mod.normalize_city(raw)
        except AddressError:
            return
        assert corpus_mod.normalize_city(once) == once


class TestScToDa:
    def test_paleontology_maps_to_natural_sciences(self, sc_mapping):
        assert map_sc_to_da("Paleontology", sc_mapping) == "Natural sciences"

    def test_unmapped_code_is_hard_error(self, sc_mapping):
        with pytest.raises(UnmappedSubjectCategory):
            map_sc_to_da("XX", sc_mapping)

    def test_deterministic(self, sc_mapping):
        assert all(
            map_sc_to_da("SC_A", sc_mapping) == "Natural sciences" for _ in range(5)
        )

    def test_unknown_da_rejected(self):
        with pytest.raises(ValueError):
            ScToDaMapping({"SC_X": "Alchemy"})


class TestParsePublications:
    def test_wellformed_fixture(self, tmp_path):
        path = tmp_path / "pubs.jsonl"
        write_jsonl(path, [cited_obj(f"p{i}") for i in range(3)])
        report = parse_publications(path, "CITED")
        assert len(report.records) == 3
        assert report.warnings == []

    def test_empty_author_list_rejected_with_line_number(self, tmp_path):
        path = tmp_path / "pubs.jsonl"
        write_jsonl(path, [cited_obj("p1"), cited_obj("p2", authors=[])])
        report = parse_publications(path, "CITED")
        assert len(report.records) == 1
        assert len(report.warnings) == 1
        assert ":2:" in report.warnings[0]

    def test_duplicate_pub_id_hard_error_names_offender(self, tmp_path):
        path = tmp_path / "pubs.jsonl"
        objs = [cited_obj(f"p{i}") for i in range(8)] + [cited_obj("p1"), cited_obj("p3")]
        write_jsonl(path, objs)
        with pytest.raises(CorpusError) as err:
            parse_publications(path, "CITED")
        assert "p1" in str(err.value) and "p3" in str(err.value)

    def test_reparse_is_deterministic_and_order_preserving(self, tmp_path):
        path = tmp_path / "pubs.jsonl"
        write_jsonl(path, [cited_obj(f"p{i}") for i in (3, 1, 2)])
        first = parse_publications(path, "CITED").records
        second = parse_publications(path, "CITED").records
        assert first == second
        assert [r.pub_id for r in first] == ["p3", "p1", "p2"]

    def test_year_range_enforced_for_cited(self, tmp_path):
        path = tmp_path / "pubs.jsonl"
        write_jsonl(path, [cited_obj("p1", year=2009), cited_obj("p2", year=2011)])
        report = parse_publications(path, "CITED", year_range=(2010, 2012))
        assert [r.pub_id for r in report.records] == ["p2"]

    def test_citing_records_may_omit_author_keys(self, tmp_path):
        path = tmp_path / "citing.jsonl"
        write_jsonl(
            path,
            [{"pub_id": "q1", "year": 2011, "scs": ["SC_A"],
              "addresses": [{"city": "Milan", "country": "IT"}]}],
        )
        report = parse_publications(path, "CITING")
        assert report.records[0].author_keys is None


class TestParseCitations:
    def test_duplicate_pairs_collapsed_with_warning(self, tmp_path):
        path = tmp_path / "citations.csv"
        path.write_text("citing_id,cited_id\nq1,p1\nq1,p1\nq2,p1\n")
        report = parse_citations(path, {"p1"}, {"q1", "q2"})
        assert len(report.records) == 2
        assert any("duplicate" in w for w in report.warnings)

    def test_unknown_ids_rejected_with_warning(self, tmp_path):
        path = tmp_path / "citations.csv"
        path.write_text("citing_id,cited_id\nq1,p_missing\n")
        report = parse_citations(path, {"p1"}, {"q1"})
        assert report.records == []
        assert len(report.warnings) == 1


class TestCorpusStats:
    def test_empty_corpus_all_zero(self, gazetteer, sc_mapping):
        corpus = make_corpus(gazetteer, sc_mapping, [], [], [])
        stats = corpus_stats(corpus, {})
        assert (stats.n_cited, stats.n_cited_with_citation, stats.n_cited_assigned,
                stats.n_citations, stats.n_unique_citing) == (0, 0, 0, 0, 0)

    def test_hand_counted_fixture(self, gazetteer, sc_mapping):
        cited = [cited_pub(f"p{i}") for i in range(5)]
        citing = [citing_pub(f"q{i}") for i in range(7)]
        links = [("q0", "p0"), ("q1", "p0"), ("q2", "p1"), ("q3", "p1"),
                 ("q4", "p2"), ("q5", "p2"), ("q6", "p3"), ("q0", "p3"), ("q1", "p4")]
        corpus = make_corpus(gazetteer, sc_mapping, cited, citing, links)
        assignments = {
            p.pub_id: TerritoryAssignment(p.pub_id, "IT_ROME", {"IT_ROME": 1.0})
            for p in cited[:4]
        }
        stats = corpus_stats(corpus, assignments)
        assert stats.n_cited == 5
        assert stats.n_cited_with_citation == 5
        assert stats.n_cited_assigned == 4
        assert stats.n_citations == 9
        assert stats.n_unique_citing == 7
        assert stats.n_cited_assigned <= stats.n_cited_with_citation <= stats.n_cited
