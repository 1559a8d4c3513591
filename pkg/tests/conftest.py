"""Shared fixtures: a small hand-checkable corpus and coordinate constants."""
from __future__ import annotations

import pytest

from citeflow.model import (
    Address,
    AuthorRecord,
    CitationLink,
    CitingRecord,
    Corpus,
    Gazetteer,
    PublicationRecord,
    ScToDaMapping,
    TerritoryEntry,
    TerritoryKind,
)

ROME = (41.8931, 12.4828)
MILAN = (45.4642, 9.1900)
TURIN = (45.0703, 7.6869)
CATANIA = (37.5079, 15.0830)
AOSTA = (45.7372, 7.3206)
LONDON = (51.5072, -0.1276)
PARIS = (48.8566, 2.3522)
NEW_YORK = (40.7128, -74.0060)
TOKYO = (35.6762, 139.6503)
BEIJING = (39.9042, 116.4074)
WASHINGTON = (38.9072, -77.0369)


def lau(tid, city, lat_lon, country="IT"):
    return TerritoryEntry(
        territory_id=tid,
        kind=TerritoryKind.LAU,
        country_code=country,
        display_name=city,
        lat=lat_lon[0],
        lon=lat_lon[1],
    )


def country(code, capital, lat_lon):
    return TerritoryEntry(
        territory_id=f"C_{code}",
        kind=TerritoryKind.COUNTRY,
        country_code=code,
        display_name=capital,
        lat=lat_lon[0],
        lon=lat_lon[1],
    )


def build_gazetteer():
    return Gazetteer(
        [
            lau("IT_ROME", "rome", ROME),
            lau("IT_MILAN", "milan", MILAN),
            lau("IT_TURIN", "turin", TURIN),
            lau("IT_CATANIA", "catania", CATANIA),
            lau("IT_AOSTA", "aosta", AOSTA),
            country("IT", "rome", ROME),
            country("GB", "london", LONDON),
            country("FR", "paris", PARIS),
            country("US", "washington", WASHINGTON),
            country("JP", "tokyo", TOKYO),
        ]
    )


@pytest.fixture
def gazetteer():
    return build_gazetteer()


EUROPE = frozenset({"IT", "FR", "GB", "DE", "ES", "CH", "AT", "NL", "BE", "SE"})


def addr(city, country_code="IT"):
    return Address(city=city, country=country_code)


def author(key, *cities):
    return AuthorRecord(
        author_key=key,
        affiliations=tuple(addr(c) if isinstance(c, str) else c for c in cities),
    )


def cited_pub(pub_id, year=2010, scs=("SC_A",), authors=()):
    return PublicationRecord(
        pub_id=pub_id,
        year=year,
        sc_codes=frozenset(scs),
        authors=tuple(authors) or (author(f"auth_{pub_id}", "rome"),),
    )


def citing_pub(pub_id, year=2011, scs=("SC_A",), addresses=("milan",),
               author_keys=None, countries=None):
    countries = countries or ["IT"] * len(addresses)
    return CitingRecord(
        pub_id=pub_id,
        year=year,
        sc_codes=frozenset(scs),
        addresses=tuple(addr(c, k) for c, k in zip(addresses, countries)),
        author_keys=tuple(author_keys) if author_keys is not None else None,
    )


@pytest.fixture
def sc_mapping():
    return ScToDaMapping(
        {
            "SC_A": "Natural sciences",
            "SC_B": "Engineering and technology",
            "SC_C": "Medical and health sciences",
            "Paleontology": "Natural sciences",
        }
    )


def make_corpus(gaz, mapping, cited, citing, links):
    return Corpus(
        cited={p.pub_id: p for p in cited},
        citing={p.pub_id: p for p in citing},
        links=tuple(CitationLink(citing_id=a, cited_id=b) for a, b in links),
        gazetteer=gaz,
        sc_to_da=mapping,
    )
