"""citeflow.corpus
~~~~~~~~~~~~~~~~~~

Input parsing, address normalization and corpus-level statistics.

File formats (one record per line, documented headers):

* publications.jsonl -- {"pub_id", "year", "scs": [...],
  "authors": [{"key", "affils": [{"city", "country"}]}]}
* citing.jsonl -- {"pub_id", "year", "scs": [...],
  "addresses": [{"city", "country"}], "author_keys": [...] (optional)}
* citations.csv -- header ``citing_id,cited_id``
* gazetteer.csv -- header ``territory_id,kind,country_code,display_name,lat,lon``
* sc_to_da.csv -- header ``sc_code,da_code``
"""
from __future__ import annotations

import csv
import json
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

from .model import (
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

PathLike = Union[str, Path]


class CorpusError(Exception):
    """Hard input error: the file cannot be used as loaded."""


class AddressError(ValueError):
    """An address field that is empty or unresolvable after normalization."""


# Country-name lookup for the normalizer. Two- and three-letter codes pass
# through directly; full names (WoS-style variants included) resolve here.
_COUNTRY_NAMES = {
    "italy": "IT",
    "germany": "DE",
    "france": "FR",
    "spain": "ES",
    "portugal": "PT",
    "switzerland": "CH",
    "austria": "AT",
    "belgium": "BE",
    "netherlands": "NL",
    "the netherlands": "NL",
    "luxembourg": "LU",
    "united kingdom": "GB",
    "great britain": "GB",
    "uk": "GB",
    "england": "GB",
    "scotland": "GB",
    "wales": "GB",
    "north ireland": "GB",
    "ireland": "IE",
    "denmark": "DK",
    "sweden": "SE",
    "norway": "NO",
    "finland": "FI",
    "iceland": "IS",
    "poland": "PL",
    "czech republic": "CZ",
    "czechia": "CZ",
    "slovakia": "SK",
    "hungary": "HU",
    "romania": "RO",
    "bulgaria": "BG",
    "greece": "GR",
    "croatia": "HR",
    "slovenia": "SI",
    "serbia": "RS",
    "ukraine": "UA",
    "russia": "RU",
    "estonia": "EE",
    "latvia": "LV",
    "lithuania": "LT",
    "malta": "MT",
    "cyprus": "CY",
    "turkey": "TR",
    "usa": "US",
    "united states": "US",
    "united states of america": "US",
    "canada": "CA",
    "mexico": "MX",
    "brazil": "BR",
    "argentina": "AR",
    "chile": "CL",
    "colombia": "CO",
    "peru": "PE",
    "china": "CN",
    "peoples r china": "CN",
    "people's republic of china": "CN",
    "japan": "JP",
    "south korea": "KR",
    "korea": "KR",
    "india": "IN",
    "pakistan": "PK",
    "iran": "IR",
    "israel": "IL",
    "saudi arabia": "SA",
    "singapore": "SG",
    "taiwan": "TW",
    "hong kong": "HK",
    "thailand": "TH",
    "vietnam": "VN",
    "indonesia": "ID",
    "malaysia": "MY",
    "australia": "AU",
    "new zealand": "NZ",
    "south africa": "ZA",
    "egypt": "EG",
    "morocco": "MA",
    "tunisia": "TN",
    "nigeria": "NG",
    "kenya": "KE",
}

_ISO3_TO_ISO2 = {
    "ita": "IT", "deu": "DE", "fra": "FR", "esp": "ES", "prt": "PT",
    "che": "CH", "aut": "AT", "bel": "BE", "nld": "NL", "gbr": "GB",
    "irl": "IE", "dnk": "DK", "swe": "SE", "nor": "NO", "fin": "FI",
    "pol": "PL", "cze": "CZ", "grc": "GR", "usa": "US", "can": "CA",
    "bra": "BR", "chn": "CN", "jpn": "JP", "kor": "KR", "ind": "IN",
    "aus": "AU", "rus": "RU", "tur": "TR", "zaf": "ZA", "mex": "MX",
}


def fold_ascii(text: str) -> str:
    """Strip diacritics via NFKD decomposition, dropping combining marks."""
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


def normalize_city(raw: str) -> str:
    city = " ".join(fold_ascii(raw).lower().split())
    if not city:
        raise AddressError(f"city {raw!r} empty after normalization")
    return city


def normalize_country(raw: str) -> str:
    folded = " ".join(fold_ascii(raw).lower().split())
    if not folded:
        raise AddressError(f"country {raw!r} empty after normalization")
    if len(folded) == 2 and folded.isalpha():
        return folded.upper()
    if folded in _COUNTRY_NAMES:
        return _COUNTRY_NAMES[folded]
    if folded in _ISO3_TO_ISO2:
        return _ISO3_TO_ISO2[folded]
    raise AddressError(f"unrecognized country {raw!r}")


def normalize_address(raw_city: str, raw_country: str) -> Address:
    """Reduce a raw address to normalized city + two-letter country code.

    Deterministic and idempotent: normalizing an already-normalized
    address returns it unchanged.
    """
    return Address(city=normalize_city(raw_city), country=normalize_country(raw_country))


def normalize_author_key(raw: str) -> str:
    key = "_".join(fold_ascii(raw).lower().split())
    if not key:
        raise AddressError(f"author key {raw!r} empty after normalization")
    return key


@dataclass
class ParseReport:
    records: list
    warnings: list[str]


def _json_lines(path: PathLike) -> Iterable[tuple[int, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: invalid JSON ({exc})") from exc


def parse_publications(
    path: PathLike,
    role: str,
    year_range: Optional[tuple[int, int]] = None,
) -> ParseReport:
    """Parse a JSONL publication file.

    ``role`` is "CITED" (author-affiliation records) or "CITING"
    (address-list records). Malformed records are rejected with a warning
    carrying the line number; duplicate pub_ids are a hard error.
    """
    if role not in ("CITED", "CITING"):
        raise ValueError(f"role must be CITED or CITING, got {role!r}")
    records: list = []
    warnings: list[str] = []
    seen: dict[str, int] = {}
    duplicates: list[str] = []
    for lineno, obj in _json_lines(path):
        try:
            rec = _record_from_obj(obj, role, year_range)
        except (AddressError, KeyError, TypeError, ValueError) as exc:
            warnings.append(f"{path}:{lineno}: record rejected: {exc}")
            continue
        if rec.pub_id in seen:
            duplicates.append(rec.pub_id)
            continue
        seen[rec.pub_id] = lineno
        records.append(rec)
    if duplicates:
        raise CorpusError(
            f"{path}: duplicate pub_id values: {sorted(set(duplicates))}"
        )
    return ParseReport(records=records, warnings=warnings)


def _record_from_obj(obj: dict, role: str, year_range):
    pub_id = str(obj["pub_id"])
    if not pub_id:
        raise ValueError("empty pub_id")
    year = int(obj["year"])
    scs = frozenset(str(s) for s in obj["scs"])
    if not scs:
        raise ValueError("empty subject-category list")
    if role == "CITED":
        if year_range is not None and not (year_range[0] <= year <= year_range[1]):
            raise ValueError(f"year {year} outside cited range {year_range}")
        authors = []
        for a in obj["authors"]:
            affils = tuple(
                normalize_address(x["city"], x["country"]) for x in a["affils"]
            )
            if not affils:
                raise ValueError("author with empty affiliation list")
            authors.append(
                AuthorRecord(author_key=normalize_author_key(a["key"]), affiliations=affils)
            )
        if not authors:
            raise ValueError("empty authors list")
        return PublicationRecord(
            pub_id=pub_id, year=year, sc_codes=scs, authors=tuple(authors)
        )
    if year_range is not None and year < year_range[0]:
        raise ValueError(f"citing year {year} before minimum cited year {year_range[0]}")
    addresses = tuple(
        normalize_address(x["city"], x["country"]) for x in obj["addresses"]
    )
    if not addresses:
        raise ValueError("empty addresses list")
    raw_keys = obj.get("author_keys")
    author_keys = (
        tuple(normalize_author_key(k) for k in raw_keys) if raw_keys is not None else None
    )
    return CitingRecord(
        pub_id=pub_id, year=year, sc_codes=scs, addresses=addresses, author_keys=author_keys
    )


def parse_citations(path: PathLike, cited_ids: set, citing_ids: set) -> ParseReport:
    """Parse citations.csv; duplicate pairs are collapsed with a warning,
    links referencing unknown publications are rejected with a warning."""
    links: list[CitationLink] = []
    warnings: list[str] = []
    seen: set[tuple[str, str]] = set()
    n_dup = 0
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        _require_columns(path, reader.fieldnames, ["citing_id", "cited_id"])
        for lineno, row in enumerate(reader, start=2):
            citing_id, cited_id = row["citing_id"], row["cited_id"]
            if cited_id not in cited_ids:
                warnings.append(f"{path}:{lineno}: unknown cited_id {cited_id!r}")
                continue
            if citing_id not in citing_ids:
                warnings.append(f"{path}:{lineno}: unknown citing_id {citing_id!r}")
                continue
            pair = (citing_id, cited_id)
            if pair in seen:
                n_dup += 1
                continue
            seen.add(pair)
            links.append(CitationLink(citing_id=citing_id, cited_id=cited_id))
    if n_dup:
        warnings.append(f"{path}: collapsed {n_dup} duplicate citation pair(s)")
    return ParseReport(records=links, warnings=warnings)


def parse_gazetteer(path: PathLike) -> Gazetteer:
    entries = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        _require_columns(
            path,
            reader.fieldnames,
            ["territory_id", "kind", "country_code", "display_name", "lat", "lon"],
        )
        for lineno, row in enumerate(reader, start=2):
            try:
                kind = TerritoryKind(row["kind"])
                lat, lon = float(row["lat"]), float(row["lon"])
            except ValueError as exc:
                raise CorpusError(f"{path}:{lineno}: {exc}") from exc
            if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
                raise CorpusError(f"{path}:{lineno}: coordinates out of range")
            entries.append(
                TerritoryEntry(
                    territory_id=row["territory_id"],
                    kind=kind,
                    country_code=row["country_code"].strip().upper(),
                    display_name=normalize_city(row["display_name"]),
                    lat=lat,
                    lon=lon,
                )
            )
    try:
        return Gazetteer(entries)
    except ValueError as exc:
        raise CorpusError(f"{path}: {exc}") from exc


def parse_sc_to_da(path: PathLike) -> ScToDaMapping:
    entries: dict[str, str] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        _require_columns(path, reader.fieldnames, ["sc_code", "da_code"])
        for lineno, row in enumerate(reader, start=2):
            sc = row["sc_code"]
            if sc in entries and entries[sc] != row["da_code"]:
                raise CorpusError(f"{path}:{lineno}: conflicting mapping for SC {sc!r}")
            entries[sc] = row["da_code"]
    try:
        return ScToDaMapping(entries)
    except ValueError as exc:
        raise CorpusError(f"{path}: {exc}") from exc


def _require_columns(path, fieldnames, required):
    missing = [c for c in required if fieldnames is None or c not in fieldnames]
    if missing:
        raise CorpusError(f"{path}: missing column(s) {missing}")


def map_sc_to_da(sc: str, mapping: ScToDaMapping) -> str:
    """Return the single disciplinary area for a subject category.

    The mapping must be total over the corpus; an unmapped SC is a hard error.
    """
    return mapping.da_for(sc)


def load_corpus(
    publications: PathLike,
    citing: PathLike,
    citations: PathLike,
    gazetteer: PathLike,
    sc_to_da: PathLike,
    cited_year_range: Optional[tuple[int, int]] = None,
) -> Corpus:
    """Load and cross-validate the full input file set.

    Fails before any analysis if a subject category in the corpus has no
    disciplinary-area mapping.
    """
    gaz = parse_gazetteer(gazetteer)
    mapping = parse_sc_to_da(sc_to_da)
    cited_rep = parse_publications(publications, "CITED", cited_year_range)
    citing_rep = parse_publications(citing, "CITING", cited_year_range)
    cited = {r.pub_id: r for r in cited_rep.records}
    citing_recs = {r.pub_id: r for r in citing_rep.records}
    links_rep = parse_citations(citations, set(cited), set(citing_recs))
    for recs in (cited.values(), citing_recs.values()):
        for rec in recs:
            for sc in rec.sc_codes:
                if sc not in mapping:
                    raise CorpusError(
                        f"subject category {sc!r} (in {rec.pub_id}) missing from SC->DA mapping"
                    )
    return Corpus(
        cited=cited,
        citing=citing_recs,
        links=tuple(links_rep.records),
        gazetteer=gaz,
        sc_to_da=mapping,
        warnings=cited_rep.warnings + citing_rep.warnings + links_rep.warnings,
    )


@dataclass(frozen=True)
class CorpusStats:
    n_cited: int
    n_cited_with_citation: int
    n_cited_assigned: int
    n_citations: int
    n_unique_citing: int


def corpus_stats(corpus: Corpus, cited_assignments=None) -> CorpusStats:
    """Summary counts over the loaded corpus.

    ``cited_assignments`` maps pub_id to a TerritoryAssignment; when given,
    the assigned count covers cited publications that both received a
    citation and have a prevalent territory.
    """
    cited_with_cit = {link.cited_id for link in corpus.links}
    if cited_assignments is not None:
        assigned = sum(
            1
            for pid in cited_with_cit
            if pid in cited_assignments and cited_assignments[pid].prevalent
        )
    else:
        assigned = 0
    return CorpusStats(
        n_cited=len(corpus.cited),
        n_cited_with_citation=len(cited_with_cit),
        n_cited_assigned=assigned,
        n_citations=len(corpus.links),
        n_unique_citing={link.citing_id for link in corpus.links}.__len__(),
    )
