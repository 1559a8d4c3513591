"""citeflow.model
~~~~~~~~~~~~~~~~~

Canonical data structures shared by the whole pipeline.

Every loader returns objects conforming to these schemas, and every
downstream stage (territory assignment, mass computation, flow building,
regression) treats them as immutable once loaded.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional


class TerritoryKind(str, enum.Enum):
    LAU = "LAU"
    COUNTRY = "COUNTRY"


class Scale(str, enum.Enum):
    """Geographic scale of a citing publication relative to the home country."""

    NATIONAL = "national"
    CONTINENTAL = "continental"
    INTERCONTINENTAL = "intercontinental"


@dataclass(frozen=True)
class Address:
    """A normalized city + country pair.

    ``city`` is lowercase, whitespace-trimmed, diacritics folded to ASCII;
    ``country`` is a two-letter uppercase code. Both are non-empty.
    """

    city: str
    country: str


@dataclass(frozen=True)
class AuthorRecord:
    author_key: str
    affiliations: tuple[Address, ...]


@dataclass(frozen=True)
class PublicationRecord:
    """A cited publication: authors carry their affiliation addresses."""

    pub_id: str
    year: int
    sc_codes: frozenset[str]
    authors: tuple[AuthorRecord, ...]


@dataclass(frozen=True)
class CitingRecord:
    """A citing publication: only an address list, optionally author keys.

    ``author_keys`` may be None, in which case self-citation detection
    degrades to "not a self-citation" with a corpus-level warning counter.
    """

    pub_id: str
    year: int
    sc_codes: frozenset[str]
    addresses: tuple[Address, ...]
    author_keys: Optional[tuple[str, ...]] = None


@dataclass(frozen=True)
class CitationLink:
    citing_id: str
    cited_id: str


@dataclass(frozen=True)
class TerritoryEntry:
    """One gazetteer row. COUNTRY entries carry their capital's coordinates."""

    territory_id: str
    kind: TerritoryKind
    country_code: str
    display_name: str
    lat: float
    lon: float


class Gazetteer:
    """Indexed territory lookup.

    LAU entries are keyed by (normalized city, country code); COUNTRY
    entries by country code. Territory ids are unique across kinds.
    """

    def __init__(self, entries: list[TerritoryEntry]):
        self.entries = list(entries)
        self.by_id: dict[str, TerritoryEntry] = {}
        self.lau_by_city: dict[tuple[str, str], TerritoryEntry] = {}
        self.country_by_code: dict[str, TerritoryEntry] = {}
        for e in entries:
            if e.territory_id in self.by_id:
                raise ValueError(f"duplicate territory_id {e.territory_id!r}")
            self.by_id[e.territory_id] = e
            if e.kind is TerritoryKind.LAU:
                self.lau_by_city[(e.display_name, e.country_code)] = e
            else:
                self.country_by_code[e.country_code] = e

    def resolve_lau(self, addr: Address) -> Optional[TerritoryEntry]:
        return self.lau_by_city.get((addr.city, addr.country))

    def resolve_country(self, addr: Address) -> Optional[TerritoryEntry]:
        return self.country_by_code.get(addr.country)

    def __len__(self) -> int:
        return len(self.entries)


DA_CODES = (
    "Natural sciences",
    "Engineering and technology",
    "Medical and health sciences",
    "Agricultural sciences",
    "Social sciences",
    "Humanities",
)


class ScToDaMapping:
    """Total map from subject-category code to one of the six disciplinary areas."""

    def __init__(self, entries: dict[str, str]):
        for sc, da in entries.items():
            if da not in DA_CODES:
                raise ValueError(f"unknown disciplinary area {da!r} for SC {sc!r}")
        self.entries = dict(entries)

    def __contains__(self, sc: str) -> bool:
        return sc in self.entries

    def da_for(self, sc: str) -> str:
        try:
            return self.entries[sc]
        except KeyError:
            raise UnmappedSubjectCategory(sc) from None


class UnmappedSubjectCategory(KeyError):
    """A subject category with no disciplinary-area mapping (mapping must be total)."""

    def __init__(self, sc: str):
        super().__init__(sc)
        self.sc = sc

    def __str__(self) -> str:
        return f"subject category {self.sc!r} has no disciplinary-area mapping"


@dataclass
class Corpus:
    """The full loaded input set, read-only after construction."""

    cited: dict[str, PublicationRecord]
    citing: dict[str, CitingRecord]
    links: tuple[CitationLink, ...]
    gazetteer: Gazetteer
    sc_to_da: ScToDaMapping
    warnings: list[str] = field(default_factory=list)
