"""citeflow.territory
~~~~~~~~~~~~~~~~~~~~~

Prevailing-territory assignment and geographic-scale classification.

Cited publications: each author with m distinct resolved territories
contributes 1/m to each (fractional counting); the prevailing territory is
the unique strict maximum of the author-weight table. Citing publications:
address occurrences are full-counted at the requested level. A tie for the
maximum (or an all-zero table) yields no prevailing territory, and the
publication is excluded downstream.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .model import CitingRecord, Gazetteer, PublicationRecord, Scale, TerritoryEntry, TerritoryKind

PLURALITY = "plurality"
ABSOLUTE = "absolute"


@dataclass(frozen=True)
class TerritoryAssignment:
    pub_id: str
    territory_id: Optional[str]
    weight_table: dict[str, float] = field(default_factory=dict)

    @property
    def prevalent(self) -> bool:
        return self.territory_id is not None


def _prevailing(pub_id: str, weights: dict[str, float], total: float,
                majority_rule: str) -> TerritoryAssignment:
    if not weights:
        return TerritoryAssignment(pub_id=pub_id, territory_id=None, weight_table={})
    best = max(weights.values())
    winners = [t for t, w in weights.items() if w == best]
    territory = winners[0] if len(winners) == 1 else None
    if territory is not None and majority_rule == ABSOLUTE:
        if total <= 0 or best <= total / 2.0:
            territory = None
    return TerritoryAssignment(pub_id=pub_id, territory_id=territory, weight_table=dict(weights))


def assign_cited_territory(
    pub: PublicationRecord,
    gaz: Gazetteer,
    majority_rule: str = PLURALITY,
    unresolved: Optional[list[str]] = None,
) -> TerritoryAssignment:
    """Fractional-counting assignment over the authors' affiliations.

    Unresolvable addresses are logged into ``unresolved`` (when given) and
    reduce the counted total; an author with no resolvable affiliation
    contributes nothing.
    """
    weights: dict[str, float] = {}
    counted_authors = 0
    for author in pub.authors:
        territories = set()
        for addr in author.affiliations:
            entry = gaz.resolve_lau(addr)
            if entry is None:
                if unresolved is not None:
                    unresolved.append(f"{pub.pub_id}: unmatched address {addr.city},{addr.country}")
                continue
            territories.add(entry.territory_id)
        if not territories:
            continue
        counted_authors += 1
        share = 1.0 / len(territories)
        for t in sorted(territories):
            weights[t] = weights.get(t, 0.0) + share
    return _prevailing(pub.pub_id, weights, float(counted_authors), majority_rule)


def assign_citing_territory(
    pub: CitingRecord,
    gaz: Gazetteer,
    level: TerritoryKind,
    majority_rule: str = PLURALITY,
    unresolved: Optional[list[str]] = None,
) -> TerritoryAssignment:
    """Full counting of address occurrences at LAU or COUNTRY level."""
    weights: dict[str, float] = {}
    counted = 0
    for addr in pub.addresses:
        if level is TerritoryKind.LAU:
            entry = gaz.resolve_lau(addr)
        else:
            entry = gaz.resolve_country(addr)
        if entry is None:
            if unresolved is not None:
                unresolved.append(f"{pub.pub_id}: unmatched address {addr.city},{addr.country}")
            continue
        counted += 1
        weights[entry.territory_id] = weights.get(entry.territory_id, 0.0) + 1.0
    return _prevailing(pub.pub_id, weights, float(counted), majority_rule)


def classify_scale(
    citing_territory: TerritoryEntry,
    home_country: str,
    continent_set: frozenset[str] | set[str],
) -> Scale:
    """National / continental / intercontinental, by citing country.

    ``continent_set`` must contain the home country; continental flows
    exclude the home country itself.
    """
    if home_country not in continent_set:
        raise ValueError(f"continent set must contain home country {home_country!r}")
    code = citing_territory.country_code
    if not (len(code) == 2 and code.isalpha() and code.isupper()):
        raise ValueError(f"unknown country code {code!r}")
    if code == home_country:
        return Scale.NATIONAL
    if code in continent_set:
        return Scale.CONTINENTAL
    return Scale.INTERCONTINENTAL
