"""citeflow.cognitive_mass
~~~~~~~~~~~~~~~~~~~~~~~~~~

Research sizes of territories, accounting for cognitive proximity.

The cited-side mass of a territory in a focal subject category is the
plain count of its cited-period publications carrying that category. The
citing-side mass weights the territory's citing-period publication counts
by the world-level SC frequency profile of everything citing the focal
category, so that cognitively close output counts proportionally.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .model import Corpus, TerritoryKind
from .territory import TerritoryAssignment


@dataclass(frozen=True)
class ScWeightProfile:
    """Normalized SC frequency distribution of the citers of a focal SC."""

    focal_sc: str
    weights: dict[str, float]


def sc_weight_profile(focal_sc: str, corpus: Corpus) -> Optional[ScWeightProfile]:
    """SC profile over all citing publications of the focal SC's cited set.

    Each subject category of each citing publication is full-counted once
    per citation link. Returns None when the focal SC has no citations
    (such SCs are excluded from the regression).
    """
    counts: dict[str, int] = {}
    total = 0
    for link in corpus.links:
        cited = corpus.cited[link.cited_id]
        if focal_sc not in cited.sc_codes:
            continue
        citing = corpus.citing[link.citing_id]
        for sc in citing.sc_codes:
            counts[sc] = counts.get(sc, 0) + 1
            total += 1
    if total == 0:
        return None
    return ScWeightProfile(
        focal_sc=focal_sc,
        weights={sc: n / total for sc, n in sorted(counts.items())},
    )


def all_sc_weight_profiles(corpus: Corpus) -> dict[str, ScWeightProfile]:
    """One-pass computation of sc_weight_profile for every cited SC with citations."""
    counts: dict[str, dict[str, int]] = {}
    totals: dict[str, int] = {}
    for link in corpus.links:
        cited = corpus.cited[link.cited_id]
        citing = corpus.citing[link.citing_id]
        for focal in cited.sc_codes:
            bucket = counts.setdefault(focal, {})
            for sc in citing.sc_codes:
                bucket[sc] = bucket.get(sc, 0) + 1
                totals[focal] = totals.get(focal, 0) + 1
    return {
        focal: ScWeightProfile(
            focal_sc=focal,
            weights={sc: n / totals[focal] for sc, n in sorted(bucket.items())},
        )
        for focal, bucket in sorted(counts.items())
    }


def publication_counts(
    records, assignments: Mapping[str, TerritoryAssignment]
) -> dict[tuple[str, str], int]:
    """Full-counted publications per (territory_id, sc), prevalent only."""
    counts: dict[tuple[str, str], int] = {}
    for rec in records:
        assignment = assignments.get(rec.pub_id)
        if assignment is None or not assignment.prevalent:
            continue
        for sc in rec.sc_codes:
            key = (assignment.territory_id, sc)
            counts[key] = counts.get(key, 0) + 1
    return counts


def cited_mass(
    territory_id: str,
    focal_sc: str,
    corpus: Corpus,
    cited_assignments: Mapping[str, TerritoryAssignment],
) -> int:
    """Count of cited-period publications of a territory in the focal SC."""
    n = 0
    for rec in corpus.cited.values():
        if focal_sc not in rec.sc_codes:
            continue
        assignment = cited_assignments.get(rec.pub_id)
        if assignment is not None and assignment.territory_id == territory_id:
            n += 1
    return n


def citing_mass(
    territory_id: str,
    profile: ScWeightProfile,
    citing_counts: Mapping[tuple[str, str], int],
) -> float:
    """Profile-weighted sum of the territory's citing-period publication counts."""
    return sum(
        w * citing_counts.get((territory_id, sc), 0)
        for sc, w in profile.weights.items()
    )


@dataclass
class MassTable:
    """Masses per (territory_id, focal_sc), for one citing-territory level."""

    level: TerritoryKind
    m_cited: dict[tuple[str, str], int] = field(default_factory=dict)
    m_citing: dict[tuple[str, str], float] = field(default_factory=dict)
    profiles: dict[str, ScWeightProfile] = field(default_factory=dict)


def build_mass_table(
    corpus: Corpus,
    cited_assignments: Mapping[str, TerritoryAssignment],
    citing_assignments: Mapping[str, TerritoryAssignment],
    level: TerritoryKind,
    focal_scs: Optional[list[str]] = None,
) -> MassTable:
    """Precompute masses for every focal SC with at least one citation.

    ``citing_assignments`` must be at the requested level (LAU for the
    national analysis, COUNTRY otherwise).
    """
    if focal_scs is None:
        focal_scs = sorted({sc for rec in corpus.cited.values() for sc in rec.sc_codes})
    table = MassTable(level=level)
    cited_counts = publication_counts(corpus.cited.values(), cited_assignments)
    citing_counts = publication_counts(corpus.citing.values(), citing_assignments)
    cited_territories = sorted({t for (t, _sc) in cited_counts})
    citing_territories = sorted({t for (t, _sc) in citing_counts})
    profiles = all_sc_weight_profiles(corpus)
    for sc in focal_scs:
        profile = profiles.get(sc)
        if profile is None:
            continue
        table.profiles[sc] = profile
        for t in cited_territories:
            m = cited_counts.get((t, sc), 0)
            if m:
                table.m_cited[(t, sc)] = m
        for t in citing_territories:
            m = citing_mass(t, profile, citing_counts)
            if m > 0.0:
                table.m_citing[(t, sc)] = m
    return table
