"""citeflow.flows
~~~~~~~~~~~~~~~~~

Enriched citation events, self-citation detection, delay profiles of
average distance, and aggregation into gravity observations.

One event is emitted per citation link and per subject category of the
cited publication (full counting over multi-category journals). Citation
windows are cumulative: window w covers delays 0..w-1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import geo
from .cognitive_mass import MassTable
from .model import CitingRecord, Corpus, PublicationRecord, Scale, ScToDaMapping, TerritoryKind
from .territory import TerritoryAssignment, classify_scale


@dataclass(frozen=True)
class CitationEvent:
    citing_id: str
    cited_id: str
    focal_sc: str
    cited_territory: str
    citing_territory: str
    scale: Scale
    distance_km: float
    delay_years: int
    self_citation: bool


@dataclass
class BuildReport:
    """Events plus drop/warning counters from event construction."""

    events: list[CitationEvent] = field(default_factory=list)
    dropped_no_cited_territory: int = 0
    dropped_no_citing_territory: int = 0
    dropped_negative_delay: int = 0
    missing_author_keys: int = 0
    warnings: list[str] = field(default_factory=list)


def detect_self_citation(
    citing: CitingRecord,
    cited: PublicationRecord,
    missing_counter: Optional[list] = None,
) -> bool:
    """True iff the two records share at least one normalized author key.

    Citing records without author keys cannot support detection and return
    False; ``missing_counter`` (a single-element list) is incremented so
    the degradation stays visible at corpus level.
    """
    if citing.author_keys is None:
        if missing_counter is not None:
            missing_counter[0] += 1
        return False
    cited_keys = {a.author_key for a in cited.authors}
    return any(k in cited_keys for k in citing.author_keys)


def build_events(
    corpus: Corpus,
    cited_assignments: Mapping[str, TerritoryAssignment],
    citing_lau_assignments: Mapping[str, TerritoryAssignment],
    citing_country_assignments: Mapping[str, TerritoryAssignment],
    home_country: str,
    continent_set: frozenset[str] | set[str],
) -> BuildReport:
    """Expand citation links into per-SC citation events.

    National events use LAU-level citing territories; continental and
    intercontinental events use COUNTRY-level ones (capital coordinates).
    Links lacking a prevalent territory on either side are dropped and
    counted.
    """
    report = BuildReport()
    gaz = corpus.gazetteer
    missing = [0]
    distance_cache: dict[tuple[str, str], float] = {}
    for link in corpus.links:
        cited = corpus.cited[link.cited_id]
        citing = corpus.citing[link.citing_id]
        cited_assign = cited_assignments.get(link.cited_id)
        if cited_assign is None or not cited_assign.prevalent:
            report.dropped_no_cited_territory += 1
            continue
        country_assign = citing_country_assignments.get(link.citing_id)
        if country_assign is None or not country_assign.prevalent:
            report.dropped_no_citing_territory += 1
            continue
        citing_country_entry = gaz.by_id[country_assign.territory_id]
        scale = classify_scale(citing_country_entry, home_country, continent_set)
        if scale is Scale.NATIONAL:
            lau_assign = citing_lau_assignments.get(link.citing_id)
            if lau_assign is None or not lau_assign.prevalent:
                report.dropped_no_citing_territory += 1
                continue
            citing_entry = gaz.by_id[lau_assign.territory_id]
        else:
            citing_entry = citing_country_entry
        delay = citing.year - cited.year
        if delay < 0:
            report.dropped_negative_delay += 1
            report.warnings.append(
                f"negative delay for {link.citing_id}->{link.cited_id} ({delay})"
            )
            continue
        cited_entry = gaz.by_id[cited_assign.territory_id]
        pair_key = (cited_entry.territory_id, citing_entry.territory_id)
        dist = distance_cache.get(pair_key)
        if dist is None:
            dist = geo.pair_distance(cited_entry, citing_entry)
            distance_cache[pair_key] = dist
        is_self = detect_self_citation(citing, cited, missing)
        for sc in sorted(cited.sc_codes):
            report.events.append(
                CitationEvent(
                    citing_id=link.citing_id,
                    cited_id=link.cited_id,
                    focal_sc=sc,
                    cited_territory=cited_entry.territory_id,
                    citing_territory=citing_entry.territory_id,
                    scale=scale,
                    distance_km=dist,
                    delay_years=delay,
                    self_citation=is_self,
                )
            )
    report.missing_author_keys = missing[0]
    return report


@dataclass(frozen=True)
class DelayProfile:
    """Mean distance and event count per citation delay.

    Cells with no events are absent from the map, never reported as zero.
    """

    scale: Scale
    group: str  # "overall" or a disciplinary-area code
    include_self: bool
    cells: dict[int, tuple[float, int]]


def delay_profile(
    events: list[CitationEvent],
    scale: Scale,
    include_self: bool,
    group: str = "overall",
    sc_to_da: Optional[ScToDaMapping] = None,
) -> DelayProfile:
    """Count-weighted mean distance per delay, filtered by scale, DA and policy.

    ``group`` is "overall" or a disciplinary-area code (requires
    ``sc_to_da``). Each event counts once.
    """
    if group != "overall" and sc_to_da is None:
        raise ValueError("DA grouping requires an SC->DA mapping")
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for ev in events:
        if ev.scale is not scale:
            continue
        if not include_self and ev.self_citation:
            continue
        if group != "overall" and sc_to_da.da_for(ev.focal_sc) != group:
            continue
        sums[ev.delay_years] = sums.get(ev.delay_years, 0.0) + ev.distance_km
        counts[ev.delay_years] = counts.get(ev.delay_years, 0) + 1
    cells = {t: (sums[t] / counts[t], counts[t]) for t in sorted(counts)}
    return DelayProfile(scale=scale, group=group, include_self=include_self, cells=cells)


@dataclass(frozen=True)
class GravityObservation:
    focal_sc: str
    scale: Scale
    window_years: int
    include_self: bool
    cited_territory: str
    citing_territory: str
    c_ij: int
    m_i: float
    m_j: float
    d_km: float


class UnfitCell(Exception):
    """Too few observations to estimate the gravity model."""


@dataclass
class AggregateReport:
    observations: list[GravityObservation]
    dropped_zero_distance: int = 0
    dropped_missing_mass: int = 0


def aggregate_flows(
    events: list[CitationEvent],
    focal_sc: str,
    scale: Scale,
    window_years: int,
    include_self: bool,
    mass_table: MassTable,
) -> AggregateReport:
    """Cumulative citation counts per territory pair, joined with masses.

    C_ij counts events with delay < window_years. Pairs with zero flow are
    not emitted (the log-log model is estimated on observed flows); pairs
    at zero distance or without positive masses are dropped and counted,
    since they cannot enter log space.
    """
    if window_years < 1:
        raise ValueError("window_years must be >= 1")
    flows: dict[tuple[str, str], int] = {}
    dist: dict[tuple[str, str], float] = {}
    for ev in events:
        if ev.focal_sc != focal_sc or ev.scale is not scale:
            continue
        if not include_self and ev.self_citation:
            continue
        if ev.delay_years >= window_years:
            continue
        pair = (ev.cited_territory, ev.citing_territory)
        flows[pair] = flows.get(pair, 0) + 1
        dist[pair] = ev.distance_km
    report = AggregateReport(observations=[])
    for pair in sorted(flows):
        i, j = pair
        d = dist[pair]
        if d <= 0.0:
            report.dropped_zero_distance += 1
            continue
        m_i = mass_table.m_cited.get((i, focal_sc))
        m_j = mass_table.m_citing.get((j, focal_sc))
        if not m_i or not m_j:
            report.dropped_missing_mass += 1
            continue
        report.observations.append(
            GravityObservation(
                focal_sc=focal_sc,
                scale=scale,
                window_years=window_years,
                include_self=include_self,
                cited_territory=i,
                citing_territory=j,
                c_ij=flows[pair],
                m_i=float(m_i),
                m_j=m_j,
                d_km=d,
            )
        )
    return report
