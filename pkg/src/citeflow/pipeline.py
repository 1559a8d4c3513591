"""citeflow.pipeline
~~~~~~~~~~~~~~~~~~~~

End-to-end orchestration: assignments -> events -> masses -> delay
profiles -> gravity observations -> coefficient series.

This is the library-level entry point the CLI wraps; all stages are
deterministic given the corpus and settings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cognitive_mass import MassTable, build_mass_table
from .flows import (
    AggregateReport,
    BuildReport,
    DelayProfile,
    GravityObservation,
    aggregate_flows,
    build_events,
    delay_profile,
)
from .gravity import CoefficientSeries, coefficient_series
from .model import Corpus, DA_CODES, Scale, TerritoryKind
from .territory import PLURALITY, TerritoryAssignment, assign_cited_territory, assign_citing_territory

ALL_SCALES = (Scale.NATIONAL, Scale.CONTINENTAL, Scale.INTERCONTINENTAL)


@dataclass
class PipelineSettings:
    home_country: str = "IT"
    continent_set: frozenset[str] = frozenset(
        {"IT", "FR", "DE", "ES", "PT", "CH", "AT", "BE", "NL", "GB", "IE", "DK",
         "SE", "NO", "FI", "PL", "CZ", "SK", "HU", "RO", "BG", "GR", "HR", "SI",
         "RS", "UA", "EE", "LV", "LT", "MT", "CY", "LU", "IS"}
    )
    majority_rule: str = PLURALITY
    windows: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8)
    scales: tuple[Scale, ...] = ALL_SCALES
    self_policies: tuple[bool, ...] = (True, False)  # include_self values
    significance_level: float = 0.05


@dataclass
class PipelineResult:
    settings: PipelineSettings
    cited_assignments: dict[str, TerritoryAssignment]
    citing_lau_assignments: dict[str, TerritoryAssignment]
    citing_country_assignments: dict[str, TerritoryAssignment]
    build_report: BuildReport
    mass_tables: dict[TerritoryKind, MassTable]
    delay_profiles: list[DelayProfile] = field(default_factory=list)
    observations: list[GravityObservation] = field(default_factory=list)
    series: list[CoefficientSeries] = field(default_factory=list)
    unresolved_addresses: list[str] = field(default_factory=list)
    cell_status: list[dict] = field(default_factory=list)


def compute_assignments(corpus: Corpus, settings: PipelineSettings):
    unresolved: list[str] = []
    cited = {
        pid: assign_cited_territory(rec, corpus.gazetteer, settings.majority_rule, unresolved)
        for pid, rec in sorted(corpus.cited.items())
    }
    citing_lau = {
        pid: assign_citing_territory(
            rec, corpus.gazetteer, TerritoryKind.LAU, settings.majority_rule, unresolved
        )
        for pid, rec in sorted(corpus.citing.items())
    }
    citing_country = {
        pid: assign_citing_territory(
            rec, corpus.gazetteer, TerritoryKind.COUNTRY, settings.majority_rule, unresolved
        )
        for pid, rec in sorted(corpus.citing.items())
    }
    return cited, citing_lau, citing_country, unresolved


def run_pipeline(
    corpus: Corpus,
    settings: Optional[PipelineSettings] = None,
    groups: Optional[list[str]] = None,
) -> PipelineResult:
    """Run every stage and collect all analysis artifacts.

    ``groups`` are the pooling groups for coefficient series; defaults to
    "overall" plus every disciplinary area present in the corpus.
    """
    settings = settings or PipelineSettings()
    cited_a, citing_lau_a, citing_country_a, unresolved = compute_assignments(corpus, settings)
    report = build_events(
        corpus,
        cited_a,
        citing_lau_a,
        citing_country_a,
        settings.home_country,
        settings.continent_set,
    )
    mass_tables = {
        TerritoryKind.LAU: build_mass_table(
            corpus, cited_a, citing_lau_a, TerritoryKind.LAU
        ),
        TerritoryKind.COUNTRY: build_mass_table(
            corpus, cited_a, citing_country_a, TerritoryKind.COUNTRY
        ),
    }
    result = PipelineResult(
        settings=settings,
        cited_assignments=cited_a,
        citing_lau_assignments=citing_lau_a,
        citing_country_assignments=citing_country_a,
        build_report=report,
        mass_tables=mass_tables,
        unresolved_addresses=unresolved,
    )

    das_present = sorted(
        {corpus.sc_to_da.da_for(sc) for rec in corpus.cited.values() for sc in rec.sc_codes},
        key=DA_CODES.index,
    )
    if groups is None:
        groups = ["overall"] + das_present

    for scale in settings.scales:
        for include_self in settings.self_policies:
            for group in groups:
                result.delay_profiles.append(
                    delay_profile(
                        report.events, scale, include_self,
                        group=group, sc_to_da=corpus.sc_to_da,
                    )
                )

    focal_scs = sorted(
        {sc for rec in corpus.cited.values() for sc in rec.sc_codes}
    )
    # observations per (sc, scale, window, policy); coefficient series pool
    # SC-level observations into their disciplinary-area group
    obs_index: dict[tuple[str, Scale, int, bool], list[GravityObservation]] = {}
    for scale in settings.scales:
        level = TerritoryKind.LAU if scale is Scale.NATIONAL else TerritoryKind.COUNTRY
        table = mass_tables[level]
        for include_self in settings.self_policies:
            for sc in focal_scs:
                if sc not in table.profiles:
                    continue
                for w in settings.windows:
                    agg = aggregate_flows(
                        report.events, sc, scale, w, include_self, table
                    )
                    obs_index[(sc, scale, w, include_self)] = agg.observations
                    result.observations.extend(agg.observations)

    for scale in settings.scales:
        for include_self in settings.self_policies:
            for group in groups:
                members = (
                    focal_scs
                    if group == "overall"
                    else [sc for sc in focal_scs if corpus.sc_to_da.da_for(sc) == group]
                )
                by_window = {
                    w: [
                        o
                        for sc in members
                        for o in obs_index.get((sc, scale, w, include_self), [])
                    ]
                    for w in settings.windows
                }
                series = coefficient_series(
                    by_window,
                    group=group,
                    scale=scale.value,
                    include_self=include_self,
                    significance_level=settings.significance_level,
                )
                result.series.append(series)
                for pt in series.points:
                    result.cell_status.append(
                        {
                            "group": group,
                            "scale": scale.value,
                            "self_policy": "include" if include_self else "exclude",
                            "window": pt.window_years,
                            "status": "gap" if pt.is_gap else "ok",
                        }
                    )
    return result
