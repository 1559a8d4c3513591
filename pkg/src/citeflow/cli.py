"""citeflow.cli
~~~~~~~~~~~~~~~

Batch command-line interface.

Subcommands:

* ``validate`` -- parse and cross-check the input file set, write a report.
* ``run``      -- run the full pipeline and emit all audit/result CSVs.
* ``synth``    -- generate a synthetic corpus with planted parameters.

All take ``--config <path>`` (TOML). The output directory can be
overridden with the CITEFLOW_OUTDIR environment variable.

Citation windows are cumulative: window w counts citations with delay
0..w-1 years from the cited publication year.

Exit codes: 0 success, 1 hard input error, 2 partial analytic failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

from . import corpus as corpus_mod
from .corpus import CorpusError, load_corpus
from .model import Corpus, Scale, TerritoryKind
from .pipeline import ALL_SCALES, PipelineSettings, run_pipeline
from .synth import SynthConfig, SynthConfigError, generate_corpus, write_corpus


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    publications: Path
    citing: Path
    citations: Path
    gazetteer: Path
    sc_to_da: Path
    outdir: Path
    settings: PipelineSettings
    cited_years: tuple[int, int] | None = None

    def input_paths(self) -> dict[str, Path]:
        return {
            "publications": self.publications,
            "citing": self.citing,
            "citations": self.citations,
            "gazetteer": self.gazetteer,
            "sc_to_da": self.sc_to_da,
        }


def _load_toml(path: Path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_scales(names) -> tuple[Scale, ...]:
    try:
        return tuple(Scale(n.strip()) for n in names)
    except ValueError as exc:
        raise ConfigError(f"unknown scale in {names!r}") from exc


def _parse_policy(name: str) -> tuple[bool, ...]:
    table = {"both": (True, False), "include": (True,), "exclude": (False,)}
    if name not in table:
        raise ConfigError(f"self_policy must be both|include|exclude, got {name!r}")
    return table[name]


def load_run_config(path: Path, overrides: argparse.Namespace) -> RunConfig:
    doc = _load_toml(path)
    base = path.parent
    try:
        inputs = doc["inputs"]
        paths = {k: (base / inputs[k]).resolve() for k in
                 ("publications", "citing", "citations", "gazetteer", "sc_to_da")}
    except KeyError as exc:
        raise ConfigError(f"missing [inputs] key {exc}")
    for name, p in paths.items():
        if not p.exists():
            raise ConfigError(f"input file for {name!r} does not exist: {p}")

    analysis = doc.get("analysis", {})
    windows = tuple(analysis.get("windows", [1, 2, 3, 4, 5, 6, 7, 8]))
    if not windows or list(windows) != sorted(set(windows)) or windows[0] < 1:
        raise ConfigError("windows must be a strictly increasing list of positive integers")
    scales = _parse_scales(
        overrides.scales.split(",") if overrides.scales
        else analysis.get("scales", [s.value for s in ALL_SCALES])
    )
    policy = _parse_policy(overrides.self_policy or analysis.get("self_policy", "both"))
    continent = frozenset(analysis.get(
        "continent", sorted(PipelineSettings().continent_set)
    ))
    home = analysis.get("home_country", "IT")
    if home not in continent:
        continent = continent | {home}
    cited_years = analysis.get("cited_years")
    if cited_years is not None:
        cited_years = (int(cited_years[0]), int(cited_years[1]))
    settings = PipelineSettings(
        home_country=home,
        continent_set=continent,
        majority_rule=analysis.get("majority_rule", "plurality"),
        windows=windows,
        scales=scales,
        self_policies=policy,
        significance_level=float(analysis.get("significance_level", 0.05)),
    )
    outdir = Path(
        os.environ.get("CITEFLOW_OUTDIR")
        or doc.get("output", {}).get("dir", "citeflow_out")
    )
    if not outdir.is_absolute():
        outdir = (base / outdir).resolve()
    return RunConfig(outdir=outdir, settings=settings, cited_years=cited_years, **paths)


def _atomic_write_rows(path: Path, header: list[str], rows) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    os.replace(tmp, path)


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _fmt(x: float) -> str:
    return repr(round(float(x), 10))


def _digest(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _load(cfg: RunConfig) -> Corpus:
    return load_corpus(
        cfg.publications,
        cfg.citing,
        cfg.citations,
        cfg.gazetteer,
        cfg.sc_to_da,
        cited_year_range=cfg.cited_years,
    )


def cmd_validate(cfg: RunConfig) -> int:
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    report_path = cfg.outdir / "validation_report.json"
    try:
        corpus = _load(cfg)
    except (CorpusError, OSError) as exc:
        _atomic_write_text(
            report_path, json.dumps({"status": "error", "error": str(exc)}, indent=2)
        )
        print(f"validation failed: {exc}", file=sys.stderr)
        return 1
    from .pipeline import compute_assignments

    _, _, _, unresolved = compute_assignments(corpus, cfg.settings)
    report = {
        "status": "ok",
        "n_cited": len(corpus.cited),
        "n_citing": len(corpus.citing),
        "n_links": len(corpus.links),
        "n_territories": len(corpus.gazetteer),
        "parse_warnings": corpus.warnings,
        "unresolved_addresses": sorted(set(unresolved)),
    }
    _atomic_write_text(report_path, json.dumps(report, indent=2))
    n_warn = len(corpus.warnings) + len(report["unresolved_addresses"])
    print(f"validation ok: {len(corpus.cited)} cited, {len(corpus.citing)} citing, "
          f"{len(corpus.links)} links, {n_warn} warning(s)")
    return 0


def cmd_run(cfg: RunConfig) -> int:
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    try:
        corpus = _load(cfg)
    except (CorpusError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    if not corpus.links:
        print("warning: no citation links; outputs will be empty", file=sys.stderr)
    result = run_pipeline(corpus, cfg.settings)

    _atomic_write_rows(
        cfg.outdir / "assignments.csv",
        ["pub_id", "role", "territory_id", "prevalent"],
        _assignment_rows(result),
    )
    _atomic_write_rows(
        cfg.outdir / "events.csv",
        ["citing_id", "cited_id", "focal_sc", "cited_territory", "citing_territory",
         "scale", "distance_km", "delay_years", "self_citation"],
        [
            [e.citing_id, e.cited_id, e.focal_sc, e.cited_territory, e.citing_territory,
             e.scale.value, _fmt(e.distance_km), e.delay_years, int(e.self_citation)]
            for e in result.build_report.events
        ],
    )
    _atomic_write_rows(
        cfg.outdir / "delay_profile.csv",
        ["scale", "da", "self_policy", "delay", "mean_km", "n"],
        [
            [p.scale.value, p.group, "include" if p.include_self else "exclude",
             t, _fmt(mean), n]
            for p in result.delay_profiles
            for t, (mean, n) in sorted(p.cells.items())
        ],
    )
    _atomic_write_rows(
        cfg.outdir / "masses.csv",
        ["focal_sc", "territory_id", "m_cited", "m_citing"],
        _mass_rows(result),
    )
    _atomic_write_rows(
        cfg.outdir / "observations.csv",
        ["focal_sc", "scale", "window", "i", "j", "c_ij", "m_i", "m_j", "d_km", "self_policy"],
        [
            [o.focal_sc, o.scale.value, o.window_years, o.cited_territory,
             o.citing_territory, o.c_ij, _fmt(o.m_i), _fmt(o.m_j), _fmt(o.d_km),
             "include" if o.include_self else "exclude"]
            for o in result.observations
        ],
    )
    _atomic_write_rows(
        cfg.outdir / "coefficients.csv",
        ["group", "scale", "self_policy", "window", "n", "ln_k", "alpha", "beta",
         "gamma", "coef_ln_d", "se_gamma", "t_gamma", "p_gamma", "r2", "significant"],
        _coefficient_rows(result),
    )
    manifest = {
        "inputs": {k: {"path": str(p), "sha256": _digest(p)}
                   for k, p in cfg.input_paths().items()},
        "settings": {
            "home_country": cfg.settings.home_country,
            "continent": sorted(cfg.settings.continent_set),
            "majority_rule": cfg.settings.majority_rule,
            "windows": list(cfg.settings.windows),
            "scales": [s.value for s in cfg.settings.scales],
            "self_policies": ["include" if p else "exclude" for p in cfg.settings.self_policies],
            "significance_level": cfg.settings.significance_level,
        },
        "counters": {
            "events": len(result.build_report.events),
            "dropped_no_cited_territory": result.build_report.dropped_no_cited_territory,
            "dropped_no_citing_territory": result.build_report.dropped_no_citing_territory,
            "dropped_negative_delay": result.build_report.dropped_negative_delay,
            "citing_without_author_keys": result.build_report.missing_author_keys,
            "unresolved_addresses": len(result.unresolved_addresses),
        },
        "cells": result.cell_status,
    }
    _atomic_write_text(cfg.outdir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True))
    n_gaps = sum(1 for c in result.cell_status if c["status"] == "gap")
    n_failed = sum(1 for c in result.cell_status if c["status"] == "failed")
    print(f"run complete: {len(result.build_report.events)} events, "
          f"{len(result.observations)} observations, "
          f"{len(result.cell_status)} cells ({n_gaps} gaps)")
    return 2 if n_failed else 0


def _assignment_rows(result):
    rows = []
    for pid, a in sorted(result.cited_assignments.items()):
        rows.append([pid, "cited", a.territory_id or "NONE", int(a.prevalent)])
    for pid, a in sorted(result.citing_lau_assignments.items()):
        rows.append([pid, "citing_lau", a.territory_id or "NONE", int(a.prevalent)])
    for pid, a in sorted(result.citing_country_assignments.items()):
        rows.append([pid, "citing_country", a.territory_id or "NONE", int(a.prevalent)])
    return rows


def _mass_rows(result):
    rows = []
    for level in (TerritoryKind.LAU, TerritoryKind.COUNTRY):
        table = result.mass_tables[level]
        keys = sorted(set(table.m_cited) | set(table.m_citing))
        for (terr, sc) in keys:
            rows.append([
                sc, terr,
                table.m_cited.get((terr, sc), 0),
                _fmt(table.m_citing.get((terr, sc), 0.0)),
            ])
    return rows


def _coefficient_rows(result):
    rows = []
    for series in result.series:
        policy = "include" if series.include_self else "exclude"
        for pt in series.points:
            if pt.is_gap:
                continue
            r = pt.result
            rows.append([
                series.group, series.scale, policy, pt.window_years, r.n_obs,
                _fmt(r.ln_k), _fmt(r.alpha), _fmt(r.beta), _fmt(r.gamma),
                _fmt(r.coef_ln_d), _fmt(r.std_errors["gamma"]),
                _fmt(r.t_stats["gamma"]), _fmt(r.p_values["gamma"]),
                _fmt(r.r_squared), int(r.significant_gamma),
            ])
    return rows


def _synth_config_from_toml(doc: dict) -> SynthConfig:
    section = doc.get("synth", doc)
    kwargs = {}
    tuple_fields = {
        "lat_range", "lon_range", "cited_years", "citing_years",
        "cited_per_territory", "citing_per_territory", "sc_list", "delay_weights",
    }
    for f in SynthConfig.__dataclass_fields__:
        if f in section:
            value = section[f]
            kwargs[f] = tuple(value) if f in tuple_fields else value
    return SynthConfig(**kwargs)


def cmd_synth(config_path: Path, outdir_override: str | None) -> int:
    doc = _load_toml(config_path)
    try:
        cfg = _synth_config_from_toml(doc)
        cfg.validate()
    except (SynthConfigError, TypeError, ValueError) as exc:
        print(f"invalid synth config: {exc}", file=sys.stderr)
        return 1
    outdir = Path(
        os.environ.get("CITEFLOW_OUTDIR")
        or outdir_override
        or doc.get("output", {}).get("dir", "synth_out")
    )
    synth = generate_corpus(cfg)
    paths = write_corpus(synth, outdir)
    print(f"synth corpus written to {outdir} "
          f"({len(synth.corpus.cited)} cited, {len(synth.corpus.citing)} citing, "
          f"{synth.n_links} links, {len(synth.planted_self_links)} planted self-citations)")
    for name, p in sorted(paths.items()):
        print(f"  {name}: {p.name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citeflow",
        description="Gravity-model analysis of geographic proximity in citation flows. "
                    "Citation windows are cumulative: window w covers delays 0..w-1.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("validate", "parse and cross-check the input files"),
        ("run", "run the full pipeline and write result CSVs"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--self-policy", choices=["include", "exclude", "both"],
                       dest="self_policy", default=None)
        p.add_argument("--scales", default=None,
                       help="comma-separated subset of national,continental,intercontinental")
    p = sub.add_parser("synth", help="generate a synthetic corpus with planted parameters")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--outdir", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            return cmd_synth(args.config, args.outdir)
        cfg = load_run_config(args.config, args)
        if args.command == "validate":
            return cmd_validate(cfg)
        return cmd_run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
