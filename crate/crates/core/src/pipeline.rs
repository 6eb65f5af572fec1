//! Stage reports and the end-to-end run: toroidal map, regular quotient,
//! dually-bipartite extension, then mixing with `2s^R`.

use std::path::Path;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::extend_db::{extend_dually_bipartite, DbExtensionResult, Representative};
use crate::gpr::{verify_extension_criterion, GprGraph};
use crate::io::save_json;
use crate::maniplex::{RootedManiplex, Symmetry};
use crate::mix::{regular_quotient_extension, MixExtensionResult};
use crate::report::{Report, Verdict};
use crate::toroidal::{build_toroidal_map, regular_quotient, TorusParams};
use crate::two_s_m::TwoSM;

pub fn classify_report(m: &RootedManiplex) -> Report {
    let started = Instant::now();
    let validation = m.validate();
    let symmetry = m.classify_symmetry();
    let mut r = Report::new("classify")
        .param("flags", m.flag_count())
        .param("rank", m.rank())
        .param("base_flag", m.base_flag)
        .detail("symmetry", symmetry)
        .detail("orientable", m.orientation().is_some())
        .detail("facets", m.facets().len())
        .detail("dually_bipartite", m.dually_bipartite_colouring().is_some());
    for c in &validation.checks {
        r = r.verdict(Verdict::new(
            c.axiom,
            c.passed,
            c.detail.clone().unwrap_or_default(),
        ));
    }
    if symmetry != Symmetry::Other {
        r.schlafli = m.schlafli_unchecked();
    }
    r.elapsed(started.elapsed())
}

pub fn build_map_report(p: TorusParams, m: &RootedManiplex, started: Instant) -> Report {
    let expected = p.flag_count();
    Report::new("build_map")
        .param("family", p.family)
        .param("b", p.b)
        .param("c", p.c)
        .verdict(Verdict::new(
            "flag_count",
            m.flag_count() as u64 == expected,
            format!("{} flags, expected {expected}", m.flag_count()),
        ))
        .detail("symmetry", m.classify_symmetry())
        .elapsed(started.elapsed())
}

pub fn extend_db_report(
    k: &RootedManiplex,
    e: &DbExtensionResult,
    seed: Option<u64>,
    started: Instant,
) -> Report {
    Report::new("extend_db")
        .param("s", e.s)
        .param("seed", seed)
        .param("facet_flags", k.flag_count())
        .extension(&e.report)
        .detail("steps", &e.matching.steps)
        .detail("vertices", e.graph.num_vertices())
        .elapsed(started.elapsed())
}

pub fn verify_gpr_report(g: &GprGraph, k: &RootedManiplex) -> Result<Report> {
    let started = Instant::now();
    let rep = verify_extension_criterion(g, k)?;
    Ok(Report::new("verify_gpr")
        .param("vertices", g.num_vertices())
        .param("rank", g.rank())
        .extension(&rep)
        .elapsed(started.elapsed()))
}

pub fn two_s_m_report(m: &RootedManiplex, t: &TwoSM, started: Instant) -> Report {
    let expected = m.flag_count() as u64 * t.u_size() * 2;
    let mut r = Report::new("two_s_m")
        .param("s", t.s)
        .param("m", t.m)
        .verdict(Verdict::new(
            "flag_count",
            t.maniplex.flag_count() as u64 == expected,
            format!("{} flags, expected {expected}", t.maniplex.flag_count()),
        ));
    r.schlafli = t.maniplex.schlafli_unchecked();
    r.elapsed(started.elapsed())
}

pub fn mix_report(m: &MixExtensionResult, started: Instant) -> Report {
    Report::new("mix_extend")
        .param("s", m.s)
        .param("q", m.q)
        .extension(&m.report)
        .detail("expected_last_entry", m.expected_last_entry)
        .detail("points", m.graph.num_vertices())
        .elapsed(started.elapsed())
}

#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub torus: TorusParams,
    pub db_s: u32,
    /// Runs the mixing stage when set.
    pub mix_s: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub map: RootedManiplex,
    pub quotient: Option<(TorusParams, RootedManiplex)>,
    pub extension: DbExtensionResult,
    pub mix: Option<MixExtensionResult>,
    pub reports: Vec<Report>,
}

impl PipelineOutput {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    /// Writes `map.json`, `extension.json`, `quotient.json`, `mix.json` (as
    /// available) and `reports.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        save_json(dir.join("map.json"), &self.map)?;
        save_json(dir.join("extension.json"), &self.extension.graph)?;
        if let Some((_, r)) = &self.quotient {
            save_json(dir.join("quotient.json"), r)?;
        }
        if let Some(m) = &self.mix {
            save_json(dir.join("mix.json"), &m.graph)?;
        }
        save_json(dir.join("reports.json"), &self.reports)
    }
}

/// Builds the map, finds its regular quotient first when mixing is requested
/// (failing fast if there is none), then extends and mixes.
pub fn pipeline(params: &PipelineParams) -> Result<PipelineOutput> {
    let mut reports = Vec::new();
    let started = Instant::now();
    let map = build_toroidal_map(params.torus)?;
    reports.push(build_map_report(params.torus, &map, started));

    let quotient = match params.mix_s {
        Some(_) => {
            let started = Instant::now();
            let (rp, r) = regular_quotient(params.torus)?.ok_or_else(|| {
                Error::Precondition(format!(
                    "{} has no regular quotient with at least two facets",
                    params.torus
                ))
            })?;
            reports.push(
                Report::new("regular_quotient")
                    .param("of", params.torus.to_string())
                    .detail("quotient", rp.to_string())
                    .verdict(Verdict::new(
                        "covers",
                        map.covers(&r)?.is_some(),
                        format!("{} covers {rp}", params.torus),
                    ))
                    .elapsed(started.elapsed()),
            );
            Some((rp, r))
        }
        None => None,
    };

    let started = Instant::now();
    let choice = match params.seed {
        Some(seed) => Representative::Seeded(seed),
        None => Representative::Least,
    };
    let extension = extend_dually_bipartite(&map, params.db_s, choice)?;
    reports.push(extend_db_report(&map, &extension, params.seed, started));

    let mix = match (params.mix_s, &quotient) {
        (Some(s), Some((_, r))) => {
            let started = Instant::now();
            let m = regular_quotient_extension(&extension.graph, &map, r, s)?;
            reports.push(mix_report(&m, started));
            Some(m)
        }
        _ => None,
    };
    Ok(PipelineOutput {
        map,
        quotient,
        extension,
        mix,
        reports,
    })
}
