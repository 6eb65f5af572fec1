use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use chirex::extend_db::{extend_dually_bipartite, Representative};
use chirex::gpr::GprGraph;
use chirex::io::{load_json, save_json};
use chirex::maniplex::RootedManiplex;
use chirex::mix::regular_quotient_extension;
use chirex::pipeline::{self, PipelineParams};
use chirex::report::Report;
use chirex::toroidal::{build_toroidal_map, Family, TorusParams};
use chirex::two_s_m::build_two_s_m;
use chirex::{Error, Result};

/// Chiral extensions of maniplexes: builders, checks and constructions.
#[derive(Parser)]
#[command(name = "chirex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the toroidal map {4,4}_(b,c), {3,6}_(b,c) or {6,3}_(b,c).
    BuildMap {
        #[arg(long)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Validate a maniplex and report its symmetry type and Schläfli symbol.
    Classify {
        map: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Extend a dually-bipartite chiral polytope (last entry divisible by 2s).
    ExtendDb {
        map: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build 2s^M; writes a sidecar `<output>.meta.json`.
    TwoSm {
        map: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Mix a chiral extension with 2s^R for a regular quotient R of the facet.
    MixExtend {
        #[arg(long)]
        extension: PathBuf,
        #[arg(long)]
        facet: PathBuf,
        #[arg(long)]
        quotient: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a GPR-graph against the extension criterion for a facet.
    VerifyGpr {
        extension: PathBuf,
        #[arg(long)]
        facet: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build, find the regular quotient, extend and mix in one run.
    Pipeline {
        #[arg(long)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long, default_value_t = 1)]
        db_s: u32,
        #[arg(long)]
        mix_s: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn emit(report: &Report, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            save_json(p, report)?;
            println!(
                "{}: {}",
                report.construction,
                if report.passed { "pass" } else { "FAIL" }
            );
        }
        None => println!("{}", serde_json::to_string_pretty(report)?),
    }
    Ok(())
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::BuildMap {
            family,
            b,
            c,
            output,
            report,
        } => {
            let started = Instant::now();
            let p = TorusParams::new(family, b, c)?;
            let m = build_toroidal_map(p)?;
            save_json(&output, &m)?;
            let r = pipeline::build_map_report(p, &m, started);
            emit(&r, report.as_deref())?;
            Ok(r.passed)
        }
        Command::Classify { map, report } => {
            let m: RootedManiplex = load_json(&map)?;
            let r = pipeline::classify_report(&m);
            emit(&r, report.as_deref())?;
            Ok(r.passed)
        }
        Command::ExtendDb {
            map,
            s,
            seed,
            output,
            report,
        } => {
            let started = Instant::now();
            let k: RootedManiplex = load_json(&map)?;
            let choice = seed.map_or(Representative::Least, Representative::Seeded);
            let e = extend_dually_bipartite(&k, s, choice)?;
            save_json(&output, &e.graph)?;
            let r = pipeline::extend_db_report(&k, &e, seed, started);
            emit(&r, report.as_deref())?;
            Ok(r.passed)
        }
        Command::TwoSm {
            map,
            s,
            output,
            report,
        } => {
            let started = Instant::now();
            let m: RootedManiplex = load_json(&map)?;
            let t = build_two_s_m(&m, s)?;
            save_json(&output, &t.maniplex)?;
            save_json(sidecar_path(&output), &t.meta())?;
            let r = pipeline::two_s_m_report(&m, &t, started);
            emit(&r, report.as_deref())?;
            Ok(r.passed)
        }
        Command::MixExtend {
            extension,
            facet,
            quotient,
            s,
            output,
            report,
        } => {
            let started = Instant::now();
            let p: GprGraph = load_json(&extension)?;
            let k: RootedManiplex = load_json(&facet)?;
            let q: RootedManiplex = load_json(&quotient)?;
            let m = regular_quotient_extension(&p, &k, &q, s)?;
            if let Some(out) = output {
                save_json(out, &m.graph)?;
            }
            let r = pipeline::mix_report(&m, started);
            emit(&r, report.as_deref())?;
            Ok(r.passed)
        }
        Command::VerifyGpr {
            extension,
            facet,
            report,
        } => {
            let g: GprGraph = load_json(&extension)?;
            let k: RootedManiplex = load_json(&facet)?;
            let r = pipeline::verify_gpr_report(&g, &k)?;
            emit(&r, report.as_deref())?;
            Ok(r.passed)
        }
        Command::Pipeline {
            family,
            b,
            c,
            db_s,
            mix_s,
            seed,
            out_dir,
        } => {
            let params = PipelineParams {
                torus: TorusParams::new(family, b, c)?,
                db_s,
                mix_s,
                seed,
            };
            let out = pipeline::pipeline(&params)?;
            match out_dir {
                Some(dir) => {
                    out.write_to(&dir)?;
                    for r in &out.reports {
                        println!(
                            "{}: {} ({:.1} ms)",
                            r.construction,
                            if r.passed { "pass" } else { "FAIL" },
                            r.elapsed_ms
                        );
                    }
                }
                None => println!("{}", serde_json::to_string_pretty(&out.reports)?),
            }
            Ok(out.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("CHIREX_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // ignore the error if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
