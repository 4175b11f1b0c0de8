//! `markoff`: build Markoff graphs mod p, certify (non-)planarity, survey prime ranges.
//!
//! Exit status: 0 answered, 2 inconclusive, 1 error (including usage errors).

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::info;

use markoff_core::cage::phi_screen;
use markoff_core::ff::is_prime;
use markoff_core::graph::{components, edge_count_simple, export, ExportFormat, MarkoffGraph};
use markoff_core::planarity::{certificate, CertificateKind};
use markoff_core::spectral::{adjacency_spectrum, SpectralOptions};
use markoff_core::strategy::{certify, strategy_names};
use markoff_core::survey::{survey, survey_to_file, write_csv, SurveyOptions};
use markoff_core::totient::{configured_limit, SIEVE_LIMIT_ENV};

const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "markoff", version, about = "Markoff graphs x² + y² + z² = xyz + k over 𝔽_p")]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the graph and print its size.
    Build {
        p: u64,
        #[arg(long, default_value_t = 0)]
        k: u64,
        /// Also write the graph as dot, graphml or csv.
        #[arg(long, value_name = "FMT")]
        export: Option<String>,
        #[arg(long, requires = "export")]
        out: Option<PathBuf>,
    },
    /// Produce a planarity certificate as JSON.
    Certify {
        p: u64,
        #[arg(long, default_value_t = 0)]
        k: u64,
        /// auto, euler, k33, spectral or planarity.
        #[arg(long, default_value = "auto")]
        strategy: String,
        /// Also store the certificate under DIR/<sha256>.json.
        #[arg(long, value_name = "DIR")]
        store: Option<PathBuf>,
    },
    /// Re-check a stored certificate.
    Validate { path: PathBuf },
    /// One CSV row per prime in [P_MIN, P_MAX].
    Survey {
        p_min: u64,
        p_max: u64,
        #[arg(long, default_value_t = 0)]
        k: u64,
        /// Write here, keeping rows already present.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill the runtime column.
        #[arg(long)]
        timing: bool,
    },
    /// Primes p ≡ 3 mod 4 with φ(p + 1) < 17.
    Screen {
        #[arg(long, default_value_t = 20_000)]
        limit: u64,
    },
    /// Second eigenvalue, Cheeger bounds and the separator comparison.
    Spectral {
        p: u64,
        #[arg(long, default_value_t = 0)]
        k: u64,
        /// Drop self-edges instead of putting them on the diagonal.
        #[arg(long)]
        loopless: bool,
    },
    /// Write the graph as dot, graphml or csv.
    Export {
        p: u64,
        #[arg(long, default_value_t = 0)]
        k: u64,
        #[arg(long, default_value = "dot")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        bail!("{p} is not prime");
    }
    Ok(())
}

fn write_output(bytes: &[u8], out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => Ok(std::io::stdout().write_all(bytes)?),
    }
}

fn run(cli: Cli) -> Result<u8> {
    if cli.jobs > 0 {
        markoff_core::configure_threads(cli.jobs)?;
    }
    match cli.command {
        Command::Build { p, k, export: fmt, out } => {
            require_prime(p)?;
            let g = MarkoffGraph::build(p, k)?;
            if g.is_empty() {
                println!("empty graph: no vertices for p = {p}, k = {}", g.k());
            }
            println!(
                "V={} E={} self={} components={}",
                g.len(),
                edge_count_simple(&g)?,
                g.self_edges().len(),
                g.component_count()
            );
            let report = components(&g);
            if !report.divisibility_violations.is_empty() {
                info!("component sizes not divisible by p: {:?}", report.divisibility_violations);
            }
            if let Some(fmt) = fmt {
                let fmt: ExportFormat = fmt.parse()?;
                write_output(&export(&g, fmt)?, out.as_ref())?;
            }
            Ok(0)
        }
        Command::Certify { p, k, strategy, store } => {
            require_prime(p)?;
            if !strategy_names().contains(&strategy.as_str()) {
                bail!("unknown strategy {strategy:?}; expected one of {}", strategy_names().join(", "));
            }
            let cert = certify(p, k, &strategy, cli.seed)?;
            print!("{}", cert.to_json());
            if let Some(dir) = store {
                let path = certificate::store(&cert, &dir)?;
                eprintln!("stored {}", path.display());
            }
            Ok(if cert.kind == CertificateKind::Inconclusive { EXIT_INCONCLUSIVE } else { 0 })
        }
        Command::Validate { path } => {
            let cert = certificate::load(&path)?;
            let v = cert.validate();
            println!("{}: {}", if v.valid { "valid" } else { "INVALID" }, v.detail);
            if !v.valid {
                bail!("certificate {} does not validate", path.display());
            }
            Ok(0)
        }
        Command::Survey { p_min, p_max, k, out, timing } => {
            let opts = SurveyOptions { k, jobs: cli.jobs, seed: cli.seed, timing };
            match out {
                Some(path) => {
                    let rows = survey_to_file(p_min, p_max, &opts, &path)?;
                    eprintln!("{} rows in {}", rows.len(), path.display());
                }
                None => write_csv(&survey(p_min, p_max, &opts, &[])?, std::io::stdout())?,
            }
            Ok(0)
        }
        Command::Screen { limit } => {
            let sieve_limit = configured_limit() as u64;
            if limit + 1 > sieve_limit {
                bail!("limit {limit} exceeds the sieve limit {sieve_limit} (set {SIEVE_LIMIT_ENV})");
            }
            let rows = phi_screen(limit)?;
            println!("p,phi_p_plus_1,passes_strict");
            for r in &rows {
                println!("{},{},{}", r.p, r.phi_p_plus_1, r.passes_strict);
            }
            let survivors: Vec<String> = rows
                .iter()
                .filter(|r| r.passes_strict)
                .map(|r| r.p.to_string())
                .collect();
            println!("survivors: {}", survivors.join(" "));
            Ok(0)
        }
        Command::Spectral { p, k, loopless } => {
            require_prime(p)?;
            let g = MarkoffGraph::build(p, k)?;
            let opts = SpectralOptions { loopless, seed: cli.seed, ..SpectralOptions::default() };
            let report = adjacency_spectrum(&g, &opts)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(0)
        }
        Command::Export { p, k, format, out } => {
            require_prime(p)?;
            let fmt: ExportFormat = format.parse()?;
            let g = MarkoffGraph::build(p, k)?;
            write_output(&export(&g, fmt)?, out.as_ref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
