//! Command-line front end for the `phaseslope` binary.
//!
//! Every subcommand reads a JSON experiment file (see [`ExperimentConfig`])
//! and writes its results under the configured output directory.
//!
//! Exit codes: `0` success, `1` a verification claim failed, `2` bad
//! configuration, input or I/O.

mod commands;
mod config;
mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use commands::{run_cdf, run_pattern, run_sweep, CdfSummary, PatternReport, PatternStats, SweepRow};
pub use config::{
    construct_slopes, AnglePair, AntennaSection, CdfVariant, Experiment, ExperimentConfig, GridSection, PatternSpec,
    PepSection, ResolvedVariant, SlopeSource, SweepSection, SystemSection,
};
pub use verify::{
    fclosed_identity_claim, run_verify, write_reports, xstar_zeroset_claim, Claim, Status, VerifyReport, CLAIM_IDS,
};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "phaseslope",
    version,
    about = "Phase-slope design and verification for periodic broadcast links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the optimality claims for the configured system.
    Verify(Common),
    /// Sum-SNR CDFs over random angles for each configured variant.
    Cdf(Common),
    /// Equivalent transmit/receive patterns and the worst-case angle pair.
    Pattern(Common),
    /// Worst-case burst sum against the second transmit slope.
    Sweep(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Experiment file (JSON).
    #[arg(long, short)]
    config: PathBuf,
    /// Output directory, overriding `out_dir`.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Phase grid points per dimension.
    #[arg(long)]
    grid_psi: Option<usize>,
    /// Azimuth grid points.
    #[arg(long)]
    grid_angle: Option<usize>,
    /// Monte-Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
}

impl Common {
    fn experiment(&self) -> Result<Experiment> {
        let mut raw = ExperimentConfig::load(&self.config)?;
        if let Some(s) = self.seed {
            raw.seed = s;
        }
        if let Some(n) = self.grid_psi {
            raw.grid.psi_points = n;
        }
        if let Some(n) = self.grid_angle {
            raw.grid.angle_points = n;
        }
        if let Some(n) = self.samples {
            raw.samples = n;
        }
        if let Some(out) = &self.out {
            raw.out_dir = absolute(out);
        }
        let base = self.config.parent().map(Path::to_path_buf).unwrap_or_default();
        let e = raw.resolve(&base)?;
        std::fs::create_dir_all(&e.out_dir).map_err(|source| Error::Io {
            path: e.out_dir.clone(),
            source,
        })?;
        Ok(e)
    }
}

fn absolute(p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        std::env::current_dir()
            .map(|d| d.join(p))
            .unwrap_or_else(|_| p.to_path_buf())
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Verify(c) => {
            let e = c.experiment()?;
            let report = run_verify(&e)?;
            write_reports(&report, &e.out_dir)?;
            for claim in &report.claims {
                let measured = claim.measured.map(|v| format!("{v:.6e}")).unwrap_or_else(|| "-".into());
                let bound = claim.bound.map(|v| format!("{v:.6e}")).unwrap_or_else(|| "-".into());
                println!(
                    "{:<24} {:<14} measured={measured} bound={bound} {}",
                    claim.id,
                    claim.status.name(),
                    claim.note
                );
            }
            println!("{}", if report.passed { "PASS" } else { "FAIL" });
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Cdf(c) => {
            let e = c.experiment()?;
            for r in run_cdf(&e)? {
                println!(
                    "{:<16} p0={:.4} dB p1={:.4} dB p10={:.4} dB p50={:.4} dB",
                    r.name, r.quantiles_db[0], r.quantiles_db[1], r.quantiles_db[2], r.quantiles_db[3]
                );
            }
            Ok(0)
        }
        Command::Pattern(c) => {
            let e = c.experiment()?;
            let r = run_pattern(&e)?;
            println!(
                "worst case phi_r={:.2} deg phi_s={:.2} deg K*Gbar={:.6e}",
                r.worst_phi_r_deg, r.worst_phi_s_deg, r.worst_value
            );
            println!(
                "tx equivalent min={:.6} max={:.6} mean={:.6}",
                r.tx.min, r.tx.max, r.tx.mean
            );
            println!(
                "rx equivalent min={:.6} max={:.6} mean={:.6}",
                r.rx.min, r.rx.max, r.rx.mean
            );
            Ok(0)
        }
        Command::Sweep(c) => {
            let e = c.experiment()?;
            let rows = run_sweep(&e)?;
            println!(
                "{} sweep points written to {}",
                rows.len(),
                e.out_dir.join("sweep.csv").display()
            );
            Ok(0)
        }
    }
}
