//! `kgl`: validate germ specs, analyze them, and run the verification suites.
//!
//! Exit status: 0 when everything passes, 1 when a suite fails, 2 on bad
//! input (unreadable or malformed specs, invalid germs, psi outside the cone).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "kgl", version, about = "Invariant psh functions of contracting germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a germ spec against its normal-form conditions.
    Validate(GermArg),
    /// Parameters, automorphy constant, and (for ih) matrix and eigen data.
    Analyze(GermArg),
    /// Run verification suites and write one JSON report per suite.
    Verify(VerifyArgs),
    /// Cone membership and maximal admissible scale of a periodic function.
    Kcone(KconeArgs),
    /// Lelong number estimate at a point.
    Lelong(LelongArgs),
    /// SVG plots of psi, v(r) and the ih u-slice.
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
struct GermArg {
    /// Germ spec: a path or inline JSON.
    #[arg(long)]
    germ: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    germ: String,
    /// Periodic function psi: a path or inline JSON (default: 0).
    #[arg(long)]
    psi: Option<String>,
    /// Comma-separated subset of invariance,levi,foliation,containment,lelong.
    #[arg(long, value_delimiter = ',')]
    suites: Option<Vec<String>>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Decimal or 0x-prefixed hexadecimal.
    #[arg(long, env = "KGL_SEED", default_value = "0xC0FFEE", value_parser = parse_seed)]
    seed: u64,
    /// Cone-membership tolerance for psi.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = "kgl-reports")]
    out: PathBuf,
    /// Also write the sampled points and values as CSV.
    #[arg(long)]
    dump: bool,
    /// Test hook: deliberately break the invariant function.
    #[arg(long, value_parser = ["add-wsq"])]
    tamper: Option<String>,
}

#[derive(Args, Debug)]
struct KconeArgs {
    #[arg(long)]
    psi: String,
    #[arg(long, default_value_t = kgl_core::kcone::DEFAULT_GRID)]
    grid: usize,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct LelongArgs {
    /// Germ spec whose invariant function is probed.
    #[arg(long, conflicts_with = "calibration", required_unless_present = "calibration")]
    germ: Option<String>,
    #[arg(long)]
    psi: Option<String>,
    /// Calibration function: flat, neg-z2, log-z, re-z-re-w or zero.
    #[arg(long)]
    calibration: Option<String>,
    /// Center as re_z,im_z,re_w,im_w (default: origin).
    #[arg(long, value_delimiter = ',', num_args = 4)]
    center: Option<Vec<f64>>,
    /// Strictly decreasing radii (default 1e-2, ..., 1e-6).
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long)]
    germ: String,
    #[arg(long)]
    psi: Option<String>,
    #[arg(long, default_value = "kgl-plots")]
    out: PathBuf,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    }
    .map_err(|e| format!("bad seed {s:?}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Validate(a) => commands::validate(&a.germ),
        Command::Analyze(a) => commands::analyze(&a.germ),
        Command::Verify(a) => commands::verify(&commands::VerifyConfig {
            germ: a.germ,
            psi: a.psi,
            suites: a.suites,
            samples: a.samples,
            seed: a.seed,
            tol: a.tol,
            out: a.out,
            dump: a.dump,
            tamper: a.tamper.is_some(),
        }),
        Command::Kcone(a) => commands::kcone(&a.psi, a.grid, a.tol),
        Command::Lelong(a) => {
            commands::lelong(a.germ.as_deref(), a.psi.as_deref(), a.calibration.as_deref(), a.center, a.radii)
        }
        Command::Plot(a) => commands::plot(&a.germ, a.psi.as_deref(), &a.out),
    };
    match status {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
