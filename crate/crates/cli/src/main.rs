//! Batch driver: generates cusp-form files, scans shifted-product sign
//! statistics into CSV, and runs the identity verification suite with a
//! JSON report.
//!
//! Exit codes: 0 all requested work passed, 1 a verification check failed,
//! 2 configuration error.

mod verify;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cuspshift::forms::{delta_form, dim_cusp_forms, eigenforms, CuspForm};
use cuspshift::shifted::{scan_stats, SCAN_CSV_HEADER};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Hard cap on truncation orders accepted from the command line; larger
/// requests are configuration errors, not attempts.
const MAX_TRUNCATION: usize = 1_000_000;

#[derive(Parser)]
#[command(
    name = "cuspshift",
    version,
    about = "Cusp form coefficients, shifted products, and identity verification"
)]
struct Cli {
    /// Number of worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory for generated files (env: CUSPSHIFT_OUT_DIR).
    #[arg(long, global = true, env = "CUSPSHIFT_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate cusp forms and write them in the text serialization.
    Forms(FormsArgs),
    /// Scan shifted-product sign statistics over a range of shifts (CSV).
    Scan(ScanArgs),
    /// Run identity verification checks and emit a JSON report.
    Verify(verify::VerifyArgs),
}

#[derive(Args)]
struct FormsArgs {
    /// Generate Ramanujan's delta.
    #[arg(long, conflicts_with = "weight")]
    delta: bool,
    /// Generate the normalized eigenforms of this even weight.
    #[arg(long)]
    weight: Option<u64>,
    /// Truncation order of the q-expansion.
    #[arg(long, default_value_t = 100)]
    trunc: usize,
}

#[derive(Args)]
struct ScanArgs {
    /// Scan Ramanujan's delta (truncation chosen automatically).
    #[arg(long, conflicts_with = "form")]
    delta: bool,
    /// Scan a previously serialized form file.
    #[arg(long)]
    form: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    r_min: u64,
    #[arg(long, default_value_t = 10)]
    r_max: u64,
    /// Number of products per shift.
    #[arg(long, default_value_t = 10_000)]
    length: usize,
    /// CSV output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        // Ignore failure: the pool can only be initialized once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let outcome = match cli.command {
        Command::Forms(args) => cmd_forms(&cli.out_dir, &args).map(|_| true),
        Command::Scan(args) => cmd_scan(&args).map(|_| true),
        Command::Verify(args) => verify::cmd_verify(&cli.out_dir, &args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn check_truncation(trunc: usize) -> Result<()> {
    if trunc == 0 || trunc > MAX_TRUNCATION {
        bail!("truncation order must be in 1..={MAX_TRUNCATION}, got {trunc}");
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn cmd_forms(out_dir: &Path, args: &FormsArgs) -> Result<()> {
    check_truncation(args.trunc)?;
    if args.delta {
        let delta = delta_form(args.trunc)?;
        let path = out_dir.join("delta.form");
        write_file(&path, &delta.to_text())?;
        println!("wrote {} (tau up to n = {})", path.display(), args.trunc);
        return Ok(());
    }
    let Some(weight) = args.weight else {
        bail!("choose --delta or --weight K");
    };
    let dim = dim_cusp_forms(weight);
    if dim == 0 {
        println!("dim S_{weight}(SL2(Z)) = 0; no cusp forms to write");
        return Ok(());
    }
    let forms = eigenforms(weight, args.trunc)?;
    for f in &forms {
        let path = out_dir.join(format!("{}.form", f.label()));
        write_file(&path, &f.to_text())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_scan(args: &ScanArgs) -> Result<()> {
    check_truncation(args.length)?;
    if args.r_min == 0 || args.r_min > args.r_max {
        bail!(
            "need 1 <= r-min <= r-max, got {}..{}",
            args.r_min,
            args.r_max
        );
    }
    let required = args.length + args.r_max as usize;
    check_truncation(required)?;
    let form: CuspForm = if args.delta {
        delta_form(required)?
    } else if let Some(path) = &args.form {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let label = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("form")
            .to_string();
        let f = CuspForm::from_text(label, &text)?;
        if f.trunc_order() < required {
            bail!(
                "form file truncated at {}, but the scan needs {}",
                f.trunc_order(),
                required
            );
        }
        f
    } else {
        bail!("choose --delta or --form FILE");
    };

    let rows = scan_stats(&form, args.r_min, args.r_max, args.length)?;
    let mut csv = String::from(SCAN_CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            println!("wrote {} ({} rows)", path.display(), rows.len());
        }
        None => print!("{csv}"),
    }
    Ok(())
}
