//! `ushape`: shapes of unit lattices of signature-(2,1) quartic fields.
//!
//! Subcommands: `family` (sweep one unit-basis family to CSV), `sieve`
//! (list valid parameters), `dataset` (evaluate ingested field records),
//! `verify` (run a named verification suite), `plot` (fundamental-domain
//! SVG scatter from CSV).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use ushape_core::big::PrecisionContext;
use ushape_core::families::{sieve, sweep, Family};
use ushape_core::output::{emit_csv, emit_svg, member_row, parse_csv, record_row, PlotOptions};
use ushape_core::records::parse_and_validate;
use ushape_core::verify::{run_suite, Suite};

const PRECISION_ENV: &str = "USHAPE_PRECISION_BITS";

#[derive(Parser)]
#[command(
    name = "ushape",
    version,
    about = "Unit-lattice shapes of quartic fields with signature (2,1)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct PrecisionArg {
    /// Mantissa precision in bits (>= 64). Overrides USHAPE_PRECISION_BITS.
    #[arg(long)]
    precision: Option<u32>,
}

impl PrecisionArg {
    fn resolve(&self) -> Result<PrecisionContext> {
        let bits = match self.precision {
            Some(b) => b,
            None => match std::env::var(PRECISION_ENV) {
                Ok(s) => s
                    .parse::<u32>()
                    .with_context(|| format!("bad {PRECISION_ENV} value {s:?}"))?,
                Err(_) => PrecisionContext::DEFAULT_BITS,
            },
        };
        Ok(PrecisionContext::with_bits(bits)?)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute shapes of one family and write them as CSV.
    Family {
        /// Family tag: stender-cube, stender-minus-one, lps, nakamula.
        #[arg(long, value_parser = family_from_tag)]
        name: Family,
        /// Smallest |n| to include.
        #[arg(long, default_value_t = 2)]
        n_min: i64,
        /// Largest |n| to include.
        #[arg(long)]
        n_max: i64,
        #[command(flatten)]
        precision: PrecisionArg,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Emit full-precision hexadecimal numeric fields.
        #[arg(long, default_value_t = false)]
        hex: bool,
    },
    /// List the valid parameters of a family in a range.
    Sieve {
        /// Family tag.
        #[arg(long, value_parser = family_from_tag)]
        family: Family,
        /// Inclusive signed range `a..b`, e.g. 2..100 or -100..-5.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
    },
    /// Evaluate externally supplied field records and write CSV.
    Dataset {
        /// Input record file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        precision: PrecisionArg,
        /// Emit full-precision hexadecimal numeric fields.
        #[arg(long, default_value_t = false)]
        hex: bool,
    },
    /// Run a verification suite and exit nonzero on failure.
    Verify {
        /// Suite: boundary, limits, orthogonality, silverman,
        /// reduction-oracle.
        #[arg(long, value_parser = suite_from_tag)]
        suite: Suite,
        /// Largest |n| for the family-based suites.
        #[arg(long, default_value_t = 500)]
        n_max: i64,
        #[command(flatten)]
        precision: PrecisionArg,
    },
    /// Render a CSV of shapes as a fundamental-domain SVG scatter.
    Plot {
        /// Input CSV path (as produced by `family` or `dataset`).
        #[arg(long = "in")]
        input: PathBuf,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// Clamp height for plotted points.
        #[arg(long, default_value_t = 8.0)]
        y_max: f64,
        /// Point coloring: disc or none.
        #[arg(long, default_value = "disc", value_parser = ["disc", "none"])]
        color_by: String,
    },
}

fn family_from_tag(tag: &str) -> std::result::Result<Family, String> {
    Family::from_tag(tag).ok_or_else(|| {
        format!(
            "unknown family {tag:?}; expected one of {}",
            Family::ALL.map(|f| f.tag()).join(", ")
        )
    })
}

fn suite_from_tag(tag: &str) -> std::result::Result<Suite, String> {
    Suite::from_tag(tag).ok_or_else(|| {
        format!(
            "unknown suite {tag:?}; expected one of {}",
            Suite::ALL.map(|s| s.tag()).join(", ")
        )
    })
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("range must look like a..b, got {s:?}"))?;
    let lo = a
        .parse::<i64>()
        .with_context(|| format!("bad range start {a:?}"))?;
    let hi = b
        .parse::<i64>()
        .with_context(|| format!("bad range end {b:?}"))?;
    if lo > hi {
        return Err(anyhow!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Family {
            name: family,
            n_min,
            n_max,
            precision,
            out,
            hex,
        } => {
            let ctx = precision.resolve()?;
            let members = sweep(family, n_min, n_max, &ctx)?;
            let rows = members
                .iter()
                .map(|m| member_row(m, &ctx, hex))
                .collect::<ushape_core::Result<Vec<_>>>()?;
            std::fs::write(&out, emit_csv(&rows))
                .with_context(|| format!("writing {}", out.display()))?;
            eprintln!(
                "wrote {} rows for {} to {}",
                rows.len(),
                family.tag(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sieve { family, range } => {
            let (lo, hi) = parse_range(&range)?;
            let mut stdout = String::new();
            for n in sieve(family, lo, hi) {
                stdout.push_str(&n.to_string());
                stdout.push('\n');
            }
            print!("{stdout}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dataset {
            input,
            out,
            precision,
            hex,
        } => {
            let ctx = precision.resolve()?;
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let outcome = parse_and_validate(&text, &ctx)?;
            for rej in &outcome.rejects {
                eprintln!("line {}: rejected: {}", rej.line, rej.message);
            }
            let rows = outcome
                .records
                .iter()
                .map(|r| record_row(r, &ctx, hex))
                .collect::<ushape_core::Result<Vec<_>>>()?;
            std::fs::write(&out, emit_csv(&rows))
                .with_context(|| format!("writing {}", out.display()))?;
            eprintln!(
                "wrote {} rows ({} rejected) to {}",
                rows.len(),
                outcome.rejects.len(),
                out.display()
            );
            if rows.is_empty() && !outcome.rejects.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            suite,
            n_max,
            precision,
        } => {
            let ctx = precision.resolve()?;
            let report = run_suite(suite, n_max, &ctx)?;
            print!("{}", report.render());
            if report.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        Cmd::Plot {
            input,
            out,
            y_max,
            color_by,
        } => {
            let color_by_disc = match color_by.as_str() {
                "disc" => true,
                "none" => false,
                other => return Err(anyhow!("unknown --color-by {other:?}")),
            };
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let rows = parse_csv(&text)?;
            let svg = emit_svg(
                &rows,
                &PlotOptions {
                    y_max,
                    color_by_disc,
                },
            )?;
            std::fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
