//! Command-line front end: runs the verification suites and emits tables
//! and figure data as CSV or JSON with deterministic formatting.
//!
//! Exit status: 0 when every requested certification passes, 1 on failures
//! (witness rows identify the points), 2 when a sign could not be certified
//! at the requested precision (escalate precision or switch to exact mode),
//! 64 on usage errors.

mod output;
mod run;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const USAGE_ERROR: i32 = 64;
pub const INDETERMINATE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "seqcert",
    about = "Certified verification of convexity, threshold and expectation \
             inequalities for a family of combinatorial sequence functions",
    version
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write output to this path instead of stdout
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,

    /// Arithmetic mode (auto follows the per-suite defaults: exact up to
    /// the documented size limits, tracked floating beyond)
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,

    /// Precision in bits for tracked floating evaluation (>= 53). Defaults
    /// to $SEQCERT_PRECISION_BITS when set.
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    /// Worker threads for parallel sweeps (0 = library default). Output is
    /// byte-identical for any worker count.
    #[arg(long, global = true, default_value_t = 0)]
    pub parallel: usize,

    /// Allow the long-running points (a = 5000 ratio fixture, l > 2500 sweeps)
    #[arg(long, global = true)]
    pub slow: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exact,
    Log,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a certification suite over a range of l
    Verify(VerifyArgs),
    /// Reproduce the gap table at l = 4(a+1)²-1 for a = 1..=max-a
    Table41(MaxAArgs),
    /// Grid scans reported as conjecture evidence
    Scan(ScanArgs),
    /// Emit the data table behind a figure
    Figure(FigureArgs),
    /// Asymptotic limit suites
    Asymptotics(AsymptoticsArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub suite: VerifySuite,
}

#[derive(Subcommand, Debug)]
pub enum VerifySuite {
    /// Convexity suite: monotonicity, second/third differences, curvature
    /// separation and the derived second difference of d
    Theorem1(RangeArgs),
    /// Threshold formula ⌊√l/2⌋, single sign change, boundary triples
    Threshold(RangeArgs),
    /// Pairwise inequalities, the reduced small-l check and E[d(J)] > 0
    Pairwise(RangeArgs),
}

#[derive(Args, Debug)]
pub struct RangeArgs {
    /// Inclusive range of l, e.g. 6..35
    #[arg(long, value_parser = parse_range)]
    pub l: (i64, i64),
}

#[derive(Args, Debug)]
pub struct MaxAArgs {
    /// Largest row index a
    #[arg(long = "max-a")]
    pub max_a: i64,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(subcommand)]
    pub scan: ScanKind,
}

#[derive(Subcommand, Debug)]
pub enum ScanKind {
    /// Monotonicity of the gap in l, in j, and down the stringent column
    Property41(MaxAArgs),
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// Figure id: 4.1, 4.2, 4.3, 4.4, 4.5 or 4.6
    #[arg(long)]
    pub id: String,
}

#[derive(Args, Debug)]
pub struct AsymptoticsArgs {
    /// Suite: lemma4.1, lemma4.2, claimD1 or remarkD1
    #[arg(long)]
    pub suite: String,

    /// Comma-separated increasing list of a values (suite defaults apply)
    #[arg(long)]
    pub a: Option<String>,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

pub fn parse_a_list(s: &str) -> Result<Vec<i64>, String> {
    let values: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("bad a value: {e}")))
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err("empty a list".into());
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err("a values must be strictly increasing".into());
    }
    Ok(values)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                e.print().ok();
                std::process::exit(0);
            }
            e.print().ok();
            std::process::exit(USAGE_ERROR);
        }
    };
    std::process::exit(run::run(cli));
}
