use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use liegeom::Scalar;

#[derive(Debug, Parser)]
#[command(name = "liegeom", version, about = "Curvature of left-invariant Riemannian and Randers metrics on Lie groups")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Significant digits for floating-point output.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=17))]
    pub precision: u32,

    /// Exit with status 3 when the discrepancy ledger is nonempty.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a document: shape, Jacobi identity and metric positivity.
    Check(InputArgs),
    /// Connection, curvature, sectional and scalar curvature, parallel fields.
    Analyze(InputArgs),
    /// Sectional curvature of the plane spanned by two vectors.
    Sectional {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        u: VectorArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        v: VectorArg,
    },
    /// Scalar curvature.
    Scalar(InputArgs),
    /// Basis of the left-invariant parallel vector fields.
    Parallel(InputArgs),
    /// Randers metric built from the drift: Berwald status, norms, fundamental tensor, flag curvature.
    Randers {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        pole: Option<VectorArg>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        edge: Option<VectorArg>,
    },
    /// Flag curvature of the Randers metric for one flag.
    Flag {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        pole: VectorArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        edge: VectorArg,
    },
    /// Reproduce catalog cases against their published values.
    Report(ReportArgs),
    /// Catalog of built-in algebras.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// List the catalog cases.
    List,
}

#[derive(Clone, Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "case"])))]
pub struct InputArgs {
    /// Algebra document in JSON; `-` reads standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Catalog case id (1-6).
    #[arg(long)]
    pub case: Option<u32>,

    #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar)]
    pub alpha: Option<Scalar>,

    #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar)]
    pub beta: Option<Scalar>,

    /// Drift coefficients, e.g. `0,0,1/2,0`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    pub drift: Option<VectorArg>,
}

#[derive(Clone, Debug, Args)]
#[command(group(ArgGroup::new("cases").required(true).args(["all", "case"])))]
pub struct ReportArgs {
    /// Every catalog case.
    #[arg(long)]
    pub all: bool,

    /// Catalog case ids; repeat or separate with commas.
    #[arg(long, value_delimiter = ',')]
    pub case: Vec<u32>,

    /// Integer range `lo:hi` of alpha values for case 4.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
    pub alpha_grid: Option<RangeInclusive<i64>>,

    /// Integer range `lo:hi` of beta values for case 4.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
    pub beta_grid: Option<RangeInclusive<i64>>,

    /// Write the JSON report to this file.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Random samples per sampled formula.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,

    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
}

/// A comma-separated vector, keeping the literal text of each entry.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorArg {
    pub raw: Vec<String>,
    pub values: Vec<Scalar>,
}

impl VectorArg {
    pub fn is_floating(&self) -> bool {
        self.values.iter().any(|v| !v.is_exact())
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    text.parse().map_err(|e: liegeom::Error| e.to_string())
}

pub fn parse_vector(text: &str) -> Result<VectorArg, String> {
    let raw: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    let values = raw
        .iter()
        .enumerate()
        .map(|(k, s)| parse_scalar(s).map_err(|e| format!("entry {k}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorArg { raw, values })
}

pub fn parse_grid(text: &str) -> Result<RangeInclusive<i64>, String> {
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| format!("`{s}` is not an integer"));
    let (lo, hi) = match text.split_once(':') {
        Some((lo, hi)) => (parse(lo)?, parse(hi)?),
        None => {
            let x = parse(text)?;
            (x, x)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn vectors_keep_exact_and_decimal_entries() {
        let v = parse_vector("0, -1/2,0.25").unwrap();
        assert_eq!(v.raw, ["0", "-1/2", "0.25"]);
        assert!(v.values[1].is_exact());
        assert!(v.is_floating());
        assert!(parse_vector("1,,2").is_err());
        assert!(parse_vector("1/0").is_err());
    }

    #[test]
    fn grids_are_inclusive() {
        assert_eq!(parse_grid("-2:1").unwrap(), -2..=1);
        assert_eq!(parse_grid("3").unwrap(), 3..=3);
        assert!(parse_grid("1:-1").is_err());
        assert!(parse_grid("a:b").is_err());
    }

    #[test]
    fn negative_arguments_are_values() {
        let cli = Cli::try_parse_from(["liegeom", "analyze", "--case", "4", "--alpha", "-1", "--beta", "0"]).unwrap();
        let Command::Analyze(input) = cli.command else { panic!("wrong command") };
        assert_eq!(input.alpha, Some("-1".parse().unwrap()));
        assert!(Cli::try_parse_from(["liegeom", "analyze"]).is_err());
        assert!(Cli::try_parse_from(["liegeom", "analyze", "--case", "1", "--input", "x.json"]).is_err());
    }
}
