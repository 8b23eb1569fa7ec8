//! The `digitlaw` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use digitlaw_core::gof::FitReport;
use digitlaw_core::samplers::{self, FactorLaw, StrengthLaw};
use digitlaw_core::{
    conformance_report, simulate_transition_array, DigitDistribution, Ensemble, GoeConfig,
    RandomStream,
};

use crate::io::{
    parse_linelist, render_fraction_table, write_histogram_data, write_linelist, write_report_json,
    DataBlock, LineList, Table1Column,
};

#[derive(Debug, Parser)]
#[command(
    name = "digitlaw",
    version,
    about = "Benford significant-digit analysis of spectral line strengths"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digit statistics of the strength column of a line-list file
    Analyze(AnalyzeArgs),
    /// Simulate a transition array from random Hamiltonians
    Simulate(SimulateArgs),
    /// Draw strengths from a reference law
    Sample(SampleArgs),
    /// Print Benford probabilities
    BenfordTable(BenfordTableArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Criteria {
    /// Largest mean absolute deviation that counts as conforming
    #[arg(long, default_value_t = 0.015)]
    pub max_mad: f64,
    /// Smallest chi-square p-value that counts as conforming
    #[arg(long, default_value_t = 0.001)]
    pub min_p: f64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Two-column line list: energy, strength
    pub file: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub base: u32,
    /// Number of leading significant digits per value
    #[arg(long, default_value_t = 1)]
    pub digits: usize,
    /// Strengths at or below this value are excluded
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
    /// Write the report as JSON to this path
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write observed and expected fractions as plot data to this path
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,
    /// Add a published column to the table (first digits, base 10 only)
    #[arg(long, value_enum)]
    pub compare: Option<Table1Column>,
    #[command(flatten)]
    pub criteria: Criteria,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleKind {
    Goe,
    Bigaussian,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 60)]
    pub dim_lower: usize,
    #[arg(long, default_value_t = 60)]
    pub dim_upper: usize,
    /// GOE off-diagonal standard deviation
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Standard deviation of the dipole matrix elements
    #[arg(long, default_value_t = 1.0)]
    pub dipole_sigma: f64,
    #[arg(long, value_enum, default_value_t = EnsembleKind::Goe)]
    pub ensemble: EnsembleKind,
    /// Bi-Gaussian weight of the first component
    #[arg(long, default_value_t = 0.9)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma1: f64,
    #[arg(long, default_value_t = 5.0)]
    pub sigma2: f64,
    /// Bi-Gaussian diagonal standard deviation [default: sqrt(2) * sigma]
    #[arg(long)]
    pub diag_sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the line list to this path
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Exit with status 2 when the strengths do not conform
    #[arg(long)]
    pub enforce: bool,
    #[command(flatten)]
    pub criteria: Criteria,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawKind {
    PorterThomas,
    Exponential,
    Lognormal,
    Cascade,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorKind {
    Uniform,
    Lognormal,
    HalfNormal,
}

impl From<FactorKind> for FactorLaw {
    fn from(k: FactorKind) -> Self {
        match k {
            FactorKind::Uniform => FactorLaw::UniformUnit,
            FactorKind::Lognormal => FactorLaw::LogNormalUnit,
            FactorKind::HalfNormal => FactorLaw::HalfNormal,
        }
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = LawKind::PorterThomas)]
    pub law: LawKind,
    /// Number of strengths to draw
    #[arg(short = 'n', long, default_value_t = 100_000)]
    pub count: usize,
    /// Mean strength (porter-thomas, exponential)
    #[arg(long, default_value_t = 1.0)]
    pub mean: f64,
    /// Mean of ln S (lognormal)
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Standard deviation of ln S (lognormal)
    #[arg(long, default_value_t = 1.0)]
    pub log_sigma: f64,
    /// Number of factors per product (cascade)
    #[arg(long, default_value_t = 50)]
    pub factors: usize,
    /// Law of each factor (cascade)
    #[arg(long, value_enum, default_value_t = FactorKind::Uniform)]
    pub factor_law: FactorKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the samples as a line list (energy = sample index)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Exit with status 2 when the strengths do not conform
    #[arg(long)]
    pub enforce: bool,
    #[command(flatten)]
    pub criteria: Criteria,
}

#[derive(Debug, Args)]
pub struct BenfordTableArgs {
    #[arg(long, default_value_t = 10)]
    pub base: u32,
    #[arg(long, default_value_t = 1)]
    pub digits: usize,
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    NonConforming,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::NonConforming => 2,
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze(args) => analyze(args, out),
        Command::Simulate(args) => simulate(args, out),
        Command::Sample(args) => sample(args, out),
        Command::BenfordTable(args) => benford_table(args, out),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn verdict(report: &FitReport, criteria: Criteria, out: &mut dyn Write) -> Result<Outcome> {
    let pass = report.passes(criteria.max_mad, criteria.min_p);
    writeln!(
        out,
        "verdict     {} (MAD {:.5} vs max {}, p {:.4e} vs min {})",
        if pass { "conforms" } else { "does not conform" },
        report.mad,
        criteria.max_mad,
        report.p_value,
        criteria.min_p
    )?;
    Ok(if pass {
        Outcome::Pass
    } else {
        Outcome::NonConforming
    })
}

fn summary(report: &FitReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "N           {}", report.counts_total)?;
    writeln!(out, "excluded    {}", report.excluded)?;
    writeln!(
        out,
        "chi-square  {:.4} (dof {})",
        report.chi_square, report.chi_square_dof
    )?;
    writeln!(out, "p-value     {:.4e}", report.p_value)?;
    writeln!(out, "MAD         {:.5}", report.mad)?;
    writeln!(out, "TV          {:.5}", report.total_variation)?;
    Ok(())
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<Outcome> {
    let text = fs::read_to_string(&args.file)
        .with_context(|| format!("cannot read {}", args.file.display()))?;
    let list = parse_linelist(&text).with_context(|| format!("in {}", args.file.display()))?;
    let report = conformance_report(&list.strengths(), args.digits, args.base, args.threshold)
        .with_context(|| format!("cannot analyze {}", args.file.display()))?;
    let table = render_fraction_table(&report, args.compare)?;
    if !list.label.is_empty() {
        writeln!(out, "# {}", list.label)?;
    }
    write!(out, "{table}")?;
    if let Some(path) = &args.json {
        write_file(path, &write_report_json(&report))?;
    }
    if let Some(path) = &args.data {
        write_file(
            path,
            &write_histogram_data(&DataBlock::from_report(&report)),
        )?;
    }
    verdict(&report, args.criteria, out)
}

fn finish_simulation(
    list: &LineList,
    path: Option<&Path>,
    criteria: Criteria,
    enforce: bool,
    out: &mut dyn Write,
) -> Result<Outcome> {
    if let Some(path) = path {
        write_file(path, &write_linelist(list))?;
    }
    let report = conformance_report(&list.strengths(), 1, 10, 0.0)
        .context("no positive strengths to analyze")?;
    summary(&report, out)?;
    let outcome = verdict(&report, criteria, out)?;
    Ok(if enforce { outcome } else { Outcome::Pass })
}

fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<Outcome> {
    let ensemble = match args.ensemble {
        EnsembleKind::Goe => Ensemble::Goe,
        EnsembleKind::Bigaussian => Ensemble::BiGaussian {
            p: args.p,
            sigma1: args.sigma1,
            sigma2: args.sigma2,
            diag_sigma: args
                .diag_sigma
                .unwrap_or(std::f64::consts::SQRT_2 * args.sigma),
        },
    };
    let config = GoeConfig {
        dim_lower: args.dim_lower,
        dim_upper: args.dim_upper,
        sigma_offdiag: args.sigma,
        ensemble,
        dipole_sigma: args.dipole_sigma,
        seed: args.seed,
    };
    let array = simulate_transition_array(&config)?;
    let ensemble_name = match args.ensemble {
        EnsembleKind::Goe => "goe",
        EnsembleKind::Bigaussian => "bigaussian",
    };
    let label = format!(
        "{ensemble_name} {}x{} sigma={} dipole_sigma={} seed={}",
        args.dim_lower, args.dim_upper, args.sigma, args.dipole_sigma, args.seed
    );
    writeln!(out, "ensemble    {ensemble_name}")?;
    writeln!(out, "seed        {}", args.seed)?;
    writeln!(out, "lines       {}", array.lines.len())?;
    writeln!(out, "total S     {:e}", array.total_strength)?;
    writeln!(out, "|D|_F^2     {:e}", array.dipole_norm_sq)?;
    let list = LineList::from_transition_array(&array, label);
    finish_simulation(&list, args.out.as_deref(), args.criteria, args.enforce, out)
}

fn sample(args: &SampleArgs, out: &mut dyn Write) -> Result<Outcome> {
    if args.count == 0 {
        bail!("--count must be at least 1");
    }
    let (law, law_label) = match args.law {
        LawKind::PorterThomas => (
            StrengthLaw::PorterThomas { mean: args.mean },
            format!("porter-thomas mean={}", args.mean),
        ),
        LawKind::Exponential => (
            StrengthLaw::Exponential { mean: args.mean },
            format!("exponential mean={}", args.mean),
        ),
        LawKind::Lognormal => (
            StrengthLaw::LogNormal {
                mu: args.mu,
                sigma: args.log_sigma,
            },
            format!("lognormal mu={} sigma={}", args.mu, args.log_sigma),
        ),
        LawKind::Cascade => (
            StrengthLaw::Cascade {
                n_factors: args.factors,
                factor_law: args.factor_law.into(),
            },
            format!(
                "cascade factors={} factor-law={}",
                args.factors,
                args.factor_law
                    .to_possible_value()
                    .expect("no skipped variants")
                    .get_name()
            ),
        ),
    };
    let mut stream = RandomStream::new(args.seed);
    let drawn = samplers::sample(law, args.count, &mut stream)?;
    let label = format!("{law_label} n={} seed={}", args.count, args.seed);
    writeln!(out, "law         {law_label}")?;
    writeln!(out, "seed        {}", args.seed)?;
    writeln!(out, "samples     {}", drawn.values.len())?;
    writeln!(out, "mean        {:e}", drawn.mean())?;
    writeln!(out, "variance    {:e}", drawn.variance())?;
    let list = LineList::from_sample(&drawn, label);
    finish_simulation(&list, args.out.as_deref(), args.criteria, args.enforce, out)
}

fn benford_table(args: &BenfordTableArgs, out: &mut dyn Write) -> Result<Outcome> {
    let dist = DigitDistribution::benford(args.base, args.digits)?;
    let width = args.digits.max(1);
    writeln!(out, "{:>width$}  probability", "d")?;
    for (i, p) in dist.probabilities().iter().enumerate() {
        writeln!(out, "{:>width$}  {p:.6}", dist.tuple(i).to_string())?;
    }
    Ok(Outcome::Pass)
}
