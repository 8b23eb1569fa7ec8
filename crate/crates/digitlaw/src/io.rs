//! Line-list files, the reference fixture table and report serializers.
//!
//! Every writer here is deterministic: no hash-map iteration, no locale, and
//! floating-point values use Rust's shortest round-trip formatting.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use digitlaw_core::gof::FitReport;
use digitlaw_core::rmt::{Line, TransitionArray};
use digitlaw_core::samplers::StrengthSample;
use digitlaw_core::{DigitDistribution, DigitHistogram};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    File,
    Simulated,
    Fixture,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::File => "file",
            Source::Simulated => "simulated",
            Source::Fixture => "fixture",
        })
    }
}

impl FromStr for Source {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "file" => Ok(Source::File),
            "simulated" => Ok(Source::Simulated),
            "fixture" => Ok(Source::Fixture),
            _ => Err(()),
        }
    }
}

/// A resolved transition array: `(energy, strength)` rows in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct LineList {
    pub lines: Vec<Line>,
    pub label: String,
    pub source: Source,
}

impl LineList {
    pub fn strengths(&self) -> Vec<f64> {
        self.lines.iter().map(|l| l.strength).collect()
    }

    pub fn from_transition_array(array: &TransitionArray, label: impl Into<String>) -> Self {
        LineList {
            lines: array.lines.clone(),
            label: label.into(),
            source: Source::Simulated,
        }
    }

    /// Sampled strengths with the sample index as the energy column.
    pub fn from_sample(sample: &StrengthSample, label: impl Into<String>) -> Self {
        LineList {
            lines: sample
                .values
                .iter()
                .enumerate()
                .map(|(i, &strength)| Line {
                    energy: i as f64,
                    strength,
                })
                .collect(),
            label: label.into(),
            source: Source::Simulated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: cannot parse `{token}` as a number")]
    Malformed { line: usize, token: String },
    #[error("line {line}: `{token}` is not finite")]
    NonFinite { line: usize, token: String },
    #[error("line {line}: expected 2 columns (energy, strength), found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: negative strength `{token}`")]
    NegativeStrength { line: usize, token: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Malformed { line, .. }
            | ParseError::NonFinite { line, .. }
            | ParseError::ColumnCount { line, .. }
            | ParseError::NegativeStrength { line, .. } => *line,
        }
    }
}

const LABEL_PREFIX: &str = "# label: ";
const SOURCE_PREFIX: &str = "# source: ";

fn parse_number(token: &str, line: usize) -> Result<f64, ParseError> {
    let v: f64 = token.parse().map_err(|_| ParseError::Malformed {
        line,
        token: token.to_owned(),
    })?;
    if !v.is_finite() {
        return Err(ParseError::NonFinite {
            line,
            token: token.to_owned(),
        });
    }
    Ok(v)
}

/// Parses a two-column line list.
///
/// Columns are separated by whitespace and/or commas; `#` lines and blank
/// lines are skipped. The `# label:` and `# source:` header comments written
/// by [`write_linelist`] are read back when present.
pub fn parse_linelist(input: &str) -> Result<LineList, ParseError> {
    let mut list = LineList {
        lines: Vec::new(),
        label: String::new(),
        source: Source::File,
    };
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let text = raw.trim();
        if text.is_empty() {
            continue;
        }
        if text.starts_with('#') {
            if let Some(label) = raw.strip_prefix(LABEL_PREFIX) {
                list.label = label.to_owned();
            } else if let Some(source) = raw.strip_prefix(SOURCE_PREFIX) {
                if let Ok(source) = source.trim().parse() {
                    list.source = source;
                }
            }
            continue;
        }
        let tokens: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        for token in &tokens {
            parse_number(token, line_no)?;
        }
        if tokens.len() != 2 {
            return Err(ParseError::ColumnCount {
                line: line_no,
                found: tokens.len(),
            });
        }
        let energy = parse_number(tokens[0], line_no)?;
        let strength = parse_number(tokens[1], line_no)?;
        if strength < 0.0 {
            return Err(ParseError::NegativeStrength {
                line: line_no,
                token: tokens[1].to_owned(),
            });
        }
        list.lines.push(Line { energy, strength });
    }
    Ok(list)
}

/// Writes a line list that [`parse_linelist`] reads back exactly. Newlines
/// in the label are replaced by spaces.
pub fn write_linelist(list: &LineList) -> String {
    let mut out = String::with_capacity(32 * list.lines.len() + 64);
    let label = list.label.replace(['\n', '\r'], " ");
    writeln!(out, "{LABEL_PREFIX}{label}").unwrap();
    writeln!(out, "{SOURCE_PREFIX}{}", list.source).unwrap();
    writeln!(out, "# energy strength").unwrap();
    for line in &list.lines {
        writeln!(out, "{:e} {:e}", line.energy, line.strength).unwrap();
    }
    out
}

/// Columns of the published first-digit table: four computed transition
/// arrays and the Benford law, all rounded to three decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Table1Column {
    T1,
    T2,
    T3,
    T4,
    Benford,
}

impl Table1Column {
    pub const ALL: [Table1Column; 5] = [
        Table1Column::T1,
        Table1Column::T2,
        Table1Column::T3,
        Table1Column::T4,
        Table1Column::Benford,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Table1Column::T1 => "T1",
            Table1Column::T2 => "T2",
            Table1Column::T3 => "T3",
            Table1Column::T4 => "T4",
            Table1Column::Benford => "Benford",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Table1Column::T1 => "3d6 -> 3d5 4p, Ge IX, 3245 lines",
            Table1Column::T2 => "3d4 -> 3d3 4f, Ta LII, 2825 lines",
            Table1Column::T3 => "3d2 4s 4p -> 3d 4s 4p2, Br XIV, 2722 lines",
            Table1Column::T4 => "3d2 4s 4p3 -> 3d 4s 4p4, Br XII, 8231 lines",
            Table1Column::Benford => "log10(1 + 1/k)",
        }
    }

    pub fn fractions(self) -> [f64; 9] {
        match self {
            Table1Column::T1 => TABLE1.t1,
            Table1Column::T2 => TABLE1.t2,
            Table1Column::T3 => TABLE1.t3,
            Table1Column::T4 => TABLE1.t4,
            Table1Column::Benford => TABLE1.benford,
        }
    }
}

/// First-digit fractions (k = 1..=9) for each column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Fixture {
    pub t1: [f64; 9],
    pub t2: [f64; 9],
    pub t3: [f64; 9],
    pub t4: [f64; 9],
    pub benford: [f64; 9],
}

#[rustfmt::skip]
pub const TABLE1: Table1Fixture = Table1Fixture {
    t1:      [0.289, 0.186, 0.117, 0.096, 0.084, 0.075, 0.060, 0.049, 0.043],
    t2:      [0.307, 0.182, 0.121, 0.096, 0.079, 0.064, 0.060, 0.051, 0.039],
    t3:      [0.307, 0.179, 0.126, 0.093, 0.079, 0.071, 0.055, 0.049, 0.043],
    t4:      [0.300, 0.186, 0.117, 0.097, 0.076, 0.071, 0.055, 0.050, 0.048],
    benford: [0.301, 0.176, 0.125, 0.097, 0.079, 0.067, 0.058, 0.051, 0.046],
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("fixture comparison needs a base-10 first-digit report (got base {base}, {n_digits} digits)")]
    FixtureLayout { base: u32, n_digits: usize },
}

fn format_p(p: f64) -> String {
    if p != 0.0 && p < 1e-4 {
        format!("{p:.4e}")
    } else {
        format!("{p:.6}")
    }
}

/// Observed vs Benford fractions, one row per digit category, followed by
/// the sample size and fit statistics.
pub fn render_fraction_table(
    report: &FitReport,
    comparison: Option<Table1Column>,
) -> Result<String, RenderError> {
    if comparison.is_some() && (report.base != 10 || report.n_digits != 1) {
        return Err(RenderError::FixtureLayout {
            base: report.base,
            n_digits: report.n_digits,
        });
    }
    let width = report.n_digits.max(1);
    let mut out = String::new();
    write!(out, "{:>width$}  {:>8}  {:>8}", "k", "observed", "Benford").unwrap();
    if let Some(column) = comparison {
        write!(out, "  {:>8}", column.name()).unwrap();
    }
    out.push('\n');
    for (i, row) in report.rows.iter().enumerate() {
        write!(
            out,
            "{:>width$}  {:>8.3}  {:>8.3}",
            row.digits.to_string(),
            row.observed,
            row.expected
        )
        .unwrap();
        if let Some(column) = comparison {
            write!(out, "  {:>8.3}", column.fractions()[i]).unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "N           {}", report.counts_total).unwrap();
    writeln!(out, "excluded    {}", report.excluded).unwrap();
    writeln!(
        out,
        "chi-square  {:.4} (dof {})",
        report.chi_square, report.chi_square_dof
    )
    .unwrap();
    writeln!(out, "p-value     {}", format_p(report.p_value)).unwrap();
    writeln!(out, "MAD         {:.5}", report.mad).unwrap();
    writeln!(out, "TV          {:.5}", report.total_variation).unwrap();
    Ok(out)
}

#[derive(Serialize)]
struct JsonReport {
    base: u32,
    n_digits: usize,
    total: u64,
    excluded: u64,
    chi_square: f64,
    dof: u32,
    p_value: f64,
    mad: f64,
    total_variation: f64,
    observed: BTreeMap<String, f64>,
    expected: BTreeMap<String, f64>,
}

/// JSON form of a report. Keys appear in a fixed order and digit tuples are
/// string keys (`"1"`, `"45"`, `"a3"`).
pub fn write_report_json(report: &FitReport) -> String {
    let json = JsonReport {
        base: report.base,
        n_digits: report.n_digits,
        total: report.counts_total,
        excluded: report.excluded,
        chi_square: report.chi_square,
        dof: report.chi_square_dof,
        p_value: report.p_value,
        mad: report.mad,
        total_variation: report.total_variation,
        observed: report
            .rows
            .iter()
            .map(|r| (r.digits.to_string(), r.observed))
            .collect(),
        expected: report
            .rows
            .iter()
            .map(|r| (r.digits.to_string(), r.expected))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&json).expect("report fields are finite");
    text.push('\n');
    text
}

/// A named `(x, y)` series for external plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct DataBlock {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl DataBlock {
    /// Observed fractions keyed by the digit integer (`k` for one digit).
    /// Empty when the histogram has no included values.
    pub fn observed(hist: &DigitHistogram) -> Self {
        let points = hist
            .fractions()
            .iter()
            .enumerate()
            .map(|(i, &f)| (tuple_value(&hist.tuple(i)), f))
            .collect();
        DataBlock {
            name: "observed".into(),
            points,
        }
    }

    pub fn expected(reference: &DigitDistribution) -> Self {
        let points = reference
            .probabilities()
            .iter()
            .enumerate()
            .map(|(i, &p)| (tuple_value(&reference.tuple(i)), p))
            .collect();
        DataBlock {
            name: "expected".into(),
            points,
        }
    }

    pub fn from_report(report: &FitReport) -> [DataBlock; 2] {
        let x = |r: &digitlaw_core::gof::FitRow| tuple_value(&r.digits);
        [
            DataBlock {
                name: "observed".into(),
                points: report.rows.iter().map(|r| (x(r), r.observed)).collect(),
            },
            DataBlock {
                name: "expected".into(),
                points: report.rows.iter().map(|r| (x(r), r.expected)).collect(),
            },
        ]
    }

    /// `f` sampled at each of `xs`.
    pub fn curve(name: &str, xs: impl IntoIterator<Item = f64>, f: impl Fn(f64) -> f64) -> Self {
        DataBlock {
            name: name.into(),
            points: xs.into_iter().map(|x| (x, f(x))).collect(),
        }
    }
}

fn tuple_value(t: &digitlaw_core::DigitTuple) -> f64 {
    t.index().map_or(f64::NAN, |m| m as f64)
}

/// Two-column text, one `# name` block per dataset, blocks separated by a
/// blank line.
pub fn write_histogram_data(blocks: &[DataBlock]) -> String {
    let mut out = String::from("# x y\n");
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        writeln!(out, "# {}", block.name).unwrap();
        for (x, y) in &block.points {
            writeln!(out, "{x} {y}").unwrap();
        }
    }
    out
}
