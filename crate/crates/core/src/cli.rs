//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage, 3 data validation, 4 size guard.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dataset::{bundled_paper_data, external_inputs, load_csv, to_cost, Condition};
use crate::error::Error;
use crate::kendall::{
    dominance_check, is_max_given_measure, max_diff_given_sample, max_given_sample, tau_a, Rational,
};
use crate::monte_carlo::{
    global_s, monte_carlo_diff_pvalue, monte_carlo_right_pvalue, ConditionSet, GlobalResult,
    MonteCarloConfig,
};
use crate::permutation::{
    format_levels, predicted_cost_levels, Alphabet, Constituent, DistanceMeasure, Order,
    Permutahedron,
};
use crate::report::{format_p, round_half_up};
use crate::significance::{
    exact_diff_right_pvalue_with, exact_right_pvalue, holm_adjust_groups, Arithmetic,
};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_SIZE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "swapdist",
    version,
    about = "Swap distance analysis of constituent orders"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-condition tau(d,s), tau(p,s), tau(c,s) with exact p-values and maximum flags.
    Analyze,
    /// Per-condition tests of tau(d,s) - tau(c,s) and tau(d,s) - tau(p,s).
    Diff,
    /// Per-language sums of tau with Monte Carlo p-values and Holm adjustment.
    Global,
    /// The permutahedron with per-vertex distances, as DOT or JSON.
    Ring,
    /// Orders grouped by predicted cost for a canonical order.
    Predict {
        /// Print the prediction for every possible canonical order.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArithmeticArg {
    Exact,
    ReferenceFloat,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Condition CSV file; may be repeated. Added to the bundled conditions.
    #[arg(long, global = true, value_name = "CSV")]
    pub data: Vec<PathBuf>,
    /// Leave out the bundled conditions.
    #[arg(long, global = true)]
    pub no_bundled: bool,
    #[arg(long, global = true, default_value = "SOV")]
    pub canonical: String,
    /// Head constituent for the head-to-end distance [default: V, or the
    /// last symbol of the canonical order when V is not in its alphabet].
    #[arg(long, global = true)]
    pub head: Option<char>,
    /// Monte Carlo randomizations.
    #[arg(short = 'T', long, global = true, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, global = true, env = "SWAPDIST_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// `pooled`, `none`, or explicit groups such as `0,1,2;3,4` indexing the
    /// per-language statistics S(d), S(p), S(c), S(d)-S(c), S(d)-S(p) in
    /// language order (index = 5 * language + statistic).
    #[arg(long, global = true, default_value = "pooled")]
    pub holm: String,
    /// Worker threads for Monte Carlo; the output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Comparison arithmetic for the difference tests.
    #[arg(long, global = true, value_enum, default_value_t = ArithmeticArg::Exact)]
    pub arithmetic: ArithmeticArg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HolmGrouping {
    /// Within each statistic family pooled over languages: the three sums
    /// form one family and the two differences another.
    Pooled,
    None,
    Explicit(Vec<Vec<usize>>),
}

impl HolmGrouping {
    pub fn parse(text: &str) -> Result<Self, String> {
        match text.trim() {
            "pooled" => Ok(HolmGrouping::Pooled),
            "none" => Ok(HolmGrouping::None),
            explicit => explicit
                .split(';')
                .map(|group| {
                    group
                        .split(',')
                        .map(|i| {
                            i.trim()
                                .parse::<usize>()
                                .map_err(|_| format!("bad Holm index {i:?}"))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
                .map(HolmGrouping::Explicit),
        }
    }

    fn groups(&self, languages: usize) -> Vec<Vec<usize>> {
        match self {
            HolmGrouping::Pooled => vec![
                (0..languages)
                    .flat_map(|l| [5 * l, 5 * l + 1, 5 * l + 2])
                    .collect(),
                (0..languages)
                    .flat_map(|l| [5 * l + 3, 5 * l + 4])
                    .collect(),
            ],
            HolmGrouping::None => Vec::new(),
            HolmGrouping::Explicit(groups) => groups.clone(),
        }
    }
}

/// Validated settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub canonical: Order,
    pub head: Constituent,
    pub trials: u64,
    pub seed: u64,
    pub format: Format,
    pub holm: HolmGrouping,
    pub workers: Option<usize>,
    pub arithmetic: Arithmetic,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Size { .. } => EXIT_SIZE,
            Error::Parse { .. } | Error::Validation(_) | Error::Io(_) | Error::Input(_) => {
                EXIT_DATA
            }
            Error::AlphabetMismatch { .. }
            | Error::InvalidAlphabet(_)
            | Error::InvalidOrder { .. }
            | Error::UnknownConstituent(_)
            | Error::UnsupportedArity { .. } => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl RunConfig {
    pub fn from_options(o: &Options) -> Result<Self, CliError> {
        let canonical = Order::parse(&o.canonical).map_err(|e| CliError::usage(e.to_string()))?;
        let head = match o.head {
            Some(h) => Constituent(h),
            None if canonical.alphabet().contains(Constituent('V')) => Constituent('V'),
            None => Constituent(canonical.symbol_at(canonical.len() - 1)),
        };
        if !canonical.alphabet().contains(head) {
            return Err(CliError::usage(format!(
                "head {head} is not in alphabet {}",
                canonical.alphabet()
            )));
        }
        if o.trials == 0 {
            return Err(CliError::usage("--trials must be at least 1"));
        }
        Ok(Self {
            canonical,
            head,
            trials: o.trials,
            seed: o.seed,
            format: o.format,
            holm: HolmGrouping::parse(&o.holm).map_err(CliError::usage)?,
            workers: o.workers,
            arithmetic: match o.arithmetic {
                ArithmeticArg::Exact => Arithmetic::Exact,
                ArithmeticArg::ReferenceFloat => Arithmetic::ReferenceFloat,
            },
        })
    }

    fn measures(&self) -> Result<[DistanceMeasure; 3], CliError> {
        Ok(DistanceMeasure::standard(&self.canonical, self.head)?)
    }

    fn monte_carlo(&self) -> MonteCarloConfig {
        let cfg = MonteCarloConfig::new(self.trials, self.seed);
        match self.workers {
            Some(w) => cfg.with_workers(w),
            None => cfg,
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// the report to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{e}")?;
                return Ok(());
            }
            return Err(CliError::usage(e.to_string()));
        }
    };
    let config = RunConfig::from_options(&cli.options)?;
    match cli.command {
        Command::Analyze => cmd_analyze(&load_data(&cli.options)?, &config, out),
        Command::Diff => cmd_diff(&load_data(&cli.options)?, &config, out),
        Command::Global => cmd_global(&load_data(&cli.options)?, &config, out),
        Command::Ring => cmd_ring(&config, out),
        Command::Predict { all } => cmd_predict(&config, all, out),
    }
}

/// Bundled conditions (unless disabled) followed by every `--data` file.
pub fn load_data(options: &Options) -> Result<Vec<Condition>, CliError> {
    let mut data = if options.no_bundled {
        Vec::new()
    } else {
        bundled_paper_data()
    };
    for path in &options.data {
        let loaded = load_csv(path).map_err(|e| {
            let mut err = CliError::from(e);
            err.message = format!("{}: {}", path.display(), err.message);
            err
        })?;
        data.extend(loaded);
    }
    Ok(data)
}

fn require_data(data: &[Condition]) -> Result<(), CliError> {
    if data.is_empty() {
        return Err(CliError::usage(
            "no conditions: pass --data or drop --no-bundled",
        ));
    }
    Ok(())
}

fn fraction(r: Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn dec(r: Rational) -> String {
    round_half_up(r, 3)
}

#[derive(Debug, Serialize)]
struct ConditionKey {
    language: String,
    group: String,
    score_kind: String,
    modality: String,
}

impl ConditionKey {
    fn of(c: &Condition) -> Self {
        Self {
            language: c.language.clone(),
            group: c.group.clone().unwrap_or_default(),
            score_kind: c.score_kind.to_string(),
            modality: c.modality.to_string(),
        }
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.language.clone(),
            self.group.clone(),
            self.score_kind.clone(),
            self.modality.clone(),
        ]
    }
}

#[derive(Debug, Serialize)]
struct CorrelationCell {
    tau: String,
    tau_value: f64,
    p_value: String,
    p: f64,
    max_given_measure: bool,
    max_given_sample: bool,
}

#[derive(Debug, Serialize)]
struct AnalyzeRow {
    #[serde(flatten)]
    key: ConditionKey,
    d: CorrelationCell,
    p: CorrelationCell,
    c: CorrelationCell,
    dominance: Vec<String>,
}

/// One row per condition: three correlation tests with their maximum flags.
pub fn cmd_analyze(
    data: &[Condition],
    config: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    require_data(data)?;
    let measures = config.measures()?;
    let orders = config.canonical.alphabet().orders()?;
    let xs: Vec<Vec<f64>> = measures
        .iter()
        .map(|m| m.values(&orders))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(data.len());
    for condition in data {
        let y = to_cost(condition).vector(&orders)?;
        let mut taus = Vec::with_capacity(3);
        let mut cells = Vec::with_capacity(3);
        for x in &xs {
            let tau = tau_a(x, &y)?;
            let test = exact_right_pvalue(x, &y)?;
            let best = max_given_sample(x, &y)?;
            cells.push(CorrelationCell {
                tau: fraction(tau.tau),
                tau_value: tau.tau_f64(),
                p_value: fraction(test.right_p),
                p: test.right_p_f64(),
                max_given_measure: is_max_given_measure(&tau),
                max_given_sample: best.achieved,
            });
            taus.push(tau);
        }
        let dominance = dominance_check(&taus[0], &taus[1], &taus[2])
            .iter()
            .map(ToString::to_string)
            .collect();
        let mut cells = cells.into_iter();
        rows.push(AnalyzeRow {
            key: ConditionKey::of(condition),
            d: cells.next().expect("d"),
            p: cells.next().expect("p"),
            c: cells.next().expect("c"),
            dominance,
        });
    }

    match config.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&rows).expect("json")
        )?,
        Format::Csv => {
            let mut header = vec!["language", "group", "score_kind", "modality"]
                .into_iter()
                .map(String::from)
                .collect::<Vec<_>>();
            for m in ["d", "p", "c"] {
                for col in ["tau", "p_value", "max_given_measure", "max_given_sample"] {
                    header.push(format!("{col}_{m}"));
                }
            }
            header.push("dominance".into());
            let mut records = vec![header];
            for row in &rows {
                let mut rec = row.key.cells();
                for cell in [&row.d, &row.p, &row.c] {
                    rec.extend([
                        cell.tau.clone(),
                        cell.p_value.clone(),
                        cell.max_given_measure.to_string(),
                        cell.max_given_sample.to_string(),
                    ]);
                }
                rec.push(row.dominance.join(" "));
                records.push(rec);
            }
            write_csv_records(&records, out)?;
        }
        Format::Table | Format::Dot => {
            let mut table = vec![vec![
                "language".to_string(),
                "group".into(),
                "score".into(),
                "modality".into(),
                "tau(d,s)".into(),
                "p".into(),
                "tau(p,s)".into(),
                "p".into(),
                "tau(c,s)".into(),
                "p".into(),
                "dominance".into(),
            ]];
            for row in &rows {
                let mut rec = row.key.cells();
                for cell in [&row.d, &row.p, &row.c] {
                    let mark = if cell.max_given_measure {
                        "*"
                    } else if cell.max_given_sample {
                        "+"
                    } else {
                        ""
                    };
                    let tau: Rational = cell.tau.parse().expect("fraction");
                    let p: Rational = cell.p_value.parse().expect("fraction");
                    rec.push(format!("{}{mark}", dec(tau)));
                    rec.push(dec(p));
                }
                rec.push(row.dominance.join(" "));
                table.push(rec);
            }
            write_table(&table, out)?;
            writeln!(out)?;
            writeln!(
                out,
                "* maximum given the distance measure   + maximum given the sample"
            )?;
            writeln!(
                out,
                "measures: d = swap distance to {}, p = distance of {} to the end, c = non-canonical",
                config.canonical, config.head
            )?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct DiffCell {
    statistic: String,
    statistic_value: f64,
    p_value: String,
    p: f64,
    max_given_sample: bool,
}

#[derive(Debug, Serialize)]
struct DiffRow {
    #[serde(flatten)]
    key: ConditionKey,
    d_minus_c: DiffCell,
    d_minus_p: DiffCell,
}

/// One row per condition: exact tests of tau(d,s) - tau(c,s) and
/// tau(d,s) - tau(p,s).
pub fn cmd_diff(
    data: &[Condition],
    config: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    require_data(data)?;
    let [d, p, c] = config.measures()?;
    let orders = config.canonical.alphabet().orders()?;
    let (xd, xp, xc) = (d.values(&orders)?, p.values(&orders)?, c.values(&orders)?);

    let mut rows = Vec::with_capacity(data.len());
    for condition in data {
        let y = to_cost(condition).vector(&orders)?;
        let cell = |other: &[f64]| -> Result<DiffCell, CliError> {
            let test = exact_diff_right_pvalue_with(&xd, other, &y, config.arithmetic)?;
            let best = max_diff_given_sample(&xd, other, &y)?;
            Ok(DiffCell {
                statistic: fraction(test.statistic),
                statistic_value: crate::kendall::to_f64(test.statistic),
                p_value: fraction(test.right_p),
                p: test.right_p_f64(),
                max_given_sample: best.achieved,
            })
        };
        rows.push(DiffRow {
            key: ConditionKey::of(condition),
            d_minus_c: cell(&xc)?,
            d_minus_p: cell(&xp)?,
        });
    }

    match config.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&rows).expect("json")
        )?,
        Format::Csv => {
            let mut records = vec![[
                "language",
                "group",
                "score_kind",
                "modality",
                "d_minus_c",
                "p_value_d_minus_c",
                "max_given_sample_d_minus_c",
                "d_minus_p",
                "p_value_d_minus_p",
                "max_given_sample_d_minus_p",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()];
            for row in &rows {
                let mut rec = row.key.cells();
                for cell in [&row.d_minus_c, &row.d_minus_p] {
                    rec.extend([
                        cell.statistic.clone(),
                        cell.p_value.clone(),
                        cell.max_given_sample.to_string(),
                    ]);
                }
                records.push(rec);
            }
            write_csv_records(&records, out)?;
        }
        Format::Table | Format::Dot => {
            let mut table = vec![[
                "language",
                "group",
                "score",
                "modality",
                "tau(d,s)-tau(c,s)",
                "p",
                "tau(d,s)-tau(p,s)",
                "p",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()];
            for row in &rows {
                let mut rec = row.key.cells();
                for cell in [&row.d_minus_c, &row.d_minus_p] {
                    let mark = if cell.max_given_sample { "+" } else { "" };
                    let stat: Rational = cell.statistic.parse().expect("fraction");
                    let p: Rational = cell.p_value.parse().expect("fraction");
                    rec.push(format!("{}{mark}", dec(stat)));
                    rec.push(dec(p));
                }
                table.push(rec);
            }
            write_table(&table, out)?;
            writeln!(out)?;
            writeln!(out, "+ maximum given the sample")?;
            if config.arithmetic == Arithmetic::ReferenceFloat {
                writeln!(
                    out,
                    "comparisons use floating-point tau differences (--arithmetic reference-float)"
                )?;
            }
        }
    }
    Ok(())
}

const GLOBAL_STATISTICS: [&str; 5] = ["S(d)", "S(p)", "S(c)", "S(d)-S(c)", "S(d)-S(p)"];

#[derive(Debug, Serialize)]
struct GlobalCell {
    statistic: &'static str,
    value: String,
    value_decimal: f64,
    tail_count: u64,
    p_raw: f64,
    below_resolution: bool,
    p_holm: f64,
}

#[derive(Debug, Serialize)]
struct GlobalLanguage {
    language: String,
    conditions: usize,
    statistics: Vec<GlobalCell>,
    missing_external_inputs: Vec<String>,
}

#[derive(Debug, Serialize)]
struct GlobalReport {
    trials: u64,
    seed: u64,
    holm: String,
    languages: Vec<GlobalLanguage>,
}

fn languages_in_order(data: &[Condition]) -> Vec<String> {
    let mut seen = Vec::new();
    for c in data {
        if !seen.contains(&c.language) {
            seen.push(c.language.clone());
        }
    }
    seen
}

fn missing_inputs(language: &str, data: &[Condition]) -> Vec<String> {
    let present: BTreeSet<_> = data
        .iter()
        .filter(|c| c.language == language)
        .map(|c| (c.group.clone(), c.score_kind, c.modality))
        .collect();
    external_inputs()
        .into_iter()
        .filter(|e| e.language == language)
        .filter(|e| !present.contains(&(e.group.map(str::to_string), e.score_kind, e.modality)))
        .map(|e| {
            let mut parts = vec![e.language.to_string()];
            if let Some(g) = e.group {
                parts.push(g.to_string());
            }
            parts.push(e.score_kind.to_string());
            parts.push(e.modality.to_string());
            parts.join(" / ")
        })
        .collect()
}

/// Per-language global test of S(d), S(p), S(c) and the two differences.
pub fn cmd_global(
    data: &[Condition],
    config: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    require_data(data)?;
    let [d, p, c] = config.measures()?;
    let mc = config.monte_carlo();
    let languages = languages_in_order(data);
    let groups = config.holm.groups(languages.len());
    holm_adjust_groups(&vec![0.0; 5 * languages.len()], &groups)
        .map_err(|e| CliError::usage(e.to_string()))?;

    let mut results: Vec<(String, usize, Vec<GlobalResult>)> = Vec::new();
    for language in &languages {
        let set = ConditionSet::new(
            data.iter()
                .filter(|c| &c.language == language)
                .cloned()
                .collect(),
        )?;
        let stats = vec![
            monte_carlo_right_pvalue(&set, &d, mc)?,
            monte_carlo_right_pvalue(&set, &p, mc)?,
            monte_carlo_right_pvalue(&set, &c, mc)?,
            monte_carlo_diff_pvalue(&set, &d, &c, mc)?,
            monte_carlo_diff_pvalue(&set, &d, &p, mc)?,
        ];
        debug_assert_eq!(stats[0].statistic, global_s(&set, &d)?);
        results.push((language.clone(), set.len(), stats));
    }

    let raw: Vec<f64> = results
        .iter()
        .flat_map(|(_, _, s)| s.iter().map(|r| r.p_estimate))
        .collect();
    let adjusted = holm_adjust_groups(&raw, &groups)?;

    let report = GlobalReport {
        trials: config.trials,
        seed: config.seed,
        holm: match &config.holm {
            HolmGrouping::Pooled => "pooled".into(),
            HolmGrouping::None => "none".into(),
            HolmGrouping::Explicit(g) => format!("{g:?}"),
        },
        languages: results
            .iter()
            .enumerate()
            .map(|(li, (language, count, stats))| GlobalLanguage {
                language: language.clone(),
                conditions: *count,
                statistics: stats
                    .iter()
                    .enumerate()
                    .map(|(si, r)| GlobalCell {
                        statistic: GLOBAL_STATISTICS[si],
                        value: fraction(r.statistic),
                        value_decimal: r.statistic_f64(),
                        tail_count: r.tail_count,
                        p_raw: r.p_estimate,
                        below_resolution: r.is_below_resolution(),
                        p_holm: adjusted[5 * li + si],
                    })
                    .collect(),
                missing_external_inputs: missing_inputs(language, data),
            })
            .collect(),
    };

    let show_p = |p: f64, below: bool| {
        if below {
            format!("<{}", format_p(1.0 / config.trials as f64))
        } else {
            format_p(p)
        }
    };
    match config.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("json")
        )?,
        Format::Csv => {
            let mut records = vec![[
                "language",
                "statistic",
                "value",
                "tail_count",
                "trials",
                "p_raw",
                "p_holm",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()];
            for lang in &report.languages {
                if !lang.missing_external_inputs.is_empty() {
                    eprintln!(
                        "note: {}: raw score vectors not supplied for: {}",
                        lang.language,
                        lang.missing_external_inputs.join("; ")
                    );
                }
                for cell in &lang.statistics {
                    records.push(vec![
                        lang.language.clone(),
                        cell.statistic.to_string(),
                        cell.value.clone(),
                        cell.tail_count.to_string(),
                        config.trials.to_string(),
                        cell.p_raw.to_string(),
                        cell.p_holm.to_string(),
                    ]);
                }
            }
            write_csv_records(&records, out)?;
        }
        Format::Table | Format::Dot => {
            writeln!(
                out,
                "randomizations: {}  seed: {}  holm: {}",
                config.trials, config.seed, report.holm
            )?;
            for lang in &report.languages {
                writeln!(out)?;
                writeln!(out, "{} ({} conditions)", lang.language, lang.conditions)?;
                let mut table = vec![["statistic", "value", "p", "p (Holm)"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()];
                for cell in &lang.statistics {
                    let value: Rational = cell.value.parse().expect("fraction");
                    table.push(vec![
                        cell.statistic.to_string(),
                        round_half_up(value, 2),
                        show_p(cell.p_raw, cell.below_resolution),
                        show_p(cell.p_holm, cell.below_resolution && cell.p_holm == 0.0),
                    ]);
                }
                write_table(&table, out)?;
                if !lang.missing_external_inputs.is_empty() {
                    writeln!(
                        out,
                        "note: raw score vectors not supplied for: {}",
                        lang.missing_external_inputs.join("; ")
                    )?;
                    writeln!(
                        out,
                        "note: these sums cover only the supplied conditions; add the missing vectors with --data (template: crates/core/data/external_template.csv)"
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn ring_alphabet(canonical: &Order) -> &Arc<Alphabet> {
    canonical.alphabet()
}

/// The permutahedron of the canonical order's alphabet with per-vertex
/// `d`, `p`, `c` and, for three constituents, the rotation angle.
pub fn cmd_ring(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = Permutahedron::build(ring_alphabet(&config.canonical))?;
    let annotations = graph.annotate(&config.canonical, config.head)?;
    match config.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&graph.to_json(Some(&annotations))).expect("json")
        )?,
        Format::Csv => {
            let mut records = vec![["order", "d", "p", "c", "rotation"]
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()];
            for a in &annotations {
                records.push(vec![
                    a.order.to_string(),
                    a.d.to_string(),
                    a.p.to_string(),
                    a.c.to_string(),
                    a.rotation.map(|r| r.to_string()).unwrap_or_default(),
                ]);
            }
            write_csv_records(&records, out)?;
        }
        Format::Table | Format::Dot => write!(out, "{}", graph.to_dot(Some(&annotations)))?,
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct Prediction {
    canonical: String,
    levels: Vec<Vec<String>>,
}

/// Orders grouped by swap distance from the canonical order, cheapest first.
pub fn cmd_predict(config: &RunConfig, all: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let canonicals = if all {
        config.canonical.alphabet().orders()?
    } else {
        vec![config.canonical.clone()]
    };
    let mut predictions = Vec::new();
    for canonical in &canonicals {
        let levels = predicted_cost_levels(canonical)?;
        predictions.push((canonical.to_string(), levels));
    }
    match config.format {
        Format::Json => {
            let items: Vec<Prediction> = predictions
                .iter()
                .map(|(k, levels)| Prediction {
                    canonical: k.clone(),
                    levels: levels
                        .iter()
                        .map(|l| l.iter().map(Order::to_string).collect())
                        .collect(),
                })
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&items).expect("json")
            )?;
        }
        Format::Csv => {
            let mut records = vec![vec![
                "canonical".to_string(),
                "order".into(),
                "level".into(),
            ]];
            for (k, levels) in &predictions {
                for (i, level) in levels.iter().enumerate() {
                    for o in level {
                        records.push(vec![k.clone(), o.to_string(), i.to_string()]);
                    }
                }
            }
            write_csv_records(&records, out)?;
        }
        Format::Table | Format::Dot => {
            for (_, levels) in &predictions {
                writeln!(out, "{}", format_levels(levels))?;
            }
        }
    }
    Ok(())
}

fn write_csv_records(records: &[Vec<String>], out: &mut dyn Write) -> Result<(), CliError> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in records {
        wtr.write_record(r)
            .map_err(|e| CliError::from(std::io::Error::other(e.to_string())))?;
    }
    wtr.flush()?;
    Ok(())
}

fn write_table(rows: &[Vec<String>], out: &mut dyn Write) -> Result<(), CliError> {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|i| {
            rows.iter()
                .filter_map(|r| r.get(i))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}
