//! Conditions and their score vectors.
//!
//! A condition is one combination of language, optional participant group,
//! score kind and modality, with one score per order. Scores that measure
//! ease (acceptability, frequency) are negated by [`to_cost`] so every
//! condition can go through the same right-sided tests.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permutation::{Alphabet, Order};

/// Column order of the six orders in CSV files.
pub const CSV_ORDER_COLUMNS: [&str; 6] = ["SOV", "SVO", "OSV", "OVS", "VSO", "VOS"];

pub const CSV_HEADER: [&str; 11] = [
    "language",
    "group",
    "score_kind",
    "modality",
    "direction",
    "SOV",
    "SVO",
    "OSV",
    "OVS",
    "VSO",
    "VOS",
];

/// Rows for the score vectors that are not bundled, with empty score cells.
pub const EXTERNAL_TEMPLATE_CSV: &str = include_str!("../data/external_template.csv");

macro_rules! keyword_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($text => Ok($name::$variant),)+
                    other => Err(Error::Validation(format!(
                        "unknown {} {other:?}",
                        stringify!($name)
                    ))),
                }
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }
    };
}

keyword_enum!(ScoreKind {
    Acceptability => "acceptability",
    AcceptabilityRank => "acceptability_rank",
    Frequency => "frequency",
    ReactionTime => "reaction_time",
    ReactionTimeRank => "reaction_time_rank",
    Error => "error",
    ErrorRank => "error_rank",
});

keyword_enum!(Modality {
    Spoken => "spoken",
    Written => "written",
    None => "none",
});

keyword_enum!(
    /// Whether larger scores mean less or more cognitive cost.
    Direction {
        Ease => "ease",
        Cost => "cost",
    }
);

impl ScoreKind {
    pub fn is_rank(self) -> bool {
        matches!(
            self,
            ScoreKind::AcceptabilityRank | ScoreKind::ReactionTimeRank | ScoreKind::ErrorRank
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub language: String,
    pub group: Option<String>,
    pub score_kind: ScoreKind,
    pub modality: Modality,
    pub direction: Direction,
    #[serde(serialize_with = "serialize_scores")]
    scores: BTreeMap<Order, f64>,
}

fn serialize_scores<S: serde::Serializer>(
    scores: &BTreeMap<Order, f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(scores.iter().map(|(o, v)| (o.to_string(), v)))
}

impl Condition {
    pub fn new(
        language: impl Into<String>,
        group: Option<String>,
        score_kind: ScoreKind,
        modality: Modality,
        direction: Direction,
        scores: BTreeMap<Order, f64>,
    ) -> Result<Self> {
        let condition = Self {
            language: language.into(),
            group: group.filter(|g| !g.is_empty()),
            score_kind,
            modality,
            direction,
            scores,
        };
        condition.validate()?;
        Ok(condition)
    }

    fn validate(&self) -> Result<()> {
        let label = self.label();
        let Some(first) = self.scores.keys().next() else {
            return Err(Error::Validation(format!("{label}: no scores")));
        };
        let expected = first.alphabet().orders()?;
        if self.scores.len() != expected.len()
            || expected.iter().any(|o| !self.scores.contains_key(o))
        {
            return Err(Error::Validation(format!(
                "{label}: expected one score for each of the {} orders",
                expected.len()
            )));
        }
        if let Some((o, v)) = self.scores.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "{label}: non-finite score {v} for {o}"
            )));
        }
        if self.score_kind.is_rank() {
            if self.scores.values().any(|&v| v < 1.0 || v.fract() != 0.0) {
                return Err(Error::Validation(format!(
                    "{label}: ranks must be positive integers"
                )));
            }
            if !self.scores.values().any(|&v| v == 1.0) {
                return Err(Error::Validation(format!("{label}: rank 1 is missing")));
            }
        }
        Ok(())
    }

    /// `Language / group / score kind / modality`, skipping an absent group.
    pub fn label(&self) -> String {
        let mut parts = vec![self.language.clone()];
        if let Some(g) = &self.group {
            parts.push(g.clone());
        }
        parts.push(self.score_kind.to_string());
        parts.push(self.modality.to_string());
        parts.join(" / ")
    }

    pub fn scores(&self) -> &BTreeMap<Order, f64> {
        &self.scores
    }

    pub fn score(&self, order: &Order) -> Option<f64> {
        self.scores.get(order).copied()
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.scores.keys().next().expect("validated").alphabet()
    }

    /// Scores laid out in the sequence of `orders`.
    pub fn vector(&self, orders: &[Order]) -> Result<Vec<f64>> {
        orders
            .iter()
            .map(|o| {
                self.score(o).ok_or_else(|| {
                    Error::Validation(format!("{}: no score for order {o}", self.label()))
                })
            })
            .collect()
    }
}

/// Negates ease scores so that larger always means costlier. Idempotent.
pub fn to_cost(condition: &Condition) -> Condition {
    match condition.direction {
        Direction::Cost => condition.clone(),
        Direction::Ease => Condition {
            direction: Direction::Cost,
            scores: condition
                .scores
                .iter()
                .map(|(o, v)| (o.clone(), -v))
                .collect(),
            ..condition.clone()
        },
    }
}

/// Orders grouped by significantly different cost, cheapest level first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContrastChain {
    levels: Vec<Vec<Order>>,
}

impl ContrastChain {
    /// Levels must partition every order of their alphabet.
    pub fn new(levels: Vec<Vec<Order>>) -> Result<Self> {
        let Some(first) = levels.iter().flatten().next() else {
            return Err(Error::Input("contrast chain has no orders".into()));
        };
        if levels.iter().any(Vec::is_empty) {
            return Err(Error::Input("contrast chain has an empty level".into()));
        }
        let all = first.alphabet().orders()?;
        let mut seen: BTreeMap<&Order, usize> = BTreeMap::new();
        for order in levels.iter().flatten() {
            if order.alphabet() != first.alphabet() {
                return Err(Error::Input(format!(
                    "order {order} uses a different alphabet"
                )));
            }
            *seen.entry(order).or_default() += 1;
        }
        if let Some((o, _)) = seen.iter().find(|(_, &count)| count > 1) {
            return Err(Error::Input(format!(
                "order {o} appears in more than one level"
            )));
        }
        if seen.len() != all.len() {
            return Err(Error::Input(format!(
                "contrast chain covers {} of {} orders",
                seen.len(),
                all.len()
            )));
        }
        Ok(Self { levels })
    }

    /// Parses `SOV < OSV < SVO, OVS < VSO, VOS`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut levels = Vec::new();
        for level in text.split('<') {
            let orders = level
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(Order::parse)
                .collect::<Result<Vec<_>>>()?;
            levels.push(orders);
        }
        Self::new(levels)
    }

    pub fn levels(&self) -> &[Vec<Order>] {
        &self.levels
    }
}

/// Rank `i` (1-based) for every order in level `i`.
pub fn ranks_from_contrasts(chain: &ContrastChain) -> BTreeMap<Order, f64> {
    chain
        .levels
        .iter()
        .enumerate()
        .flat_map(|(i, level)| level.iter().map(move |o| (o.clone(), (i + 1) as f64)))
        .collect()
}

fn sov_orders(names: &[&str]) -> Vec<Order> {
    let alphabet = Arc::new(Alphabet::sov());
    names
        .iter()
        .map(|n| alphabet.order(n).expect("valid order"))
        .collect()
}

fn rank_condition(
    language: &str,
    group: Option<&str>,
    kind: ScoreKind,
    modality: Modality,
    chain: &str,
) -> Condition {
    let chain = ContrastChain::parse(chain).expect("bundled chain");
    Condition::new(
        language,
        group.map(str::to_string),
        kind,
        modality,
        Direction::Cost,
        ranks_from_contrasts(&chain),
    )
    .expect("bundled condition")
}

pub const KOREAN_GROUPS: [&str; 3] = [
    "Korean-dominant",
    "English-dominant active",
    "English-dominant passive",
];

/// Conditions whose inputs are fully known: mean z-scored Malayalam
/// acceptability and the eight rank conditions obtained from pairwise
/// contrasts.
pub fn bundled_paper_data() -> Vec<Condition> {
    let orders = sov_orders(&["SOV", "OSV", "SVO", "OVS", "VSO", "VOS"]);
    let acceptability = [1.05, 0.80, 0.36, 0.30, -0.14, -0.36];
    let malayalam = Condition::new(
        "Malayalam",
        None,
        ScoreKind::Acceptability,
        Modality::Spoken,
        Direction::Ease,
        orders.into_iter().zip(acceptability).collect(),
    )
    .expect("bundled condition");

    let mut out = Vec::new();
    for group in KOREAN_GROUPS {
        out.push(rank_condition(
            "Korean",
            Some(group),
            ScoreKind::AcceptabilityRank,
            Modality::Spoken,
            "SOV < OSV < SVO, OVS < VSO, VOS",
        ));
    }
    out.push(malayalam);
    out.push(rank_condition(
        "Malayalam",
        None,
        ScoreKind::AcceptabilityRank,
        Modality::Spoken,
        "SOV, OSV < SVO, OVS < VSO, VOS",
    ));
    for (kind, modality, chain) in [
        (
            ScoreKind::ReactionTimeRank,
            Modality::Spoken,
            "SOV < SVO, OVS < OSV, VSO, VOS",
        ),
        (
            ScoreKind::ReactionTimeRank,
            Modality::Written,
            "SOV < SVO, OVS, OSV, VSO, VOS",
        ),
        (
            ScoreKind::ErrorRank,
            Modality::Spoken,
            "SOV < SVO, OVS, VSO < OSV, VOS",
        ),
        (
            ScoreKind::ErrorRank,
            Modality::Written,
            "SOV, SVO, VSO, VOS, OVS, OSV",
        ),
    ] {
        out.push(rank_condition("Sinhalese", None, kind, modality, chain));
    }
    out
}

/// A condition whose raw score vector has to be supplied by the user.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExternalInput {
    pub language: &'static str,
    pub group: Option<&'static str>,
    pub score_kind: ScoreKind,
    pub modality: Modality,
    pub direction: Direction,
}

/// Raw score vectors that are needed for the complete per-language analysis
/// but are not bundled: Korean mean acceptability for each group, Malayalam
/// corpus frequencies and Sinhalese mean reaction times and error rates.
pub fn external_inputs() -> Vec<ExternalInput> {
    let mut out: Vec<ExternalInput> = KOREAN_GROUPS
        .iter()
        .map(|&g| ExternalInput {
            language: "Korean",
            group: Some(g),
            score_kind: ScoreKind::Acceptability,
            modality: Modality::Spoken,
            direction: Direction::Ease,
        })
        .collect();
    out.push(ExternalInput {
        language: "Malayalam",
        group: None,
        score_kind: ScoreKind::Frequency,
        modality: Modality::None,
        direction: Direction::Ease,
    });
    for kind in [ScoreKind::ReactionTime, ScoreKind::Error] {
        for modality in [Modality::Spoken, Modality::Written] {
            out.push(ExternalInput {
                language: "Sinhalese",
                group: None,
                score_kind: kind,
                modality,
                direction: Direction::Cost,
            });
        }
    }
    out
}

fn parse_row(
    record: &csv::StringRecord,
    line: u64,
    alphabet: &Arc<Alphabet>,
    orders: &[Order],
) -> Result<Condition> {
    let err = |message: String| Error::Parse { line, message };
    if record.len() != CSV_HEADER.len() {
        return Err(err(format!(
            "expected {} fields, got {}",
            CSV_HEADER.len(),
            record.len()
        )));
    }
    let language = record[0].trim();
    if language.is_empty() {
        return Err(err("language is empty".into()));
    }
    let group = Some(record[1].trim().to_string());
    let score_kind: ScoreKind = record[2].parse().map_err(|e: Error| err(e.to_string()))?;
    let modality: Modality = record[3].parse().map_err(|e: Error| err(e.to_string()))?;
    let direction: Direction = record[4].parse().map_err(|e: Error| err(e.to_string()))?;
    let mut scores = BTreeMap::new();
    for (i, order) in orders.iter().enumerate() {
        let cell = record[5 + i].trim();
        if cell.is_empty() {
            return Err(err(format!("missing score for {order}")));
        }
        let value: f64 = cell
            .parse()
            .map_err(|_| err(format!("score {cell:?} for {order} is not a number")))?;
        scores.insert(order.clone(), value);
    }
    debug_assert!(orders.iter().all(|o| o.alphabet() == alphabet));
    Condition::new(language, group, score_kind, modality, direction, scores).map_err(|e| match e {
        Error::Validation(message) => Error::Validation(format!("line {line}: {message}")),
        other => other,
    })
}

/// Reads conditions from CSV with the header
/// `language,group,score_kind,modality,direction,SOV,SVO,OSV,OVS,VSO,VOS`.
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<Condition>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let alphabet = Arc::new(Alphabet::sov());
    let orders: Vec<Order> = CSV_ORDER_COLUMNS
        .iter()
        .map(|n| alphabet.order(n).expect("valid"))
        .collect();
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| csv_error(e, 1))?,
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty file".into(),
            })
        }
    };
    let fields: Vec<&str> = header.iter().map(str::trim).collect();
    if fields != CSV_HEADER {
        let bad_label = fields
            .iter()
            .skip(5)
            .find(|f| !CSV_ORDER_COLUMNS.contains(f));
        return Err(match bad_label {
            Some(label) => Error::Validation(format!(
                "header order label {label:?} is not one of {}",
                CSV_ORDER_COLUMNS.join(",")
            )),
            None => Error::Parse {
                line: 1,
                message: format!("header must be exactly {}", CSV_HEADER.join(",")),
            },
        });
    }
    let mut out = Vec::new();
    for record in records {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        out.push(parse_row(&record, line, &alphabet, &orders)?);
    }
    Ok(out)
}

fn csv_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(fallback_line);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            line,
            message: format!("{other:?}"),
        },
    }
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Vec<Condition>> {
    read_csv(std::fs::File::open(path)?)
}

/// Writes conditions in the same schema [`read_csv`] accepts.
pub fn write_csv<W: Write>(conditions: &[Condition], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let to_io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    wtr.write_record(CSV_HEADER).map_err(to_io)?;
    let alphabet = Arc::new(Alphabet::sov());
    let orders: Vec<Order> = CSV_ORDER_COLUMNS
        .iter()
        .map(|n| alphabet.order(n).expect("valid"))
        .collect();
    for c in conditions {
        let mut row = vec![
            c.language.clone(),
            c.group.clone().unwrap_or_default(),
            c.score_kind.to_string(),
            c.modality.to_string(),
            c.direction.to_string(),
        ];
        for v in c.vector(&orders)? {
            row.push(v.to_string());
        }
        wtr.write_record(&row).map_err(to_io)?;
    }
    wtr.flush()?;
    Ok(())
}
