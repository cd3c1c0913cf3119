//! Finite case analysis for the three contraction types and the congruence
//! corollary, checked against the curated manifold list.
//!
//! Enumerators build every row through [`InvariantTuple::new`], so a row that
//! reaches the output has passed the structural checks of [`crate::slope`].
//! Geometric facts that are not arithmetic (Betti numbers, literature
//! classifications) enter as named rules with a citation string.

use std::fmt;

use thiserror::Error;

use crate::chow::ChowError;
use crate::exact::{fmt_rat, Rat};
use crate::slope::{InvariantTuple, SlopeError, TupleError};

pub mod congruence;
pub mod exclusions;
pub mod family;
pub mod type_c;
pub mod type_d;
pub mod type_p;

pub use congruence::{congruence_profile, enumerate_congruences, CongruenceProfile, CongruenceTuple};
pub use exclusions::{exclude_1_4, exclude_2_1};
pub use family::{family_table, FamilyRow};
pub use type_c::{enumerate_type_c, TypeCResult};
pub use type_d::{enumerate_type_d, type_d_fin_analysis, FinAnalysis, NamedOutcome, TypeDResult};
pub use type_p::enumerate_type_p;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("n = {n} is not supported: {reason}")]
    UnsupportedN { n: u32, reason: String },
    #[error("bound {name} = {value} is too small")]
    Bound { name: &'static str, value: u32 },
    #[error("tuple rejected: {0}")]
    Tuple(#[from] TupleError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dataset has no entry {0}")]
    MissingEntry(String),
}

/// A value recorded as evidence for an exclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessValue {
    Rat(Rat),
    List(Vec<Rat>),
    Flag(bool),
    Text(String),
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessValue::Rat(r) => write!(f, "{}", fmt_rat(r)),
            WitnessValue::List(v) => {
                let parts: Vec<_> = v.iter().map(fmt_rat).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            WitnessValue::Flag(b) => write!(f, "{b}"),
            WitnessValue::Text(s) => f.write_str(s),
        }
    }
}

/// Why a candidate cannot occur, with the exact numbers that show it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionReport {
    pub candidate: InvariantTuple,
    pub rule: String,
    pub witness: Vec<(String, WitnessValue)>,
    pub citation: String,
}

impl ExclusionReport {
    pub fn get(&self, key: &str) -> Option<&WitnessValue> {
        self.witness.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_rat(&self, key: &str) -> Option<&Rat> {
        match self.get(key) {
            Some(WitnessValue::Rat(r)) => Some(r),
            _ => None,
        }
    }

    pub fn get_flag(&self, key: &str) -> Option<bool> {
        match self.get(key) {
            Some(WitnessValue::Flag(b)) => Some(*b),
            _ => None,
        }
    }
}

// ---- Row serialization ----

/// Column order shared by CSV and JSON output.
pub const CSV_HEADER: [&str; 18] = [
    "n",
    "kind",
    "tau",
    "i",
    "d",
    "deg_X",
    "tau_prime",
    "i_prime",
    "deg_X_prime",
    "c1",
    "Delta",
    "c2_over_d",
    "name_X",
    "name_X_prime",
    "c1_prime",
    "y_dot_f",
    "status",
    "reason",
];

fn opt_rat(r: &Option<Rat>) -> String {
    r.as_ref().map(fmt_rat).unwrap_or_default()
}

/// The row's fields in [`CSV_HEADER`] order.
pub fn tuple_row(t: &InvariantTuple) -> Vec<String> {
    vec![
        t.n.to_string(),
        t.kind.to_string(),
        fmt_rat(&t.tau),
        t.i.to_string(),
        t.d.map(|d| d.to_string()).unwrap_or_default(),
        opt_rat(&t.deg_x),
        fmt_rat(&t.tau_p),
        t.i_p.to_string(),
        opt_rat(&t.deg_x_p),
        t.c1.to_string(),
        fmt_rat(&t.delta),
        fmt_rat(&t.c2_over_d),
        t.name_x.clone().unwrap_or_default(),
        t.name_x_p.clone().unwrap_or_default(),
        opt_rat(&t.c1_p),
        opt_rat(&t.y_dot_f),
        t.status.label().to_string(),
        t.status.reason().to_string(),
    ]
}

/// CSV text with header and LF line endings.
pub fn to_csv<'a>(rows: impl IntoIterator<Item = &'a InvariantTuple>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for t in rows {
        w.write_record(tuple_row(t)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Sorts by `(n, τ, τ′)`; the sort is stable so ties keep insertion order.
pub(crate) fn sort_rows(rows: &mut [InvariantTuple]) {
    rows.sort_by_key(|t| t.sort_key());
}
