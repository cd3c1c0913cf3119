//! Curated list of Fano manifolds of Picard number one, by dimension, index
//! and degree, together with `c₂(T)` coefficients for a few of them.
//!
//! The lists are trusted, not derived. The default copy is compiled in; the
//! `FANOCALC_DATA` environment variable points at a replacement CSV.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::exact::{parse_rat, to_i64, Rat};

const BUILTIN_MANIFOLDS: &str = include_str!("../data/fano_manifolds.csv");
const BUILTIN_C2: &str = include_str!("../data/c2_tangent.csv");

/// Environment variable overriding the manifold list.
pub const DATA_ENV: &str = "FANOCALC_DATA";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed dataset: {0}")]
    Csv(String),
    #[error("row {row}: {reason}")]
    Invalid { row: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct FanoEntry {
    pub dim: u32,
    pub index: u32,
    pub degree: u64,
    pub name: String,
    pub b4_rank: Option<u32>,
    pub source_note: String,
}

impl FanoEntry {
    pub fn coindex(&self) -> u32 {
        self.dim + 1 - self.index
    }

    /// `false` only when the fourth Betti number is known to exceed one.
    pub fn cyclic_h4(&self) -> bool {
        self.b4_rank.is_none_or(|b| b <= 1)
    }
}

#[derive(Debug, Deserialize)]
struct C2Row {
    name: String,
    c2_coeff: String,
    #[allow(dead_code)]
    source_note: String,
}

/// Result of a degree lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matches<'a> {
    pub entries: Vec<&'a FanoEntry>,
    /// Set when the requested degree was not an integer.
    pub non_integral: bool,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    entries: Vec<FanoEntry>,
    c2: BTreeMap<String, Rat>,
}

impl Dataset {
    /// The compiled-in lists.
    pub fn builtin() -> Self {
        Self::from_csv_str(BUILTIN_MANIFOLDS).expect("built-in dataset is valid")
    }

    /// The list named by `FANOCALC_DATA`, or the built-in one.
    pub fn from_env() -> Result<Self, DatasetError> {
        match std::env::var_os(DATA_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Ok(Self::builtin()),
        }
    }

    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        let text = std::fs::read_to_string(path).map_err(|e| DatasetError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_csv_str(&text)
    }

    pub fn from_csv_str(text: &str) -> Result<Self, DatasetError> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut entries = Vec::new();
        for (k, row) in reader.deserialize::<FanoEntry>().enumerate() {
            let e = row.map_err(|e| DatasetError::Csv(e.to_string()))?;
            let row = k + 2;
            if e.index < 1 || e.index > e.dim + 1 {
                return Err(DatasetError::Invalid {
                    row,
                    reason: format!("index {} outside 1..={}", e.index, e.dim + 1),
                });
            }
            if e.degree < 1 {
                return Err(DatasetError::Invalid {
                    row,
                    reason: "degree must be positive".into(),
                });
            }
            entries.push(e);
        }
        Ok(Self {
            entries,
            c2: builtin_c2(),
        })
    }

    pub fn entries(&self) -> &[FanoEntry] {
        &self.entries
    }

    /// All manifolds of the given dimension and index.
    pub fn with_index(&self, dim: u32, index: u32) -> Vec<&FanoEntry> {
        self.entries
            .iter()
            .filter(|e| e.dim == dim && e.index == index)
            .collect()
    }

    /// Manifolds with the given dimension, index and degree.
    pub fn match_manifolds(&self, dim: u32, index: u32, degree: &Rat) -> Matches<'_> {
        let Some(deg) = to_i64(degree) else {
            return Matches {
                entries: Vec::new(),
                non_integral: true,
            };
        };
        let entries = self
            .with_index(dim, index)
            .into_iter()
            .filter(|e| i64::try_from(e.degree).ok() == Some(deg))
            .collect();
        Matches {
            entries,
            non_integral: false,
        }
    }

    pub fn by_name(&self, name: &str) -> Option<&FanoEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// `true` when the list is complete for `(dim, index)`: every dimension
    /// for surfaces, coindex at most two up to dimension seven, and coindex
    /// three in dimensions three to five.
    pub fn covers(&self, dim: u32, index: u32) -> bool {
        if index < 1 || index > dim + 1 {
            return false;
        }
        let coindex = dim + 1 - index;
        match dim {
            2 => true,
            3..=7 if coindex <= 2 => true,
            3..=5 => coindex == 3,
            _ => false,
        }
    }

    /// Coefficient `a` with `c₂(T) = a·H²`, when known.
    pub fn c2_coeff(&self, name: &str) -> Option<&Rat> {
        self.c2.get(name)
    }
}

fn builtin_c2() -> BTreeMap<String, Rat> {
    let mut reader = csv::Reader::from_reader(BUILTIN_C2.as_bytes());
    reader
        .deserialize::<C2Row>()
        .map(|row| {
            let row = row.expect("built-in c2 table is valid");
            let value = parse_rat(&row.c2_coeff).expect("built-in c2 value is rational");
            (row.name, value)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn names(m: &Matches<'_>) -> Vec<String> {
        m.entries.iter().map(|e| e.name.clone()).collect()
    }

    #[test]
    fn lookups() {
        let ds = Dataset::builtin();
        assert_eq!(names(&ds.match_manifolds(5, 4, &int(4))), ["V_4^5"]);
        assert_eq!(names(&ds.match_manifolds(3, 3, &int(2))), ["Q^3"]);
        assert!(ds.with_index(2, 2).is_empty());
        assert!(ds.match_manifolds(2, 2, &int(1)).entries.is_empty());
        let frac = ds.match_manifolds(5, 3, &rat(9, 2));
        assert!(frac.non_integral && frac.entries.is_empty());
        assert_eq!(names(&ds.match_manifolds(5, 3, &int(18))), ["K(G2)"]);
    }

    #[test]
    fn betti_flags() {
        let ds = Dataset::builtin();
        assert!(!ds.by_name("Q^4").unwrap().cyclic_h4());
        assert!(!ds.by_name("V_5^5").unwrap().cyclic_h4());
        assert!(!ds.by_name("K(G2)_H").unwrap().cyclic_h4());
        assert!(ds.by_name("Q^5").unwrap().cyclic_h4());
    }

    #[test]
    fn tangent_coefficients() {
        let ds = Dataset::builtin();
        let got: Vec<_> = ["V_1^5", "V_2^5", "V_3^5", "V_4^5"]
            .iter()
            .map(|n| ds.c2_coeff(n).cloned().unwrap())
            .collect();
        assert_eq!(got, [int(17), int(11), int(9), int(8)]);
        assert_eq!(ds.c2_coeff("Q^5"), Some(&int(11)));
        assert_eq!(ds.c2_coeff("K(G2)"), None);
    }

    #[test]
    fn rejects_bad_rows() {
        let bad = "dim,index,degree,name,b4_rank,source_note\n3,5,1,X,,oops\n";
        assert!(matches!(
            Dataset::from_csv_str(bad),
            Err(DatasetError::Invalid { row: 2, .. })
        ));
        assert!(matches!(
            Dataset::from_csv_str("dim,index\nx,y\n"),
            Err(DatasetError::Csv(_))
        ));
    }

    #[test]
    fn coverage() {
        let ds = Dataset::builtin();
        assert!(ds.covers(5, 3));
        assert!(!ds.covers(5, 2));
        assert!(ds.covers(2, 2));
        assert!(!ds.covers(6, 4));
    }
}
