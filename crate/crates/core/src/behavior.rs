//! Behavior tables `P(M1 = i, M2 = j | C = k)` with `i, j ∈ {0, 1}` and
//! explicit choice labels `k ∈ {1, 2, 3}`.
//!
//! Canonical JSON keeps every probability as a `"num/den"` string:
//!
//! ```json
//! { "choices": [1, 2], "table": { "C=1": { "00": "2/3", "01": "0/1", "10": "2/9", "11": "1/9" }, ... } }
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, sum, Rational};

/// Label of the intermediate measurement choice (which box is opened).
pub type Choice = u8;

/// Choice labels a behavior may carry.
pub const ALL_CHOICES: [Choice; 3] = [1, 2, 3];

const OUTCOME_KEYS: [(&str, usize, usize); 4] = [("00", 0, 0), ("01", 0, 1), ("10", 1, 0), ("11", 1, 1)];

/// Conditional distribution of `(M1, M2)` for one choice, indexed `[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Column([[Rational; 2]; 2]);

impl Column {
    pub fn new(entries: [[Rational; 2]; 2]) -> Result<Self> {
        if let Some(neg) = entries.iter().flatten().find(|p| **p < Rational::zero()) {
            return Err(Error::InvalidBehavior(format!("negative entry {}", format_rational(neg))));
        }
        let total = sum(entries.iter().flatten());
        if !total.is_one() {
            return Err(Error::InvalidBehavior(format!("entries sum to {}", format_rational(&total))));
        }
        Ok(Self(entries))
    }

    /// Builds a column from `(00, 01, 10, 11)` given as small fractions.
    pub fn from_fractions(entries: [(i64, i64); 4]) -> Result<Self> {
        let [a, b, c, d] = entries.map(|(n, d)| rat(n, d));
        Self::new([[a, b], [c, d]])
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.0[i][j]
    }

    /// Entries in `(00, 01, 10, 11)` order.
    pub fn entries(&self) -> [&Rational; 4] {
        [&self.0[0][0], &self.0[0][1], &self.0[1][0], &self.0[1][1]]
    }

    /// `P(M2 = 1)`
    pub fn m2_marginal(&self) -> Rational {
        &self.0[0][1] + &self.0[1][1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Behavior {
    columns: BTreeMap<Choice, Column>,
}

impl Behavior {
    pub fn new(columns: impl IntoIterator<Item = (Choice, Column)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, column) in columns {
            if !ALL_CHOICES.contains(&k) {
                return Err(Error::InvalidChoice(k));
            }
            if map.insert(k, column).is_some() {
                return Err(Error::InvalidChoiceSet(format!("choice {k} given twice")));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidChoiceSet("behavior has no choices".into()));
        }
        Ok(Self { columns: map })
    }

    /// The same column for every listed choice.
    pub fn constant(column: Column, choices: &[Choice]) -> Result<Self> {
        Self::new(choices.iter().map(|&k| (k, column.clone())))
    }

    pub fn choices(&self) -> Vec<Choice> {
        self.columns.keys().copied().collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = (Choice, &Column)> {
        self.columns.iter().map(|(k, c)| (*k, c))
    }

    pub fn column(&self, k: Choice) -> Result<&Column> {
        self.columns.get(&k).ok_or(Error::InvalidChoice(k))
    }

    pub fn get(&self, i: usize, j: usize, k: Choice) -> Result<&Rational> {
        if i > 1 {
            return Err(Error::InvalidOutcome(i));
        }
        if j > 1 {
            return Err(Error::InvalidOutcome(j));
        }
        Ok(self.column(k)?.get(i, j))
    }

    pub fn restrict(&self, keep: &[Choice]) -> Result<Behavior> {
        if keep.is_empty() {
            return Err(Error::InvalidChoiceSet("cannot restrict to an empty choice set".into()));
        }
        let columns = keep
            .iter()
            .map(|&k| {
                let column = self
                    .columns
                    .get(&k)
                    .ok_or_else(|| Error::InvalidChoiceSet(format!("choice {k} is not part of the behavior")))?;
                Ok((k, column.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Behavior::new(columns)
    }

    /// `P(M2 = 1 | C = k)`
    pub fn m2_marginal(&self, k: Choice) -> Result<Rational> {
        Ok(self.column(k)?.m2_marginal())
    }

    /// First pair of choices (in label order) whose `M2` marginals differ,
    /// or `None` when the `M2` marginal does not depend on `C`.
    pub fn is_signalling(&self) -> Result<Option<(Choice, Choice)>> {
        if self.columns.len() < 2 {
            return Err(Error::InvalidChoiceSet("signalling needs at least two choices".into()));
        }
        let marginals: Vec<(Choice, Rational)> = self.columns().map(|(k, c)| (k, c.m2_marginal())).collect();
        for (a, (k, pk)) in marginals.iter().enumerate() {
            for (l, pl) in &marginals[a + 1..] {
                if pk != pl {
                    return Ok(Some((*k, *l)));
                }
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> String {
        let wire = BehaviorJson {
            choices: self.choices(),
            table: self
                .columns
                .iter()
                .map(|(k, column)| {
                    let cells = OUTCOME_KEYS
                        .iter()
                        .map(|&(key, i, j)| (key.to_string(), format_rational(column.get(i, j))))
                        .collect();
                    (format!("C={k}"), cells)
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("plain strings and integers serialize")
    }

    pub fn from_json(text: &str) -> Result<Behavior> {
        let wire: BehaviorJson = serde_json::from_str(text)?;
        let mut columns = Vec::with_capacity(wire.choices.len());
        for &k in &wire.choices {
            let name = format!("C={k}");
            let cells = wire
                .table
                .get(&name)
                .ok_or_else(|| Error::InvalidBehavior(format!("column {name} missing from table")))?;
            if let Some(extra) = cells.keys().find(|key| !OUTCOME_KEYS.iter().any(|(o, _, _)| o == key)) {
                return Err(Error::InvalidBehavior(format!("column {name}: unexpected outcome key {extra:?}")));
            }
            let mut entries: [[Rational; 2]; 2] = Default::default();
            for &(key, i, j) in &OUTCOME_KEYS {
                let raw = cells
                    .get(key)
                    .ok_or_else(|| Error::InvalidBehavior(format!("column {name}: missing outcome {key}")))?;
                entries[i][j] =
                    parse_rational(raw).map_err(|e| Error::InvalidBehavior(format!("column {name}: {e}")))?;
            }
            let column = Column::new(entries).map_err(|e| match e {
                Error::InvalidBehavior(msg) => Error::InvalidBehavior(format!("column {name}: {msg}")),
                other => other,
            })?;
            columns.push((k, column));
        }
        if let Some(extra) = wire.table.keys().find(|name| !wire.choices.iter().any(|k| format!("C={k}") == **name)) {
            return Err(Error::InvalidBehavior(format!("column {extra} is not listed in choices")));
        }
        Behavior::new(columns)
    }

    /// One row per choice, outcomes as columns.
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| C | P(0,0) | P(0,1) | P(1,0) | P(1,1) | P(M2=1) |\n|---|---|---|---|---|---|\n");
        for (k, column) in self.columns() {
            let [a, b, c, d] = column.entries().map(format_rational);
            let _ = writeln!(out, "| {k} | {a} | {b} | {c} | {d} | {} |", format_rational(&column.m2_marginal()));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BehaviorJson {
    choices: Vec<Choice>,
    table: BTreeMap<String, BTreeMap<String, String>>,
}

/// The full three box statistics, `C = 1, 2, 3`.
pub fn three_box_behavior() -> Behavior {
    let checked = Column::from_fractions([(2, 3), (0, 1), (2, 9), (1, 9)]).expect("normalized");
    let third = Column::from_fractions([(2, 9), (4, 9), (2, 9), (1, 9)]).expect("normalized");
    Behavior::new([(1, checked.clone()), (2, checked), (3, third)]).expect("valid choices")
}

/// Deterministic outcome `(i, j)` with probability one.
pub fn deterministic_column(i: usize, j: usize) -> Column {
    let mut entries: [[Rational; 2]; 2] = Default::default();
    entries[i][j] = Rational::one();
    Column::new(entries).expect("point mass")
}
