//! Instrumental inequalities for a binary instrument-free scenario where `C`
//! may only act on `M2` through `M1`.
//!
//! The compact form bounds `max_i Σ_j max_k P(M1=i, M2=j | C=k)` by one.
//! The pairwise form lists, for every pair `k < l` of choices, four lines
//! `P(i,j|k) + P(i,1-j|l) ≤ 1`. The two forms are computed independently so
//! that their agreement is a real cross-check.

use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde_json::json;

use crate::behavior::{Behavior, Choice};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Compact,
    Pairwise,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::Compact => "compact",
            Form::Pairwise => "pairwise",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryIndex {
    /// Outcome `i` of `M1` in the compact form.
    Compact { i: usize },
    /// Line `1..=4` of the pairwise family for the choice pair `(k, l)`.
    Pairwise { line: u8, k: Choice, l: Choice },
}

impl std::fmt::Display for EntryIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntryIndex::Compact { i } => write!(f, "i={i}"),
            EntryIndex::Pairwise { line, k, l } => write!(f, "line {line}, kl={k}{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityEntry {
    pub index: EntryIndex,
    pub lhs: Rational,
    pub bound: Rational,
    pub violated: bool,
}

impl InequalityEntry {
    fn new(index: EntryIndex, lhs: Rational) -> Self {
        let bound = Rational::one();
        let violated = lhs > bound;
        Self { index, lhs, bound, violated }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityReport {
    pub form: Form,
    pub entries: Vec<InequalityEntry>,
}

impl InequalityReport {
    pub fn violated(&self) -> bool {
        self.entries.iter().any(|e| e.violated)
    }

    pub fn max_lhs(&self) -> Rational {
        self.entries.iter().map(|e| e.lhs.clone()).max().unwrap_or_else(Rational::zero)
    }

    pub fn violations(&self) -> impl Iterator<Item = &InequalityEntry> {
        self.entries.iter().filter(|e| e.violated)
    }

    pub fn entry(&self, index: EntryIndex) -> Option<&InequalityEntry> {
        self.entries.iter().find(|e| e.index == index)
    }

    /// Whether any pairwise entry for the choice pair `(k, l)` is violated.
    pub fn pair_violated(&self, k: Choice, l: Choice) -> bool {
        self.violations().any(|e| matches!(e.index, EntryIndex::Pairwise { k: a, l: b, .. } if (a, b) == (k, l)))
    }

    pub fn to_json(&self) -> String {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut obj = match e.index {
                    EntryIndex::Compact { i } => json!({ "i": i }),
                    EntryIndex::Pairwise { line, k, l } => json!({ "line": line, "k": k, "l": l }),
                };
                obj["lhs"] = json!(format_rational(&e.lhs));
                obj["bound"] = json!(format_rational(&e.bound));
                obj["violated"] = json!(e.violated);
                obj
            })
            .collect();
        let report = json!({
            "form": self.form.name(),
            "violated": self.violated(),
            "max_lhs": format_rational(&self.max_lhs()),
            "entries": entries,
        });
        serde_json::to_string_pretty(&report).expect("json values serialize")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "Instrumental inequalities ({} form): {}\n\n| entry | lhs | bound | status |\n|---|---|---|---|\n",
            self.form.name(),
            if self.violated() { "VIOLATED" } else { "satisfied" }
        );
        for e in &self.entries {
            let status = if e.violated { "**violated**" } else { "ok" };
            let (lhs, bound) = (format_rational(&e.lhs), format_rational(&e.bound));
            if e.violated {
                let _ = writeln!(out, "| **{}** | **{lhs}** | {bound} | {status} |", e.index);
            } else {
                let _ = writeln!(out, "| {} | {lhs} | {bound} | {status} |", e.index);
            }
        }
        out
    }
}

fn require_two_choices(b: &Behavior) -> Result<()> {
    if b.choices().len() < 2 {
        return Err(Error::InvalidChoiceSet("instrumental inequalities need at least two choices".into()));
    }
    Ok(())
}

/// `Σ_j max_k P(M1=i, M2=j | C=k)` for each `i`.
pub fn compact_check(b: &Behavior) -> Result<InequalityReport> {
    require_two_choices(b)?;
    let entries = (0..2)
        .map(|i| {
            let lhs = (0..2)
                .map(|j| b.columns().map(|(_, c)| c.get(i, j).clone()).max().expect("non-empty behavior"))
                .fold(Rational::zero(), |acc, x| acc + x);
            InequalityEntry::new(EntryIndex::Compact { i }, lhs)
        })
        .collect();
    Ok(InequalityReport { form: Form::Compact, entries })
}

/// `(i, j at k, j at l)` for the four pairwise lines.
const LINES: [(usize, usize, usize); 4] = [(0, 0, 1), (1, 0, 1), (0, 1, 0), (1, 1, 0)];

/// All four lines for every pair `k < l` of choices.
pub fn pairwise_check(b: &Behavior) -> Result<InequalityReport> {
    require_two_choices(b)?;
    let choices = b.choices();
    let mut entries = Vec::new();
    for (a, &k) in choices.iter().enumerate() {
        for &l in &choices[a + 1..] {
            for (n, &(i, jk, jl)) in LINES.iter().enumerate() {
                let lhs = b.get(i, jk, k)? + b.get(i, jl, l)?;
                entries.push(InequalityEntry::new(EntryIndex::Pairwise { line: n as u8 + 1, k, l }, lhs));
            }
        }
    }
    Ok(InequalityReport { form: Form::Pairwise, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::{deterministic_column, three_box_behavior, Column, ALL_CHOICES};
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn compact_form_on_three_box() {
        let report = compact_check(&three_box_behavior()).unwrap();
        assert_eq!(report.max_lhs(), rat(10, 9));
        assert_eq!(report.entry(EntryIndex::Compact { i: 0 }).unwrap().lhs, rat(10, 9));
        assert_eq!(report.entry(EntryIndex::Compact { i: 1 }).unwrap().lhs, rat(1, 3));
        assert!(report.violated());

        let restricted = compact_check(&three_box_behavior().restrict(&[1, 2]).unwrap()).unwrap();
        assert!(restricted.max_lhs() <= rat(1, 1));
        assert!(!restricted.violated());
    }

    #[test]
    fn pairwise_form_on_three_box() {
        let report = pairwise_check(&three_box_behavior()).unwrap();
        assert_eq!(report.entries.len(), 12);
        let witness = report.entry(EntryIndex::Pairwise { line: 1, k: 2, l: 3 }).unwrap();
        assert_eq!(witness.lhs, rat(10, 9));
        assert!(witness.violated);
        assert!(report.pair_violated(1, 3));
        assert!(report.pair_violated(2, 3));
        assert!(!report.pair_violated(1, 2));
    }

    #[test]
    fn choice_independent_point_mass_saturates() {
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let b = Behavior::constant(deterministic_column(i, j), &ALL_CHOICES).unwrap();
            let compact = compact_check(&b).unwrap();
            assert_eq!(compact.max_lhs(), rat(1, 1));
            assert!(!compact.violated());
            assert!(!pairwise_check(&b).unwrap().violated());
        }
    }

    #[test]
    fn single_choice_is_rejected() {
        let b = three_box_behavior().restrict(&[3]).unwrap();
        assert!(compact_check(&b).is_err());
        assert!(pairwise_check(&b).is_err());
    }

    #[test]
    fn renderings() {
        let report = pairwise_check(&three_box_behavior()).unwrap();
        let md = report.to_markdown();
        assert!(md.contains("| **line 1, kl=23** | **10/9** | 1/1 | **violated** |"), "{md}");
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["max_lhs"], "10/9");
        assert_eq!(json["entries"][0]["line"], 1);
        assert!(!report.to_json().contains('.'));
    }

    fn column() -> impl Strategy<Value = Column> {
        prop::collection::vec(0i64..=5, 4).prop_filter("nonzero", |w| w.iter().any(|&x| x > 0)).prop_map(|w| {
            let t: i64 = w.iter().sum();
            Column::from_fractions([(w[0], t), (w[1], t), (w[2], t), (w[3], t)]).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2_000))]

        #[test]
        fn forms_agree(cols in prop::collection::vec(column(), 2..=3)) {
            let b = Behavior::new(cols.into_iter().enumerate().map(|(n, c)| (n as Choice + 1, c))).unwrap();
            prop_assert_eq!(compact_check(&b).unwrap().violated(), pairwise_check(&b).unwrap().violated());
        }
    }
}
