//! Exact compatibility of a behavior with a causal diagram.
//!
//! With finitely many observed values, any latent variable can be replaced
//! by a distribution over deterministic response functions without changing
//! the observable statistics. Concretely, for a model with latent `Λ` the map
//!
//! ```text
//! λ  ↦  ( f_λ : c ↦ M1(c, λ),  g_λ : inputs ↦ M2(inputs, λ) )
//! ```
//!
//! sends each value of `Λ` to one *strategy* `(f, g)`; pushing `P(Λ)` forward
//! along it gives weights `w(f, g)` with
//! `P(i, j | k) = Σ w(f, g) [f(k) = i] [g(k, i) = j]`. Conversely every
//! mixture of strategies is a model with `Λ` ranging over the strategies. Any
//! private noise on `M1` or `M2` can be folded into `Λ` the same way.
//!
//! `g` reads only what the diagram lets `M2` see: nothing, `M1`, `C`, or
//! both. In the realist setting `f` is forced to `δ_{C,V}` and the strategy
//! records the position `V ∈ {1, 2, 3}` instead.
//!
//! Deciding compatibility is then linear feasibility in the weights, solved
//! exactly by [`crate::lp`].

use std::fmt::{self, Write as _};

use num_traits::Zero;
use serde_json::json;

use crate::behavior::{Behavior, Choice, Column, ALL_CHOICES};
use crate::dag::{DagVariant, Setting};
use crate::error::{Error, Result};
use crate::inequality::{pairwise_check, InequalityEntry};
use crate::lp::{is_farkas_certificate, solve_feasibility, LpOutcome};
use crate::rational::{format_rational, Rational};

/// Particle positions available to the realist response `M1 = δ_{C,V}`.
pub const POSITIONS: [u8; 3] = [1, 2, 3];

/// What `M2` may read besides the latent variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum M2Inputs {
    None,
    Outcome,
    Choice,
    ChoiceAndOutcome,
}

impl M2Inputs {
    pub fn of(variant: DagVariant) -> Self {
        match (variant.outcome_arrow, variant.parameter_arrow) {
            (false, false) => M2Inputs::None,
            (true, false) => M2Inputs::Outcome,
            (false, true) => M2Inputs::Choice,
            (true, true) => M2Inputs::ChoiceAndOutcome,
        }
    }

    fn table_len(self, choices: usize) -> usize {
        match self {
            M2Inputs::None => 1,
            M2Inputs::Outcome => 2,
            M2Inputs::Choice => choices,
            M2Inputs::ChoiceAndOutcome => 2 * choices,
        }
    }

    fn index(self, pos: usize, i: u8) -> usize {
        match self {
            M2Inputs::None => 0,
            M2Inputs::Outcome => usize::from(i),
            M2Inputs::Choice => pos,
            M2Inputs::ChoiceAndOutcome => 2 * pos + usize::from(i),
        }
    }
}

/// One deterministic assignment of response functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strategy {
    /// Realist strategies carry the particle position.
    pub position: Option<u8>,
    /// `M1` for each choice of the space, in choice order.
    pub m1: Vec<u8>,
    pub m2_inputs: M2Inputs,
    /// `M2` lookup table, see [`M2Inputs`].
    pub m2: Vec<u8>,
}

impl Strategy {
    /// `(M1, M2)` when the choice at position `pos` is made.
    pub fn respond(&self, pos: usize) -> (usize, usize) {
        let i = self.m1[pos];
        (usize::from(i), usize::from(self.m2_response(pos, i)))
    }

    /// `M2` given the choice position and `M1 = i`; inputs the diagram
    /// hides from `M2` are ignored.
    pub fn m2_response(&self, pos: usize, i: u8) -> u8 {
        self.m2[self.m2_inputs.index(pos, i)]
    }
}

fn bits(values: &[u8]) -> String {
    values.iter().map(|b| char::from(b'0' + b)).collect()
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some(v) => write!(f, "V={v} ")?,
            None => write!(f, "M1(C)={} ", bits(&self.m1))?,
        }
        match self.m2_inputs {
            M2Inputs::None => write!(f, "M2={}", bits(&self.m2)),
            M2Inputs::Outcome => write!(f, "M2(M1)={}", bits(&self.m2)),
            M2Inputs::Choice => write!(f, "M2(C)={}", bits(&self.m2)),
            M2Inputs::ChoiceAndOutcome => {
                let groups: Vec<String> = self.m2.chunks(2).map(bits).collect();
                write!(f, "M2(C,M1)={}", groups.join("|"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategySpace {
    pub variant: DagVariant,
    pub choices: Vec<Choice>,
    pub strategies: Vec<Strategy>,
}

impl StrategySpace {
    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }
}

/// All binary tables of the given length, in lexicographic order.
fn binary_tables(len: usize) -> Vec<Vec<u8>> {
    (0..1usize << len).map(|n| (0..len).map(|b| ((n >> (len - 1 - b)) & 1) as u8).collect()).collect()
}

fn check_choices(choices: &[Choice]) -> Result<()> {
    if choices.is_empty() {
        return Err(Error::InvalidChoiceSet("strategy space needs at least one choice".into()));
    }
    if let Some(&k) = choices.iter().find(|k| !ALL_CHOICES.contains(k)) {
        return Err(Error::InvalidChoice(k));
    }
    if choices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidChoiceSet(format!("choices {choices:?} must be strictly increasing")));
    }
    Ok(())
}

/// Complete, duplicate-free list of strategies. Order: `M1` response (pure:
/// lexicographic tables; realist: position 1, 2, 3), then `M2` table.
pub fn enumerate_strategies(variant: DagVariant, choices: &[Choice]) -> Result<StrategySpace> {
    check_choices(choices)?;
    let m1_options: Vec<(Option<u8>, Vec<u8>)> = match variant.setting {
        Setting::Pure => binary_tables(choices.len()).into_iter().map(|t| (None, t)).collect(),
        Setting::Realist => {
            POSITIONS.iter().map(|&v| (Some(v), choices.iter().map(|&k| u8::from(k == v)).collect())).collect()
        }
    };
    let m2_inputs = M2Inputs::of(variant);
    let m2_options = binary_tables(m2_inputs.table_len(choices.len()));
    let strategies = m1_options
        .iter()
        .flat_map(|(position, m1)| {
            m2_options.iter().map(move |m2| Strategy { position: *position, m1: m1.clone(), m2_inputs, m2: m2.clone() })
        })
        .collect();
    Ok(StrategySpace { variant, choices: choices.to_vec(), strategies })
}

/// Mixture of strategies with positive weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub choices: Vec<Choice>,
    pub components: Vec<(Strategy, Rational)>,
}

impl Certificate {
    /// The behavior this mixture produces.
    pub fn reconstruct(&self) -> Result<Behavior> {
        let columns = self
            .choices
            .iter()
            .enumerate()
            .map(|(pos, &k)| {
                let mut entries: [[Rational; 2]; 2] = Default::default();
                for (strategy, weight) in &self.components {
                    let (i, j) = strategy.respond(pos);
                    entries[i][j] += weight;
                }
                Ok((k, Column::new(entries)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Behavior::new(columns)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityWitness {
    /// First violated instrumental inequality, when the diagram lacks `C→M2`.
    pub inequality: Option<InequalityEntry>,
    /// Farkas vector over the LP rows (verified before it is returned).
    pub farkas: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub variant: DagVariant,
    pub choices: Vec<Choice>,
    pub feasible: bool,
    pub strategy_count: usize,
    pub certificate: Option<Certificate>,
    pub witness: Option<InfeasibilityWitness>,
}

impl FeasibilityResult {
    pub fn summary(&self) -> String {
        if let Some(cert) = &self.certificate {
            return format!("feasible ({} of {} strategies)", cert.components.len(), self.strategy_count);
        }
        match self.witness.as_ref().and_then(|w| w.inequality.as_ref()) {
            Some(e) => format!("infeasible (instrumental {}: {} > 1)", e.index, format_rational(&e.lhs)),
            None => "infeasible (exact LP, Farkas certificate)".to_string(),
        }
    }

    /// Re-checks the verdict against `b` from scratch: the certificate must
    /// reproduce `b`, or the Farkas vector must refute the rebuilt system.
    pub fn verify(&self, b: &Behavior) -> Result<bool> {
        if b.choices() != self.choices {
            return Ok(false);
        }
        match (&self.certificate, &self.witness) {
            (Some(cert), None) => Ok(self.feasible && cert.reconstruct()? == *b),
            (None, Some(witness)) => {
                let space = enumerate_strategies(self.variant, &self.choices)?;
                let (rows, rhs) = constraint_system(&space, b)?;
                Ok(!self.feasible && is_farkas_certificate(&rows, &rhs, &witness.farkas))
            }
            _ => Ok(false),
        }
    }

    fn to_value(&self) -> serde_json::Value {
        let mut obj = json!({
            "variant": self.variant.to_string(),
            "choices": self.choices,
            "feasible": self.feasible,
            "strategies": self.strategy_count,
            "summary": self.summary(),
        });
        if let Some(cert) = &self.certificate {
            obj["certificate"] = cert
                .components
                .iter()
                .map(|(s, w)| json!({ "strategy": s.to_string(), "weight": format_rational(w) }))
                .collect();
        }
        if let Some(w) = &self.witness {
            obj["witness"] = json!({
                "inequality": w.inequality.as_ref().map(|e| json!({
                    "entry": e.index.to_string(),
                    "lhs": format_rational(&e.lhs),
                    "bound": format_rational(&e.bound),
                })),
                "farkas": w.farkas.iter().map(format_rational).collect::<Vec<_>>(),
            });
        }
        obj
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("json values serialize")
    }

    pub fn to_markdown(&self) -> String {
        let mut out =
            format!("Variant `{}` on C={}: **{}**\n", self.variant, choice_list(&self.choices), self.summary());
        if let Some(cert) = &self.certificate {
            out.push_str("\n| strategy | weight |\n|---|---|\n");
            for (s, w) in &cert.components {
                let _ = writeln!(out, "| {s} | {} |", format_rational(w));
            }
        }
        out
    }
}

fn choice_list(choices: &[Choice]) -> String {
    choices.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

/// LP rows: one per `(k, i, j)` plus normalisation of the weights.
fn constraint_system(space: &StrategySpace, b: &Behavior) -> Result<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let one = Rational::from_integer(1.into());
    let mut rows = Vec::with_capacity(4 * space.choices.len() + 1);
    let mut rhs = Vec::with_capacity(rows.capacity());
    for (pos, &k) in space.choices.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                rows.push(
                    space
                        .strategies
                        .iter()
                        .map(|s| if s.respond(pos) == (i, j) { one.clone() } else { Rational::zero() })
                        .collect(),
                );
                rhs.push(b.get(i, j, k)?.clone());
            }
        }
    }
    rows.push(vec![one.clone(); space.len()]);
    rhs.push(one);
    Ok((rows, rhs))
}

/// Whether some model on `variant`'s diagram reproduces `b` exactly, over
/// the choices `b` carries.
pub fn decide(b: &Behavior, variant: DagVariant) -> Result<FeasibilityResult> {
    let choices = b.choices();
    let space = enumerate_strategies(variant, &choices)?;
    let (rows, rhs) = constraint_system(&space, b)?;
    let base = FeasibilityResult {
        variant,
        choices: choices.clone(),
        feasible: false,
        strategy_count: space.len(),
        certificate: None,
        witness: None,
    };
    match solve_feasibility(&rows, &rhs)? {
        LpOutcome::Feasible(weights) => {
            let components = space.strategies.into_iter().zip(weights).filter(|(_, w)| !w.is_zero()).collect();
            let certificate = Certificate { choices, components };
            assert_eq!(&certificate.reconstruct()?, b, "certificate must reproduce the behavior");
            Ok(FeasibilityResult { feasible: true, certificate: Some(certificate), ..base })
        }
        LpOutcome::Infeasible(farkas) => {
            assert!(is_farkas_certificate(&rows, &rhs, &farkas), "Farkas vector must certify infeasibility");
            let inequality = if !variant.parameter_arrow && choices.len() >= 2 {
                pairwise_check(b)?.violations().next().cloned()
            } else {
                None
            };
            Ok(FeasibilityResult { witness: Some(InfeasibilityWitness { inequality, farkas }), ..base })
        }
    }
}

/// Choice scopes of the summary matrix.
pub const SCOPES: [&[Choice]; 2] = [&[1, 2], &[1, 2, 3]];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Figure4Cell {
    pub result: FeasibilityResult,
    /// Feasible, and no feasible variant of the same setting uses a strict
    /// subset of its red arrows.
    pub minimal: bool,
    /// Label of the summary case this cell corresponds to, if any.
    pub case: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Figure4Row {
    pub variant: DagVariant,
    pub cells: Vec<Figure4Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Figure4Report {
    pub scopes: Vec<Vec<Choice>>,
    pub rows: Vec<Figure4Row>,
}

impl Figure4Report {
    pub fn cell(&self, variant: DagVariant, scope: &[Choice]) -> Option<&Figure4Cell> {
        let col = self.scopes.iter().position(|s| s == scope)?;
        self.rows.iter().find(|r| r.variant == variant).map(|r| &r.cells[col])
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let cells: Vec<serde_json::Value> = row
                    .cells
                    .iter()
                    .map(|cell| {
                        let mut v = cell.result.to_value();
                        v["minimal"] = json!(cell.minimal);
                        v["case"] = json!(cell.case);
                        v
                    })
                    .collect();
                json!({ "variant": row.variant.to_string(), "cells": cells })
            })
            .collect();
        let report = json!({ "scopes": self.scopes, "rows": rows });
        serde_json::to_string_pretty(&report).expect("json values serialize")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| variant |");
        for scope in &self.scopes {
            let _ = write!(out, " C={} |", choice_list(scope));
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(self.scopes.len()));
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "| {} |", row.variant);
            for cell in &row.cells {
                let mut text = cell.result.summary();
                if cell.minimal {
                    text = format!("**{text}** minimal");
                }
                if let Some(case) = cell.case {
                    let _ = write!(text, " ({case})");
                }
                let _ = write!(out, " {text} |");
            }
            out.push('\n');
        }
        out
    }
}

fn summary_case(variant: DagVariant, scope: &[Choice]) -> Option<&'static str> {
    let two = scope == SCOPES[0];
    match (variant.setting, variant.outcome_arrow, variant.parameter_arrow, two) {
        (Setting::Pure, false, false, true) => Some("a"),
        (Setting::Realist, true, false, true) => Some("b1"),
        (Setting::Realist, false, true, true) => Some("b2"),
        (Setting::Pure, false, true, false) => Some("c"),
        (Setting::Realist, false, true, false) => Some("d"),
        _ => None,
    }
}

fn assemble(scopes: Vec<Vec<Choice>>, results: Vec<FeasibilityResult>) -> Figure4Report {
    let variants = DagVariant::all();
    let at = |v: usize, s: usize| &results[v * scopes.len() + s];
    let rows = variants
        .iter()
        .enumerate()
        .map(|(vi, &variant)| {
            let cells = (0..scopes.len())
                .map(|si| {
                    let result = at(vi, si).clone();
                    let dominated = variants
                        .iter()
                        .enumerate()
                        .any(|(wi, w)| wi != vi && w.arrows_subset_of(&variant) && at(wi, si).feasible);
                    Figure4Cell {
                        minimal: result.feasible && !dominated,
                        case: summary_case(variant, &scopes[si]),
                        result,
                    }
                })
                .collect();
            Figure4Row { variant, cells }
        })
        .collect();
    Figure4Report { scopes, rows }
}

fn report_inputs(b: &Behavior) -> Result<Vec<(DagVariant, Behavior)>> {
    let restricted = SCOPES.iter().map(|s| b.restrict(s)).collect::<Result<Vec<_>>>()?;
    Ok(DagVariant::all().into_iter().flat_map(|v| restricted.iter().map(move |r| (v, r.clone()))).collect())
}

/// All eight variants against the `{1,2}` and `{1,2,3}` restrictions of
/// `b`. Cells are solved on separate threads and merged in fixed order.
pub fn figure4_report(b: &Behavior) -> Result<Figure4Report> {
    let inputs = report_inputs(b)?;
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> =
            inputs.iter().map(|(variant, behavior)| scope.spawn(move || decide(behavior, *variant))).collect();
        handles.into_iter().map(|h| h.join().expect("feasibility worker panicked")).collect::<Result<Vec<_>>>()
    })?;
    Ok(assemble(SCOPES.iter().map(|s| s.to_vec()).collect(), results))
}

/// Single-threaded [`figure4_report`].
pub fn figure4_report_sequential(b: &Behavior) -> Result<Figure4Report> {
    let results =
        report_inputs(b)?.iter().map(|(variant, behavior)| decide(behavior, *variant)).collect::<Result<Vec<_>>>()?;
    Ok(assemble(SCOPES.iter().map(|s| s.to_vec()).collect(), results))
}
