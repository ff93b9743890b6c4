//! Structural causal models over the experiment's diagrams.
//!
//! Exogenous variables have finite supports and exact weights and are
//! jointly independent. Each endogenous node has one structural equation,
//! stored as a total lookup table from input tuples to values. Tables are
//! usually compiled from a small [`Expr`] vocabulary: Kronecker delta,
//! products, sums, `1 - x` and per-choice branches.
//!
//! The choice `C` is a free input swept over its support; it is never
//! weighted. Induced statistics come from full enumeration of the exogenous
//! product space.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::behavior::{Behavior, Choice, Column, ALL_CHOICES};
use crate::dag::{self, CausalDag, DagVariant, NodeKind, Setting};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, sum, Rational};

pub type Value = i64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExogenousVar {
    name: String,
    support: Vec<Value>,
    weights: Vec<Rational>,
}

impl ExogenousVar {
    pub fn new(name: &str, support: Vec<Value>, weights: Vec<Rational>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidScm(format!("exogenous {name}: {msg}")));
        if support.is_empty() || support.len() != weights.len() {
            return bad("support and weights must be non-empty and of equal length".into());
        }
        if support.iter().collect::<BTreeSet<_>>().len() != support.len() {
            return bad("repeated support value".into());
        }
        if weights.iter().any(|w| *w < Rational::zero()) {
            return bad("negative weight".into());
        }
        let total = sum(&weights);
        if !total.is_one() {
            return bad(format!("weights sum to {}", format_rational(&total)));
        }
        Ok(Self { name: name.into(), support, weights })
    }

    /// `Ber(p)` on `{0, 1}`.
    pub fn bernoulli(name: &str, p: Rational) -> Result<Self> {
        Self::new(name, vec![0, 1], vec![Rational::one() - &p, p])
    }

    pub fn uniform(name: &str, support: Vec<Value>) -> Result<Self> {
        let n = support.len() as i64;
        Self::new(name, support, vec![rat(1, n.max(1)); n as usize])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> &[Value] {
        &self.support
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

/// Expression vocabulary for structural equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Const(Value),
    /// Kronecker delta `δ_{a,b}`.
    Delta(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    /// `1 - x`
    OneMinus(Box<Expr>),
    /// Branch on the value of `C`.
    ByChoice(Vec<(Vec<Value>, Expr)>),
}

pub fn var(name: &str) -> Expr {
    Expr::Var(name.into())
}

pub fn delta(a: Expr, b: Expr) -> Expr {
    Expr::Delta(Box::new(a), Box::new(b))
}

pub fn one_minus(a: Expr) -> Expr {
    Expr::OneMinus(Box::new(a))
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Expr {
    fn eval(&self, lookup: &impl Fn(&str) -> Option<Value>) -> Result<Value> {
        Ok(match self {
            Expr::Var(name) => lookup(name).ok_or_else(|| Error::InvalidScm(format!("{name} is not an input")))?,
            Expr::Const(c) => *c,
            Expr::Delta(a, b) => Value::from(a.eval(lookup)? == b.eval(lookup)?),
            Expr::Mul(a, b) => a.eval(lookup)? * b.eval(lookup)?,
            Expr::Add(a, b) => a.eval(lookup)? + b.eval(lookup)?,
            Expr::OneMinus(a) => 1 - a.eval(lookup)?,
            Expr::ByChoice(branches) => {
                let c = lookup(dag::C).ok_or_else(|| Error::InvalidScm("per-choice branch needs C as input".into()))?;
                let (_, branch) = branches
                    .iter()
                    .find(|(ks, _)| ks.contains(&c))
                    .ok_or_else(|| Error::InvalidScm(format!("no branch for C={c}")))?;
                branch.eval(lookup)?
            }
        })
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Add(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(name) => f.write_str(name),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Delta(a, b) => write!(f, "δ({a},{b})"),
            Expr::Mul(a, b) => {
                a.fmt_atom(f)?;
                f.write_str("·")?;
                b.fmt_atom(f)
            }
            Expr::Add(a, b) => write!(f, "{a} + {b}"),
            Expr::OneMinus(a) => write!(f, "(1-{a})"),
            Expr::ByChoice(branches) => {
                let parts: Vec<String> = branches
                    .iter()
                    .map(|(ks, e)| {
                        let ks: Vec<String> = ks.iter().map(Value::to_string).collect();
                        format!("{e} for C={}", ks.join(","))
                    })
                    .collect();
                write!(f, "{{ {} }}", parts.join("; "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralEquation {
    target: String,
    inputs: Vec<String>,
    table: BTreeMap<Vec<Value>, Value>,
    source: Option<String>,
}

impl StructuralEquation {
    pub fn from_table(target: &str, inputs: Vec<String>, table: BTreeMap<Vec<Value>, Value>) -> Self {
        Self { target: target.into(), inputs, table, source: None }
    }

    /// Tabulates `expr` over the product of the input domains.
    pub fn compile(target: &str, inputs: &[&str], expr: &Expr, domains: &BTreeMap<String, Vec<Value>>) -> Result<Self> {
        let input_domains = inputs
            .iter()
            .map(|name| {
                domains
                    .get(*name)
                    .cloned()
                    .ok_or_else(|| Error::InvalidScm(format!("equation for {target}: no domain for input {name}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = BTreeMap::new();
        for tuple in cartesian(&input_domains) {
            let lookup = |name: &str| inputs.iter().position(|n| *n == name).map(|p| tuple[p]);
            let value = expr.eval(&lookup).map_err(|e| Error::InvalidScm(format!("equation for {target}: {e}")))?;
            table.insert(tuple, value);
        }
        Ok(Self {
            target: target.into(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            table,
            source: Some(format!("{target}({}) := {expr}", inputs.join(","))),
        })
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn table(&self) -> &BTreeMap<Vec<Value>, Value> {
        &self.table
    }

    /// Human-readable form when compiled from an expression.
    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn evaluate(&self, inputs: &[Value]) -> Result<Value> {
        self.table
            .get(inputs)
            .copied()
            .ok_or_else(|| Error::InvalidScm(format!("equation for {} undefined at inputs {inputs:?}", self.target)))
    }

    fn outputs(&self) -> Vec<Value> {
        self.table.values().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }
}

fn cartesian(domains: &[Vec<Value>]) -> Vec<Vec<Value>> {
    domains.iter().fold(vec![Vec::new()], |acc, domain| {
        acc.into_iter()
            .flat_map(|prefix| {
                domain.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(*v);
                    next
                })
            })
            .collect()
    })
}

/// Named structural causal models from the sufficiency constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogCase {
    /// Pure diagram, no red arrows: confounding alone, `C = 1, 2` only.
    A,
    /// Realist diagram with outcome dependence, `C = 1, 2` only.
    B1,
    /// Pure diagram with parameter dependence, all choices.
    C,
    /// Realist diagram with parameter dependence, all choices.
    D,
}

impl CatalogCase {
    pub const ALL: [CatalogCase; 4] = [CatalogCase::A, CatalogCase::B1, CatalogCase::C, CatalogCase::D];

    pub fn variant(self) -> DagVariant {
        match self {
            CatalogCase::A => DagVariant::new(Setting::Pure, false, false),
            CatalogCase::B1 => DagVariant::new(Setting::Realist, true, false),
            CatalogCase::C => DagVariant::new(Setting::Pure, false, true),
            CatalogCase::D => DagVariant::new(Setting::Realist, false, true),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CatalogCase::A => "a",
            CatalogCase::B1 => "b1",
            CatalogCase::C => "c",
            CatalogCase::D => "d",
        }
    }
}

impl fmt::Display for CatalogCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CatalogCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CatalogCase::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| Error::Parse(format!("unknown catalog case {s:?} (expected a, b1, c or d)")))
    }
}

/// Exact joint distribution over the diagram's nodes with `C` uniform over
/// the swept choices. Used to check conditional independences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeDistribution {
    names: Vec<String>,
    probs: BTreeMap<Vec<Value>, Rational>,
}

impl NodeDistribution {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn marginal(&self, keep: &[usize]) -> BTreeMap<Vec<Value>, Rational> {
        let mut out: BTreeMap<Vec<Value>, Rational> = BTreeMap::new();
        for (assignment, p) in &self.probs {
            let key = keep.iter().map(|&i| assignment[i]).collect();
            *out.entry(key).or_insert_with(Rational::zero) += p;
        }
        out
    }

    /// Marginal over `nodes`, keyed by their values in the given order.
    pub fn marginal_over(&self, nodes: &[&str]) -> Result<BTreeMap<Vec<Value>, Rational>> {
        let keep = nodes
            .iter()
            .map(|n| self.names.iter().position(|m| m == n).ok_or_else(|| Error::UnknownNode(n.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.marginal(&keep))
    }

    /// Exact test of `X ⊥ Y | Z`: `P(x,y,z) P(z) = P(x,z) P(y,z)` for every
    /// value combination in the support.
    pub fn independent(&self, x: &str, y: &str, given: &[&str]) -> Result<bool> {
        let idx = |n: &str| self.names.iter().position(|m| m == n).ok_or_else(|| Error::UnknownNode(n.to_string()));
        let (xi, yi) = (idx(x)?, idx(y)?);
        let zi = given.iter().map(|n| idx(n)).collect::<Result<Vec<_>>>()?;
        let with = |extra: &[usize]| [extra, &zi[..]].concat();
        let pxyz = self.marginal(&with(&[xi, yi]));
        let pxz = self.marginal(&with(&[xi]));
        let pyz = self.marginal(&with(&[yi]));
        let pz = self.marginal(&zi);
        let zero = Rational::zero();
        for (xz, p_xz) in &pxz {
            for (yz, p_yz) in &pyz {
                if xz[1..] != yz[1..] {
                    continue;
                }
                let z = &xz[1..];
                let key: Vec<Value> = [&[xz[0], yz[0]][..], z].concat();
                let joint = pxyz.get(&key).unwrap_or(&zero);
                if joint * &pz[z] != p_xz * p_yz {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scm {
    variant: DagVariant,
    choice_support: Vec<Value>,
    exogenous: Vec<ExogenousVar>,
    /// Topological order of the diagram.
    equations: Vec<StructuralEquation>,
}

/// An equation still in expression form, for [`Scm::compile`].
pub struct EquationSpec<'a> {
    pub target: &'a str,
    pub inputs: &'a [&'a str],
    pub expr: Expr,
}

impl Scm {
    /// Validates a model against its diagram.
    ///
    /// Latent roots of the diagram (`Λ`) must be exogenous; every other node
    /// except `C` needs exactly one equation whose inputs are diagram parents
    /// or private noise variables. A noise variable feeding two equations
    /// would be a hidden common cause and is rejected. In the realist setting
    /// `M1` must be `δ_{C,V}`.
    pub fn new(
        variant: DagVariant,
        choice_support: Vec<Value>,
        exogenous: Vec<ExogenousVar>,
        equations: Vec<StructuralEquation>,
    ) -> Result<Self> {
        let graph = variant.dag();
        let bad = |msg: String| Err(Error::InvalidScm(msg));
        if choice_support.is_empty()
            || choice_support.iter().any(|c| !ALL_CHOICES.iter().any(|k| Value::from(*k) == *c))
        {
            return bad(format!("choice support {choice_support:?} must be a non-empty subset of 1,2,3"));
        }

        let mut domains: BTreeMap<String, Vec<Value>> = BTreeMap::new();
        domains.insert(dag::C.into(), choice_support.clone());
        for x in &exogenous {
            if graph.contains(x.name()) {
                let is_latent_root =
                    graph.kind(x.name())? == NodeKind::Latent && graph.parents_of(x.name())?.is_empty();
                if !is_latent_root {
                    return bad(format!("{} is a diagram node but not a latent root", x.name()));
                }
            }
            if domains.insert(x.name().into(), x.support().to_vec()).is_some() {
                return bad(format!("{} declared twice", x.name()));
            }
        }

        let mut by_target: BTreeMap<&str, &StructuralEquation> = BTreeMap::new();
        for eq in &equations {
            if !graph.contains(eq.target()) || eq.target() == dag::C || domains.contains_key(eq.target()) {
                return bad(format!("{} cannot carry a structural equation", eq.target()));
            }
            if by_target.insert(eq.target(), eq).is_some() {
                return bad(format!("two equations for {}", eq.target()));
            }
        }

        let mut noise_users: BTreeMap<&str, &str> = BTreeMap::new();
        let mut ordered = Vec::with_capacity(equations.len());
        for node in graph.topological_order() {
            if node == dag::C || domains.contains_key(node) && !by_target.contains_key(node) {
                continue;
            }
            let eq = match by_target.get(node) {
                Some(eq) => *eq,
                None => return bad(format!("no structural equation for {node}")),
            };
            let parents = graph.parents_of(node)?;
            for input in eq.inputs() {
                let is_parent = parents.contains(&input.as_str());
                let is_noise = !graph.contains(input) && exogenous.iter().any(|x| x.name() == input);
                if is_noise {
                    if let Some(other) = noise_users.insert(input, eq.target()) {
                        return bad(format!("noise {input} is shared by {other} and {node}"));
                    }
                } else if !is_parent {
                    return bad(format!("{input} is not a parent of {node}"));
                }
            }
            let input_domains = eq.inputs().iter().map(|i| domains[i].clone()).collect::<Vec<_>>();
            for tuple in cartesian(&input_domains) {
                eq.evaluate(&tuple)?;
            }
            let outputs = eq.outputs();
            if (node == dag::M1 || node == dag::M2) && outputs.iter().any(|v| *v != 0 && *v != 1) {
                return bad(format!("{node} must be binary, takes values {outputs:?}"));
            }
            domains.insert(node.to_string(), outputs);
            ordered.push(eq.clone());
        }

        let scm = Self { variant, choice_support, exogenous, equations: ordered };
        if variant.setting == Setting::Realist {
            scm.check_realism()?;
        }
        Ok(scm)
    }

    /// Compiles expression-form equations; domains are derived in
    /// topological order of the diagram.
    pub fn compile(
        variant: DagVariant,
        choice_support: Vec<Value>,
        exogenous: Vec<ExogenousVar>,
        specs: Vec<EquationSpec<'_>>,
    ) -> Result<Self> {
        let graph = variant.dag();
        let mut domains: BTreeMap<String, Vec<Value>> = BTreeMap::new();
        domains.insert(dag::C.into(), choice_support.clone());
        for x in &exogenous {
            domains.insert(x.name().into(), x.support().to_vec());
        }
        let mut equations = Vec::with_capacity(specs.len());
        for node in graph.topological_order() {
            for spec in specs.iter().filter(|s| s.target == node) {
                let eq = StructuralEquation::compile(spec.target, spec.inputs, &spec.expr, &domains)?;
                domains.insert(node.to_string(), eq.outputs());
                equations.push(eq);
            }
        }
        if let Some(stray) = specs.iter().find(|s| !graph.contains(s.target)) {
            return Err(Error::InvalidScm(format!("{} is not a node of the {variant} diagram", stray.target)));
        }
        Self::new(variant, choice_support, exogenous, equations)
    }

    fn check_realism(&self) -> Result<()> {
        let eq = self.equation(dag::M1).ok_or_else(|| Error::InvalidScm("no equation for M1".into()))?;
        let pos = |n: &str| eq.inputs().iter().position(|i| i == n);
        let (Some(c), Some(v)) = (pos(dag::C), pos(dag::V)) else {
            return Err(Error::InvalidScm("realist M1 must read C and V".into()));
        };
        if eq.table().iter().any(|(tuple, out)| *out != Value::from(tuple[c] == tuple[v])) {
            return Err(Error::InvalidScm("realist M1 must equal δ(C,V)".into()));
        }
        Ok(())
    }

    pub fn variant(&self) -> DagVariant {
        self.variant
    }

    pub fn dag(&self) -> CausalDag {
        self.variant.dag()
    }

    pub fn choice_support(&self) -> &[Value] {
        &self.choice_support
    }

    pub fn exogenous(&self) -> &[ExogenousVar] {
        &self.exogenous
    }

    pub fn equations(&self) -> &[StructuralEquation] {
        &self.equations
    }

    pub fn equation(&self, target: &str) -> Option<&StructuralEquation> {
        self.equations.iter().find(|e| e.target() == target)
    }

    /// Calls `visit(c, values, weight)` for every exogenous assignment, where
    /// `values` maps every variable name to its value.
    fn enumerate(
        &self,
        c: Value,
        mut visit: impl FnMut(&BTreeMap<&str, Value>, &Rational) -> Result<()>,
    ) -> Result<()> {
        let positions: Vec<Vec<Value>> =
            self.exogenous.iter().map(|x| (0..x.support().len() as Value).collect()).collect();
        for picks in cartesian(&positions) {
            let mut values: BTreeMap<&str, Value> = BTreeMap::new();
            values.insert(dag::C, c);
            let mut weight = Rational::one();
            for (x, &pick) in self.exogenous.iter().zip(&picks) {
                values.insert(x.name(), x.support()[pick as usize]);
                weight *= &x.weights()[pick as usize];
            }
            if weight.is_zero() {
                continue;
            }
            for eq in &self.equations {
                let args: Vec<Value> = eq.inputs().iter().map(|i| values[i.as_str()]).collect();
                values.insert(eq.target(), eq.evaluate(&args)?);
            }
            visit(&values, &weight)?;
        }
        Ok(())
    }

    fn check_choices(&self, choices: &[Choice]) -> Result<()> {
        if choices.is_empty() {
            return Err(Error::InvalidChoiceSet("no choices to evaluate".into()));
        }
        if let Some(&k) = choices.iter().find(|k| !self.choice_support.contains(&Value::from(**k))) {
            return Err(Error::InvalidChoice(k));
        }
        Ok(())
    }

    /// Behavior obtained by sweeping `C` over `choices`.
    pub fn induced_behavior(&self, choices: &[Choice]) -> Result<Behavior> {
        self.check_choices(choices)?;
        let columns = choices
            .iter()
            .map(|&k| {
                let mut entries: [[Rational; 2]; 2] = Default::default();
                self.enumerate(Value::from(k), |values, weight| {
                    let (i, j) = (values[dag::M1] as usize, values[dag::M2] as usize);
                    entries[i][j] += weight;
                    Ok(())
                })?;
                Ok((k, Column::new(entries)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Behavior::new(columns)
    }

    /// Joint over the diagram's nodes with `C` uniform on `choices`.
    pub fn node_distribution(&self, choices: &[Choice]) -> Result<NodeDistribution> {
        self.check_choices(choices)?;
        let graph = self.dag();
        let names: Vec<String> = graph.nodes().iter().map(|n| n.name.clone()).collect();
        let choice_weight = rat(1, choices.len() as i64);
        let mut probs: BTreeMap<Vec<Value>, Rational> = BTreeMap::new();
        for &k in choices {
            self.enumerate(Value::from(k), |values, weight| {
                let key = names.iter().map(|n| values[n.as_str()]).collect();
                *probs.entry(key).or_insert_with(Rational::zero) += weight * &choice_weight;
                Ok(())
            })?;
        }
        Ok(NodeDistribution { names, probs })
    }

    /// `P(M1 = i | M2 = 1, C = k)` of the induced behavior.
    pub fn postselected_conditional(&self, k: Choice, i: usize) -> Result<Rational> {
        if i > 1 {
            return Err(Error::InvalidOutcome(i));
        }
        let column = self.induced_behavior(&[k])?.column(k)?.clone();
        let success = column.m2_marginal();
        if success.is_zero() {
            return Err(Error::UndefinedConditional(k));
        }
        Ok(column.get(i, 1) / success)
    }

    pub fn to_json(&self) -> String {
        let wire = ScmJson {
            variant: self.variant.to_string(),
            choices: self.choice_support.clone(),
            exogenous: self
                .exogenous
                .iter()
                .map(|x| ExogenousJson {
                    name: x.name.clone(),
                    support: x.support.clone(),
                    weights: x.weights.iter().map(format_rational).collect(),
                })
                .collect(),
            equations: self
                .equations
                .iter()
                .map(|e| EquationJson {
                    target: e.target.clone(),
                    inputs: e.inputs.clone(),
                    expr: e.source.clone(),
                    table: e.table.iter().map(|(k, v)| TableRow { inputs: k.clone(), value: *v }).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: ScmJson = serde_json::from_str(text)?;
        let variant: DagVariant = wire.variant.parse()?;
        let exogenous = wire
            .exogenous
            .into_iter()
            .map(|x| {
                let weights = x.weights.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>>>()?;
                ExogenousVar::new(&x.name, x.support, weights)
            })
            .collect::<Result<Vec<_>>>()?;
        let equations = wire
            .equations
            .into_iter()
            .map(|e| {
                let mut table = BTreeMap::new();
                for row in e.table {
                    if row.inputs.len() != e.inputs.len() {
                        return Err(Error::InvalidScm(format!("equation for {}: row arity mismatch", e.target)));
                    }
                    if table.insert(row.inputs, row.value).is_some() {
                        return Err(Error::InvalidScm(format!("equation for {}: duplicate row", e.target)));
                    }
                }
                let mut eq = StructuralEquation::from_table(&e.target, e.inputs, table);
                eq.source = e.expr;
                Ok(eq)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(variant, wire.choices, exogenous, equations)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScmJson {
    variant: String,
    choices: Vec<Value>,
    exogenous: Vec<ExogenousJson>,
    equations: Vec<EquationJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExogenousJson {
    name: String,
    support: Vec<Value>,
    weights: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationJson {
    target: String,
    inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expr: Option<String>,
    table: Vec<TableRow>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRow {
    inputs: Vec<Value>,
    value: Value,
}

const NOISE: &str = "N";

/// `M2` for the parameter-dependence models:
/// `δ(C,Λ)·N` for `C = 1, 2` and `(1-δ(C,Λ))·(1-N) + δ(C,Λ)·N` for `C = 3`.
fn parameter_dependent_m2() -> Expr {
    let found = || delta(var(dag::C), var(dag::LAMBDA));
    Expr::ByChoice(vec![
        (vec![1, 2], found() * var(NOISE)),
        (vec![3], one_minus(found()) * one_minus(var(NOISE)) + found() * var(NOISE)),
    ])
}

/// Sufficiency constructions for the summary cases.
pub fn catalog(case: CatalogCase) -> Scm {
    let third = || rat(1, 3);
    let noise = || ExogenousVar::bernoulli(NOISE, third()).expect("valid weights");
    let uniform_lambda = || ExogenousVar::uniform(dag::LAMBDA, vec![1, 2, 3]).expect("valid weights");
    let choices = ALL_CHOICES.iter().map(|&k| Value::from(k)).collect::<Vec<_>>();
    let (exogenous, specs) = match case {
        CatalogCase::A => (
            vec![ExogenousVar::bernoulli(dag::LAMBDA, third()).expect("valid weights"), noise()],
            vec![
                EquationSpec { target: dag::M1, inputs: &[dag::C, dag::LAMBDA], expr: var(dag::LAMBDA) },
                EquationSpec { target: dag::M2, inputs: &[dag::LAMBDA, NOISE], expr: var(dag::LAMBDA) * var(NOISE) },
            ],
        ),
        CatalogCase::B1 => (
            vec![uniform_lambda(), noise()],
            vec![
                EquationSpec { target: dag::V, inputs: &[dag::LAMBDA], expr: var(dag::LAMBDA) },
                EquationSpec { target: dag::M1, inputs: &[dag::C, dag::V], expr: delta(var(dag::C), var(dag::V)) },
                // Λ is part of the declared signature but unused on the right-hand side
                EquationSpec {
                    target: dag::M2,
                    inputs: &[dag::M1, dag::LAMBDA, NOISE],
                    expr: var(dag::M1) * var(NOISE),
                },
            ],
        ),
        CatalogCase::C => (
            vec![uniform_lambda(), noise()],
            vec![
                EquationSpec {
                    target: dag::M1,
                    inputs: &[dag::C, dag::LAMBDA],
                    expr: delta(var(dag::C), var(dag::LAMBDA)),
                },
                EquationSpec { target: dag::M2, inputs: &[dag::C, dag::LAMBDA, NOISE], expr: parameter_dependent_m2() },
            ],
        ),
        CatalogCase::D => (
            vec![uniform_lambda(), noise()],
            vec![
                EquationSpec { target: dag::V, inputs: &[dag::LAMBDA], expr: var(dag::LAMBDA) },
                EquationSpec { target: dag::M1, inputs: &[dag::C, dag::V], expr: delta(var(dag::C), var(dag::V)) },
                EquationSpec { target: dag::M2, inputs: &[dag::C, dag::LAMBDA, NOISE], expr: parameter_dependent_m2() },
            ],
        ),
    };
    Scm::compile(case.variant(), choices, exogenous, specs).expect("catalog models are valid")
}
