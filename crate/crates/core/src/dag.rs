//! Causal diagrams for the experiment and d-separation queries.
//!
//! Two settings are modelled. The *pure* diagram has base arrows
//! `C→M1, Λ→M1, Λ→M2`; the *realist* diagram adds the particle position `V`
//! with `C→M1, V→M1, Λ→V, Λ→M2`. On top of either, the outcome-dependence
//! arrow `M1→M2` and the parameter-dependence arrow `C→M2` may be switched on,
//! giving eight variants. `V→M2` is never added: it can be absorbed into
//! `Λ→M2`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const C: &str = "C";
pub const M1: &str = "M1";
pub const M2: &str = "M2";
pub const LAMBDA: &str = "Λ";
pub const V: &str = "V";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Pure,
    Realist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DagVariant {
    pub setting: Setting,
    /// `M1 → M2`
    pub outcome_arrow: bool,
    /// `C → M2`
    pub parameter_arrow: bool,
}

impl DagVariant {
    pub const fn new(setting: Setting, outcome_arrow: bool, parameter_arrow: bool) -> Self {
        Self { setting, outcome_arrow, parameter_arrow }
    }

    /// All eight variants: pure before realist, then by `(o, p)` in
    /// `none, o, p, op` order.
    pub fn all() -> [DagVariant; 8] {
        let mut out = [DagVariant::new(Setting::Pure, false, false); 8];
        let mut n = 0;
        for setting in [Setting::Pure, Setting::Realist] {
            for (o, p) in [(false, false), (true, false), (false, true), (true, true)] {
                out[n] = DagVariant::new(setting, o, p);
                n += 1;
            }
        }
        out
    }

    /// Same setting and a subset of the red arrows.
    pub fn arrows_subset_of(&self, other: &DagVariant) -> bool {
        self.setting == other.setting
            && (!self.outcome_arrow || other.outcome_arrow)
            && (!self.parameter_arrow || other.parameter_arrow)
    }

    pub fn dag(&self) -> CausalDag {
        build(*self)
    }
}

impl fmt::Display for DagVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.setting {
            Setting::Pure => "pure",
            Setting::Realist => "realist",
        };
        let suffix = match (self.outcome_arrow, self.parameter_arrow) {
            (false, false) => "",
            (true, false) => "+o",
            (false, true) => "+p",
            (true, true) => "+op",
        };
        write!(f, "{base}{suffix}")
    }
}

impl FromStr for DagVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, arrows) = s.split_once('+').unwrap_or((s, ""));
        let setting = match base {
            "pure" => Setting::Pure,
            "realist" => Setting::Realist,
            _ => return Err(Error::Parse(format!("unknown DAG variant {s:?}"))),
        };
        let (o, p) = match arrows {
            "" if !s.contains('+') => (false, false),
            "o" => (true, false),
            "p" => (false, true),
            "op" => (true, true),
            _ => return Err(Error::Parse(format!("unknown DAG variant {s:?}"))),
        };
        Ok(DagVariant::new(setting, o, p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Observed,
    Latent,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub name: String,
    pub kind: NodeKind,
}

impl Node {
    pub fn observed(name: &str) -> Self {
        Self { name: name.into(), kind: NodeKind::Observed }
    }

    pub fn latent(name: &str) -> Self {
        Self { name: name.into(), kind: NodeKind::Latent }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalDag {
    nodes: Vec<Node>,
    arrows: BTreeSet<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DagJson {
    nodes: Vec<Node>,
    arrows: Vec<(String, String)>,
}

impl CausalDag {
    pub fn new(nodes: Vec<Node>, arrows: &[(&str, &str)]) -> Result<Self> {
        for (a, node) in nodes.iter().enumerate() {
            if nodes[..a].iter().any(|other| other.name == node.name) {
                return Err(Error::InvalidGraph(format!("duplicate node {}", node.name)));
            }
        }
        let lookup = |name: &str| {
            nodes
                .iter()
                .position(|n| n.name == canonical_name(name))
                .ok_or_else(|| Error::UnknownNode(name.to_string()))
        };
        let mut arrow_set = BTreeSet::new();
        for &(from, to) in arrows {
            let (a, b) = (lookup(from)?, lookup(to)?);
            if a == b {
                return Err(Error::InvalidGraph(format!("self loop on {from}")));
            }
            arrow_set.insert((a, b));
        }
        let mut parents = vec![Vec::new(); nodes.len()];
        let mut children = vec![Vec::new(); nodes.len()];
        for &(a, b) in &arrow_set {
            parents[b].push(a);
            children[a].push(b);
        }
        let dag = Self { nodes, arrows: arrow_set, parents, children };
        if dag.topological_indices().len() != dag.nodes.len() {
            return Err(Error::InvalidGraph("graph has a directed cycle".into()));
        }
        if let Some(c) = dag.nodes.iter().position(|n| n.name == C) {
            if !dag.parents[c].is_empty() {
                return Err(Error::InvalidGraph("the choice C must not have incoming arrows".into()));
            }
        }
        Ok(dag)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn arrows(&self) -> Vec<(&str, &str)> {
        self.arrows.iter().map(|&(a, b)| (self.name(a), self.name(b))).collect()
    }

    pub fn has_arrow(&self, from: &str, to: &str) -> bool {
        match (self.index_of(from), self.index_of(to)) {
            (Ok(a), Ok(b)) => self.arrows.contains(&(a, b)),
            _ => false,
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_ok()
    }

    pub fn kind(&self, name: &str) -> Result<NodeKind> {
        Ok(self.nodes[self.index_of(name)?].kind)
    }

    pub fn parents_of(&self, name: &str) -> Result<Vec<&str>> {
        Ok(self.parents[self.index_of(name)?].iter().map(|&p| self.name(p)).collect())
    }

    pub fn topological_order(&self) -> Vec<&str> {
        self.topological_indices().into_iter().map(|v| self.name(v)).collect()
    }

    fn name(&self, idx: usize) -> &str {
        &self.nodes[idx].name
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        let name = canonical_name(name);
        self.nodes.iter().position(|n| n.name == name).ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Kahn's algorithm, always taking the lowest-index ready node.
    fn topological_indices(&self) -> Vec<usize> {
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..self.nodes.len()).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &c in &self.children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        order
    }

    /// `seeds` together with all their ancestors.
    fn ancestors_mask(&self, seeds: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.nodes.len()];
        let mut stack = seeds.to_vec();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut mask[v], true) {
                stack.extend(&self.parents[v]);
            }
        }
        mask
    }

    fn query_indices(&self, x: &str, y: &str, given: &[&str]) -> Result<(usize, usize, Vec<usize>)> {
        let (xi, yi) = (self.index_of(x)?, self.index_of(y)?);
        let z = given.iter().map(|g| self.index_of(g)).collect::<Result<Vec<_>>>()?;
        if xi == yi {
            return Err(Error::InvalidGraph(format!("d-separation query needs two distinct nodes, got {x} twice")));
        }
        if z.contains(&xi) || z.contains(&yi) {
            return Err(Error::InvalidGraph("query nodes must not be in the conditioning set".into()));
        }
        Ok((xi, yi, z))
    }

    /// Whether `x` and `y` are d-separated given `given`.
    ///
    /// Bayes-ball reachability: a trail may pass a non-collider only when it
    /// is unobserved, and a collider only when it or one of its descendants
    /// is observed (that is, when it is an ancestor of the conditioning set).
    /// Latent nodes may appear in `given`.
    pub fn d_separated(&self, x: &str, y: &str, given: &[&str]) -> Result<bool> {
        let (xi, yi, z) = self.query_indices(x, y, given)?;
        let n = self.nodes.len();
        let mut observed = vec![false; n];
        for &v in &z {
            observed[v] = true;
        }
        let opens_collider = self.ancestors_mask(&z);

        // visited[v][0]: arrived from a child (moving up), [1]: from a parent
        let mut visited = vec![[false; 2]; n];
        let mut queue = VecDeque::from([(xi, 0usize)]);
        while let Some((v, dir)) = queue.pop_front() {
            if std::mem::replace(&mut visited[v][dir], true) {
                continue;
            }
            if v == yi && !observed[v] {
                return Ok(false);
            }
            if dir == 0 && !observed[v] {
                queue.extend(self.parents[v].iter().map(|&p| (p, 0)));
                queue.extend(self.children[v].iter().map(|&c| (c, 1)));
            } else if dir == 1 {
                if !observed[v] {
                    queue.extend(self.children[v].iter().map(|&c| (c, 1)));
                }
                if opens_collider[v] {
                    queue.extend(self.parents[v].iter().map(|&p| (p, 0)));
                }
            }
        }
        Ok(true)
    }

    /// Every simple path from `x` to `y` that is active given `given`, in
    /// depth-first order over node indices. Empty iff d-separated.
    pub fn active_paths(&self, x: &str, y: &str, given: &[&str]) -> Result<Vec<Trail>> {
        Ok(self.trails(x, y, given)?.into_iter().filter(|(_, active)| *active).map(|(t, _)| t).collect())
    }

    /// Every simple path from `x` to `y`, flagged active or blocked.
    pub fn trails(&self, x: &str, y: &str, given: &[&str]) -> Result<Vec<(Trail, bool)>> {
        let (xi, yi, z) = self.query_indices(x, y, given)?;
        let opens_collider = self.ancestors_mask(&z);
        let mut found = Vec::new();
        let mut path = vec![xi];
        self.extend_paths(yi, &mut path, &mut found);
        Ok(found
            .into_iter()
            .map(|p| {
                let active = self.path_is_active(&p, &z, &opens_collider);
                (self.trail(&p), active)
            })
            .collect())
    }

    fn extend_paths(&self, target: usize, path: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("path starts non-empty");
        if last == target {
            found.push(path.clone());
            return;
        }
        let mut neighbours: Vec<usize> = self.parents[last].iter().chain(&self.children[last]).copied().collect();
        neighbours.sort_unstable();
        for next in neighbours {
            if !path.contains(&next) {
                path.push(next);
                self.extend_paths(target, path, found);
                path.pop();
            }
        }
    }

    fn path_is_active(&self, path: &[usize], z: &[usize], open: &[bool]) -> bool {
        path.windows(3).all(|w| {
            let (a, m, b) = (w[0], w[1], w[2]);
            let collider = self.arrows.contains(&(a, m)) && self.arrows.contains(&(b, m));
            if collider {
                open[m]
            } else {
                !z.contains(&m)
            }
        })
    }

    fn trail(&self, path: &[usize]) -> Trail {
        let mut rendered = self.name(path[0]).to_string();
        for w in path.windows(2) {
            let arrow = if self.arrows.contains(&(w[0], w[1])) { '→' } else { '←' };
            rendered.push(arrow);
            rendered.push_str(self.name(w[1]));
        }
        Trail { nodes: path.iter().map(|&v| self.name(v).to_string()).collect(), rendered }
    }

    /// Markov factorisation of the observed joint given the free root
    /// variables, with latent nodes summed out.
    pub fn markov_factorization(&self) -> Factorization {
        let order = self.topological_indices();
        let conditioned: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&v| self.parents[v].is_empty() && self.nodes[v].kind == NodeKind::Observed)
            .collect();
        let factor = |v: usize| Factor {
            node: self.name(v).to_string(),
            parents: self.parents[v].iter().map(|&p| self.name(p).to_string()).collect(),
        };
        let observed: Vec<usize> = (0..self.nodes.len())
            .filter(|&v| self.nodes[v].kind == NodeKind::Observed && !conditioned.contains(&v))
            .collect();
        let factors = order.iter().copied().filter(|v| !conditioned.contains(v)).map(factor).collect();
        let names = |vs: Vec<usize>| vs.into_iter().map(|v| self.name(v).to_string()).collect();
        let latent = order.iter().copied().filter(|&v| self.nodes[v].kind == NodeKind::Latent).collect();
        Factorization { conditioned: names(conditioned), observed: names(observed), latent: names(latent), factors }
    }

    pub fn to_json(&self) -> String {
        let wire = DagJson {
            nodes: self.nodes.clone(),
            arrows: self.arrows().into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        };
        serde_json::to_string_pretty(&wire).expect("plain strings serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: DagJson = serde_json::from_str(text)?;
        let arrows: Vec<(&str, &str)> = wire.arrows.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Self::new(wire.nodes, &arrows)
    }
}

/// `Lambda` and `L` are accepted as ASCII spellings of `Λ`.
fn canonical_name(name: &str) -> &str {
    match name {
        "Lambda" | "L" | "lambda" => LAMBDA,
        other => other,
    }
}

/// A path rendered with arrow directions, e.g. `V←Λ→M2←C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trail {
    pub nodes: Vec<String>,
    pub rendered: String,
}

impl fmt::Display for Trail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered)
    }
}

/// One conditional `P(node | parents)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub node: String,
    pub parents: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Free observed roots the joint is conditioned on (`C`).
    pub conditioned: Vec<String>,
    /// Remaining observed nodes, topological order.
    pub observed: Vec<String>,
    /// Latent nodes summed over, topological order.
    pub latent: Vec<String>,
    /// `P(node | parents)` for every non-conditioned node, topological order.
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn factor(&self, node: &str) -> Option<&Factor> {
        self.factors.iter().find(|f| f.node == node)
    }

    /// Observed factors first (declaration order), then latent factors from
    /// the most downstream to the roots.
    pub fn display_order(&self) -> Vec<&Factor> {
        let observed = self.observed.iter().filter_map(|n| self.factors.iter().find(|f| &f.node == n));
        let latent = self.factors.iter().rev().filter(|f| self.latent.contains(&f.node));
        observed.chain(latent).collect()
    }
}

fn value_symbol(node: &str) -> String {
    match node {
        C => "k".into(),
        M1 => "i".into(),
        M2 => "j".into(),
        LAMBDA => "λ".into(),
        V => "v".into(),
        other => other.to_lowercase(),
    }
}

fn assignment(node: &str) -> String {
    format!("{node}={}", value_symbol(node))
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs: Vec<String> = self.observed.iter().map(|n| assignment(n)).collect();
        let given: Vec<String> = self.conditioned.iter().map(|n| assignment(n)).collect();
        write!(f, "P({}", lhs.join(","))?;
        if !given.is_empty() {
            write!(f, "|{}", given.join(","))?;
        }
        write!(f, ") = ")?;
        if !self.latent.is_empty() {
            let symbols: Vec<String> = self.latent.iter().map(|n| value_symbol(n)).collect();
            write!(f, "Σ_{{{}}} ", symbols.join(","))?;
        }
        let rendered: Vec<String> = self
            .display_order()
            .into_iter()
            .map(|factor| {
                if factor.parents.is_empty() {
                    format!("P({})", assignment(&factor.node))
                } else {
                    let parents: Vec<String> = factor.parents.iter().map(|p| assignment(p)).collect();
                    format!("P({}|{})", assignment(&factor.node), parents.join(","))
                }
            })
            .collect();
        f.write_str(&rendered.join(" · "))
    }
}

/// The causal diagram of a variant.
pub fn build(variant: DagVariant) -> CausalDag {
    let mut nodes = vec![Node::observed(C), Node::observed(M1), Node::observed(M2), Node::latent(LAMBDA)];
    let mut arrows = vec![(C, M1), (LAMBDA, M2)];
    match variant.setting {
        Setting::Pure => arrows.push((LAMBDA, M1)),
        Setting::Realist => {
            nodes.push(Node::latent(V));
            arrows.extend([(V, M1), (LAMBDA, V)]);
        }
    }
    if variant.outcome_arrow {
        arrows.push((M1, M2));
    }
    if variant.parameter_arrow {
        arrows.push((C, M2));
    }
    CausalDag::new(nodes, &arrows).expect("catalog diagrams are acyclic")
}
