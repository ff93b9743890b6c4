//! Random models and behaviors shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use threebox::behavior::ALL_CHOICES;
use threebox::dag::{self, Setting};
use threebox::feasibility::enumerate_strategies;
use threebox::scm::{ExogenousVar, StructuralEquation, Value};
use threebox::{rat, Behavior, Choice, Column, DagVariant, Rational, Scm};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive weights with small denominators, summing to one.
pub fn weights(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| rat(w, total)).collect()
}

/// Arbitrary behavior over `choices`, zero entries included.
pub fn behavior(rng: &mut impl Rng, choices: &[Choice]) -> Behavior {
    Behavior::new(choices.iter().map(|&k| {
        let raw: [i64; 4] = std::array::from_fn(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(1..=9) });
        let raw = if raw.iter().all(|&x| x == 0) { [1, 0, 0, 0] } else { raw };
        let t: i64 = raw.iter().sum();
        (k, Column::from_fractions(raw.map(|x| (x, t))).unwrap())
    }))
    .unwrap()
}

fn table(inputs: &[Vec<Value>], mut f: impl FnMut(&[Value]) -> Value) -> BTreeMap<Vec<Value>, Value> {
    let mut rows = vec![vec![]];
    for domain in inputs {
        rows = rows
            .into_iter()
            .flat_map(|row: Vec<Value>| domain.iter().map(move |&v| [row.clone(), vec![v]].concat()))
            .collect();
    }
    rows.into_iter()
        .map(|row| {
            let out = f(&row);
            (row, out)
        })
        .collect()
}

/// Random model on `variant`'s diagram with `Λ` ranging over a random
/// sample of deterministic strategies.
pub fn scm(rng: &mut impl Rng, variant: DagVariant) -> Scm {
    let space = enumerate_strategies(variant, &ALL_CHOICES).unwrap();
    let picks: Vec<usize> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..space.len())).collect();
    let support: Vec<Value> = (0..picks.len() as Value).collect();
    let lambda = ExogenousVar::new(dag::LAMBDA, support.clone(), weights(rng, picks.len())).unwrap();
    let strategy = |l: Value| &space.strategies[picks[l as usize]];
    let choices: Vec<Value> = ALL_CHOICES.iter().map(|&k| Value::from(k)).collect();
    let pos = |c: Value| (c - 1) as usize;
    let binary = vec![0, 1];

    let mut equations = Vec::new();
    if variant.setting == Setting::Realist {
        let positions = table(std::slice::from_ref(&support), |r| Value::from(strategy(r[0]).position.unwrap()));
        equations.push(StructuralEquation::from_table(dag::V, vec![dag::LAMBDA.into()], positions));
        let m1 = table(&[choices.clone(), vec![1, 2, 3]], |r| Value::from(r[0] == r[1]));
        equations.push(StructuralEquation::from_table(dag::M1, vec![dag::C.into(), dag::V.into()], m1));
    } else {
        let m1 = table(&[choices.clone(), support.clone()], |r| Value::from(strategy(r[1]).m1[pos(r[0])]));
        equations.push(StructuralEquation::from_table(dag::M1, vec![dag::C.into(), dag::LAMBDA.into()], m1));
    }
    // M2 reads (C?, M1?, Λ); a missing input is filled with a dummy value
    let mut names: Vec<String> = Vec::new();
    let mut domains = Vec::new();
    if variant.parameter_arrow {
        names.push(dag::C.into());
        domains.push(choices.clone());
    }
    if variant.outcome_arrow {
        names.push(dag::M1.into());
        domains.push(binary.clone());
    }
    names.push(dag::LAMBDA.into());
    domains.push(support.clone());
    let (p, o) = (variant.parameter_arrow, variant.outcome_arrow);
    let m2 = table(&domains, |r| {
        let c = if p { r[0] } else { 1 };
        let i = if o { r[usize::from(p)] } else { 0 };
        Value::from(strategy(*r.last().unwrap()).m2_response(pos(c), i as u8))
    });
    equations.push(StructuralEquation::from_table(dag::M2, names, m2));
    Scm::new(variant, choices, vec![lambda], equations).unwrap()
}
