//! The three-box table from three independent routes: a hand-written
//! fixture, a direct integer expansion of the Lüders rule, and the
//! operator-level computation in `pps`.

use threebox::behavior::three_box_behavior;
use threebox::pps::{
    abl_conditional, postselection_success, postselection_without_intermediate, three_box_scenario, to_behavior,
};
use threebox::{rat, Behavior, Column, Rational};

const FIXTURE: &str = include_str!("fixtures/three_box_table.json");

// unnormalised; both have squared norm 3
const PRE: [i64; 3] = [1, 1, 1];
const POST: [i64; 3] = [1, 1, -1];

/// `‖Π_j^post Π_i^k φ‖²` worked out on integer vectors.
fn expanded(i: usize, j: usize, k: usize) -> Rational {
    let kept: Vec<i64> = (0..3).map(|m| if (m == k) == (i == 1) { PRE[m] } else { 0 }).collect();
    let overlap: i64 = kept.iter().zip(POST).map(|(a, b)| a * b).sum();
    let norm: i64 = kept.iter().map(|a| a * a).sum();
    let on_post = rat(overlap * overlap, 9);
    if j == 1 {
        on_post
    } else {
        rat(norm, 3) - on_post
    }
}

fn expanded_behavior() -> Behavior {
    Behavior::new((0..3).map(|k| {
        let e = |i, j| expanded(i, j, k);
        (k as u8 + 1, Column::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]).unwrap())
    }))
    .unwrap()
}

#[test]
fn fixture_matches_integer_expansion() {
    assert_eq!(Behavior::from_json(FIXTURE).unwrap(), expanded_behavior());
}

#[test]
fn fixture_matches_operator_computation() {
    let fixture = Behavior::from_json(FIXTURE).unwrap();
    assert_eq!(to_behavior(&three_box_scenario()).unwrap(), fixture);
    assert_eq!(three_box_behavior(), fixture);
    assert_eq!(fixture.to_json().trim(), FIXTURE.trim());
}

#[test]
fn anchored_entries() {
    let b = expanded_behavior();
    assert_eq!(*b.get(0, 0, 1).unwrap(), rat(2, 3));
    assert_eq!(*b.get(0, 1, 3).unwrap(), rat(4, 9));
    for k in 1..=3 {
        assert_eq!(*b.get(1, 1, k).unwrap(), rat(1, 9));
    }
}

#[test]
fn conditionals_and_success_rates() {
    let s = three_box_scenario();
    assert_eq!(abl_conditional(&s, 1, 1).unwrap(), rat(1, 1));
    assert_eq!(abl_conditional(&s, 2, 1).unwrap(), rat(1, 1));
    assert_eq!(abl_conditional(&s, 3, 1).unwrap(), rat(1, 5));
    let b = expanded_behavior();
    for k in 1..=3u8 {
        // ABL agrees with Bayes on the expanded table
        let bayes = b.get(1, 1, k).unwrap() / b.m2_marginal(k).unwrap();
        assert_eq!(abl_conditional(&s, k, 1).unwrap(), bayes);
    }
    assert_eq!(postselection_success(&s, 1).unwrap(), rat(1, 9));
    assert_eq!(postselection_success(&s, 2).unwrap(), rat(1, 9));
    assert_eq!(postselection_without_intermediate(&s).unwrap(), rat(1, 9));
}
