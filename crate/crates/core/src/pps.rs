//! Pre- and post-selection statistics.
//!
//! A system is prepared in `ρ₀`, measured at an intermediate time with a PVM
//! selected by the choice `C`, and finally measured with a PVM whose outcome
//! `1` is the post-selection event. Joint statistics follow from the Lüders
//! rule and post-selected conditionals from the ABL rule.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::behavior::{Behavior, Choice, Column};
use crate::error::{Error, Result};
use crate::hilbert::{apply_projector, outer_product, trace_product, DensityOperator, Projector, Pvm, StateVector};
use crate::rational::Rational;

/// Index of the successful post-selection outcome in the final PVM.
pub const POSTSELECTED: usize = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpsScenario {
    pre_state: DensityOperator,
    intermediate: BTreeMap<Choice, Pvm>,
    final_measurement: Pvm,
}

impl PpsScenario {
    pub fn new(
        pre_state: DensityOperator,
        intermediate: BTreeMap<Choice, Pvm>,
        final_measurement: Pvm,
    ) -> Result<Self> {
        let dim = pre_state.dim();
        if intermediate.is_empty() {
            return Err(Error::InvalidChoiceSet("scenario needs at least one intermediate measurement".into()));
        }
        if final_measurement.len() <= POSTSELECTED {
            return Err(Error::InvalidPvm("final measurement has no post-selection outcome".into()));
        }
        for pvm in intermediate.values().chain(std::iter::once(&final_measurement)) {
            if pvm.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: pvm.dim() });
            }
        }
        Ok(Self { pre_state, intermediate, final_measurement })
    }

    pub fn pre_state(&self) -> &DensityOperator {
        &self.pre_state
    }

    pub fn final_measurement(&self) -> &Pvm {
        &self.final_measurement
    }

    pub fn choices(&self) -> Vec<Choice> {
        self.intermediate.keys().copied().collect()
    }

    pub fn intermediate(&self, k: Choice) -> Result<&Pvm> {
        self.intermediate.get(&k).ok_or(Error::InvalidChoice(k))
    }

    fn postselection(&self) -> &Projector {
        &self.final_measurement.elements()[POSTSELECTED]
    }

    /// `Tr[Π^post Π^C_i ρ₀ Π^C_i]`
    fn abl_term(&self, k: Choice, i: usize) -> Result<Rational> {
        let projector = self.intermediate(k)?.outcome(i)?;
        let (updated, _) = apply_projector(projector, &self.pre_state)?;
        trace_product(self.postselection(), &updated)
    }
}

/// `|φ⟩ = (|1⟩ + |2⟩ + |3⟩)/√3`
pub fn three_box_pre_state() -> StateVector {
    StateVector::from_ints(&[1, 1, 1]).expect("nonzero vector")
}

/// `|ψ⟩ = (|1⟩ + |2⟩ - |3⟩)/√3`
pub fn three_box_post_state() -> StateVector {
    StateVector::from_ints(&[1, 1, -1]).expect("nonzero vector")
}

/// The three box experiment: choice `C = k` opens box `k` and the
/// intermediate PVM is `{1 - |k⟩⟨k|, |k⟩⟨k|}`.
pub fn three_box_scenario() -> PpsScenario {
    let build = || -> Result<PpsScenario> {
        let pre_state = outer_product(&three_box_pre_state())?;
        let final_measurement = Pvm::binary(Projector::onto(&three_box_post_state())?);
        let mut intermediate = BTreeMap::new();
        for k in 1..=3u8 {
            let open_box = Projector::onto(&StateVector::basis(3, usize::from(k - 1))?)?;
            intermediate.insert(k, Pvm::binary(open_box));
        }
        PpsScenario::new(pre_state, intermediate, final_measurement)
    };
    build().expect("three box scenario is well formed")
}

/// `P(M1 = i, M2 = j | C = k)` indexed `[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointTable(Vec<Vec<Rational>>);

impl JointTable {
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.0[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().flatten().sum()
    }

    /// Binary-outcome table as a behavior column.
    pub fn to_column(&self) -> Result<Column> {
        if self.0.len() != 2 || self.0.iter().any(|row| row.len() != 2) {
            return Err(Error::InvalidBehavior("behavior columns need binary M1 and M2".into()));
        }
        Column::new([[self.0[0][0].clone(), self.0[0][1].clone()], [self.0[1][0].clone(), self.0[1][1].clone()]])
    }
}

/// Lüders-rule joint distribution of the two measurements for choice `k`.
pub fn joint_distribution(s: &PpsScenario, k: Choice) -> Result<JointTable> {
    let pvm = s.intermediate(k)?;
    let rows = pvm
        .elements()
        .iter()
        .map(|intermediate| {
            let (updated, _) = apply_projector(intermediate, &s.pre_state)?;
            s.final_measurement.elements().iter().map(|fin| trace_product(fin, &updated)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JointTable(rows))
}

/// ABL rule: `P(M1 = i | M2 = 1, C = k)`.
pub fn abl_conditional(s: &PpsScenario, k: Choice, i: usize) -> Result<Rational> {
    let outcomes = s.intermediate(k)?.len();
    if i >= outcomes {
        return Err(Error::InvalidOutcome(i));
    }
    let denominator: Rational = (0..outcomes).map(|l| s.abl_term(k, l)).sum::<Result<Rational>>()?;
    if denominator.is_zero() {
        return Err(Error::UndefinedConditional(k));
    }
    Ok(s.abl_term(k, i)? / denominator)
}

/// `P(M2 = 1 | C = k)`
pub fn postselection_success(s: &PpsScenario, k: Choice) -> Result<Rational> {
    let table = joint_distribution(s, k)?;
    Ok(table.rows().iter().map(|row| &row[POSTSELECTED]).sum())
}

/// `Tr[Π^post ρ₀]`: post-selection success when no intermediate measurement
/// is made.
pub fn postselection_without_intermediate(s: &PpsScenario) -> Result<Rational> {
    trace_product(s.postselection(), s.pre_state.matrix())
}

/// Every choice of a binary scenario, collected into a behavior.
pub fn to_behavior(s: &PpsScenario) -> Result<Behavior> {
    let columns =
        s.choices().into_iter().map(|k| Ok((k, joint_distribution(s, k)?.to_column()?))).collect::<Result<Vec<_>>>()?;
    Behavior::new(columns)
}
