//! Exact-rational reproduction of the quantum three box experiment and a
//! mechanical check of which causal structures can explain its statistics.
//!
//! The crate is organised bottom-up:
//!
//! * [`hilbert`]: exact complex linear algebra on small Hilbert spaces.
//! * [`pps`]: pre- and post-selection statistics (Lüders rule, ABL rule).
//! * [`behavior`]: the `P(M1, M2 | C)` tables shared by every other layer.
//! * [`dag`]: causal diagrams, d-separation and Markov factorisations.
//! * [`scm`]: structural causal models evaluated by exhaustive enumeration.
//! * [`inequality`]: instrumental inequalities in compact and pairwise form.
//! * [`lp`] and [`feasibility`]: exact LP feasibility over deterministic
//!   response-function strategies, and the summary matrix built from it.
//!
//! No floating point is used anywhere: every probability is a
//! [`Rational`] backed by arbitrary-precision integers.

pub mod behavior;
pub mod dag;
mod error;
pub mod feasibility;
pub mod hilbert;
pub mod inequality;
pub mod lp;
pub mod pps;
mod rational;
pub mod scm;

pub use behavior::{Behavior, Choice, Column};
pub use dag::{CausalDag, DagVariant, Setting};
pub use error::{Error, Result};
pub use feasibility::{decide, figure4_report, FeasibilityResult, Figure4Report};
pub use inequality::{compact_check, pairwise_check, InequalityReport};
pub use pps::PpsScenario;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use scm::{CatalogCase, Scm};
