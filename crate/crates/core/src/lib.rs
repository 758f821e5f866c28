//! Qualitative Markovian belief change.
//!
//! A [`TransitionModel`] assigns each transition a plausibility in an
//! algebraic domain (kappa ranks, possibility degrees, or vectors of
//! ranks). The plausibility of a run prefix is the `⊗`-product of its
//! transitions, and a state set is believed at time `t` given evidence when
//! the evidence-consistent prefixes passing through it are strictly more
//! plausible than those avoiding it.
//!
//! * [`filter`] maintains `Pl(S_n = s, E_n)` as observations arrive.
//! * [`oracle`] answers the same questions by enumerating prefixes.
//! * [`constraints`] works from a partial order on transitions alone.
//!
//! ```
//! use qmb_core::{scenarios, Filter};
//!
//! let m = scenarios::car_model();
//! let e = scenarios::borrowed_evidence(m.space(), 3);
//! let gone = m.space().proposition(&["G"]).unwrap();
//! assert!(m.believes(&e, &gone, 1).unwrap());
//!
//! let f = Filter::new(&m).unwrap().run_final(&e).unwrap();
//! assert_eq!(f.render(m.space(), false), "PF=inf\tPE=2\tG=inf");
//! ```

pub mod algebra;
pub mod cli;
pub mod constraints;
mod error;
pub mod filter;
pub mod model;
pub mod oracle;
pub mod scenarios;

pub use algebra::{AlgebraError, CompareResult, DomainKind, PlausValue, Rank};
pub use constraints::{Constraint, ConstraintSet, EntailedBelief, PrefixOrder, Rel, Var};
pub use error::{Error, Result};
pub use filter::{Filter, FilterState};
pub use model::{Belief, Evidence, FinitePrior, Prefix, Proposition, StateId, StateSpace, TransitionModel};
