//! The car scenario: a car parked with a full tank (`PF`) may leak its fuel
//! (`PE`) or be taken (`G`), and a taken car may be returned empty.

use crate::cli::parse::{load_model, parse_constraints, parse_observations};
use crate::constraints::ConstraintSet;
use crate::model::{Evidence, StateSpace, TransitionModel};

pub const CAR_MODEL: &str = include_str!("../scenarios/car.qmb");
pub const STOLEN_OBS: &str = include_str!("../scenarios/stolen.obs");
pub const BORROWED2_OBS: &str = include_str!("../scenarios/borrowed2.obs");
pub const BORROWED3_OBS: &str = include_str!("../scenarios/borrowed3.obs");
pub const CHAIN_CONSTRAINTS: &str = include_str!("../scenarios/chain.qmc");
pub const CHANGE_CONSTRAINTS: &str = include_str!("../scenarios/changes.qmc");
pub const LEAK_PREFERRED_CONSTRAINTS: &str = include_str!("../scenarios/changes-leak.qmc");
pub const LEAK_LEAST_CONSTRAINTS: &str = include_str!("../scenarios/changes-noleak.qmc");

/// Seed for which [`chain_constraints`] samples leak 3, theft and return 1.
pub const CHAIN_SEED_CHEAP_BORROW: u64 = 25;
/// Seed for which [`chain_constraints`] samples leak 3, theft and return 2.
pub const CHAIN_SEED_COSTLY_BORROW: u64 = 1;

/// Kappa ranks: leak 3, theft 1, return 1, staying put 0.
pub fn car_model() -> TransitionModel {
    load_model(CAR_MODEL).expect("packaged model is valid")
}

/// The car is gone at time 3.
pub fn stolen_evidence(space: &StateSpace) -> Evidence {
    parse_observations(STOLEN_OBS, space).expect("packaged observations are valid")
}

/// Parked at time 2, and for `horizon == 3` parked with an empty tank at
/// time 3.
pub fn borrowed_evidence(space: &StateSpace, horizon: usize) -> Evidence {
    let text = match horizon {
        2 => BORROWED2_OBS,
        3 => BORROWED3_OBS,
        _ => panic!("borrowed-car evidence exists for horizons 2 and 3"),
    };
    parse_observations(text, space).expect("packaged observations are valid")
}

/// leak < theft = return < staying put.
pub fn chain_constraints() -> ConstraintSet {
    parse_constraints(CHAIN_CONSTRAINTS).expect("packaged constraints are valid")
}

/// Leak, theft and return each below staying put, mutually unrelated.
pub fn change_constraints() -> ConstraintSet {
    parse_constraints(CHANGE_CONSTRAINTS).expect("packaged constraints are valid")
}

/// [`change_constraints`] plus theft < leak.
pub fn leak_preferred_constraints() -> ConstraintSet {
    parse_constraints(LEAK_PREFERRED_CONSTRAINTS).expect("packaged constraints are valid")
}

/// [`change_constraints`] plus leak < theft and leak < return.
pub fn leak_least_constraints() -> ConstraintSet {
    parse_constraints(LEAK_LEAST_CONSTRAINTS).expect("packaged constraints are valid")
}
