//! Forward filtering of the joint plausibilities `Pl(S_n = s, E_n)`.
//!
//! Each observation is absorbed in two stages. The predict stage computes
//! `⊕_{s′} t(s′, s) ⊗ v(s′)` for every state `s`; the prune stage sets
//! states outside the observation to ⊥. The vector answers any belief query
//! about the current time, since `Pl(A^(n), E_n)` is the ⊕ of its entries
//! over `A`.

use std::fmt::Write as _;

use crate::algebra::{CompareResult, PlausValue};
use crate::error::{Error, Result};
use crate::model::{Evidence, Proposition, StateSpace, TransitionModel};

/// Snapshot of the filter after `time` observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterState {
    time: usize,
    vector: Vec<PlausValue>,
    consistent: bool,
}

impl FilterState {
    pub fn time(&self) -> usize {
        self.time
    }

    /// `Pl(S_n = s, E_n)` indexed by state.
    pub fn vector(&self) -> &[PlausValue] {
        &self.vector
    }

    /// False once every entry is ⊥.
    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    /// One line of tab-separated `state=value` pairs. With `normalize`, kappa
    /// ranks are shifted so the smallest finite entry is 0; the stored state
    /// is never changed.
    pub fn render(&self, space: &StateSpace, normalize: bool) -> String {
        let shift = if normalize { self.vector.iter().filter_map(|v| v.as_rank().and_then(|r| r.finite())).min().unwrap_or(0) } else { 0 };
        let mut line = String::new();
        for (i, (name, v)) in space.names().iter().zip(&self.vector).enumerate() {
            if i > 0 {
                line.push('\t');
            }
            match v.as_rank().and_then(|r| r.finite()) {
                Some(r) if shift > 0 => write!(line, "{name}={}", r - shift),
                _ => write!(line, "{name}={v}"),
            }
            .expect("writing to a String cannot fail");
        }
        line
    }
}

/// Filtering against one validated model.
#[derive(Debug, Clone, Copy)]
pub struct Filter<'m> {
    model: &'m TransitionModel,
    strict: bool,
}

impl<'m> Filter<'m> {
    /// A strict filter: a step that leaves every state at ⊥ fails with
    /// [`Error::InconsistentEvidence`].
    pub fn new(model: &'m TransitionModel) -> Result<Self> {
        model.ensure_valid()?;
        Ok(Filter { model, strict: true })
    }

    /// A lenient filter returns the all-⊥ state instead, and fails only when
    /// that state is stepped or queried.
    pub fn lenient(model: &'m TransitionModel) -> Result<Self> {
        Ok(Filter { strict: false, ..Filter::new(model)? })
    }

    pub fn model(&self) -> &'m TransitionModel {
        self.model
    }

    /// Time 0: ⊤ at the initial state, ⊥ elsewhere.
    pub fn init(&self) -> FilterState {
        let kind = self.model.kind();
        let init = self.model.space().init();
        let vector = self.model.space().ids().map(|s| if s == init { PlausValue::top(kind) } else { PlausValue::bottom(kind) }).collect();
        FilterState { time: 0, vector, consistent: true }
    }

    /// Absorbs the observation for time `state.time() + 1`.
    pub fn step(&self, state: &FilterState, observation: &Proposition) -> Result<FilterState> {
        let space = self.model.space();
        space.check_prop(observation)?;
        if !state.consistent {
            return Err(Error::InconsistentEvidence { time: Some(state.time) });
        }
        let kind = self.model.kind();
        let mut vector = Vec::with_capacity(space.len());
        for s in space.ids() {
            if !observation.contains(s) {
                vector.push(PlausValue::bottom(kind));
                continue;
            }
            let mut acc = PlausValue::bottom(kind);
            for prev in space.ids() {
                acc = acc.plus(&self.model.transition(prev, s).times(&state.vector[prev.index()])?)?;
            }
            vector.push(acc);
        }
        let time = state.time + 1;
        let consistent = vector.iter().any(|v| !v.is_bottom());
        if !consistent && self.strict {
            return Err(Error::InconsistentEvidence { time: Some(time) });
        }
        Ok(FilterState { time, vector, consistent })
    }

    /// `Pl(A^(n), E_n)` and `Pl(Ā^(n), E_n)` from the vector.
    pub fn split(&self, state: &FilterState, a: &Proposition) -> Result<(PlausValue, PlausValue)> {
        self.model.space().check_prop(a)?;
        if !state.consistent {
            return Err(Error::InconsistentEvidence { time: Some(state.time) });
        }
        let kind = self.model.kind();
        let (mut yes, mut no) = (PlausValue::bottom(kind), PlausValue::bottom(kind));
        for (s, v) in self.model.space().ids().zip(&state.vector) {
            let slot = if a.contains(s) { &mut yes } else { &mut no };
            *slot = slot.plus(v)?;
        }
        Ok((yes, no))
    }

    /// Whether `a` is believed at the state's time.
    pub fn believes(&self, state: &FilterState, a: &Proposition) -> Result<bool> {
        let (yes, no) = self.split(state, a)?;
        Ok(yes.compare(&no)? == CompareResult::Greater)
    }

    /// The trace `[f0, f1, …, fn]` over `evidence`.
    pub fn run(&self, evidence: &Evidence) -> Result<Vec<FilterState>> {
        let mut trace = vec![self.init()];
        for obs in evidence.observations() {
            let next = self.step(trace.last().expect("trace starts nonempty"), obs)?;
            trace.push(next);
        }
        Ok(trace)
    }

    /// Final state after `evidence`.
    pub fn run_final(&self, evidence: &Evidence) -> Result<FilterState> {
        Ok(self.run(evidence)?.pop().expect("trace is nonempty"))
    }
}
