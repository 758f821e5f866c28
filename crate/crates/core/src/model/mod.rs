//! State spaces, transition-plausibility tables and the Markovian prior they
//! determine.
//!
//! A [`TransitionModel`] fixes `t(s, s′)` for every ordered pair of states.
//! When every row ⊕-sums to ⊤ there is exactly one Markovian plausibility
//! measure on runs with these transition plausibilities; it assigns the
//! n-prefix `[s0, …, sn]` the value `t(s0, s1) ⊗ ⋯ ⊗ t(sn−1, sn)` and any
//! time-n event the ⊕ of its prefixes.
//!
//! Beliefs are decided by comparing joint plausibilities `Pl(A ∩ E)` and
//! `Pl(Ā ∩ E)`, which is equivalent to comparing the conditionals and needs
//! no division in the domain.

mod prior;
mod space;

use std::fmt;

use crate::algebra::{CompareResult, DomainKind, PlausValue};
use crate::error::{Error, Result};

pub use prior::{A2Witness, AtomView, Combine, ConjunctionWitness, FinitePrior, DEFAULT_ATOM_CAP};
pub use space::{Evidence, Prefix, Proposition, StateId, StateSpace};

/// A fully specified transition-plausibility table over one domain.
/// Pairs that were not given are ⊥.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionModel {
    space: StateSpace,
    kind: DomainKind,
    table: Vec<PlausValue>,
}

impl TransitionModel {
    pub fn new(space: StateSpace, kind: DomainKind, entries: impl IntoIterator<Item = (StateId, StateId, PlausValue)>) -> Result<Self> {
        let n = space.len();
        let mut table = vec![PlausValue::bottom(kind); n * n];
        for (from, to, value) in entries {
            space.check_id(from)?;
            space.check_id(to)?;
            if value.kind() != kind {
                return Err(crate::algebra::AlgebraError::DomainMismatch { left: kind, right: value.kind() }.into());
            }
            table[from.0 * n + to.0] = value;
        }
        Ok(TransitionModel { space, kind, table })
    }

    /// Convenience constructor from state names.
    pub fn from_names<S: AsRef<str>>(space: StateSpace, kind: DomainKind, entries: &[(S, S, PlausValue)]) -> Result<Self> {
        let resolved =
            entries.iter().map(|(f, t, v)| Ok((space.id(f.as_ref())?, space.id(t.as_ref())?, v.clone()))).collect::<Result<Vec<_>>>()?;
        TransitionModel::new(space, kind, resolved)
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    /// `t(from, to)`.
    pub fn transition(&self, from: StateId, to: StateId) -> &PlausValue {
        &self.table[from.0 * self.space.len() + to.0]
    }

    pub fn row(&self, from: StateId) -> &[PlausValue] {
        let n = self.space.len();
        &self.table[from.0 * n..(from.0 + 1) * n]
    }

    /// Per-row normalization and reachability diagnostics.
    pub fn validate(&self) -> ValidationReport {
        let rows = self
            .space
            .ids()
            .map(|s| {
                let total = PlausValue::sum(self.kind, self.row(s)).expect("table entries share the model kind");
                RowCheck { state: self.space.name(s).to_string(), normalized: total.is_top(), total }
            })
            .collect();

        let mut reached = vec![false; self.space.len()];
        let mut stack = vec![self.space.init()];
        reached[self.space.init().0] = true;
        while let Some(s) = stack.pop() {
            for t in self.space.ids() {
                if !reached[t.0] && !self.transition(s, t).is_bottom() {
                    reached[t.0] = true;
                    stack.push(t);
                }
            }
        }
        let unreachable = self.space.ids().filter(|s| !reached[s.0]).map(|s| self.space.name(s).to_string()).collect();
        ValidationReport { rows, unreachable }
    }

    /// Fails with the first row that does not sum to ⊤.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().rows.into_iter().find(|r| !r.normalized) {
            None => Ok(()),
            Some(row) => Err(Error::NotNormalized { state: row.state, sum: row.total.to_string() }),
        }
    }

    /// `t(s0, s1) ⊗ ⋯ ⊗ t(sn−1, sn)`; ⊤ for `[s0]`.
    pub fn prefix_plausibility(&self, prefix: &Prefix) -> Result<PlausValue> {
        for &s in prefix.states() {
            self.space.check_id(s)?;
        }
        if prefix.states()[0] != self.space.init() {
            return Err(Error::NotInitial {
                found: self.space.name(prefix.states()[0]).to_string(),
                init: self.space.name(self.space.init()).to_string(),
            });
        }
        let mut value = PlausValue::top(self.kind);
        for (from, to) in prefix.steps() {
            value = value.times(self.transition(from, to))?;
        }
        Ok(value)
    }

    /// Joint plausibilities `(Pl(A^(at) ∩ E), Pl(Ā^(at) ∩ E))` over the
    /// horizon of `evidence`, by depth-first enumeration of prefixes.
    pub fn joint_split(&self, evidence: &Evidence, a: &Proposition, at: usize) -> Result<(PlausValue, PlausValue)> {
        evidence.check_space(&self.space)?;
        self.space.check_prop(a)?;
        let horizon = evidence.horizon();
        if at > horizon {
            return Err(Error::TimeOutOfRange { at, horizon });
        }
        let mut walk =
            SplitWalk { model: self, evidence, a, at, support: PlausValue::bottom(self.kind), against: PlausValue::bottom(self.kind) };
        let init = self.space.init();
        walk.visit(0, init, PlausValue::top(self.kind), (at == 0).then(|| a.contains(init)))?;
        Ok((walk.support, walk.against))
    }

    /// `Pl(E)` when `query` is `None`; otherwise `Pl(A^(at) ∩ E)`.
    pub fn event_plausibility(&self, evidence: &Evidence, query: Option<(&Proposition, usize)>) -> Result<PlausValue> {
        match query {
            Some((a, at)) => Ok(self.joint_split(evidence, a, at)?.0),
            None => {
                let all = Proposition::full(self.space.len());
                Ok(self.joint_split(evidence, &all, 0)?.0)
            }
        }
    }

    /// Whether `a` is believed to hold at time `at` given `evidence`.
    pub fn believes(&self, evidence: &Evidence, a: &Proposition, at: usize) -> Result<bool> {
        Ok(self.belief(evidence, a, at)?.holds)
    }

    pub fn belief(&self, evidence: &Evidence, a: &Proposition, at: usize) -> Result<Belief> {
        let (support, against) = self.joint_split(evidence, a, at)?;
        Belief::decide(support, against)
    }
}

struct SplitWalk<'a> {
    model: &'a TransitionModel,
    evidence: &'a Evidence,
    a: &'a Proposition,
    at: usize,
    support: PlausValue,
    against: PlausValue,
}

impl SplitWalk<'_> {
    fn visit(&mut self, time: usize, state: StateId, value: PlausValue, hit: Option<bool>) -> Result<()> {
        if time == self.evidence.horizon() {
            let slot = if hit.unwrap_or(false) { &mut self.support } else { &mut self.against };
            *slot = slot.plus(&value)?;
            return Ok(());
        }
        let obs = self.evidence.observation(time + 1);
        for next in obs.iter() {
            let v = value.times(self.model.transition(state, next))?;
            if v.is_bottom() {
                continue;
            }
            let hit = if time + 1 == self.at { Some(self.a.contains(next)) } else { hit };
            self.visit(time + 1, next, v, hit)?;
        }
        Ok(())
    }
}

/// A belief verdict with the joint plausibilities that decided it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Belief {
    pub holds: bool,
    /// `Pl(A ∩ E)`.
    pub support: PlausValue,
    /// `Pl(Ā ∩ E)`.
    pub against: PlausValue,
    pub verdict: CompareResult,
}

impl Belief {
    /// Strictly-greater decides belief; `Equal` and `Incomparable` do not.
    pub fn decide(support: PlausValue, against: PlausValue) -> Result<Self> {
        if support.is_bottom() && against.is_bottom() {
            return Err(Error::InconsistentEvidence { time: None });
        }
        let verdict = support.compare(&against)?;
        Ok(Belief { holds: verdict == CompareResult::Greater, support, against, verdict })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    pub state: String,
    pub total: PlausValue,
    pub normalized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub rows: Vec<RowCheck>,
    /// States with no non-⊥ path from the initial state.
    pub unreachable: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.rows.iter().all(|r| r.normalized)
    }

    pub fn invalid_rows(&self) -> impl Iterator<Item = &RowCheck> {
        self.rows.iter().filter(|r| !r.normalized)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            writeln!(f, "OK")?;
        }
        for row in self.invalid_rows() {
            writeln!(f, "row {} sums to {}, expected top", row.state, row.total)?;
        }
        for s in &self.unreachable {
            writeln!(f, "note: state {s} is unreachable from the initial state")?;
        }
        Ok(())
    }
}
