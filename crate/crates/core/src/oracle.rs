//! Reference semantics by explicit prefix enumeration.
//!
//! Everything here is computed from the closed-form prefix product and
//! nothing else, so it serves as the independent check on [`crate::filter`]
//! and on the depth-first queries in [`crate::model`].

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::algebra::{AlgebraError, DomainKind, PlausValue, Rank};
use crate::error::{Error, Result};
use crate::model::{Belief, Combine, Evidence, FinitePrior, Prefix, Proposition, StateId, StateSpace, TransitionModel};

/// Largest `|S|^n` that [`enumerate`] accepts by default.
pub const ENUMERATION_CAP: u128 = 10_000_000;

/// Every non-⊥ n-prefix with its plausibility, in lexicographic state order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTable {
    pub horizon: usize,
    pub kind: DomainKind,
    pub rows: Vec<(Prefix, PlausValue)>,
}

impl PrefixTable {
    /// ⊕ over all rows.
    pub fn total(&self) -> PlausValue {
        PlausValue::sum(self.kind, self.rows.iter().map(|(_, v)| v)).expect("rows share the table kind")
    }

    /// Rows whose value equals the table's ⊕ (the most plausible prefixes,
    /// for totally ordered domains).
    pub fn best(&self) -> Vec<&(Prefix, PlausValue)> {
        let total = self.total();
        self.rows.iter().filter(|(_, v)| *v == total).collect()
    }

    pub fn value(&self, prefix: &Prefix) -> PlausValue {
        self.rows.iter().find(|(p, _)| p == prefix).map_or_else(|| PlausValue::bottom(self.kind), |(_, v)| v.clone())
    }

    /// One row per line: `s0>s1>…>sn<TAB>value`.
    pub fn render(&self, space: &StateSpace) -> String {
        let mut out = String::new();
        for (p, v) in &self.rows {
            writeln!(out, "{}\t{v}", space.render_prefix(p)).expect("writing to a String cannot fail");
        }
        out
    }
}

/// Enumerates the n-prefixes consistent with `evidence` (all of them when
/// `None`). Evidence may be shorter than `horizon`.
pub fn enumerate(model: &TransitionModel, horizon: usize, evidence: Option<&Evidence>) -> Result<PrefixTable> {
    enumerate_capped(model, horizon, evidence, ENUMERATION_CAP)
}

pub fn enumerate_capped(model: &TransitionModel, horizon: usize, evidence: Option<&Evidence>, cap: u128) -> Result<PrefixTable> {
    let space = model.space();
    let size = (space.len() as u128).checked_pow(horizon as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::CapExceeded { what: "prefix enumeration", size, cap });
    }
    let evidence = match evidence {
        Some(e) if e.horizon() > horizon => return Err(Error::TimeOutOfRange { at: e.horizon(), horizon }),
        Some(e) => e.extended_to(horizon, space.len()),
        None => Evidence::vacuous(horizon, space.len()),
    };
    for o in evidence.observations() {
        if o.universe() != space.len() {
            return Err(Error::SizeMismatch { expected: space.len(), found: o.universe() });
        }
    }

    let mut rows = Vec::new();
    let mut path = vec![space.init()];
    collect(model, &evidence, horizon, &mut path, &mut rows)?;
    Ok(PrefixTable { horizon, kind: model.kind(), rows })
}

fn collect(
    model: &TransitionModel,
    evidence: &Evidence,
    horizon: usize,
    path: &mut Vec<StateId>,
    rows: &mut Vec<(Prefix, PlausValue)>,
) -> Result<()> {
    let time = path.len() - 1;
    if time == horizon {
        let prefix = Prefix::from_vec(path.clone());
        let value = model.prefix_plausibility(&prefix)?;
        if !value.is_bottom() {
            rows.push((prefix, value));
        }
        return Ok(());
    }
    let last = *path.last().expect("path starts at the initial state");
    for next in evidence.observation(time + 1).iter() {
        // A ⊥ step makes every extension ⊥.
        if model.transition(last, next).is_bottom() {
            continue;
        }
        path.push(next);
        collect(model, evidence, horizon, path, rows)?;
        path.pop();
    }
    Ok(())
}

/// Belief in `a` at time `at`, decided from the enumerated prefix table.
pub fn oracle_belief(model: &TransitionModel, evidence: &Evidence, a: &Proposition, at: usize) -> Result<Belief> {
    if at > evidence.horizon() {
        return Err(Error::TimeOutOfRange { at, horizon: evidence.horizon() });
    }
    let table = enumerate(model, evidence.horizon(), Some(evidence))?;
    let (yes, no): (Vec<_>, Vec<_>) = table.rows.iter().partition(|(p, _)| a.contains(p.states()[at]));
    let kind = model.kind();
    Belief::decide(PlausValue::sum(kind, yes.iter().map(|(_, v)| v))?, PlausValue::sum(kind, no.iter().map(|(_, v)| v))?)
}

pub fn oracle_believes(model: &TransitionModel, evidence: &Evidence, a: &Proposition, at: usize) -> Result<bool> {
    Ok(oracle_belief(model, evidence, a, at)?.holds)
}

fn require_kappa(kind: DomainKind) -> Result<()> {
    if kind == DomainKind::Kappa {
        Ok(())
    } else {
        Err(AlgebraError::DomainMismatch { left: DomainKind::Kappa, right: kind }.into())
    }
}

/// `κ(A^(at) | E) = κ(A^(at) ∩ E) − κ(E)`.
pub fn conditional_kappa(model: &TransitionModel, evidence: &Evidence, a: &Proposition, at: usize) -> Result<Rank> {
    if at > evidence.horizon() {
        return Err(Error::TimeOutOfRange { at, horizon: evidence.horizon() });
    }
    conditional_kappa_event(model, evidence, |p| a.contains(p.states()[at]))
}

/// Conditional rank of the event made of the evidence-consistent prefixes
/// satisfying `event`.
pub fn conditional_kappa_event(model: &TransitionModel, evidence: &Evidence, event: impl Fn(&Prefix) -> bool) -> Result<Rank> {
    require_kappa(model.kind())?;
    let table = enumerate(model, evidence.horizon(), Some(evidence))?;
    let rank =
        |rows: &mut dyn Iterator<Item = &(Prefix, PlausValue)>| rows.filter_map(|(_, v)| v.as_rank()).min().unwrap_or(Rank::Infinite);
    let total = rank(&mut table.rows.iter());
    if total.is_infinite() {
        return Err(Error::InconsistentEvidence { time: None });
    }
    let joint = rank(&mut table.rows.iter().filter(|(p, _)| event(p)));
    Ok(joint.residual(total).expect("a subevent is never more plausible than the whole"))
}

/// A Markovian model whose states are histories `⟨s0, …, sm⟩`, `m ≤ n`, of
/// a source space. Its prefix plausibilities reproduce a given prior.
#[derive(Debug, Clone)]
pub struct HistoryModel {
    model: TransitionModel,
    histories: Vec<Prefix>,
    index: HashMap<Prefix, StateId>,
    source: StateSpace,
    horizon: usize,
}

impl HistoryModel {
    pub fn model(&self) -> &TransitionModel {
        &self.model
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn source(&self) -> &StateSpace {
        &self.source
    }

    pub fn history(&self, id: StateId) -> &Prefix {
        &self.histories[id.index()]
    }

    /// The source state a history ends in.
    pub fn project(&self, id: StateId) -> StateId {
        self.histories[id.index()].last()
    }

    /// The history-model prefix simulating a source prefix.
    pub fn lift(&self, prefix: &Prefix) -> Result<Prefix> {
        if prefix.horizon() > self.horizon {
            return Err(Error::TimeOutOfRange { at: prefix.horizon(), horizon: self.horizon });
        }
        let ids = (0..=prefix.horizon()).map(|m| self.index[&prefix.truncated(m)]).collect();
        Prefix::new(self.model.space(), ids)
    }

    /// Histories whose last state lies in `a`.
    pub fn lift_proposition(&self, a: &Proposition) -> Proposition {
        Proposition::from_ids(self.histories.len(), (0..self.histories.len()).map(StateId).filter(|&h| a.contains(self.project(h))))
    }

    pub fn lift_evidence(&self, evidence: &Evidence) -> Result<Evidence> {
        Evidence::new(evidence.observations().iter().map(|o| self.lift_proposition(o)).collect())
    }
}

/// Builds the history model simulating a kappa prior up to its horizon.
///
/// The transition from history `h` to `h·s` is `κ(h·s) − κ(h)`, where the
/// rank of a shorter history is the minimum over its full-horizon extensions
/// and `∞ − ∞ = 0` on dead branches. Histories of full length have no
/// outgoing transitions.
pub fn markovianize_kappa(prior: &FinitePrior) -> Result<HistoryModel> {
    require_kappa(prior.kind())?;
    if prior.combine() != Combine::Decomposable {
        return Err(Error::Parse { line: None, message: "only decomposable priors can be markovianized".into() });
    }
    let source = prior.space().clone();
    let horizon = prior.horizon();

    let mut histories = vec![Prefix::initial(&source)];
    let mut frontier = 0;
    for _ in 0..horizon {
        let end = histories.len();
        for i in frontier..end {
            for s in source.ids() {
                let next = histories[i].extended(s);
                histories.push(next);
            }
        }
        frontier = end;
    }
    let index: HashMap<Prefix, StateId> = histories.iter().cloned().enumerate().map(|(i, h)| (h, StateId(i))).collect();

    let rank_of = |h: &Prefix| -> Rank { prior.extensions(h).iter().filter_map(PlausValue::as_rank).min().unwrap_or(Rank::Infinite) };
    let names: Vec<String> = histories.iter().map(|h| h.states().iter().map(|&s| source.name(s)).collect::<Vec<_>>().join(".")).collect();
    let space = StateSpace::new(&names, &names[0])?;

    let mut entries = Vec::new();
    for h in histories.iter().filter(|h| h.horizon() < horizon) {
        let here = rank_of(h);
        for s in source.ids() {
            let next = h.extended(s);
            let step = rank_of(&next).residual(here).expect("an extension is never more plausible than its history");
            entries.push((index[h], index[&next], PlausValue::Kappa(step)));
        }
    }
    let model = TransitionModel::new(space, DomainKind::Kappa, entries)?;
    Ok(HistoryModel { model, histories, index, source, horizon })
}
