//! Plausibility measures over the n-prefixes of a finite horizon, and the
//! exhaustive qualitativeness checks run on them.

use num_rational::Ratio;
use num_traits::{CheckedAdd, One, Zero};

use super::{Belief, Evidence, Prefix, Proposition, StateId, StateSpace, TransitionModel};
use crate::algebra::{CompareResult, DomainKind, PlausValue};
use crate::error::{Error, Result};

/// Default bound on the number of non-⊥ atoms the exhaustive checks accept.
pub const DEFAULT_ATOM_CAP: usize = 12;

/// Hard limit on prefix-table size for a [`FinitePrior`].
const MAX_PRIOR_ATOMS: u128 = 1 << 22;

/// How the plausibility of a union of atoms is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    /// With the domain's ⊕.
    Decomposable,
    /// By summing exact rationals, ordered numerically. Models probability-like
    /// measures, which are in general not qualitative.
    Additive,
}

/// A (not necessarily Markovian) plausibility measure on runs, restricted to
/// horizon `n` and given by its value on every n-prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePrior {
    space: StateSpace,
    kind: DomainKind,
    horizon: usize,
    combine: Combine,
    /// Indexed by the base-|S| number formed by `s1 … sn`.
    values: Vec<PlausValue>,
}

impl FinitePrior {
    /// A decomposable prior. Prefixes not listed are ⊥; the ⊕ of all values
    /// must be ⊤.
    pub fn new(
        space: StateSpace,
        kind: DomainKind,
        horizon: usize,
        entries: impl IntoIterator<Item = (Prefix, PlausValue)>,
    ) -> Result<Self> {
        let prior = FinitePrior::build(space, kind, horizon, Combine::Decomposable, entries)?;
        let total = PlausValue::sum(kind, &prior.values)?;
        if !total.is_top() {
            return Err(Error::PriorNotNormalized(total.to_string()));
        }
        Ok(prior)
    }

    /// An additive prior over exact rationals; the values must sum to 1.
    pub fn additive(space: StateSpace, horizon: usize, entries: impl IntoIterator<Item = (Prefix, PlausValue)>) -> Result<Self> {
        let prior = FinitePrior::build(space, DomainKind::Possibility, horizon, Combine::Additive, entries)?;
        let mut total: Ratio<u128> = Ratio::zero();
        for v in &prior.values {
            total = total.checked_add(&widen(v)).ok_or(Error::Overflow)?;
        }
        if !total.is_one() {
            return Err(Error::PriorNotNormalized(total.to_string()));
        }
        Ok(prior)
    }

    /// The Markovian prior of `model` restricted to horizon `n`.
    pub fn from_model(model: &TransitionModel, horizon: usize) -> Result<Self> {
        let space = model.space().clone();
        let size = table_size(space.len(), horizon)?;
        let mut values = Vec::with_capacity(size);
        for index in 0..size {
            let prefix = decode(&space, horizon, index);
            values.push(model.prefix_plausibility(&prefix)?);
        }
        Ok(FinitePrior { space, kind: model.kind(), horizon, combine: Combine::Decomposable, values })
    }

    fn build(
        space: StateSpace,
        kind: DomainKind,
        horizon: usize,
        combine: Combine,
        entries: impl IntoIterator<Item = (Prefix, PlausValue)>,
    ) -> Result<Self> {
        let size = table_size(space.len(), horizon)?;
        let mut values = vec![PlausValue::bottom(kind); size];
        for (prefix, value) in entries {
            if prefix.horizon() != horizon {
                return Err(Error::LengthMismatch { left: prefix.horizon(), right: horizon });
            }
            Prefix::new(&space, prefix.states().to_vec())?;
            if value.kind() != kind {
                return Err(crate::algebra::AlgebraError::DomainMismatch { left: kind, right: value.kind() }.into());
            }
            values[encode(&space, &prefix)] = value;
        }
        Ok(FinitePrior { space, kind, horizon, combine, values })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn combine(&self) -> Combine {
        self.combine
    }

    /// Value of an n-prefix.
    pub fn value(&self, prefix: &Prefix) -> Result<&PlausValue> {
        if prefix.horizon() != self.horizon {
            return Err(Error::LengthMismatch { left: prefix.horizon(), right: self.horizon });
        }
        Prefix::new(&self.space, prefix.states().to_vec())?;
        Ok(&self.values[encode(&self.space, prefix)])
    }

    /// All n-prefixes with their values, in lexicographic state order.
    pub fn atoms(&self) -> impl Iterator<Item = (Prefix, &PlausValue)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (decode(&self.space, self.horizon, i), v))
    }

    /// Values of the n-prefixes extending the m-prefix `prefix`, `m ≤ n`.
    pub fn extensions(&self, prefix: &Prefix) -> &[PlausValue] {
        let m = prefix.horizon();
        assert!(m <= self.horizon, "prefix longer than the prior horizon");
        let base = self.space.len();
        let block = base.pow((self.horizon - m) as u32);
        let start = prefix.states()[1..].iter().fold(0, |acc, s| acc * base + s.0) * block;
        &self.values[start..start + block]
    }

    /// Combined plausibility of a set of atoms, as a comparable value.
    fn combined<'a>(&self, atoms: impl IntoIterator<Item = &'a PlausValue>) -> Result<Combined> {
        match self.combine {
            Combine::Decomposable => Ok(Combined::Domain(PlausValue::sum(self.kind, atoms)?)),
            Combine::Additive => {
                let mut total: Ratio<u128> = Ratio::zero();
                for v in atoms {
                    total = total.checked_add(&widen(v)).ok_or(Error::Overflow)?;
                }
                Ok(Combined::Additive(total))
            }
        }
    }

    /// Whether `a` is believed at time `at` given `evidence`; evidence shorter
    /// than the horizon leaves later times unconstrained.
    pub fn believes(&self, evidence: &Evidence, a: &Proposition, at: usize) -> Result<bool> {
        evidence.check_space(&self.space)?;
        self.space.check_prop(a)?;
        if evidence.horizon() > self.horizon {
            return Err(Error::TimeOutOfRange { at: evidence.horizon(), horizon: self.horizon });
        }
        if at > self.horizon {
            return Err(Error::TimeOutOfRange { at, horizon: self.horizon });
        }
        let (mut yes, mut no) = (Vec::new(), Vec::new());
        for (prefix, v) in self.atoms() {
            if !prefix.consistent_with(evidence) {
                continue;
            }
            if a.contains(prefix.states()[at]) {
                yes.push(v);
            } else {
                no.push(v);
            }
        }
        match (self.combined(yes)?, self.combined(no)?) {
            (Combined::Domain(s), Combined::Domain(t)) => Ok(Belief::decide(s, t)?.holds),
            (Combined::Additive(s), Combined::Additive(t)) => {
                if s.is_zero() && t.is_zero() {
                    return Err(Error::InconsistentEvidence { time: None });
                }
                Ok(s > t)
            }
            _ => unreachable!("both sides use the same combination"),
        }
    }

    /// The non-⊥ atoms, ready for exhaustive event enumeration.
    pub fn view(&self, cap: usize) -> Result<AtomView> {
        let mut atoms = Vec::new();
        let mut values = Vec::new();
        for (prefix, v) in self.atoms() {
            if !v.is_bottom() {
                atoms.push(prefix);
                values.push(v.clone());
            }
        }
        if atoms.len() > cap.min(20) {
            return Err(Error::CapExceeded { what: "event enumeration over atoms", size: atoms.len() as u128, cap: cap.min(20) as u128 });
        }
        let k = atoms.len();
        let mut events = Vec::with_capacity(1 << k);
        for mask in 0u32..(1u32 << k) {
            events.push(self.combined((0..k).filter(|i| mask >> i & 1 == 1).map(|i| &values[i]))?);
        }
        Ok(AtomView { atoms, events })
    }

    /// Checks that for all pairwise-disjoint events `A, B, C`,
    /// `Pl(A∪B) > Pl(C)` and `Pl(A∪C) > Pl(B)` imply `Pl(A) > Pl(B∪C)`.
    /// Returns a violating triple, or `None` when the measure is qualitative.
    ///
    /// ⊥ atoms never change the plausibility of an event, so only non-⊥ atoms
    /// are enumerated and counted against `cap`.
    pub fn check_qualitative(&self, cap: usize) -> Result<Option<A2Witness>> {
        Ok(self.view(cap)?.find_a2_violation())
    }

    /// Checks that beliefs given the event `evidence` (a set of n-prefixes)
    /// are closed under intersection.
    pub fn check_closure_under_conjunction(&self, evidence: &[Prefix], cap: usize) -> Result<Option<ConjunctionWitness>> {
        let view = self.view(cap)?;
        let mask = view.mask_of(evidence);
        Ok(view.find_conjunction_violation(mask))
    }
}

fn widen(v: &PlausValue) -> Ratio<u128> {
    match v {
        PlausValue::Possibility(r) => Ratio::new(*r.numer() as u128, *r.denom() as u128),
        _ => unreachable!("additive priors hold possibility-kind rationals"),
    }
}

fn table_size(states: usize, horizon: usize) -> Result<usize> {
    let size = (states as u128).checked_pow(horizon as u32).unwrap_or(u128::MAX);
    if size > MAX_PRIOR_ATOMS {
        return Err(Error::CapExceeded { what: "prefix table", size, cap: MAX_PRIOR_ATOMS });
    }
    Ok(size as usize)
}

fn encode(space: &StateSpace, prefix: &Prefix) -> usize {
    prefix.states()[1..].iter().fold(0, |acc, s| acc * space.len() + s.0)
}

fn decode(space: &StateSpace, horizon: usize, mut index: usize) -> Prefix {
    let base = space.len();
    let mut states = vec![space.init(); horizon + 1];
    for t in (1..=horizon).rev() {
        states[t] = StateId(index % base);
        index /= base;
    }
    Prefix::from_vec(states)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Combined {
    Domain(PlausValue),
    Additive(Ratio<u128>),
}

impl Combined {
    fn exceeds(&self, other: &Combined) -> bool {
        match (self, other) {
            (Combined::Domain(a), Combined::Domain(b)) => a.compare(b).expect("values share a kind") == CompareResult::Greater,
            (Combined::Additive(a), Combined::Additive(b)) => a > b,
            _ => unreachable!("events of one prior share a combination"),
        }
    }
}

/// Pairwise-disjoint events violating the qualitativeness condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A2Witness {
    pub a: Vec<Prefix>,
    pub b: Vec<Prefix>,
    pub c: Vec<Prefix>,
}

/// Two believed events whose intersection is not believed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjunctionWitness {
    pub a: Vec<Prefix>,
    pub b: Vec<Prefix>,
}

/// The non-⊥ atoms of a prior with the plausibility of every event over them
/// precomputed. Events are bitmasks over [`AtomView::atoms`].
#[derive(Debug, Clone)]
pub struct AtomView {
    atoms: Vec<Prefix>,
    events: Vec<Combined>,
}

impl AtomView {
    pub fn atoms(&self) -> &[Prefix] {
        &self.atoms
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.atoms.len()) - 1) as u32
    }

    pub fn mask_of(&self, prefixes: &[Prefix]) -> u32 {
        self.atoms.iter().enumerate().filter(|(_, a)| prefixes.contains(a)).fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn prefixes(&self, mask: u32) -> Vec<Prefix> {
        self.atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.clone()).collect()
    }

    fn gt(&self, x: u32, y: u32) -> bool {
        self.events[x as usize].exceeds(&self.events[y as usize])
    }

    /// Whether `a` is believed given `e`: `Pl(A ∩ E) > Pl(Ā ∩ E)`.
    pub fn believed(&self, a: u32, e: u32) -> bool {
        self.gt(a & e, !a & e)
    }

    pub fn find_a2_violation(&self) -> Option<A2Witness> {
        let full = self.full_mask();
        for a in 0..=full {
            let rest = full & !a;
            // Submasks in increasing order, so the smallest witness is found first.
            let mut b = 0;
            loop {
                let rest2 = rest & !b;
                let mut c = 0;
                loop {
                    if self.gt(a | b, c) && self.gt(a | c, b) && !self.gt(a, b | c) {
                        return Some(A2Witness { a: self.prefixes(a), b: self.prefixes(b), c: self.prefixes(c) });
                    }
                    c = c.wrapping_sub(rest2) & rest2;
                    if c == 0 {
                        break;
                    }
                }
                b = b.wrapping_sub(rest) & rest;
                if b == 0 {
                    break;
                }
            }
        }
        None
    }

    pub fn find_conjunction_violation(&self, e: u32) -> Option<ConjunctionWitness> {
        let mut beliefs = Vec::new();
        let mut a = e;
        loop {
            if self.believed(a, e) {
                beliefs.push(a);
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & e;
        }
        for (i, &x) in beliefs.iter().enumerate() {
            for &y in &beliefs[i + 1..] {
                if !self.believed(x & y, e) {
                    return Some(ConjunctionWitness { a: self.prefixes(x), b: self.prefixes(y) });
                }
            }
        }
        None
    }
}
