use std::fmt;

use crate::error::{Error, Result};

/// Index of a state in its [`StateSpace`], in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Ordered, named states with a distinguished initial state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSpace {
    names: Vec<String>,
    init: StateId,
}

impl StateSpace {
    pub fn new<S: AsRef<str>>(names: &[S], init: &str) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        let mut owned: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || c == ',' || c == '>') {
                return Err(Error::Parse { line: None, message: format!("invalid state identifier `{n}`") });
            }
            if owned.iter().any(|o| o == n) {
                return Err(Error::DuplicateState(n.to_string()));
            }
            owned.push(n.to_string());
        }
        let init = owned.iter().position(|n| n == init).map(StateId).ok_or_else(|| Error::UnknownState(init.to_string()))?;
        Ok(StateSpace { names: owned, init })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.names.len()).map(StateId)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: StateId) -> &str {
        &self.names[id.0]
    }

    pub fn id(&self, name: &str) -> Result<StateId> {
        self.names.iter().position(|n| n == name).map(StateId).ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub(crate) fn check_id(&self, id: StateId) -> Result<()> {
        if id.0 < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{}", id.0)))
        }
    }

    pub fn proposition<S: AsRef<str>>(&self, names: &[S]) -> Result<Proposition> {
        let mut p = Proposition::empty(self.len());
        for n in names {
            p.insert(self.id(n.as_ref())?);
        }
        Ok(p)
    }

    /// Parses a comma-separated state list; `*` denotes every state and the
    /// empty string the empty set.
    pub fn parse_set(&self, text: &str) -> Result<Proposition> {
        let text = text.trim();
        if text == "*" {
            return Ok(Proposition::full(self.len()));
        }
        let names: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        self.proposition(&names)
    }

    pub fn prefix<S: AsRef<str>>(&self, names: &[S]) -> Result<Prefix> {
        let ids = names.iter().map(|n| self.id(n.as_ref())).collect::<Result<Vec<_>>>()?;
        Prefix::new(self, ids)
    }

    /// Parses `s0>s1>…>sn`.
    pub fn parse_prefix(&self, text: &str) -> Result<Prefix> {
        let names: Vec<&str> = text.split('>').map(str::trim).collect();
        self.prefix(&names)
    }

    pub fn render_set(&self, p: &Proposition) -> String {
        p.iter().map(|id| self.name(id)).collect::<Vec<_>>().join(",")
    }

    pub fn render_prefix(&self, p: &Prefix) -> String {
        p.states().iter().map(|&id| self.name(id)).collect::<Vec<_>>().join(">")
    }

    pub(crate) fn check_prop(&self, p: &Proposition) -> Result<()> {
        if p.universe() == self.len() {
            Ok(())
        } else {
            Err(Error::SizeMismatch { expected: self.len(), found: p.universe() })
        }
    }
}

impl fmt::Display for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} init {}", self.names.join(", "), self.name(self.init))
    }
}

/// A set of states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Proposition {
    members: Vec<bool>,
}

impl Proposition {
    pub fn empty(universe: usize) -> Self {
        Proposition { members: vec![false; universe] }
    }

    pub fn full(universe: usize) -> Self {
        Proposition { members: vec![true; universe] }
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = StateId>) -> Self {
        let mut p = Proposition::empty(universe);
        for id in ids {
            p.insert(id);
        }
        p
    }

    /// Builds the set whose members are the set bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        Proposition { members: (0..universe).map(|i| mask >> i & 1 == 1).collect() }
    }

    pub fn insert(&mut self, id: StateId) {
        self.members[id.0] = true;
    }

    pub fn contains(&self, id: StateId) -> bool {
        self.members.get(id.0).copied().unwrap_or(false)
    }

    pub fn complement(&self) -> Self {
        Proposition { members: self.members.iter().map(|m| !m).collect() }
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&m| m)
    }

    pub fn is_subset(&self, other: &Proposition) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    /// Number of states in the underlying space.
    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.members.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| StateId(i))
    }
}

/// An n-prefix `[s0, s1, …, sn]`: the event of all runs with this initial
/// segment. Always starts at the initial state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prefix(Vec<StateId>);

impl Prefix {
    pub fn new(space: &StateSpace, states: Vec<StateId>) -> Result<Self> {
        let first = *states.first().ok_or(Error::EmptyPrefix)?;
        for &s in &states {
            space.check_id(s)?;
        }
        if first != space.init() {
            return Err(Error::NotInitial { found: space.name(first).to_string(), init: space.name(space.init()).to_string() });
        }
        Ok(Prefix(states))
    }

    /// The 0-prefix `[s0]`.
    pub fn initial(space: &StateSpace) -> Self {
        Prefix(vec![space.init()])
    }

    pub(crate) fn from_vec(states: Vec<StateId>) -> Self {
        Prefix(states)
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    /// The horizon `n` of `[s0, …, sn]`.
    pub fn horizon(&self) -> usize {
        self.0.len() - 1
    }

    pub fn at(&self, time: usize) -> Option<StateId> {
        self.0.get(time).copied()
    }

    pub fn last(&self) -> StateId {
        *self.0.last().expect("prefixes are nonempty")
    }

    /// Transition steps `(s_i, s_{i+1})` in time order.
    pub fn steps(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn extended(&self, next: StateId) -> Self {
        let mut v = self.0.clone();
        v.push(next);
        Prefix(v)
    }

    pub fn truncated(&self, horizon: usize) -> Self {
        Prefix(self.0[..=horizon.min(self.horizon())].to_vec())
    }

    /// Whether the prefix satisfies every observation, the observation for
    /// time `t` being `evidence.observation(t)`.
    pub fn consistent_with(&self, evidence: &Evidence) -> bool {
        (1..=evidence.horizon().min(self.horizon())).all(|t| evidence.observation(t).contains(self.0[t]))
    }
}

/// Observations `[O1, …, On]`, one per time step starting at time 1. Denotes
/// the event `O1^(1) ∩ … ∩ On^(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Evidence {
    observations: Vec<Proposition>,
}

impl Evidence {
    pub fn new(observations: Vec<Proposition>) -> Result<Self> {
        if let Some(i) = observations.iter().position(Proposition::is_empty) {
            return Err(Error::EmptyObservation { time: i + 1 });
        }
        if let Some(first) = observations.first() {
            let u = first.universe();
            if let Some(bad) = observations.iter().find(|o| o.universe() != u) {
                return Err(Error::SizeMismatch { expected: u, found: bad.universe() });
            }
        }
        Ok(Evidence { observations })
    }

    pub fn none() -> Self {
        Evidence { observations: Vec::new() }
    }

    /// `n` vacuous observations.
    pub fn vacuous(horizon: usize, universe: usize) -> Self {
        Evidence { observations: vec![Proposition::full(universe); horizon] }
    }

    pub fn horizon(&self) -> usize {
        self.observations.len()
    }

    /// The observation made at time `t`, `1 ≤ t ≤ n`.
    pub fn observation(&self, t: usize) -> &Proposition {
        &self.observations[t - 1]
    }

    pub fn observations(&self) -> &[Proposition] {
        &self.observations
    }

    /// This evidence followed by vacuous observations up to `horizon`.
    pub fn extended_to(&self, horizon: usize, universe: usize) -> Self {
        let mut observations = self.observations.clone();
        while observations.len() < horizon {
            observations.push(Proposition::full(universe));
        }
        Evidence { observations }
    }

    pub fn then(&self, observation: Proposition) -> Result<Self> {
        let mut observations = self.observations.clone();
        observations.push(observation);
        Evidence::new(observations)
    }

    pub(crate) fn check_space(&self, space: &StateSpace) -> Result<()> {
        self.observations.iter().try_for_each(|o| space.check_prop(o))
    }
}
