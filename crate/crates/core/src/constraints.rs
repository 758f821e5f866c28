//! Partially specified transitions: a preorder on transition variables
//! `x_{s,s′}` plus impossibility marks, and what it entails about prefixes
//! and beliefs for every Markovian measure consistent with it.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{DomainKind, PlausValue, Rank};
use crate::error::{Error, Result};
use crate::model::{Evidence, Prefix, Proposition, StateId, StateSpace, TransitionModel};
use crate::oracle::ENUMERATION_CAP;

/// The transition variable `x_{from,to}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub from: StateId,
    pub to: StateId,
}

impl Var {
    pub fn new(from: StateId, to: StateId) -> Self {
        Var { from, to }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Le,
    Eq,
    Lt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Lt => "<",
        }
    }
}

impl std::str::FromStr for Rel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "<=" => Ok(Rel::Le),
            "=" => Ok(Rel::Eq),
            "<" => Ok(Rel::Lt),
            _ => Err(format!("unknown relation `{s}`, expected <, <= or =")),
        }
    }
}

/// `lhs REL rhs`, read in plausibility order: `x < y` means `x` is strictly
/// less plausible than `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub lhs: Var,
    pub rel: Rel,
    pub rhs: Var,
}

/// Verdict of [`ConstraintSet::compare_prefixes`] for `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrefixOrder {
    /// `p ≺ q`.
    Below,
    /// `q ≺ p`.
    Above,
    /// `p ≈ q`.
    Equivalent,
    Incomparable,
}

impl PrefixOrder {
    pub fn reverse(self) -> Self {
        match self {
            PrefixOrder::Below => PrefixOrder::Above,
            PrefixOrder::Above => PrefixOrder::Below,
            other => other,
        }
    }

    pub fn is_le(self) -> bool {
        matches!(self, PrefixOrder::Below | PrefixOrder::Equivalent)
    }
}

impl fmt::Display for PrefixOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrefixOrder::Below => "BELOW",
            PrefixOrder::Above => "ABOVE",
            PrefixOrder::Equivalent => "EQUIV",
            PrefixOrder::Incomparable => "INCOMPARABLE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntailedBelief {
    /// Every maximal prefix passes through the proposition.
    Believed,
    /// The maximal prefixes are pairwise equivalent and some miss the
    /// proposition.
    NotBelieved,
    /// Consistent measures may disagree.
    Undetermined,
}

impl fmt::Display for EntailedBelief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntailedBelief::Believed => "BELIEVED",
            EntailedBelief::NotBelieved => "NOT-BELIEVED",
            EntailedBelief::Undetermined => "UNDETERMINED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitMatrix {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(size: usize) -> Self {
        let words = size.div_ceil(64);
        BitMatrix { size, words, bits: vec![0; size * words] }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    /// Reflexive-transitive closure (Warshall, one word at a time).
    fn close(&mut self) {
        for i in 0..self.size {
            self.set(i, i);
        }
        for k in 0..self.size {
            for i in 0..self.size {
                if i != k && self.get(i, k) {
                    for w in 0..self.words {
                        self.bits[i * self.words + w] |= self.bits[k * self.words + w];
                    }
                }
            }
        }
    }
}

/// A closed set of constraints over the transition variables of a space.
///
/// Node `|S|²` of the closure stands for ⊥: it lies below every variable,
/// and impossible variables lie below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    space: StateSpace,
    relations: Vec<Constraint>,
    impossible: Vec<bool>,
    le: BitMatrix,
}

impl ConstraintSet {
    pub fn new(space: StateSpace, relations: Vec<Constraint>, impossible: impl IntoIterator<Item = Var>) -> Result<Self> {
        let n = space.len();
        let vars = n * n;
        let bot = vars;
        let mut le = BitMatrix::new(vars + 1);
        let mut marks = vec![false; vars];
        for v in impossible {
            space.check_id(v.from)?;
            space.check_id(v.to)?;
            marks[v.from.index() * n + v.to.index()] = true;
        }
        for c in &relations {
            for v in [c.lhs, c.rhs] {
                space.check_id(v.from)?;
                space.check_id(v.to)?;
            }
        }
        let index = |v: Var| v.from.index() * n + v.to.index();
        for (i, &marked) in marks.iter().enumerate() {
            le.set(bot, i);
            if marked {
                le.set(i, bot);
            }
        }
        for c in &relations {
            le.set(index(c.lhs), index(c.rhs));
            if c.rel == Rel::Eq {
                le.set(index(c.rhs), index(c.lhs));
            }
        }
        le.close();
        let set = ConstraintSet { space, relations, impossible: marks, le };
        for c in set.relations.iter().filter(|c| c.rel == Rel::Lt) {
            if set.le.get(index(c.rhs), index(c.lhs)) {
                return Err(Error::ConstraintCycle { lhs: set.var_name(c.lhs), rhs: set.var_name(c.rhs) });
            }
        }
        Ok(set)
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn relations(&self) -> &[Constraint] {
        &self.relations
    }

    /// Variables marked impossible in the input, row by row.
    pub fn marked_impossible(&self) -> impl Iterator<Item = Var> + '_ {
        self.vars().filter(|&v| self.impossible[self.index(v)])
    }

    /// Every variable, row by row.
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.space.ids().flat_map(move |f| self.space.ids().map(move |t| Var::new(f, t)))
    }

    pub fn var_name(&self, v: Var) -> String {
        format!("{},{}", self.space.name(v.from), self.space.name(v.to))
    }

    fn index(&self, v: Var) -> usize {
        v.from.index() * self.space.len() + v.to.index()
    }

    /// Whether `v` is forced to ⊥: marked impossible or derived equal to
    /// such a variable.
    pub fn is_impossible(&self, v: Var) -> bool {
        self.le.get(self.index(v), self.space.len() * self.space.len())
    }

    pub fn le(&self, x: Var, y: Var) -> bool {
        self.le.get(self.index(x), self.index(y))
    }

    pub fn lt(&self, x: Var, y: Var) -> bool {
        self.le(x, y) && !self.le(y, x)
    }

    pub fn entails(&self, query: &Constraint) -> bool {
        let (x, y) = (query.lhs, query.rhs);
        match query.rel {
            Rel::Le => self.le(x, y),
            Rel::Eq => self.le(x, y) && self.le(y, x),
            Rel::Lt => self.lt(x, y),
        }
    }

    /// The first state `s` and variable `y` with `x_{s,s′} < y` for every
    /// `s′`, or `None` when the set is safe.
    pub fn check_safe(&self) -> Option<(StateId, Var)> {
        for s in self.space.ids() {
            for y in self.vars() {
                if self.space.ids().all(|t| self.lt(Var::new(s, t), y)) {
                    return Some((s, y));
                }
            }
        }
        None
    }

    pub fn ensure_safe(&self) -> Result<()> {
        match self.check_safe() {
            None => Ok(()),
            Some((s, y)) => Err(Error::UnsafeConstraints { state: self.space.name(s).to_string(), dominator: self.var_name(y) }),
        }
    }

    fn has_impossible_step(&self, p: &Prefix) -> bool {
        p.steps().any(|(a, b)| self.is_impossible(Var::new(a, b)))
    }

    /// `p ≼ q`.
    pub fn prefix_le(&self, p: &Prefix, q: &Prefix) -> Result<bool> {
        if p.horizon() != q.horizon() {
            return Err(Error::LengthMismatch { left: p.horizon(), right: q.horizon() });
        }
        if self.has_impossible_step(p) {
            return Ok(true);
        }
        let left: Vec<Var> = p.steps().map(|(a, b)| Var::new(a, b)).collect();
        let right: Vec<Var> = q.steps().map(|(a, b)| Var::new(a, b)).collect();
        Ok(perfect_matching(left.len(), |i, j| self.le(left[i], right[j])))
    }

    pub fn compare_prefixes(&self, p: &Prefix, q: &Prefix) -> Result<PrefixOrder> {
        Ok(match (self.prefix_le(p, q)?, self.prefix_le(q, p)?) {
            (true, true) => PrefixOrder::Equivalent,
            (true, false) => PrefixOrder::Below,
            (false, true) => PrefixOrder::Above,
            (false, false) => PrefixOrder::Incomparable,
        })
    }

    /// Evidence-consistent n-prefixes without impossible steps, in
    /// lexicographic order.
    pub fn possible_prefixes(&self, horizon: usize, evidence: &Evidence) -> Result<Vec<Prefix>> {
        let n = self.space.len();
        let size = (n as u128).checked_pow(horizon as u32).unwrap_or(u128::MAX);
        if size > ENUMERATION_CAP {
            return Err(Error::CapExceeded { what: "prefix enumeration", size, cap: ENUMERATION_CAP });
        }
        if evidence.horizon() > horizon {
            return Err(Error::TimeOutOfRange { at: evidence.horizon(), horizon });
        }
        evidence.check_space(&self.space)?;
        let evidence = evidence.extended_to(horizon, n);
        let mut out = Vec::new();
        let mut stack = vec![Prefix::initial(&self.space)];
        while let Some(p) = stack.pop() {
            if p.horizon() == horizon {
                out.push(p);
                continue;
            }
            let last = p.last();
            for next in evidence.observation(p.horizon() + 1).iter().collect::<Vec<_>>().into_iter().rev() {
                if !self.is_impossible(Var::new(last, next)) {
                    stack.push(p.extended(next));
                }
            }
        }
        Ok(out)
    }

    /// `MAX^n(E)`: the ≺-maximal possible prefixes consistent with `evidence`.
    pub fn max_prefixes(&self, horizon: usize, evidence: &Evidence) -> Result<Vec<Prefix>> {
        let candidates = self.possible_prefixes(horizon, evidence)?;
        let mut maxima = Vec::new();
        'outer: for p in &candidates {
            for q in &candidates {
                if self.compare_prefixes(p, q)? == PrefixOrder::Below {
                    continue 'outer;
                }
            }
            maxima.push(p.clone());
        }
        Ok(maxima)
    }

    /// What every qualitative Markovian measure consistent with the set
    /// believes about `a` at time `at`, given `evidence`.
    pub fn entailed_belief(&self, evidence: &Evidence, a: &Proposition, at: usize) -> Result<EntailedBelief> {
        self.ensure_safe()?;
        self.space.check_prop(a)?;
        let horizon = evidence.horizon();
        if at > horizon {
            return Err(Error::TimeOutOfRange { at, horizon });
        }
        let maxima = self.max_prefixes(horizon, evidence)?;
        if maxima.is_empty() {
            return Err(Error::InconsistentEvidence { time: None });
        }
        if maxima.iter().all(|p| a.contains(p.states()[at])) {
            return Ok(EntailedBelief::Believed);
        }
        for (i, p) in maxima.iter().enumerate() {
            for q in &maxima[i + 1..] {
                if self.compare_prefixes(p, q)? != PrefixOrder::Equivalent {
                    return Ok(EntailedBelief::Undetermined);
                }
            }
        }
        Ok(EntailedBelief::NotBelieved)
    }

    /// A concrete kappa model satisfying every constraint.
    ///
    /// Possible variables are grouped into classes of mutually `=`
    /// variables. Classes with nothing strictly above them get rank 0; every
    /// other class sits a random gap of 1 to 3 below the deepest class above
    /// it. Impossible variables get ∞.
    pub fn sample_consistent_kappa(&self, seed: u64) -> Result<TransitionModel> {
        self.ensure_safe()?;
        let possible: Vec<Var> = self.vars().filter(|&v| !self.is_impossible(v)).collect();

        let mut class_of = vec![usize::MAX; possible.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..possible.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let members: Vec<usize> =
                (i..possible.len()).filter(|&j| self.le(possible[i], possible[j]) && self.le(possible[j], possible[i])).collect();
            for &j in &members {
                class_of[j] = classes.len();
            }
            classes.push(members);
        }
        let rep = |c: usize| possible[classes[c][0]];
        let above: Vec<Vec<usize>> =
            (0..classes.len()).map(|c| (0..classes.len()).filter(|&d| self.lt(rep(c), rep(d))).collect()).collect();

        for s in self.space.ids() {
            let has_top = possible.iter().enumerate().any(|(i, v)| v.from == s && above[class_of[i]].is_empty());
            if !has_top {
                return Err(Error::NoKappaWitness { state: self.space.name(s).to_string() });
            }
        }

        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by_key(|&c| (above[c].len(), classes[c][0]));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut depth = vec![0u64; classes.len()];
        for &c in &order {
            if let Some(deepest) = above[c].iter().map(|&d| depth[d]).max() {
                depth[c] = deepest + rng.random_range(1..=3);
            }
        }

        let entries = possible.iter().enumerate().map(|(i, v)| (v.from, v.to, PlausValue::Kappa(Rank::Finite(depth[class_of[i]]))));
        TransitionModel::new(self.space.clone(), DomainKind::Kappa, entries)
    }

    /// Whether a kappa model satisfies every constraint and impossibility
    /// mark, with `<` between variables that are strictly ordered in the
    /// closure.
    pub fn is_satisfied_by(&self, model: &TransitionModel) -> bool {
        let rank = |v: Var| model.transition(v.from, v.to).as_rank();
        self.vars().all(|x| {
            let rx = rank(x);
            if rx.is_none() {
                return false;
            }
            if self.is_impossible(x) != rx.is_some_and(Rank::is_infinite) {
                return false;
            }
            self.vars().all(|y| {
                let ry = rank(y);
                if self.lt(x, y) {
                    ry < rx
                } else if self.le(x, y) {
                    ry <= rx
                } else {
                    true
                }
            })
        })
    }
}

/// Kuhn's augmenting-path search for a perfect matching in the bipartite
/// graph `{0..n} × {0..n}` with edges `edge(i, j)`. Left vertices are tried
/// in index order, right vertices likewise.
fn perfect_matching(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    fn augment(i: usize, n: usize, edge: &dyn Fn(usize, usize) -> bool, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for j in 0..n {
            if !seen[j] && edge(i, j) {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, n, edge, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; n];
    (0..n).all(|i| {
        let mut seen = vec![false; n];
        augment(i, n, &edge, &mut seen, &mut owner)
    })
}
