//! Algebraic plausibility domains `(D, ⊕, ⊗)`.
//!
//! Three concrete domains are provided:
//!
//! * `kappa`: ranks in `ℕ ∪ {∞}` with `⊕ = min`, `⊗ = +`. The domain order is
//!   the reverse of the numeric order, so `0` is ⊤ and `∞` is ⊥.
//! * `possibility`: exact rationals in `[0, 1]` with `⊕ = max`, `⊗ = min`.
//!   `⊗` is monotone but not strictly monotone.
//! * `kappa_product K`: width-`K` vectors of ranks with pointwise operations
//!   and the pointwise (partial) order.
//!
//! Every value carries its domain tag, and mixing tags is reported as
//! [`AlgebraError::DomainMismatch`].

mod laws;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

pub use laws::{check_domain_laws, Law, LawReport, LawViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: DomainKind, right: DomainKind },
    #[error("bad {domain} literal `{text}`")]
    BadLiteral { domain: &'static str, text: String },
    #[error("possibility value {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("kappa_product width must be a positive integer")]
    ZeroWidth,
    #[error("kappa_product literal has {found} coordinates, expected {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
}

/// Which algebraic domain a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Kappa,
    Possibility,
    KappaProduct(usize),
}

impl DomainKind {
    pub fn kappa_product(width: usize) -> Result<Self, AlgebraError> {
        if width == 0 {
            return Err(AlgebraError::ZeroWidth);
        }
        Ok(DomainKind::KappaProduct(width))
    }

    /// Whether `≤_D` is a total order on this domain.
    pub fn is_totally_ordered(self) -> bool {
        !matches!(self, DomainKind::KappaProduct(w) if w > 1)
    }

    /// Whether `⊗` is strictly monotone. Fails only for `possibility`.
    pub fn has_strict_times(self) -> bool {
        !matches!(self, DomainKind::Possibility)
    }

    /// Parses the header form used in files: `kappa`, `possibility`, or
    /// `kappa_product K`.
    pub fn parse_words(words: &[&str]) -> Result<Self, AlgebraError> {
        match words {
            ["kappa"] => Ok(DomainKind::Kappa),
            ["possibility"] => Ok(DomainKind::Possibility),
            ["kappa_product", k] => {
                let width: usize = k.parse().map_err(|_| AlgebraError::UnknownDomain(words.join(" ")))?;
                DomainKind::kappa_product(width)
            }
            _ => Err(AlgebraError::UnknownDomain(words.join(" "))),
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Kappa => f.write_str("kappa"),
            DomainKind::Possibility => f.write_str("possibility"),
            DomainKind::KappaProduct(w) => write!(f, "kappa_product {w}"),
        }
    }
}

impl FromStr for DomainKind {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let words: Vec<&str> = s.split_whitespace().collect();
        DomainKind::parse_words(&words)
    }
}

/// An extended natural number, `ℕ ∪ {∞}`, ordered numerically.
///
/// Addition saturates: `∞ + x = ∞`, and overflow of the finite part is
/// treated as `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub const ZERO: Rank = Rank::Finite(0);

    pub fn is_infinite(self) -> bool {
        matches!(self, Rank::Infinite)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Rank::Finite(v) => Some(v),
            Rank::Infinite => None,
        }
    }

    /// `self − other` with the convention `∞ − ∞ = 0`; `None` when the
    /// result would be negative or when subtracting `∞` from a finite rank.
    pub fn residual(self, other: Rank) -> Option<Rank> {
        match (self, other) {
            (Rank::Infinite, Rank::Infinite) => Some(Rank::ZERO),
            (Rank::Infinite, Rank::Finite(_)) => Some(Rank::Infinite),
            (Rank::Finite(_), Rank::Infinite) => None,
            (Rank::Finite(a), Rank::Finite(b)) => a.checked_sub(b).map(Rank::Finite),
        }
    }
}

impl Add for Rank {
    type Output = Rank;

    fn add(self, rhs: Rank) -> Rank {
        match (self, rhs) {
            (Rank::Finite(a), Rank::Finite(b)) => a.checked_add(b).map_or(Rank::Infinite, Rank::Finite),
            _ => Rank::Infinite,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(v) => write!(f, "{v}"),
            Rank::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Rank {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::BadLiteral { domain: "kappa", text: s.to_string() };
        if s == "inf" {
            return Ok(Rank::Infinite);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<u64>().map(Rank::Finite).map_err(|_| bad())
    }
}

/// Outcome of comparing two plausibilities under `≤_D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareResult {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl CompareResult {
    pub fn is_le(self) -> bool {
        matches!(self, CompareResult::Less | CompareResult::Equal)
    }

    pub fn is_ge(self) -> bool {
        matches!(self, CompareResult::Greater | CompareResult::Equal)
    }

    pub fn reverse(self) -> Self {
        match self {
            CompareResult::Less => CompareResult::Greater,
            CompareResult::Greater => CompareResult::Less,
            other => other,
        }
    }
}

impl From<Ordering> for CompareResult {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => CompareResult::Less,
            Ordering::Equal => CompareResult::Equal,
            Ordering::Greater => CompareResult::Greater,
        }
    }
}

impl fmt::Display for CompareResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompareResult::Less => "less",
            CompareResult::Equal => "equal",
            CompareResult::Greater => "greater",
            CompareResult::Incomparable => "incomparable",
        })
    }
}

/// A plausibility value tagged with its domain.
///
/// `KappaProduct` vectors are kept in a canonical form: a vector with any
/// infinite coordinate is stored as the all-`∞` vector (⊥). Mixed vectors
/// would otherwise break strict monotonicity of `⊗`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PlausValue {
    Kappa(Rank),
    Possibility(Ratio<u64>),
    KappaProduct(Box<[Rank]>),
}

impl PlausValue {
    pub fn kappa(rank: u64) -> Self {
        PlausValue::Kappa(Rank::Finite(rank))
    }

    pub fn kappa_inf() -> Self {
        PlausValue::Kappa(Rank::Infinite)
    }

    pub fn possibility(numer: u64, denom: u64) -> Result<Self, AlgebraError> {
        if denom == 0 || numer > denom {
            return Err(AlgebraError::OutOfRange(format!("{numer}/{denom}")));
        }
        Ok(PlausValue::Possibility(Ratio::new(numer, denom)))
    }

    pub fn kappa_product(coords: impl IntoIterator<Item = Rank>) -> Result<Self, AlgebraError> {
        let mut coords: Vec<Rank> = coords.into_iter().collect();
        if coords.is_empty() {
            return Err(AlgebraError::ZeroWidth);
        }
        if coords.iter().any(|r| r.is_infinite()) {
            coords.iter_mut().for_each(|r| *r = Rank::Infinite);
        }
        Ok(PlausValue::KappaProduct(coords.into_boxed_slice()))
    }

    pub fn kind(&self) -> DomainKind {
        match self {
            PlausValue::Kappa(_) => DomainKind::Kappa,
            PlausValue::Possibility(_) => DomainKind::Possibility,
            PlausValue::KappaProduct(v) => DomainKind::KappaProduct(v.len()),
        }
    }

    pub fn top(kind: DomainKind) -> Self {
        match kind {
            DomainKind::Kappa => PlausValue::Kappa(Rank::ZERO),
            DomainKind::Possibility => PlausValue::Possibility(Ratio::one()),
            DomainKind::KappaProduct(w) => PlausValue::KappaProduct(vec![Rank::ZERO; w].into()),
        }
    }

    pub fn bottom(kind: DomainKind) -> Self {
        match kind {
            DomainKind::Kappa => PlausValue::Kappa(Rank::Infinite),
            DomainKind::Possibility => PlausValue::Possibility(Ratio::zero()),
            DomainKind::KappaProduct(w) => PlausValue::KappaProduct(vec![Rank::Infinite; w].into()),
        }
    }

    pub fn is_bottom(&self) -> bool {
        match self {
            PlausValue::Kappa(r) => r.is_infinite(),
            PlausValue::Possibility(p) => p.is_zero(),
            PlausValue::KappaProduct(v) => v.iter().all(|r| r.is_infinite()),
        }
    }

    pub fn is_top(&self) -> bool {
        match self {
            PlausValue::Kappa(r) => *r == Rank::ZERO,
            PlausValue::Possibility(p) => p.is_one(),
            PlausValue::KappaProduct(v) => v.iter().all(|r| *r == Rank::ZERO),
        }
    }

    /// The rank of a `kappa` value.
    pub fn as_rank(&self) -> Option<Rank> {
        match self {
            PlausValue::Kappa(r) => Some(*r),
            _ => None,
        }
    }

    fn mismatch(&self, other: &Self) -> AlgebraError {
        AlgebraError::DomainMismatch { left: self.kind(), right: other.kind() }
    }

    /// `self ⊕ other`: the plausibility of a disjoint union.
    pub fn plus(&self, other: &Self) -> Result<Self, AlgebraError> {
        match (self, other) {
            (PlausValue::Kappa(a), PlausValue::Kappa(b)) => Ok(PlausValue::Kappa(*a.min(b))),
            (PlausValue::Possibility(a), PlausValue::Possibility(b)) => Ok(PlausValue::Possibility(*a.max(b))),
            (PlausValue::KappaProduct(a), PlausValue::KappaProduct(b)) if a.len() == b.len() => {
                PlausValue::kappa_product(a.iter().zip(b.iter()).map(|(x, y)| *x.min(y)))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    /// `self ⊗ other`: the plausibility of a conditional chain.
    pub fn times(&self, other: &Self) -> Result<Self, AlgebraError> {
        match (self, other) {
            (PlausValue::Kappa(a), PlausValue::Kappa(b)) => Ok(PlausValue::Kappa(*a + *b)),
            (PlausValue::Possibility(a), PlausValue::Possibility(b)) => Ok(PlausValue::Possibility(*a.min(b))),
            (PlausValue::KappaProduct(a), PlausValue::KappaProduct(b)) if a.len() == b.len() => {
                PlausValue::kappa_product(a.iter().zip(b.iter()).map(|(x, y)| *x + *y))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    /// Compares under `≤_D`. For ranks this is the reverse of the numeric
    /// order: a smaller rank is more plausible.
    pub fn compare(&self, other: &Self) -> Result<CompareResult, AlgebraError> {
        match (self, other) {
            (PlausValue::Kappa(a), PlausValue::Kappa(b)) => Ok(b.cmp(a).into()),
            (PlausValue::Possibility(a), PlausValue::Possibility(b)) => Ok(a.cmp(b).into()),
            (PlausValue::KappaProduct(a), PlausValue::KappaProduct(b)) if a.len() == b.len() => {
                let (mut less, mut greater) = (false, false);
                for (x, y) in a.iter().zip(b.iter()) {
                    match y.cmp(x) {
                        Ordering::Less => less = true,
                        Ordering::Greater => greater = true,
                        Ordering::Equal => {}
                    }
                }
                Ok(match (less, greater) {
                    (false, false) => CompareResult::Equal,
                    (true, false) => CompareResult::Less,
                    (false, true) => CompareResult::Greater,
                    (true, true) => CompareResult::Incomparable,
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    /// Strictly more plausible than `other`.
    pub fn exceeds(&self, other: &Self) -> Result<bool, AlgebraError> {
        Ok(self.compare(other)? == CompareResult::Greater)
    }

    /// `⊕` over an iterator, starting from ⊥.
    pub fn sum<'a>(kind: DomainKind, values: impl IntoIterator<Item = &'a PlausValue>) -> Result<Self, AlgebraError> {
        values.into_iter().try_fold(PlausValue::bottom(kind), |acc, v| acc.plus(v))
    }

    /// `⊗` over an iterator, starting from ⊤.
    pub fn product<'a>(kind: DomainKind, values: impl IntoIterator<Item = &'a PlausValue>) -> Result<Self, AlgebraError> {
        values.into_iter().try_fold(PlausValue::top(kind), |acc, v| acc.times(v))
    }

    /// Parses a literal of the given domain.
    pub fn parse(kind: DomainKind, text: &str) -> Result<Self, AlgebraError> {
        match kind {
            DomainKind::Kappa => text.parse::<Rank>().map(PlausValue::Kappa),
            DomainKind::Possibility => parse_possibility(text),
            DomainKind::KappaProduct(width) => {
                let coords = text
                    .split(',')
                    .map(|c| c.parse::<Rank>().map_err(|_| AlgebraError::BadLiteral { domain: "kappa_product", text: text.to_string() }))
                    .collect::<Result<Vec<_>, _>>()?;
                if coords.len() != width {
                    return Err(AlgebraError::WidthMismatch { expected: width, found: coords.len() });
                }
                PlausValue::kappa_product(coords)
            }
        }
    }
}

fn parse_possibility(text: &str) -> Result<PlausValue, AlgebraError> {
    let bad = || AlgebraError::BadLiteral { domain: "possibility", text: text.to_string() };
    let digits = |s: &str| -> Result<u64, AlgebraError> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    match text.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (digits(p)?, digits(q)?);
            if q == 0 {
                return Err(bad());
            }
            PlausValue::possibility(p, q)
        }
        None => match digits(text)? {
            0 => Ok(PlausValue::Possibility(Ratio::zero())),
            1 => Ok(PlausValue::Possibility(Ratio::one())),
            _ => Err(AlgebraError::OutOfRange(text.to_string())),
        },
    }
}

impl fmt::Display for PlausValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlausValue::Kappa(r) => write!(f, "{r}"),
            PlausValue::Possibility(p) => {
                if p.is_integer() {
                    write!(f, "{}", p.numer())
                } else {
                    write!(f, "{}/{}", p.numer(), p.denom())
                }
            }
            PlausValue::KappaProduct(v) => {
                for (i, r) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{r}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(r: u64) -> PlausValue {
        PlausValue::kappa(r)
    }

    fn prod(coords: &[u64]) -> PlausValue {
        PlausValue::kappa_product(coords.iter().map(|&c| Rank::Finite(c))).unwrap()
    }

    #[test]
    fn kappa_plus_is_numeric_min() {
        assert_eq!(k(3).plus(&k(1)).unwrap(), k(1));
        assert_eq!(k(5).plus(&PlausValue::kappa_inf()).unwrap(), k(5));
    }

    #[test]
    fn product_plus_is_pointwise_min() {
        assert_eq!(prod(&[2, 0]).plus(&prod(&[0, 3])).unwrap(), prod(&[0, 0]));
    }

    #[test]
    fn times_examples() {
        assert_eq!(k(1).times(&k(1)).unwrap(), k(2));
        assert_eq!(k(7).times(&PlausValue::kappa_inf()).unwrap(), PlausValue::kappa_inf());
        let half = PlausValue::possibility(1, 2).unwrap();
        let third = PlausValue::possibility(1, 3).unwrap();
        assert_eq!(half.times(&third).unwrap(), third);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(k(3).compare(&k(1)).unwrap(), CompareResult::Less);
        assert_eq!(k(4).compare(&k(4)).unwrap(), CompareResult::Equal);
        assert_eq!(prod(&[1, 0]).compare(&prod(&[0, 1])).unwrap(), CompareResult::Incomparable);
        assert_eq!(prod(&[1, 1]).compare(&prod(&[0, 1])).unwrap(), CompareResult::Less);
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let half = PlausValue::possibility(1, 2).unwrap();
        assert!(matches!(k(1).plus(&half), Err(AlgebraError::DomainMismatch { .. })));
        assert!(matches!(k(1).times(&prod(&[1])), Err(AlgebraError::DomainMismatch { .. })));
        assert!(matches!(prod(&[1]).compare(&prod(&[1, 2])), Err(AlgebraError::DomainMismatch { .. })));
    }

    #[test]
    fn mixed_infinite_vectors_collapse_to_bottom() {
        let v = PlausValue::kappa_product([Rank::Finite(0), Rank::Infinite]).unwrap();
        assert!(v.is_bottom());
        assert_eq!(v, PlausValue::bottom(DomainKind::KappaProduct(2)));
    }

    #[test]
    fn literals_round_trip() {
        for (kind, text) in [
            (DomainKind::Kappa, "0"),
            (DomainKind::Kappa, "inf"),
            (DomainKind::Possibility, "1/2"),
            (DomainKind::Possibility, "0"),
            (DomainKind::Possibility, "1"),
            (DomainKind::KappaProduct(3), "0,2,1"),
        ] {
            let v = PlausValue::parse(kind, text).unwrap();
            assert_eq!(v.to_string(), text);
            assert_eq!(v.kind(), kind);
        }
        assert_eq!(PlausValue::parse(DomainKind::Possibility, "2/4").unwrap().to_string(), "1/2");
    }

    #[test]
    fn bad_literals() {
        let err = PlausValue::parse(DomainKind::Kappa, "1/2").unwrap_err();
        assert_eq!(err.to_string(), "bad kappa literal `1/2`");
        assert!(PlausValue::parse(DomainKind::Kappa, "-1").is_err());
        assert!(PlausValue::parse(DomainKind::Possibility, "3/2").is_err());
        assert!(PlausValue::parse(DomainKind::Possibility, "1/0").is_err());
        assert!(PlausValue::parse(DomainKind::Possibility, "0.5").is_err());
        assert!(matches!(
            PlausValue::parse(DomainKind::KappaProduct(2), "1,2,3"),
            Err(AlgebraError::WidthMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn domain_names() {
        assert_eq!("kappa".parse::<DomainKind>().unwrap(), DomainKind::Kappa);
        assert_eq!("kappa_product 4".parse::<DomainKind>().unwrap(), DomainKind::KappaProduct(4));
        assert_eq!(DomainKind::KappaProduct(4).to_string(), "kappa_product 4");
        assert!("kappa_product 0".parse::<DomainKind>().is_err());
        assert!("probability".parse::<DomainKind>().is_err());
    }

    #[test]
    fn residual_convention() {
        assert_eq!(Rank::Infinite.residual(Rank::Infinite), Some(Rank::ZERO));
        assert_eq!(Rank::Finite(3).residual(Rank::Finite(2)), Some(Rank::Finite(1)));
        assert_eq!(Rank::Finite(1).residual(Rank::Finite(2)), None);
        assert_eq!(Rank::Infinite.residual(Rank::Finite(2)), Some(Rank::Infinite));
    }
}
