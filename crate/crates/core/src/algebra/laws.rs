//! Sample-exhaustive checking of the algebraic-domain laws.

use std::fmt;

use super::{AlgebraError, CompareResult, DomainKind, PlausValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    OrderReflexive,
    OrderAntisymmetric,
    OrderTransitive,
    Bounds,
    PlusCommutative,
    PlusAssociative,
    PlusMonotone,
    PlusIdentity,
    PlusAbsorbing,
    TimesCommutative,
    TimesAssociative,
    TimesIdentity,
    TimesBottom,
    TimesMonotone,
    TimesStrictMonotone,
    Distributive,
}

impl Law {
    pub const ALL: [Law; 16] = [
        Law::OrderReflexive,
        Law::OrderAntisymmetric,
        Law::OrderTransitive,
        Law::Bounds,
        Law::PlusCommutative,
        Law::PlusAssociative,
        Law::PlusMonotone,
        Law::PlusIdentity,
        Law::PlusAbsorbing,
        Law::TimesCommutative,
        Law::TimesAssociative,
        Law::TimesIdentity,
        Law::TimesBottom,
        Law::TimesMonotone,
        Law::TimesStrictMonotone,
        Law::Distributive,
    ];

    pub fn description(self) -> &'static str {
        match self {
            Law::OrderReflexive => "d <= d",
            Law::OrderAntisymmetric => "d <= e and e <= d imply d = e",
            Law::OrderTransitive => "d <= e and e <= f imply d <= f",
            Law::Bounds => "bottom <= d <= top",
            Law::PlusCommutative => "d + e = e + d",
            Law::PlusAssociative => "(d + e) + f = d + (e + f)",
            Law::PlusMonotone => "d <= e implies d + f <= e + f",
            Law::PlusIdentity => "d + bottom = d",
            Law::PlusAbsorbing => "d + top = top",
            Law::TimesCommutative => "d * e = e * d",
            Law::TimesAssociative => "(d * e) * f = d * (e * f)",
            Law::TimesIdentity => "d * top = d",
            Law::TimesBottom => "d * bottom = bottom",
            Law::TimesMonotone => "d <= e implies d * f <= e * f",
            Law::TimesStrictMonotone => "d > e and f != bottom imply d * f > e * f",
            Law::Distributive => "d * (e + f) = (d * e) + (d * f)",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// First counterexample found for a law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: Law,
    pub witness: Vec<PlausValue>,
    /// Set for violations the domain is documented to exhibit (strict
    /// monotonicity of `min` in the possibility domain).
    pub expected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub kind: DomainKind,
    pub samples: Vec<PlausValue>,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn violation(&self, law: Law) -> Option<&LawViolation> {
        self.violations.iter().find(|v| v.law == law)
    }

    pub fn unexpected(&self) -> impl Iterator<Item = &LawViolation> {
        self.violations.iter().filter(|v| !v.expected)
    }

    /// True when only documented exemptions were violated.
    pub fn is_clean(&self) -> bool {
        self.unexpected().next().is_none()
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {} over {} samples", self.kind, self.samples.len())?;
        for law in Law::ALL {
            match self.violation(law) {
                None => writeln!(f, "  ok    {law}")?,
                Some(v) => {
                    let tag = if v.expected { "exempt" } else { "FAIL" };
                    let witness: Vec<String> = v.witness.iter().map(|w| w.to_string()).collect();
                    writeln!(f, "  {tag:<5} {law}  witness ({})", witness.join("; "))?
                }
            }
        }
        Ok(())
    }
}

struct Checker {
    kind: DomainKind,
    violations: Vec<LawViolation>,
}

impl Checker {
    fn record(&mut self, law: Law, witness: &[&PlausValue]) {
        if self.violations.iter().any(|v| v.law == law) {
            return;
        }
        let expected = law == Law::TimesStrictMonotone && !self.kind.has_strict_times();
        self.violations.push(LawViolation { law, witness: witness.iter().map(|w| (*w).clone()).collect(), expected });
    }

    fn check(&mut self, law: Law, holds: bool, witness: &[&PlausValue]) {
        if !holds {
            self.record(law, witness);
        }
    }
}

/// Checks every law over all pairs and triples drawn from `samples`, with ⊤
/// and ⊥ added. Returns an error only when a sample belongs to a different
/// domain than `kind`.
pub fn check_domain_laws(kind: DomainKind, samples: &[PlausValue]) -> Result<LawReport, AlgebraError> {
    let top = PlausValue::top(kind);
    let bottom = PlausValue::bottom(kind);
    let mut set: Vec<PlausValue> = Vec::new();
    for s in samples.iter().chain([&top, &bottom]) {
        if s.kind() != kind {
            return Err(AlgebraError::DomainMismatch { left: kind, right: s.kind() });
        }
        if !set.contains(s) {
            set.push(s.clone());
        }
    }

    let mut c = Checker { kind, violations: Vec::new() };
    let le = |a: &PlausValue, b: &PlausValue| -> Result<bool, AlgebraError> { Ok(a.compare(b)?.is_le()) };

    for d in &set {
        c.check(Law::OrderReflexive, d.compare(d)? == CompareResult::Equal, &[d]);
        c.check(Law::Bounds, le(&bottom, d)? && le(d, &top)?, &[d]);
        c.check(Law::PlusIdentity, d.plus(&bottom)? == *d, &[d]);
        c.check(Law::PlusAbsorbing, d.plus(&top)? == top, &[d]);
        c.check(Law::TimesIdentity, d.times(&top)? == *d, &[d]);
        c.check(Law::TimesBottom, d.times(&bottom)? == bottom, &[d]);
    }

    for d in &set {
        for e in &set {
            let de = d.compare(e)?;
            let ed = e.compare(d)?;
            c.check(Law::OrderAntisymmetric, (de != CompareResult::Equal || d == e) && de == ed.reverse(), &[d, e]);
            c.check(Law::PlusCommutative, d.plus(e)? == e.plus(d)?, &[d, e]);
            c.check(Law::TimesCommutative, d.times(e)? == e.times(d)?, &[d, e]);

            for f in &set {
                if de.is_le() && le(e, f)? {
                    c.check(Law::OrderTransitive, le(d, f)?, &[d, e, f]);
                }
                if de.is_le() {
                    c.check(Law::PlusMonotone, le(&d.plus(f)?, &e.plus(f)?)?, &[d, e, f]);
                    c.check(Law::TimesMonotone, le(&d.times(f)?, &e.times(f)?)?, &[d, e, f]);
                }
                if de == CompareResult::Greater && !f.is_bottom() {
                    c.check(Law::TimesStrictMonotone, d.times(f)?.compare(&e.times(f)?)? == CompareResult::Greater, &[d, e, f]);
                }
                c.check(Law::PlusAssociative, d.plus(e)?.plus(f)? == d.plus(&e.plus(f)?)?, &[d, e, f]);
                c.check(Law::TimesAssociative, d.times(e)?.times(f)? == d.times(&e.times(f)?)?, &[d, e, f]);
                c.check(Law::Distributive, d.times(&e.plus(f)?)? == d.times(e)?.plus(&d.times(f)?)?, &[d, e, f]);
            }
        }
    }

    let order = Law::ALL;
    c.violations.sort_by_key(|v| order.iter().position(|l| *l == v.law).unwrap_or(usize::MAX));
    Ok(LawReport { kind, samples: set, violations: c.violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rank;

    #[test]
    fn kappa_laws_hold() {
        let samples: Vec<_> = [0, 1, 2, 3].into_iter().map(PlausValue::kappa).collect();
        let report = check_domain_laws(DomainKind::Kappa, &samples).unwrap();
        assert!(report.violations.is_empty(), "{report}");
        assert_eq!(report.samples.len(), 5);
    }

    #[test]
    fn possibility_violates_only_strict_monotonicity() {
        let samples =
            vec![PlausValue::possibility(0, 1).unwrap(), PlausValue::possibility(1, 2).unwrap(), PlausValue::possibility(1, 1).unwrap()];
        let report = check_domain_laws(DomainKind::Possibility, &samples).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.violations.len(), 1);
        let v = report.violation(Law::TimesStrictMonotone).unwrap();
        assert!(v.expected);
        // First witness in sample order: min(1, 1/2) = min(1/2, 1/2).
        let half = PlausValue::possibility(1, 2).unwrap();
        assert_eq!(v.witness, vec![PlausValue::possibility(1, 1).unwrap(), half.clone(), half]);
    }

    #[test]
    fn possibility_quarter_witness_is_a_real_violation() {
        let (one, half, quarter) =
            (PlausValue::possibility(1, 1).unwrap(), PlausValue::possibility(1, 2).unwrap(), PlausValue::possibility(1, 4).unwrap());
        assert_eq!(one.compare(&half).unwrap(), CompareResult::Greater);
        assert_eq!(one.times(&quarter).unwrap(), half.times(&quarter).unwrap());
    }

    #[test]
    fn kappa_product_laws_hold() {
        let samples = vec![
            PlausValue::kappa_product([Rank::Finite(0), Rank::Finite(0)]).unwrap(),
            PlausValue::kappa_product([Rank::Finite(1), Rank::Finite(0)]).unwrap(),
            PlausValue::kappa_product([Rank::Finite(0), Rank::Finite(1)]).unwrap(),
            PlausValue::kappa_product([Rank::Infinite, Rank::Infinite]).unwrap(),
        ];
        let report = check_domain_laws(DomainKind::KappaProduct(2), &samples).unwrap();
        assert!(report.violations.is_empty(), "{report}");
    }

    #[test]
    fn mismatched_sample_is_an_error() {
        let samples = vec![PlausValue::possibility(1, 2).unwrap()];
        assert!(check_domain_laws(DomainKind::Kappa, &samples).is_err());
    }

    #[test]
    fn report_renders_every_law() {
        let report = check_domain_laws(DomainKind::Kappa, &[]).unwrap();
        assert_eq!(report.to_string().lines().count(), 1 + Law::ALL.len());
    }
}
