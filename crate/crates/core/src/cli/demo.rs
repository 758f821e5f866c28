use std::fmt::Write as _;

use crate::constraints::ConstraintSet;
use crate::error::Result;
use crate::filter::Filter;
use crate::model::{Evidence, Prefix, StateSpace};
use crate::{oracle, scenarios};

fn verdict(text: &mut String, label: &str, holds: bool) {
    writeln!(text, "{label}: {}", if holds { "BELIEVED" } else { "NOT-BELIEVED" }).unwrap();
}

fn runs(text: &mut String, space: &StateSpace, prefixes: &[Prefix]) {
    for p in prefixes {
        writeln!(text, "  {}", space.render_prefix(p)).unwrap();
    }
}

pub(super) fn stolen_car() -> Result<String> {
    let m = scenarios::car_model();
    let s = m.space();
    let e = scenarios::stolen_evidence(s);
    let table = oracle::enumerate(&m, 3, Some(&e))?;
    let best: Vec<Prefix> = table.best().into_iter().map(|(p, _)| p.clone()).collect();
    let gone = s.proposition(&["G"])?;
    let parked = s.proposition(&["PF", "PE"])?;

    let mut text = String::new();
    writeln!(text, "stolen car: the car is gone at time 3").unwrap();
    writeln!(text, "most plausible runs (joint rank {}):", table.total()).unwrap();
    runs(&mut text, s, &best);
    for p in &best {
        let rank = oracle::conditional_kappa_event(&m, &e, |q| q == p)?;
        writeln!(text, "conditional rank of {}: {rank}", s.render_prefix(p)).unwrap();
    }
    verdict(&mut text, "gone at time 3", m.believes(&e, &gone, 3)?);
    verdict(&mut text, "parked at time 1", m.believes(&e, &parked, 1)?);
    verdict(&mut text, "gone at time 1", m.believes(&e, &gone, 1)?);
    writeln!(text, "verdict: stolen before time 3, time unknown").unwrap();
    Ok(text)
}

pub(super) fn borrowed_car() -> Result<String> {
    let m = scenarios::car_model();
    let s = m.space();
    let e = scenarios::borrowed_evidence(s, 3);
    let table = oracle::enumerate(&m, 3, Some(&e))?;
    let g = s.id("G")?;

    let mut text = String::new();
    writeln!(text, "borrowed car: parked at time 2, tank empty at time 3").unwrap();
    let (mut borrowed, mut leak) = (None, None);
    for (p, v) in &table.rows {
        let rank = v.as_rank().expect("the car model is kappa-valued");
        let (label, best) = if p.states().contains(&g) { ("borrowed", &mut borrowed) } else { ("leak", &mut leak) };
        writeln!(text, "{label} run {}: rank {rank}", s.render_prefix(p)).unwrap();
        *best = Some(best.map_or(rank, |b: crate::Rank| b.min(rank)));
    }
    let filter = Filter::new(&m)?;
    writeln!(text, "filter at time 3: {}", filter.run_final(&e)?.render(s, false)).unwrap();
    verdict(&mut text, "gone at time 1", m.believes(&e, &s.proposition(&["G"])?, 1)?);
    let conclusion = match borrowed.cmp(&leak) {
        std::cmp::Ordering::Less => "borrowed",
        std::cmp::Ordering::Greater => "leak",
        std::cmp::Ordering::Equal => "either",
    };
    writeln!(text, "verdict: {conclusion}").unwrap();
    Ok(text)
}

fn entailed(text: &mut String, c: &ConstraintSet, e: &Evidence, label: &str, states: &[&str], at: usize) -> Result<()> {
    let a = c.space().proposition(states)?;
    writeln!(text, "{label}: {}", c.entailed_belief(e, &a, at)?).unwrap();
    Ok(())
}

fn maxima(text: &mut String, c: &ConstraintSet, e: &Evidence) -> Result<()> {
    let max = c.max_prefixes(e.horizon(), e)?;
    let mut equivalent = true;
    for (i, p) in max.iter().enumerate() {
        for q in &max[i + 1..] {
            equivalent &= c.compare_prefixes(p, q)? == crate::PrefixOrder::Equivalent;
        }
    }
    let note = if equivalent { "pairwise equivalent" } else { "not all equivalent" };
    writeln!(text, "maximal runs ({note}):").unwrap();
    runs(text, c.space(), &max);
    Ok(())
}

pub(super) fn stolen_car_constraints() -> Result<String> {
    let c = scenarios::change_constraints();
    let e = scenarios::stolen_evidence(c.space());
    let mut text = String::new();
    writeln!(text, "stolen car, ordering constraints only").unwrap();
    maxima(&mut text, &c, &e)?;
    entailed(&mut text, &c, &e, "gone at time 3", &["G"], 3)?;
    entailed(&mut text, &c, &e, "parked at time 1", &["PF", "PE"], 1)?;
    entailed(&mut text, &c, &e, "gone at time 1", &["G"], 1)?;
    writeln!(text, "verdict: stolen before time 3, time unknown").unwrap();
    Ok(text)
}

pub(super) fn borrowed_car_constraints() -> Result<String> {
    let c = scenarios::change_constraints();
    let e = scenarios::borrowed_evidence(c.space(), 3);
    let mut text = String::new();
    writeln!(text, "borrowed car, ordering constraints only").unwrap();
    maxima(&mut text, &c, &e)?;
    entailed(&mut text, &c, &e, "parked at time 1", &["PF", "PE"], 1)?;

    let leak = scenarios::leak_preferred_constraints();
    writeln!(text, "adding: theft < leak").unwrap();
    maxima(&mut text, &leak, &e)?;
    entailed(&mut text, &leak, &e, "parked at time 1", &["PF", "PE"], 1)?;

    let least = scenarios::leak_least_constraints();
    writeln!(text, "instead adding: leak < theft, leak < return").unwrap();
    maxima(&mut text, &least, &e)?;
    entailed(&mut text, &least, &e, "parked at time 1", &["PF", "PE"], 1)?;
    writeln!(text, "verdict: undetermined unless a leak is preferred").unwrap();
    Ok(text)
}
