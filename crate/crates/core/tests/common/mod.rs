#![allow(dead_code)]

use proptest::prelude::*;
use qmb_core::{DomainKind, Evidence, PlausValue, Prefix, Proposition, Rank, StateId, StateSpace, TransitionModel};

pub fn space(n: usize) -> StateSpace {
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    StateSpace::new(&names, "s0").unwrap()
}

pub fn value(kind: DomainKind) -> BoxedStrategy<PlausValue> {
    match kind {
        DomainKind::Kappa => prop_oneof![4 => (0..4u64).prop_map(PlausValue::kappa), 1 => Just(PlausValue::kappa_inf())].boxed(),
        DomainKind::Possibility => (0..=4u64).prop_map(|n| PlausValue::possibility(n, 4).unwrap()).boxed(),
        DomainKind::KappaProduct(w) => {
            let rank = prop_oneof![4 => (0..4u64).prop_map(Rank::Finite), 1 => Just(Rank::Infinite)];
            proptest::collection::vec(rank, w).prop_map(|r| PlausValue::kappa_product(r).unwrap()).boxed()
        }
    }
}

pub fn kind() -> impl Strategy<Value = DomainKind> {
    prop_oneof![
        Just(DomainKind::Kappa),
        Just(DomainKind::Possibility),
        Just(DomainKind::KappaProduct(1)),
        Just(DomainKind::KappaProduct(2)),
    ]
}

/// A normalized model: each row gets one ⊤ entry at a random position.
pub fn model_of(kind: DomainKind, max_states: usize) -> impl Strategy<Value = TransitionModel> {
    (1..=max_states).prop_flat_map(move |n| {
        let rows = proptest::collection::vec((proptest::collection::vec(value(kind), n), 0..n), n);
        rows.prop_map(move |rows| {
            let s = space(n);
            let mut entries = Vec::new();
            for (i, (mut row, top)) in rows.into_iter().enumerate() {
                row[top] = PlausValue::top(kind);
                for (j, v) in row.into_iter().enumerate() {
                    entries.push((StateId(i), StateId(j), v));
                }
            }
            TransitionModel::new(s, kind, entries).unwrap()
        })
    })
}

pub fn any_model(max_states: usize) -> impl Strategy<Value = TransitionModel> {
    kind().prop_flat_map(move |k| model_of(k, max_states))
}

pub fn evidence(states: usize, max_horizon: usize) -> impl Strategy<Value = Evidence> {
    proptest::collection::vec(1..(1u64 << states), 0..=max_horizon)
        .prop_map(move |masks| Evidence::new(masks.into_iter().map(|m| Proposition::from_mask(states, m)).collect()).unwrap())
}

pub fn all_prefixes(space: &StateSpace, horizon: usize) -> Vec<Prefix> {
    let mut out = vec![Prefix::initial(space)];
    for _ in 0..horizon {
        out = out.iter().flat_map(|p| space.ids().map(move |s| p.extended(s))).collect();
    }
    out
}

/// Every nonempty observation sequence of exactly `horizon` steps.
pub fn all_evidence(states: usize, horizon: usize) -> Vec<Evidence> {
    let mut out = vec![Vec::new()];
    for _ in 0..horizon {
        out = out
            .into_iter()
            .flat_map(|obs: Vec<Proposition>| {
                (1..(1u64 << states)).map(move |m| {
                    let mut next = obs.clone();
                    next.push(Proposition::from_mask(states, m));
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(|o| Evidence::new(o).unwrap()).collect()
}

/// Splits `items` over the available cores and runs `check` on each chunk.
pub fn par_chunks<T: Sync, R: Send>(items: &[T], check: impl Fn(&[T]) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    let size = items.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items.chunks(size).map(|c| scope.spawn(|| check(c))).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

pub fn model_and_evidence(max_states: usize, max_horizon: usize) -> impl Strategy<Value = (TransitionModel, Evidence)> {
    any_model(max_states).prop_flat_map(move |m| {
        let n = m.space().len();
        (Just(m), evidence(n, max_horizon))
    })
}
