//! Acceptance criteria, one line per criterion. Runs as a plain binary so the
//! verdict lines always reach the test log.

mod common;

use std::time::{Duration, Instant};

use common::{all_evidence, all_prefixes, par_chunks, space};
use qmb_core::model::{AtomView, DEFAULT_ATOM_CAP};
use qmb_core::oracle::{conditional_kappa, conditional_kappa_event, enumerate, markovianize_kappa};
use qmb_core::{
    scenarios, CompareResult, ConstraintSet, DomainKind, EntailedBelief, Evidence, Filter, FinitePrior, PlausValue, Prefix, PrefixOrder,
    Proposition, Rank, StateId, StateSpace, TransitionModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Minimal kappa brute force over the car model, written against plain
/// integers so it shares no code with the library.
mod car {
    pub const INF: u64 = u64::MAX;
    // PF = 0, PE = 1, G = 2.
    pub const T: [[u64; 3]; 3] = [[0, 3, 1], [INF, 0, INF], [INF, 1, 0]];

    pub fn rank(path: &[usize]) -> u64 {
        path.windows(2).map(|w| T[w[0]][w[1]]).try_fold(0u64, |acc, t| (t != INF).then(|| acc + t)).unwrap_or(INF)
    }

    /// Every 3-prefix from PF whose states at times 1..=3 lie in `obs`.
    pub fn runs(obs: [&[usize]; 3]) -> Vec<(Vec<usize>, u64)> {
        let mut out = Vec::new();
        for &a in obs[0] {
            for &b in obs[1] {
                for &c in obs[2] {
                    let path = vec![0, a, b, c];
                    let r = rank(&path);
                    if r != INF {
                        out.push((path, r));
                    }
                }
            }
        }
        out
    }
}

fn names(space: &StateSpace, path: &[usize]) -> Prefix {
    Prefix::new(space, path.iter().map(|&i| StateId(i)).collect()).unwrap()
}

fn criterion_1() -> Check {
    let m = scenarios::car_model();
    let s = m.space();
    let e = scenarios::borrowed_evidence(s, 3);
    let brute = car::runs([&[0, 1, 2], &[0, 1], &[1]]);
    let table = enumerate(&m, 3, Some(&e)).map_err(|e| e.to_string())?;
    ensure(table.rows.len() == brute.len(), || format!("{} rows, expected {}", table.rows.len(), brute.len()))?;
    for (path, r) in &brute {
        let p = names(s, path);
        ensure(table.value(&p) == PlausValue::kappa(*r), || format!("{} has {}", s.render_prefix(&p), table.value(&p)))?;
    }
    let borrowed = s.parse_prefix("PF>G>PE>PE").unwrap();
    ensure(table.value(&borrowed) == PlausValue::kappa(2), || "borrowed run is not rank 2".into())?;
    let leaks: Vec<_> = table.rows.iter().filter(|(p, _)| !p.states().contains(&StateId(2))).collect();
    ensure(leaks.len() == 3 && leaks.iter().all(|(_, v)| *v == PlausValue::kappa(3)), || "leak runs are not all rank 3".into())?;

    let f = Filter::new(&m).unwrap().run_final(&e).map_err(|e| e.to_string())?;
    let expected = [PlausValue::kappa_inf(), PlausValue::kappa(2), PlausValue::kappa_inf()];
    ensure(f.vector() == expected, || format!("filter vector {}", f.render(s, false)))?;
    let gone = s.proposition(&["G"]).unwrap();
    ensure(m.believes(&e, &gone, 1).unwrap(), || "gone at time 1 is not believed".into())?;
    Ok("borrowed 2, leaks 3, filter PE=2, gone at 1 believed".into())
}

fn criterion_2() -> Check {
    let m = scenarios::car_model();
    let s = m.space();
    let e = scenarios::stolen_evidence(s);
    let brute = car::runs([&[0, 1, 2], &[0, 1, 2], &[2]]);
    let min = brute.iter().map(|(_, r)| *r).min().unwrap();
    let best: Vec<Prefix> = brute.iter().filter(|(_, r)| *r == min).map(|(p, _)| names(s, p)).collect();
    ensure(min == 1 && best.len() == 3, || format!("brute force: {} runs at {min}", best.len()))?;

    let table = enumerate(&m, 3, Some(&e)).map_err(|e| e.to_string())?;
    let top: Vec<Prefix> = table.best().into_iter().map(|(p, _)| p.clone()).collect();
    ensure(top == best && table.total() == PlausValue::kappa(1), || "enumeration disagrees on the best runs".into())?;
    for p in &best {
        let r = conditional_kappa_event(&m, &e, |q| q == p).map_err(|e| e.to_string())?;
        ensure(r == Rank::ZERO, || format!("{} has conditional rank {r}", s.render_prefix(p)))?;
    }
    let parked = s.proposition(&["PF", "PE"]).unwrap();
    let gone = s.proposition(&["G"]).unwrap();
    ensure(!m.believes(&e, &parked, 1).unwrap(), || "parked at 1 believed".into())?;
    ensure(!m.believes(&e, &gone, 1).unwrap(), || "gone at 1 believed".into())?;
    ensure(conditional_kappa(&m, &e, &gone, 3).unwrap() == Rank::ZERO, || "gone at 3 not rank 0".into())?;
    Ok("three runs at joint 1 / conditional 0, no belief about time 1".into())
}

fn chain_row(m: &TransitionModel) -> [u64; 6] {
    let s = m.space();
    let r = |f: &str, t: &str| m.transition(s.id(f).unwrap(), s.id(t).unwrap()).as_rank().and_then(Rank::finite).unwrap_or(u64::MAX);
    [r("PF", "PE"), r("PF", "G"), r("G", "PE"), r("PF", "PF"), r("PE", "PE"), r("G", "G")]
}

fn criterion_3() -> Check {
    let c = scenarios::chain_constraints();
    let first = c.sample_consistent_kappa(scenarios::CHAIN_SEED_CHEAP_BORROW).map_err(|e| e.to_string())?;
    let second = c.sample_consistent_kappa(scenarios::CHAIN_SEED_COSTLY_BORROW).map_err(|e| e.to_string())?;
    ensure(chain_row(&first) == [3, 1, 1, 0, 0, 0], || format!("first sample {:?}", chain_row(&first)))?;
    ensure(chain_row(&second) == [3, 2, 2, 0, 0, 0], || format!("second sample {:?}", chain_row(&second)))?;
    let s = c.space();
    let leak = s.parse_prefix("PF>PF>PF>PE").unwrap();
    let borrowed = s.parse_prefix("PF>G>PE>PE").unwrap();
    let pair = |m: &TransitionModel| (m.prefix_plausibility(&leak).unwrap(), m.prefix_plausibility(&borrowed).unwrap());
    let (l1, b1) = pair(&first);
    let (l2, b2) = pair(&second);
    ensure(
        (l1, b1.clone(), l2, b2.clone()) == (PlausValue::kappa(3), PlausValue::kappa(2), PlausValue::kappa(3), PlausValue::kappa(4)),
        || "prefix ranks differ from 3/2 and 3/4".into(),
    )?;
    ensure(
        b1.compare(&PlausValue::kappa(3)).unwrap() == CompareResult::Greater
            && b2.compare(&PlausValue::kappa(3)).unwrap() == CompareResult::Less,
        || "the two samples do not order the runs oppositely".into(),
    )?;
    Ok(format!(
        "seed {} gives 3,1,1 (leak 3 vs borrowed 2), seed {} gives 3,2,2 (leak 3 vs borrowed 4)",
        scenarios::CHAIN_SEED_CHEAP_BORROW,
        scenarios::CHAIN_SEED_COSTLY_BORROW
    ))
}

fn criterion_4() -> Check {
    let c = scenarios::change_constraints();
    let s = c.space();
    let p = |t: &str| s.parse_prefix(t).unwrap();
    let order = |c: &ConstraintSet, a: &str, b: &str| c.compare_prefixes(&p(a), &p(b)).unwrap();
    ensure(order(&c, "PF>PF>PE", "PF>PF>PF") == PrefixOrder::Below, || "leak prefix not below".into())?;
    ensure(order(&c, "PF>G>PE", "PF>PF>PE") == PrefixOrder::Incomparable, || "borrowed vs leak not incomparable".into())?;

    let stolen = scenarios::stolen_evidence(s);
    let max = c.max_prefixes(3, &stolen).unwrap();
    let theft = vec![p("PF>PF>PF>G"), p("PF>PF>G>G"), p("PF>G>G>G")];
    ensure(max == theft, || "MAX over stolen differs from the theft runs".into())?;
    for a in &max {
        for b in &max {
            ensure(c.compare_prefixes(a, b).unwrap() == PrefixOrder::Equivalent, || "theft runs not equivalent".into())?;
        }
    }
    let parked = s.proposition(&["PF", "PE"]).unwrap();
    let gone = s.proposition(&["G"]).unwrap();
    ensure(c.entailed_belief(&stolen, &gone, 3).unwrap() == EntailedBelief::Believed, || "gone at 3".into())?;
    ensure(c.entailed_belief(&stolen, &parked, 1).unwrap() == EntailedBelief::NotBelieved, || "parked at 1 (stolen)".into())?;

    let borrowed = scenarios::borrowed_evidence(s, 3);
    ensure(c.entailed_belief(&borrowed, &parked, 1).unwrap() == EntailedBelief::Undetermined, || "parked at 1 (borrowed)".into())?;
    let leak = scenarios::leak_preferred_constraints();
    ensure(leak.entailed_belief(&borrowed, &parked, 1).unwrap() == EntailedBelief::Believed, || "leak-preferred".into())?;
    let leak_max = leak.max_prefixes(3, &borrowed).unwrap();
    ensure(leak_max.iter().all(|q| !q.states().contains(&StateId(2))), || "leak-preferred maxima include a theft".into())?;
    let least = scenarios::leak_least_constraints();
    let both = least.max_prefixes(3, &borrowed).unwrap();
    ensure(both.len() == 4, || "leak-least maxima lost an explanation".into())?;
    Ok("below / incomparable / three equivalent maxima / believed, not-believed, undetermined, believed".into())
}

fn grid_models(kind: DomainKind) -> Vec<TransitionModel> {
    let (top, mid, bot) = match kind {
        DomainKind::Kappa => (PlausValue::kappa(0), PlausValue::kappa(1), PlausValue::kappa_inf()),
        _ => (PlausValue::possibility(1, 1).unwrap(), PlausValue::possibility(1, 2).unwrap(), PlausValue::possibility(0, 1).unwrap()),
    };
    let levels = [top.clone(), mid, bot];
    let rows: Vec<[PlausValue; 3]> =
        (0..27).map(|code| [0, 1, 2].map(|i| levels[code / 3usize.pow(i) % 3].clone())).filter(|row| row.contains(&top)).collect();
    let s = space(3);
    let mut models = Vec::new();
    for a in &rows {
        for b in &rows {
            for c in &rows {
                let table = [a, b, c];
                let entries = table
                    .iter()
                    .enumerate()
                    .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (StateId(i), StateId(j), v.clone())));
                models.push(TransitionModel::new(s.clone(), kind, entries).unwrap());
            }
        }
    }
    models
}

fn criterion_5() -> Check {
    let mut models = grid_models(DomainKind::Kappa);
    models.extend(grid_models(DomainKind::Possibility));
    let total = models.len();
    let jobs: Vec<(u64, TransitionModel)> = (0..).zip(models).collect();
    let results = par_chunks(&jobs, |chunk| -> Result<usize, String> {
        let mut compared = 0;
        for (seed, m) in chunk {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let filter = Filter::lenient(m).unwrap();
            for horizon in 1..=4 {
                for _ in 0..50 {
                    let obs = (0..horizon).map(|_| Proposition::from_mask(3, rng.random_range(1..8))).collect();
                    let e = Evidence::new(obs).unwrap();
                    let table = enumerate(m, horizon, Some(&e)).map_err(|e| e.to_string())?;
                    let mut expected = vec![PlausValue::bottom(m.kind()); 3];
                    for (p, v) in &table.rows {
                        let slot = &mut expected[p.last().index()];
                        *slot = slot.plus(v).unwrap();
                    }
                    let actual = filter.run_final(&e).map(|f| f.vector().to_vec());
                    let agree = match actual {
                        Ok(v) => v == expected,
                        Err(_) => table.rows.is_empty(),
                    };
                    if !agree {
                        return Err(format!("{} model disagrees on {:?}", m.kind(), e));
                    }
                    compared += 1;
                }
            }
        }
        Ok(compared)
    });
    let mut runs = 0;
    for r in results {
        runs += r?;
    }
    Ok(format!("{total} models, {runs} evidence sequences, all vectors equal"))
}

fn closure_everywhere(prior: &FinitePrior, view: &AtomView) -> Result<bool, String> {
    for e in 0..=view.full_mask() {
        let witness = prior.check_closure_under_conjunction(&view.prefixes(e), DEFAULT_ATOM_CAP).map_err(|e| e.to_string())?;
        if witness.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut priors = Vec::new();
    for i in 0..400 {
        let atoms = rng.random_range(1..=6usize);
        let s = space(atoms);
        let prefixes: Vec<Prefix> = s.ids().map(|id| Prefix::initial(&s).extended(id)).collect();
        let prior = if i % 2 == 0 {
            let mut ranks: Vec<Rank> = (0..atoms)
                .map(|_| match rng.random_range(0..5) {
                    4 => Rank::Infinite,
                    r => Rank::Finite(r),
                })
                .collect();
            let z = rng.random_range(0..atoms);
            ranks[z] = Rank::ZERO;
            FinitePrior::new(s, DomainKind::Kappa, 1, prefixes.into_iter().zip(ranks.into_iter().map(PlausValue::Kappa)))
        } else {
            // Heavy-tailed weights mix qualitative and non-qualitative cases.
            let mut weights: Vec<u64> = (0..atoms).map(|_| 1u64 << rng.random_range(0..5)).collect();
            if rng.random_bool(0.5) {
                weights.iter_mut().for_each(|w| *w += rng.random_range(0..3));
            }
            let total: u64 = weights.iter().sum();
            FinitePrior::additive(s, 1, prefixes.into_iter().zip(weights.iter().map(|&w| PlausValue::possibility(w, total).unwrap())))
        };
        priors.push(prior.map_err(|e| e.to_string())?);
    }
    let mut counts = [0usize; 2];
    for p in &priors {
        let view = p.view(DEFAULT_ATOM_CAP).map_err(|e| e.to_string())?;
        let qualitative = p.check_qualitative(DEFAULT_ATOM_CAP).map_err(|e| e.to_string())?.is_none();
        ensure(qualitative == closure_everywhere(p, &view)?, || format!("disagreement on a prior over {} atoms", view.atoms().len()))?;
        counts[qualitative as usize] += 1;
    }
    ensure(counts[0] > 0 && counts[1] > 0, || format!("only one outcome seen: {counts:?}"))?;
    Ok(format!("{} priors, {} qualitative, {} not, all agree", priors.len(), counts[1], counts[0]))
}

fn criterion_7() -> Check {
    let sets = [
        ("chain", scenarios::chain_constraints()),
        ("changes", scenarios::change_constraints()),
        ("leak preferred", scenarios::leak_preferred_constraints()),
        ("leak least", scenarios::leak_least_constraints()),
    ];
    let mut checked = 0usize;
    let mut must_find = false;
    for (name, c) in &sets {
        let mut verdicts = Vec::new();
        for horizon in 1..=4 {
            let prefixes = all_prefixes(c.space(), horizon);
            for p in &prefixes {
                for q in &prefixes {
                    verdicts.push((p.clone(), q.clone(), c.compare_prefixes(p, q).unwrap()));
                }
            }
        }
        for seed in 0..20 {
            let m = c.sample_consistent_kappa(seed).map_err(|e| e.to_string())?;
            ensure(c.is_satisfied_by(&m), || format!("{name} seed {seed} violates the constraints"))?;
            for (p, q, verdict) in &verdicts {
                let actual = m.prefix_plausibility(p).unwrap().compare(&m.prefix_plausibility(q).unwrap()).unwrap();
                let sound = match verdict {
                    PrefixOrder::Below => actual == CompareResult::Less,
                    PrefixOrder::Above => actual == CompareResult::Greater,
                    PrefixOrder::Equivalent => actual == CompareResult::Equal,
                    PrefixOrder::Incomparable => {
                        if *name == "chain" && actual != CompareResult::Equal {
                            must_find = true;
                        }
                        true
                    }
                };
                ensure(sound, || format!("{name} seed {seed}: {verdict} but {actual} for {p:?} {q:?}"))?;
                checked += 1;
            }
        }
    }
    ensure(must_find, || "no incomparable pair was strictly ordered by a chain sample".into())?;
    Ok(format!("{checked} verdict checks over 4 sets x 20 seeds; incomparable-but-ordered pair found"))
}

fn criterion_8() -> Check {
    let s = space(2);
    let mut jobs = Vec::new();
    for horizon in 1..=3 {
        let atoms = 1usize << horizon;
        for pattern in 0..4usize.pow(atoms as u32) {
            let ranks: Vec<Rank> = (0..atoms)
                .map(|i| match pattern / 4usize.pow(i as u32) % 4 {
                    3 => Rank::Infinite,
                    r => Rank::Finite(r as u64),
                })
                .collect();
            if ranks.contains(&Rank::ZERO) {
                jobs.push((horizon, ranks));
            }
        }
    }
    let evidence: Vec<Vec<Evidence>> = (0..=3).map(|h| (0..=h).flat_map(|k| all_evidence(2, k)).collect()).collect();
    let props: Vec<Proposition> = (0..4).map(|m| Proposition::from_mask(2, m)).collect();
    let results = par_chunks(&jobs, |chunk| -> Result<usize, String> {
        let mut verdicts = 0;
        for (horizon, ranks) in chunk {
            let atoms = all_prefixes(&s, *horizon);
            let prior = FinitePrior::new(
                s.clone(),
                DomainKind::Kappa,
                *horizon,
                atoms.iter().cloned().zip(ranks.iter().map(|&r| PlausValue::Kappa(r))),
            )
            .map_err(|e| e.to_string())?;
            let hm = markovianize_kappa(&prior).map_err(|e| e.to_string())?;
            let lifted_table = enumerate(hm.model(), *horizon, None).map_err(|e| e.to_string())?;
            for (p, r) in atoms.iter().zip(ranks) {
                let v = lifted_table.value(&hm.lift(p).unwrap());
                if v != PlausValue::Kappa(*r) {
                    return Err(format!("rank of {p:?} is {v}, expected {r}"));
                }
            }
            for e in &evidence[*horizon] {
                let lifted = hm.lift_evidence(e).unwrap();
                for a in &props {
                    let la = hm.lift_proposition(a);
                    for at in 0..=e.horizon() {
                        let want = prior.believes(e, a, at).map_err(|e| e.exit_code());
                        let got = hm.model().believes(&lifted, &la, at).map_err(|e| e.exit_code());
                        if want != got {
                            return Err(format!("belief differs: horizon {horizon}, ranks {ranks:?}, at {at}"));
                        }
                        verdicts += 1;
                    }
                }
            }
        }
        Ok(verdicts)
    });
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{} priors, {total} belief verdicts identical", jobs.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("borrowed-car ranks and beliefs", criterion_1, Duration::from_secs(1)),
        ("stolen-car ties", criterion_2, Duration::from_secs(1)),
        ("chain samples diverge", criterion_3, Duration::from_secs(1)),
        ("constraint verdicts", criterion_4, Duration::from_secs(1)),
        ("filter equals enumeration", criterion_5, Duration::from_secs(60)),
        ("qualitative iff closed under conjunction", criterion_6, Duration::from_secs(60)),
        ("prefix order soundness", criterion_7, Duration::from_secs(60)),
        ("history-model round trip", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if elapsed > *limit => ("FAIL", format!("took {elapsed:.2?}, limit {limit:?}")),
            Ok(detail) => ("PASS", detail),
            Err(why) => ("FAIL", why),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {status} {name} [{elapsed:.2?} / {limit:?}] {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
