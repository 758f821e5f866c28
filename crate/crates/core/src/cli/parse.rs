//! Line-oriented file formats. `#` starts a comment; tokens are separated by
//! whitespace.
//!
//! Model files:
//!
//! ```text
//! domain kappa            # or: possibility | kappa_product K
//! states PF PE G
//! init PF
//! trans PF G 1            # omitted pairs are impossible
//! ```
//!
//! Constraint files share `states` and `init` and add
//! `impossible <from> <to>` and `order <f1> <t1> <|<=|= <f2> <t2>`.
//! Observation files have one `obs <id>+` or `obs *` line per time step,
//! starting at time 1.

use std::fmt::Write as _;

use crate::algebra::{DomainKind, PlausValue};
use crate::constraints::{Constraint, ConstraintSet, Rel, Var};
use crate::error::{Error, Result};
use crate::model::{Evidence, Proposition, StateSpace, TransitionModel};

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split_once('#').map_or(line, |(b, _)| b);
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

#[derive(Default)]
struct Header {
    states: Option<(usize, Vec<String>)>,
    init: Option<(usize, String)>,
}

impl Header {
    /// Handles `states` and `init`; returns false for other directives.
    fn accept(&mut self, line: usize, words: &[&str]) -> Result<bool> {
        match words[0] {
            "states" => {
                if self.states.is_some() {
                    return Err(Error::parse(line, "duplicate `states` line"));
                }
                if words.len() < 2 {
                    return Err(Error::parse(line, "`states` needs at least one state"));
                }
                self.states = Some((line, words[1..].iter().map(|w| w.to_string()).collect()));
            }
            "init" => {
                if self.init.is_some() {
                    return Err(Error::parse(line, "duplicate `init` line"));
                }
                match words {
                    [_, id] => self.init = Some((line, id.to_string())),
                    [_] => return Err(Error::parse(line, "`init` needs a state")),
                    _ => {
                        return Err(Error::parse(
                            line,
                            "multiple initial states are not supported: every run starts at the single initial state",
                        ))
                    }
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn finish(self) -> Result<StateSpace> {
        let (line, states) = self.states.ok_or_else(|| Error::Parse { line: None, message: "missing states".into() })?;
        let (init_line, init) = self.init.ok_or_else(|| Error::Parse { line: None, message: "missing init".into() })?;
        StateSpace::new(&states, &init).map_err(|e| match e {
            Error::UnknownState(_) => Error::parse(init_line, e.to_string()),
            _ => Error::parse(line, e.to_string()),
        })
    }
}

fn state(space: &StateSpace, line: usize, name: &str) -> Result<crate::model::StateId> {
    space.id(name).map_err(|e| Error::parse(line, e.to_string()))
}

/// Parses a model file. The result is not validated; see
/// [`TransitionModel::ensure_valid`].
pub fn parse_model(text: &str) -> Result<TransitionModel> {
    let mut header = Header::default();
    let mut domain: Option<DomainKind> = None;
    let mut trans = Vec::new();
    for (line, words) in lines(text) {
        if header.accept(line, &words)? {
            continue;
        }
        match words[0] {
            "domain" => {
                if domain.is_some() {
                    return Err(Error::parse(line, "duplicate `domain` line"));
                }
                domain = Some(DomainKind::parse_words(&words[1..]).map_err(|e| Error::parse(line, e.to_string()))?);
            }
            "trans" => match words[..] {
                [_, from, to, value] => trans.push((line, from, to, value)),
                _ => return Err(Error::parse(line, "expected `trans <from> <to> <value>`")),
            },
            other => return Err(Error::parse(line, format!("unknown directive `{other}`"))),
        }
    }
    let kind = domain.ok_or_else(|| Error::Parse { line: None, message: "missing domain".into() })?;
    let space = header.finish()?;
    let mut seen = vec![false; space.len() * space.len()];
    let mut entries = Vec::with_capacity(trans.len());
    for (line, from, to, value) in trans {
        let (f, t) = (state(&space, line, from)?, state(&space, line, to)?);
        let slot = &mut seen[f.index() * space.len() + t.index()];
        if *slot {
            return Err(Error::parse(line, format!("duplicate transition {from} -> {to}")));
        }
        *slot = true;
        let v = PlausValue::parse(kind, value).map_err(|e| Error::parse(line, e.to_string()))?;
        entries.push((f, t, v));
    }
    TransitionModel::new(space, kind, entries)
}

/// Parses and validates a model file.
pub fn load_model(text: &str) -> Result<TransitionModel> {
    let m = parse_model(text)?;
    m.ensure_valid()?;
    Ok(m)
}

/// Renders a model in the file format accepted by [`parse_model`], leaving
/// out ⊥ entries.
pub fn render_model(m: &TransitionModel) -> String {
    let s = m.space();
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "domain {}", m.kind()).unwrap();
    writeln!(w, "states {}", s.names().join(" ")).unwrap();
    writeln!(w, "init {}", s.name(s.init())).unwrap();
    for from in s.ids() {
        for to in s.ids() {
            let v = m.transition(from, to);
            if !v.is_bottom() {
                writeln!(w, "trans {} {} {v}", s.name(from), s.name(to)).unwrap();
            }
        }
    }
    out
}

pub fn parse_constraints(text: &str) -> Result<ConstraintSet> {
    let mut header = Header::default();
    let mut orders = Vec::new();
    let mut impossible = Vec::new();
    for (line, words) in lines(text) {
        if header.accept(line, &words)? {
            continue;
        }
        match words[0] {
            "impossible" => match words[..] {
                [_, from, to] => impossible.push((line, from, to)),
                _ => return Err(Error::parse(line, "expected `impossible <from> <to>`")),
            },
            "order" => match words[..] {
                [_, f1, t1, rel, f2, t2] => {
                    let rel: Rel = rel.parse().map_err(|m: String| Error::parse(line, m))?;
                    orders.push((line, f1, t1, rel, f2, t2));
                }
                _ => return Err(Error::parse(line, "expected `order <from> <to> <|<=|= <from> <to>`")),
            },
            other => return Err(Error::parse(line, format!("unknown directive `{other}`"))),
        }
    }
    let space = header.finish()?;
    let var = |line, f, t| -> Result<Var> { Ok(Var::new(state(&space, line, f)?, state(&space, line, t)?)) };
    let impossible = impossible.into_iter().map(|(line, f, t)| var(line, f, t)).collect::<Result<Vec<_>>>()?;
    let relations = orders
        .into_iter()
        .map(|(line, f1, t1, rel, f2, t2)| Ok(Constraint { lhs: var(line, f1, t1)?, rel, rhs: var(line, f2, t2)? }))
        .collect::<Result<Vec<_>>>()?;
    ConstraintSet::new(space.clone(), relations, impossible)
}

pub fn parse_observations(text: &str, space: &StateSpace) -> Result<Evidence> {
    let mut observations = Vec::new();
    for (line, words) in lines(text) {
        if words[0] != "obs" {
            return Err(Error::parse(line, format!("unknown directive `{}`", words[0])));
        }
        let ids: Vec<&str> = words[1..].iter().flat_map(|w| w.split(',')).filter(|w| !w.is_empty()).collect();
        let obs = match ids[..] {
            [] => return Err(Error::parse(line, "empty observation")),
            ["*"] => Proposition::full(space.len()),
            _ => space.proposition(&ids).map_err(|e| Error::parse(line, e.to_string()))?,
        };
        observations.push(obs);
    }
    Evidence::new(observations)
}
