//! Line-oriented text formats for systems, nets, formulas and witnesses.
//!
//! Every format uses dot-directives, one per line, with `#` starting a
//! comment. Identifiers match `[A-Za-z0-9_.+-]+`.
//!
//! ```text
//! .ts A1
//! .initial s0
//! .arc s0 a s1
//! ```
//!
//! A system file may pin the state and event order with `.states` and
//! `.events`; when present, arcs must only mention declared names.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::net_type::{Family, NetType, TauEvent};
use crate::petri::{PetriNet, Place};
use crate::reduction::Cm1in3Formula;
use crate::region::Region;
use crate::ts::{Arc, Carrier, SeparationAtom, TransitionSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

fn err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError { line, reason: reason.into() }
}

pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|c| c.is_ascii_alphanumeric() || matches!(c, b'_' | b'.' | b'+' | b'-'))
}

/// Non-empty, comment-stripped lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn ident<'a>(line: usize, t: &'a str) -> Result<&'a str, ParseError> {
    if is_identifier(t) {
        Ok(t)
    } else {
        Err(err(line, format!("invalid identifier `{t}`")))
    }
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<(), ParseError> {
    if toks.len() == n + 1 {
        Ok(())
    } else {
        Err(err(line, format!("{} expects {n} argument(s)", toks[0])))
    }
}

fn number<T: std::str::FromStr>(line: usize, t: &str) -> Result<T, ParseError> {
    t.parse().map_err(|_| err(line, format!("expected a number, found `{t}`")))
}

/// Interns names in first-seen order, optionally locked to a declared list.
struct Names {
    list: Vec<String>,
    index: HashMap<String, usize>,
    declared: bool,
}

impl Names {
    fn new() -> Self {
        Names { list: Vec::new(), index: HashMap::new(), declared: false }
    }

    fn declare(&mut self, line: usize, names: &[&str], what: &str) -> Result<(), ParseError> {
        if self.declared || !self.list.is_empty() {
            return Err(err(line, format!("{what} must be declared once, before use")));
        }
        for n in names {
            let n = ident(line, n)?;
            if self.index.insert(n.to_string(), self.list.len()).is_some() {
                return Err(err(line, format!("duplicate {what} `{n}`")));
            }
            self.list.push(n.to_string());
        }
        self.declared = true;
        Ok(())
    }

    fn get(&mut self, line: usize, name: &str, what: &str) -> Result<usize, ParseError> {
        let name = ident(line, name)?;
        if let Some(&i) = self.index.get(name) {
            return Ok(i);
        }
        if self.declared {
            return Err(err(line, format!("undeclared {what} `{name}`")));
        }
        self.index.insert(name.to_string(), self.list.len());
        self.list.push(name.to_string());
        Ok(self.list.len() - 1)
    }
}

/// Parses and validates a transition system.
pub fn parse_ts(text: &str) -> Result<TransitionSystem, ParseError> {
    let mut name = None;
    let mut initial: Option<(usize, String)> = None;
    let mut states = Names::new();
    let mut events = Names::new();
    let mut arcs = Vec::new();
    let mut pending: Vec<(usize, String, String, String)> = Vec::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            ".ts" => {
                arity(ln, &toks, 1)?;
                if name.is_some() {
                    return Err(err(ln, "duplicate .ts header"));
                }
                name = Some(ident(ln, toks[1])?.to_string());
            }
            ".initial" => {
                arity(ln, &toks, 1)?;
                if initial.is_some() {
                    return Err(err(ln, "duplicate .initial"));
                }
                initial = Some((ln, ident(ln, toks[1])?.to_string()));
            }
            ".states" => states.declare(ln, &toks[1..], "state")?,
            ".events" => events.declare(ln, &toks[1..], "event")?,
            ".arc" => {
                arity(ln, &toks, 3)?;
                pending.push((ln, toks[1].to_string(), toks[2].to_string(), toks[3].to_string()));
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| err(0, "missing .ts header"))?;
    let (iln, init) = initial.ok_or_else(|| err(0, "missing .initial"))?;
    let init = states.get(iln, &init, "state")?;
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (ln, s, e, d) in pending {
        let src = states.get(ln, &s, "state")?;
        let event = events.get(ln, &e, "event")?;
        let dst = states.get(ln, &d, "state")?;
        if let Some(prev) = seen.insert((src, event), ln) {
            return Err(err(ln, format!("nondeterminism: {s} already has an {e}-edge (line {prev})")));
        }
        arcs.push(Arc { src, event, dst });
    }
    let ts = TransitionSystem::new(name, states.list, events.list, arcs, init).map_err(|e| err(0, e.to_string()))?;
    ts.ensure_valid().map_err(|e| err(0, e.to_string()))?;
    Ok(ts)
}

/// Canonical text of a system: explicit state and event order, then arcs in
/// stored order.
pub fn serialize_ts(ts: &TransitionSystem) -> String {
    let mut out = String::new();
    writeln!(out, ".ts {}", ts.name()).unwrap();
    writeln!(out, ".initial {}", ts.states()[ts.initial()]).unwrap();
    writeln!(out, ".states {}", ts.states().join(" ")).unwrap();
    if ts.num_events() > 0 {
        writeln!(out, ".events {}", ts.events().join(" ")).unwrap();
    }
    for a in ts.arc_list() {
        writeln!(out, ".arc {} {} {}", ts.states()[a.src], ts.events()[a.event], ts.states()[a.dst]).unwrap();
    }
    out
}

/// Parses a net. Flow entries left out default to the neutral event of the
/// family: `0,0` for PT/PPT and `g:0` for the group families.
pub fn parse_net(text: &str) -> Result<PetriNet, ParseError> {
    let mut name = None;
    let mut family: Option<Family> = None;
    let mut bound: Option<u32> = None;
    let mut places: Vec<Place> = Vec::new();
    let mut place_line = Vec::new();
    let mut transitions: Vec<String> = Vec::new();
    let mut flows: Vec<(usize, String, String, TauEvent)> = Vec::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            ".net" => {
                arity(ln, &toks, 1)?;
                name = Some(ident(ln, toks[1])?.to_string());
            }
            ".family" => {
                arity(ln, &toks, 1)?;
                family = Some(toks[1].parse().map_err(|e: crate::net_type::NetTypeError| err(ln, e.to_string()))?);
            }
            ".bound" => {
                arity(ln, &toks, 1)?;
                bound = Some(number(ln, toks[1])?);
            }
            ".place" => {
                arity(ln, &toks, 2)?;
                let n = ident(ln, toks[1])?.to_string();
                if places.iter().any(|p| p.name == n) {
                    return Err(err(ln, format!("duplicate place `{n}`")));
                }
                places.push(Place { name: n, initial: number(ln, toks[2])? });
                place_line.push(ln);
            }
            ".transition" => {
                arity(ln, &toks, 1)?;
                let t = ident(ln, toks[1])?.to_string();
                if transitions.contains(&t) {
                    return Err(err(ln, format!("duplicate transition `{t}`")));
                }
                transitions.push(t);
            }
            ".flow" => {
                arity(ln, &toks, 3)?;
                let ev: TauEvent = toks[3].parse().map_err(|e: crate::net_type::NetTypeError| err(ln, e.to_string()))?;
                flows.push((ln, toks[1].to_string(), toks[2].to_string(), ev));
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| err(0, "missing .net header"))?;
    let family = family.ok_or_else(|| err(0, "missing .family"))?;
    let bound = bound.ok_or_else(|| err(0, "missing .bound"))?;
    let ty = NetType::new(family, bound).map_err(|e| err(0, e.to_string()))?;
    for (p, ln) in places.iter().zip(&place_line) {
        if p.initial > bound {
            return Err(err(*ln, format!("marking {} of place {} outside 0..={bound}", p.initial, p.name)));
        }
    }
    let mut flow = vec![vec![ty.neutral(); transitions.len()]; places.len()];
    let mut set = vec![vec![false; transitions.len()]; places.len()];
    for (ln, p, t, ev) in flows {
        let pi = places.iter().position(|x| x.name == p).ok_or_else(|| err(ln, format!("unknown place `{p}`")))?;
        let ti = transitions.iter().position(|x| *x == t).ok_or_else(|| err(ln, format!("unknown transition `{t}`")))?;
        if !ty.contains(ev) {
            return Err(err(ln, format!("event {ev} is foreign to {ty}")));
        }
        if std::mem::replace(&mut set[pi][ti], true) {
            return Err(err(ln, format!("duplicate flow for ({p},{t})")));
        }
        flow[pi][ti] = ev;
    }
    PetriNet::new(name, ty, places, transitions, flow).map_err(|e| err(0, e.to_string()))
}

/// Canonical net text; neutral flow entries are omitted.
pub fn serialize_net(net: &PetriNet) -> String {
    let ty = net.net_type();
    let mut out = String::new();
    writeln!(out, ".net {}", net.name()).unwrap();
    writeln!(out, ".family {}", ty.family()).unwrap();
    writeln!(out, ".bound {}", ty.bound()).unwrap();
    for p in net.places() {
        writeln!(out, ".place {} {}", p.name, p.initial).unwrap();
    }
    for t in net.transitions() {
        writeln!(out, ".transition {t}").unwrap();
    }
    for (pi, p) in net.places().iter().enumerate() {
        for (ti, t) in net.transitions().iter().enumerate() {
            let ev = net.flow(pi, ti);
            if ev != ty.neutral() {
                writeln!(out, ".flow {} {} {}", p.name, t, ev).unwrap();
            }
        }
    }
    out
}

/// Parses a cubic monotone one-in-three 3-SAT formula.
pub fn parse_formula(text: &str) -> Result<Cm1in3Formula, ParseError> {
    let mut m: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            ".cnf3" => {
                arity(ln, &toks, 1)?;
                m = Some((ln, number(ln, toks[1])?));
            }
            ".clause" => {
                arity(ln, &toks, 3)?;
                clauses.push([number(ln, toks[1])?, number(ln, toks[2])?, number(ln, toks[3])?]);
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    let (ln, m) = m.ok_or_else(|| err(0, "missing .cnf3 header"))?;
    Cm1in3Formula::new(m, clauses).map_err(|e| err(ln, e.to_string()))
}

pub fn serialize_formula(f: &Cm1in3Formula) -> String {
    let mut out = format!(".cnf3 {}\n", f.m());
    for c in f.clauses() {
        writeln!(out, ".clause {} {} {}", c[0], c[1], c[2]).unwrap();
    }
    out
}

/// Sidecar listing of witness regions: one `.region` block per region with
/// its solved atom, support and signature tables.
pub fn serialize_witness<C: Carrier + ?Sized>(c: &C, ty: &NetType, regions: &[(Region, Option<SeparationAtom>)]) -> String {
    let mut out = String::new();
    writeln!(out, ".witness").unwrap();
    writeln!(out, ".family {}", ty.family()).unwrap();
    writeln!(out, ".bound {}", ty.bound()).unwrap();
    for (i, (r, atom)) in regions.iter().enumerate() {
        match atom {
            Some(a) => writeln!(out, ".region R{i} {}", a.label(c)).unwrap(),
            None => writeln!(out, ".region R{i}").unwrap(),
        }
        for (s, v) in r.sup.iter().enumerate() {
            writeln!(out, ".sup {} {}", c.state_name(s), v).unwrap();
        }
        for (e, sig) in r.sig.iter().enumerate() {
            writeln!(out, ".sig {} {}", c.event_name(e), sig).unwrap();
        }
    }
    out
}
