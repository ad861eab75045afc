//! Deterministic initialized transition systems.
//!
//! States and events are addressed by dense indices; names are kept for
//! serialization and reporting. A [`TransitionSystem`] may be built in an
//! invalid shape (unreachable states, unused events, duplicate arcs) so that
//! [`TransitionSystem::validate`] can report every violation at once.

use std::collections::VecDeque;
use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A labeled edge `src --event--> dst`, all three given as indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arc {
    pub src: usize,
    pub event: usize,
    pub dst: usize,
}

/// Anything that carries labeled edges over indexed states and events.
///
/// Transition systems have a single root (the initial state); gadget unions
/// have one root per member.
pub trait Carrier {
    fn state_count(&self) -> usize;
    fn event_count(&self) -> usize;
    fn arcs(&self) -> &[Arc];
    fn roots(&self) -> Vec<usize>;
    fn state_name(&self, s: usize) -> &str;
    fn event_name(&self, e: usize) -> &str;
    fn delta(&self, s: usize, e: usize) -> Option<usize>;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TsError {
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("event index {0} out of range")]
    EventOutOfRange(usize),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("invalid transition system: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// One broken invariant of a transition system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    DuplicateState(String),
    DuplicateEvent(String),
    Nondeterministic { state: String, event: String },
    Unreachable(String),
    UnusedEvent(String),
    EmptyName,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateState(s) => write!(f, "duplicate state: {s}"),
            Violation::DuplicateEvent(e) => write!(f, "duplicate event: {e}"),
            Violation::Nondeterministic { state, event } => {
                write!(f, "nondeterminism: {state} has several {event}-edges")
            }
            Violation::Unreachable(s) => write!(f, "unreachable: {s}"),
            Violation::UnusedEvent(e) => write!(f, "unused event: {e}"),
            Violation::EmptyName => write!(f, "empty identifier"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    name: String,
    states: Vec<String>,
    events: Vec<String>,
    arcs: Vec<Arc>,
    initial: usize,
    /// `delta[s * events.len() + e]`, first target wins on duplicates.
    delta: Vec<Option<usize>>,
}

impl TransitionSystem {
    /// Builds a system from index-based parts. Only index ranges are checked
    /// here; everything else is left to [`validate`](Self::validate).
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        events: Vec<String>,
        arcs: Vec<Arc>,
        initial: usize,
    ) -> Result<Self, TsError> {
        if initial >= states.len() {
            return Err(TsError::StateOutOfRange(initial));
        }
        let ne = events.len();
        let mut delta = vec![None; states.len() * ne];
        for a in &arcs {
            if a.src >= states.len() {
                return Err(TsError::StateOutOfRange(a.src));
            }
            if a.dst >= states.len() {
                return Err(TsError::StateOutOfRange(a.dst));
            }
            if a.event >= ne {
                return Err(TsError::EventOutOfRange(a.event));
            }
            let slot = &mut delta[a.src * ne + a.event];
            if slot.is_none() {
                *slot = Some(a.dst);
            }
        }
        Ok(TransitionSystem { name: name.into(), states, events, arcs, initial, delta })
    }

    /// Like [`new`](Self::new) followed by a validation that must succeed.
    pub fn new_valid(
        name: impl Into<String>,
        states: Vec<String>,
        events: Vec<String>,
        arcs: Vec<Arc>,
        initial: usize,
    ) -> Result<Self, TsError> {
        let ts = Self::new(name, states, events, arcs, initial)?;
        ts.ensure_valid()?;
        Ok(ts)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn states(&self) -> &[String] {
        &self.states
    }
    pub fn events(&self) -> &[String] {
        &self.events
    }
    pub fn initial(&self) -> usize {
        self.initial
    }
    pub fn num_states(&self) -> usize {
        self.states.len()
    }
    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
    pub fn event_index(&self, name: &str) -> Option<usize> {
        self.events.iter().position(|e| e == name)
    }

    pub fn step(&self, s: usize, e: usize) -> Option<usize> {
        self.delta[s * self.events.len() + e]
    }

    /// Named lookup of `δ(s, e)`.
    pub fn step_named(&self, s: &str, e: &str) -> Result<Option<&str>, TsError> {
        let si = self.state_index(s).ok_or_else(|| TsError::UnknownState(s.to_string()))?;
        let ei = self.event_index(e).ok_or_else(|| TsError::UnknownEvent(e.to_string()))?;
        Ok(self.step(si, ei).map(|t| self.states[t].as_str()))
    }

    /// States in which `e` is enabled, in state order.
    pub fn sources_of(&self, e: usize) -> Vec<usize> {
        (0..self.num_states()).filter(|&s| self.step(s, e).is_some()).collect()
    }

    /// Every invariant violation, in a fixed order; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.name.is_empty() {
            out.push(Violation::EmptyName);
        }
        let mut seen = IndexSet::new();
        for s in &self.states {
            if s.is_empty() {
                out.push(Violation::EmptyName);
            } else if !seen.insert(s.as_str()) {
                out.push(Violation::DuplicateState(s.clone()));
            }
        }
        let mut seen = IndexSet::new();
        for e in &self.events {
            if e.is_empty() {
                out.push(Violation::EmptyName);
            } else if !seen.insert(e.as_str()) {
                out.push(Violation::DuplicateEvent(e.clone()));
            }
        }
        let mut pairs = IndexSet::new();
        for a in &self.arcs {
            if !pairs.insert((a.src, a.event)) {
                out.push(Violation::Nondeterministic {
                    state: self.states[a.src].clone(),
                    event: self.events[a.event].clone(),
                });
            }
        }
        let reach = self.reachable();
        for (s, r) in reach.iter().enumerate() {
            if !r {
                out.push(Violation::Unreachable(self.states[s].clone()));
            }
        }
        let mut used = vec![false; self.events.len()];
        for a in &self.arcs {
            used[a.event] = true;
        }
        for (e, u) in used.iter().enumerate() {
            if !u {
                out.push(Violation::UnusedEvent(self.events[e].clone()));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<(), TsError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(TsError::Invalid(v))
        }
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); self.num_states()];
        for a in &self.arcs {
            out_arcs[a.src].push(a.dst);
        }
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            for &t in &out_arcs[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Least `g` such that no state has more than `g` incoming or more than
    /// `g` outgoing edges.
    pub fn grade(&self) -> usize {
        let mut inc = vec![0usize; self.num_states()];
        let mut out = vec![0usize; self.num_states()];
        for a in &self.arcs {
            out[a.src] += 1;
            inc[a.dst] += 1;
        }
        inc.into_iter().chain(out).max().unwrap_or(0)
    }

    /// The states along the unique path if the system is linear.
    pub fn linear_path(&self) -> Option<Vec<usize>> {
        if self.arcs.len() + 1 != self.num_states() {
            return None;
        }
        let mut out: Vec<Option<usize>> = vec![None; self.num_states()];
        for a in &self.arcs {
            if out[a.src].replace(a.dst).is_some() {
                return None;
            }
        }
        let mut seen = vec![false; self.num_states()];
        let mut path = vec![self.initial];
        seen[self.initial] = true;
        let mut cur = self.initial;
        while let Some(next) = out[cur] {
            if seen[next] {
                return None;
            }
            seen[next] = true;
            path.push(next);
            cur = next;
        }
        (path.len() == self.num_states()).then_some(path)
    }

    pub fn is_linear(&self) -> bool {
        self.linear_path().is_some()
    }

    /// Terminal state of a linear system.
    pub fn terminal(&self) -> Option<usize> {
        self.linear_path().and_then(|p| p.last().copied())
    }

    /// All separation atoms of the requested kind. SSA come first, as
    /// index-ordered pairs `(s, s')` with `s < s'`; ESSA follow in
    /// (event, state) order.
    pub fn enumerate_atoms(&self, kind: AtomKind) -> Vec<SeparationAtom> {
        let mut out = Vec::new();
        if kind != AtomKind::Essa {
            for s in 0..self.num_states() {
                for t in s + 1..self.num_states() {
                    out.push(SeparationAtom::Ssa(s, t));
                }
            }
        }
        if kind != AtomKind::Ssa {
            for e in 0..self.num_events() {
                for s in 0..self.num_states() {
                    if self.step(s, e).is_none() {
                        out.push(SeparationAtom::Essa { event: e, state: s });
                    }
                }
            }
        }
        out
    }

    /// Returns `f` with `f[s]` the image of state `s` in `other` when the two
    /// systems are isomorphic. Event names must coincide as sets.
    pub fn isomorphism(&self, other: &TransitionSystem) -> Option<Vec<usize>> {
        deterministic_isomorphism(self, other)
    }

    pub fn arc_list(&self) -> &[Arc] {
        &self.arcs
    }

    /// Human-readable rendering of an atom.
    pub fn atom_label(&self, atom: &SeparationAtom) -> String {
        atom.label(self)
    }
}

impl Carrier for TransitionSystem {
    fn state_count(&self) -> usize {
        self.states.len()
    }
    fn event_count(&self) -> usize {
        self.events.len()
    }
    fn arcs(&self) -> &[Arc] {
        &self.arcs
    }
    fn roots(&self) -> Vec<usize> {
        vec![self.initial]
    }
    fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }
    fn event_name(&self, e: usize) -> &str {
        &self.events[e]
    }
    fn delta(&self, s: usize, e: usize) -> Option<usize> {
        self.step(s, e)
    }
}

/// Name-based incremental construction. States and events are numbered in
/// order of first mention, the initial state first.
#[derive(Clone, Debug)]
pub struct TsBuilder {
    name: String,
    states: IndexSet<String>,
    events: IndexSet<String>,
    arcs: Vec<Arc>,
}

impl TsBuilder {
    pub fn new(name: impl Into<String>, initial: impl Into<String>) -> Self {
        let mut states = IndexSet::new();
        states.insert(initial.into());
        TsBuilder { name: name.into(), states, events: IndexSet::new(), arcs: Vec::new() }
    }

    pub fn state(&mut self, s: impl Into<String>) -> usize {
        self.states.insert_full(s.into()).0
    }

    pub fn event(&mut self, e: impl Into<String>) -> usize {
        self.events.insert_full(e.into()).0
    }

    pub fn arc(&mut self, src: impl Into<String>, event: impl Into<String>, dst: impl Into<String>) -> &mut Self {
        let src = self.state(src);
        let event = self.event(event);
        let dst = self.state(dst);
        self.arcs.push(Arc { src, event, dst });
        self
    }

    /// A path `prefix_{from} --e--> prefix_{from+1} ... prefix_{from+len}`.
    pub fn run(&mut self, prefix: &str, from: usize, event: &str, len: usize) -> &mut Self {
        for i in from..from + len {
            self.arc(format!("{prefix}{i}"), event, format!("{prefix}{}", i + 1));
        }
        self
    }

    pub fn build(&self) -> Result<TransitionSystem, TsError> {
        TransitionSystem::new(
            self.name.clone(),
            self.states.iter().cloned().collect(),
            self.events.iter().cloned().collect(),
            self.arcs.clone(),
            0,
        )
    }

    pub fn build_valid(&self) -> Result<TransitionSystem, TsError> {
        let ts = self.build()?;
        ts.ensure_valid()?;
        Ok(ts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AtomKind {
    Ssa,
    Essa,
    Both,
}

/// A state separation atom `(s, s')` or an event/state separation atom
/// `(e, s)` with `e` disabled at `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SeparationAtom {
    Ssa(usize, usize),
    Essa { event: usize, state: usize },
}

impl SeparationAtom {
    pub fn is_ssa(&self) -> bool {
        matches!(self, SeparationAtom::Ssa(..))
    }

    /// Checks the atom's own invariant against a carrier.
    pub fn is_well_formed<C: Carrier + ?Sized>(&self, c: &C) -> bool {
        match *self {
            SeparationAtom::Ssa(s, t) => s != t && s < c.state_count() && t < c.state_count(),
            SeparationAtom::Essa { event, state } => {
                event < c.event_count() && state < c.state_count() && c.delta(state, event).is_none()
            }
        }
    }

    pub fn label<C: Carrier + ?Sized>(&self, c: &C) -> String {
        match *self {
            SeparationAtom::Ssa(s, t) => format!("({},{})", c.state_name(s), c.state_name(t)),
            SeparationAtom::Essa { event, state } => {
                format!("({},{})", c.event_name(event), c.state_name(state))
            }
        }
    }
}

/// Propagates `ι_a ↦ ι_b` along shared events. Because both systems are
/// deterministic and fully reachable the candidate map is unique, so a
/// single sweep decides isomorphism.
pub fn deterministic_isomorphism(a: &TransitionSystem, b: &TransitionSystem) -> Option<Vec<usize>> {
    if a.num_states() != b.num_states()
        || a.num_events() != b.num_events()
        || a.arcs.len() != b.arcs.len()
    {
        return None;
    }
    let ev: Vec<usize> = a.events.iter().map(|e| b.event_index(e)).collect::<Option<_>>()?;
    let mut f: Vec<Option<usize>> = vec![None; a.num_states()];
    let mut used = vec![false; b.num_states()];
    let mut out_arcs: Vec<Vec<Arc>> = vec![Vec::new(); a.num_states()];
    for arc in &a.arcs {
        out_arcs[arc.src].push(*arc);
    }
    f[a.initial] = Some(b.initial);
    used[b.initial] = true;
    let mut queue = VecDeque::from([a.initial]);
    while let Some(s) = queue.pop_front() {
        let fs = f[s]?;
        for arc in &out_arcs[s] {
            let t = b.step(fs, ev[arc.event])?;
            match f[arc.dst] {
                Some(x) if x != t => return None,
                Some(_) => {}
                None => {
                    if used[t] {
                        return None;
                    }
                    used[t] = true;
                    f[arc.dst] = Some(t);
                    queue.push_back(arc.dst);
                }
            }
        }
    }
    let f: Vec<usize> = f.into_iter().collect::<Option<_>>()?;
    // Same arc count and an injective edge image means b has no extra edges.
    let mut seen = IndexSet::new();
    for arc in &a.arcs {
        if !seen.insert((f[arc.src], ev[arc.event])) {
            return None;
        }
    }
    Some(f)
}
