//! τ-nets, firing, and reachability graphs.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::net_type::{NetType, TauEvent};
use crate::ts::{Arc, TransitionSystem};

/// Default state cap for [`PetriNet::reachability_graph`].
pub const DEFAULT_CAP: usize = 1_000_000;

pub type Marking = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Place {
    pub name: String,
    pub initial: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PetriError {
    #[error("flow matrix has wrong shape")]
    FlowShape,
    #[error("flow({place},{transition}) = {event} is not an event of {net_type}")]
    ForeignFlow { place: String, transition: String, event: TauEvent, net_type: String },
    #[error("initial marking {value} of place {place} exceeds bound {b}")]
    MarkingOutOfRange { place: String, value: u32, b: u32 },
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("marking has {got} entries, net has {want} places")]
    MarkingLength { got: usize, want: usize },
    #[error("reachability graph exceeds cap of {0} states")]
    CapExceeded(usize),
}

/// A τ-net `N = (P, T, f, M0)` with a total flow `f: P×T → E_τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetriNet {
    name: String,
    net_type: NetType,
    places: Vec<Place>,
    transitions: Vec<String>,
    /// `flow[p][t]`
    flow: Vec<Vec<TauEvent>>,
}

/// Reachability graph plus the markings behind its state names.
#[derive(Clone, Debug)]
pub struct ReachabilityGraph {
    pub ts: TransitionSystem,
    pub markings: Vec<Marking>,
    pub warnings: Vec<String>,
}

impl PetriNet {
    pub fn new(
        name: impl Into<String>,
        net_type: NetType,
        places: Vec<Place>,
        transitions: Vec<String>,
        flow: Vec<Vec<TauEvent>>,
    ) -> Result<Self, PetriError> {
        if flow.len() != places.len() || flow.iter().any(|row| row.len() != transitions.len()) {
            return Err(PetriError::FlowShape);
        }
        for (p, place) in places.iter().enumerate() {
            if place.initial > net_type.bound() {
                return Err(PetriError::MarkingOutOfRange {
                    place: place.name.clone(),
                    value: place.initial,
                    b: net_type.bound(),
                });
            }
            for (t, &ev) in flow[p].iter().enumerate() {
                if !net_type.contains(ev) {
                    return Err(PetriError::ForeignFlow {
                        place: place.name.clone(),
                        transition: transitions[t].clone(),
                        event: ev,
                        net_type: net_type.to_string(),
                    });
                }
            }
        }
        Ok(PetriNet { name: name.into(), net_type, places, transitions, flow })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn net_type(&self) -> &NetType {
        &self.net_type
    }
    pub fn places(&self) -> &[Place] {
        &self.places
    }
    pub fn transitions(&self) -> &[String] {
        &self.transitions
    }
    pub fn flow(&self, p: usize, t: usize) -> TauEvent {
        self.flow[p][t]
    }

    pub fn initial_marking(&self) -> Marking {
        self.places.iter().map(|p| p.initial).collect()
    }

    pub fn transition_index(&self, name: &str) -> Option<usize> {
        self.transitions.iter().position(|t| t == name)
    }

    /// Fires transition index `t`; `None` if some place blocks it.
    pub fn fire(&self, m: &[u32], t: usize) -> Option<Marking> {
        m.iter()
            .enumerate()
            .map(|(p, &v)| self.net_type.step(v, self.flow[p][t]))
            .collect()
    }

    pub fn fire_named(&self, m: &[u32], t: &str) -> Result<Option<Marking>, PetriError> {
        let ti = self.transition_index(t).ok_or_else(|| PetriError::UnknownTransition(t.to_string()))?;
        if m.len() != self.places.len() {
            return Err(PetriError::MarkingLength { got: m.len(), want: self.places.len() });
        }
        Ok(self.fire(m, ti))
    }

    /// Canonical state name of a marking: digits concatenated when `b ≤ 9`,
    /// otherwise dot-separated; the empty marking is `_`.
    pub fn marking_name(&self, m: &[u32]) -> String {
        marking_name(m, self.net_type.bound())
    }

    /// Breadth-first exploration from `M0`. Transitions that never fire are
    /// dropped from the event list with a warning.
    pub fn reachability_graph(&self, cap: usize) -> Result<ReachabilityGraph, PetriError> {
        let m0 = self.initial_marking();
        let mut index: HashMap<Marking, usize> = HashMap::new();
        let mut markings = vec![m0.clone()];
        index.insert(m0, 0);
        let mut raw_arcs = Vec::new();
        let mut fired = vec![false; self.transitions.len()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            for t in 0..self.transitions.len() {
                let Some(next) = self.fire(&markings[s], t) else { continue };
                fired[t] = true;
                let dst = match index.get(&next) {
                    Some(&d) => d,
                    None => {
                        if markings.len() >= cap {
                            return Err(PetriError::CapExceeded(cap));
                        }
                        let d = markings.len();
                        index.insert(next.clone(), d);
                        markings.push(next);
                        queue.push_back(d);
                        d
                    }
                };
                raw_arcs.push((s, t, dst));
            }
        }
        let mut warnings = Vec::new();
        let mut event_of = vec![usize::MAX; self.transitions.len()];
        let mut events = Vec::new();
        for (t, name) in self.transitions.iter().enumerate() {
            if fired[t] {
                event_of[t] = events.len();
                events.push(name.clone());
            } else {
                warnings.push(format!("transition {name} is dead and was dropped"));
            }
        }
        let arcs = raw_arcs
            .into_iter()
            .map(|(src, t, dst)| Arc { src, event: event_of[t], dst })
            .collect();
        let states = markings.iter().map(|m| self.marking_name(m)).collect();
        let ts = TransitionSystem::new(self.name.clone(), states, events, arcs, 0)
            .expect("reachability graph indices are in range");
        Ok(ReachabilityGraph { ts, markings, warnings })
    }
}

pub fn marking_name(m: &[u32], b: u32) -> String {
    if m.is_empty() {
        return "_".to_string();
    }
    let parts: Vec<String> = m.iter().map(|v| v.to_string()).collect();
    if b <= 9 {
        parts.concat()
    } else {
        parts.join(".")
    }
}
