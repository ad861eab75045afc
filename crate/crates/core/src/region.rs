//! τ-regions, separation, witness sets and synthesized nets.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::net_type::{NetType, TauEvent};
use crate::petri::{PetriNet, Place};
use crate::ts::{Arc, AtomKind, Carrier, SeparationAtom, TransitionSystem};

/// A support `sup: S → {0..b}` and a signature `sig: E → E_τ`, both indexed
/// by the carrier's state and event indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub sup: Vec<u32>,
    pub sig: Vec<TauEvent>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("support covers {got} states, carrier has {want}")]
    SupportLength { got: usize, want: usize },
    #[error("signature covers {got} events, carrier has {want}")]
    SignatureLength { got: usize, want: usize },
    #[error("support value {value} at {state} exceeds bound")]
    SupportOutOfRange { state: String, value: u32 },
    #[error("signature of {event} is {sig}, not an event of the type")]
    ForeignSignature { event: String, sig: TauEvent },
    #[error("edge {src} -{event}-> {dst} violated: {sig} maps {from} to {got:?}, support says {want}")]
    Edge { src: String, event: String, dst: String, sig: TauEvent, from: u32, got: Option<u32>, want: u32 },
}

impl RegionError {
    /// The offending edge, when the failure is an edge violation.
    pub fn edge(&self) -> Option<(&str, &str, &str)> {
        match self {
            RegionError::Edge { src, event, dst, .. } => Some((src, event, dst)),
            _ => None,
        }
    }
}

/// Which separation property is being asked about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Problem {
    Ssp,
    Essp,
    Solvability,
}

impl Problem {
    pub fn atom_kind(self) -> AtomKind {
        match self {
            Problem::Ssp => AtomKind::Ssa,
            Problem::Essp => AtomKind::Essa,
            Problem::Solvability => AtomKind::Both,
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ssp" => Ok(Problem::Ssp),
            "essp" => Ok(Problem::Essp),
            "solvability" => Ok(Problem::Solvability),
            _ => Err(format!("unknown problem `{s}`")),
        }
    }
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Problem::Ssp => "ssp",
            Problem::Essp => "essp",
            Problem::Solvability => "solvability",
        })
    }
}

/// Checks the region condition on every edge; reports the first violation.
pub fn validate_region<C: Carrier + ?Sized>(c: &C, ty: &NetType, r: &Region) -> Result<(), RegionError> {
    if r.sup.len() != c.state_count() {
        return Err(RegionError::SupportLength { got: r.sup.len(), want: c.state_count() });
    }
    if r.sig.len() != c.event_count() {
        return Err(RegionError::SignatureLength { got: r.sig.len(), want: c.event_count() });
    }
    for (s, &v) in r.sup.iter().enumerate() {
        if v > ty.bound() {
            return Err(RegionError::SupportOutOfRange { state: c.state_name(s).to_string(), value: v });
        }
    }
    for (e, &sig) in r.sig.iter().enumerate() {
        if !ty.contains(sig) {
            return Err(RegionError::ForeignSignature { event: c.event_name(e).to_string(), sig });
        }
    }
    for a in c.arcs() {
        let sig = r.sig[a.event];
        let got = ty.step(r.sup[a.src], sig);
        if got != Some(r.sup[a.dst]) {
            return Err(edge_error(c, a, sig, r.sup[a.src], got, r.sup[a.dst]));
        }
    }
    Ok(())
}

fn edge_error<C: Carrier + ?Sized>(c: &C, a: &Arc, sig: TauEvent, from: u32, got: Option<u32>, want: u32) -> RegionError {
    RegionError::Edge {
        src: c.state_name(a.src).to_string(),
        event: c.event_name(a.event).to_string(),
        dst: c.state_name(a.dst).to_string(),
        sig,
        from,
        got,
        want,
    }
}

/// The region determined by `sig` and `sup(ι)`, if one exists.
pub fn support_from_signature(ts: &TransitionSystem, ty: &NetType, sup_init: u32, sig: &[TauEvent]) -> Option<Region> {
    support_from_roots(ts, ty, &[sup_init], sig)
}

/// Support propagation from every root of a carrier. `root_sup[i]` is the
/// value at `roots()[i]`. Fails on inconsistency, undefined steps, or states
/// no root reaches.
pub fn support_from_roots<C: Carrier + ?Sized>(c: &C, ty: &NetType, root_sup: &[u32], sig: &[TauEvent]) -> Option<Region> {
    if sig.len() != c.event_count() || sig.iter().any(|&e| !ty.contains(e)) {
        return None;
    }
    let roots = c.roots();
    if roots.len() != root_sup.len() || root_sup.iter().any(|&v| v > ty.bound()) {
        return None;
    }
    let mut out: Vec<Vec<&Arc>> = vec![Vec::new(); c.state_count()];
    for a in c.arcs() {
        out[a.src].push(a);
    }
    let mut sup: Vec<Option<u32>> = vec![None; c.state_count()];
    let mut queue = VecDeque::new();
    for (&r, &v) in roots.iter().zip(root_sup) {
        match sup[r] {
            Some(x) if x != v => return None,
            _ => sup[r] = Some(v),
        }
        queue.push_back(r);
    }
    while let Some(s) = queue.pop_front() {
        let v = sup[s].expect("queued states carry support");
        for a in &out[s] {
            let w = ty.step(v, sig[a.event])?;
            match sup[a.dst] {
                Some(x) if x != w => return None,
                Some(_) => {}
                None => {
                    sup[a.dst] = Some(w);
                    queue.push_back(a.dst);
                }
            }
        }
    }
    let sup = sup.into_iter().collect::<Option<Vec<u32>>>()?;
    let r = Region { sup, sig: sig.to_vec() };
    debug_assert!(validate_region(c, ty, &r).is_ok());
    Some(r)
}

/// Does `r` solve `atom`? SSA need distinct supports, ESSA need the signature
/// of the event to be undefined at the state's support.
pub fn solves(r: &Region, atom: &SeparationAtom, ty: &NetType) -> bool {
    match *atom {
        SeparationAtom::Ssa(s, t) => r.sup[s] != r.sup[t],
        SeparationAtom::Essa { event, state } => ty.step(r.sup[state], r.sig[event]).is_none(),
    }
}

/// A region list together with, for every atom, the first region solving it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub regions: Vec<Region>,
    pub coverage: Vec<(SeparationAtom, usize)>,
}

/// Greedy coverage of every atom of `problem` by the first solving region.
/// Returns the unsolved atoms on failure.
pub fn check_witness<C: AtomSource + ?Sized>(
    c: &C,
    ty: &NetType,
    regions: &[Region],
    problem: Problem,
) -> Result<WitnessSet, Vec<SeparationAtom>> {
    let mut coverage = Vec::new();
    let mut missing = Vec::new();
    for atom in c.atoms(problem.atom_kind()) {
        match regions.iter().position(|r| solves(r, &atom, ty)) {
            Some(i) => coverage.push((atom, i)),
            None => missing.push(atom),
        }
    }
    if missing.is_empty() {
        Ok(WitnessSet { regions: regions.to_vec(), coverage })
    } else {
        Err(missing)
    }
}

/// Carriers that define their own separation atoms.
pub trait AtomSource: Carrier {
    fn atoms(&self, kind: AtomKind) -> Vec<SeparationAtom>;
}

impl AtomSource for TransitionSystem {
    fn atoms(&self, kind: AtomKind) -> Vec<SeparationAtom> {
        self.enumerate_atoms(kind)
    }
}

/// One place per region, named `p0, p1, ...`, with `M0 = sup(ι)` and flow
/// `f(p, e) = sig(e)`.
pub fn synthesized_net(ts: &TransitionSystem, regions: &[Region], ty: &NetType) -> PetriNet {
    let places = regions
        .iter()
        .enumerate()
        .map(|(i, r)| Place { name: format!("p{i}"), initial: r.sup[ts.initial()] })
        .collect();
    let flow = regions.iter().map(|r| r.sig.clone()).collect();
    PetriNet::new(ts.name().to_string(), ty.clone(), places, ts.events().to_vec(), flow)
        .expect("regions of a valid carrier yield a well-formed net")
}

/// The outcome of a separation decision, shared by every decider.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub holds: bool,
    pub regions: Vec<Region>,
    /// Every atom with the index of the region that solves it.
    pub coverage: Vec<(SeparationAtom, usize)>,
    /// Atoms found unsolvable. Polynomial deciders stop at the first one.
    pub unsolvable: Vec<SeparationAtom>,
}

impl Decision {
    pub fn witness(&self) -> WitnessSet {
        WitnessSet { regions: self.regions.clone(), coverage: self.coverage.clone() }
    }
}
