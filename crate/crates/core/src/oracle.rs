//! Exhaustive ground truth for small systems.
//!
//! Regions are enumerated as `(sup(ι), sig)` in lexicographic order, with the
//! signature assigned event by event and the support propagated along the
//! edges of already-assigned events so that dead prefixes are cut early.

use std::collections::VecDeque;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::net_type::{NetType, TauEvent};
use crate::region::{solves, Decision, Problem, Region};
use crate::ts::TransitionSystem;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const BUDGET_ENV: &str = "PETRISYNTH_BUDGET";

/// Limits for one enumeration. Each examined node of the signature search
/// tree (partial or complete assignment) costs one unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_candidates: u64,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_candidates: DEFAULT_BUDGET, time_limit: None }
    }
}

impl Budget {
    pub fn candidates(n: u64) -> Self {
        Budget { max_candidates: n.max(1), time_limit: None }
    }

    /// The default budget, overridden by `PETRISYNTH_BUDGET` when it parses
    /// as a positive integer.
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse::<u64>().ok()) {
            Some(n) if n > 0 => Budget::candidates(n),
            _ => Budget::default(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle budget exhausted after {examined} candidates ({found} regions found)")]
    BudgetExhausted { examined: u64, found: usize },
    #[error("oracle time limit exhausted after {examined} candidates ({found} regions found)")]
    TimeExhausted { examined: u64, found: usize },
}

/// Calls `f` on every region in lexicographic order until `f` breaks.
/// Returns the number of candidates examined.
pub fn for_each_region(
    ts: &TransitionSystem,
    ty: &NetType,
    budget: Budget,
    mut f: impl FnMut(&Region) -> ControlFlow<()>,
) -> Result<u64, OracleError> {
    let mut search = Search::new(ts, ty, budget);
    for sup_init in 0..=ty.bound() {
        if search.descend(0, sup_init, &mut f)?.is_break() {
            break;
        }
    }
    Ok(search.examined)
}

/// All regions of `ts`, in lexicographic order of `(sup(ι), sig)`.
pub fn enumerate_regions(ts: &TransitionSystem, ty: &NetType, budget: Budget) -> Result<Vec<Region>, OracleError> {
    let mut out = Vec::new();
    for_each_region(ts, ty, budget, |r| {
        out.push(r.clone());
        ControlFlow::Continue(())
    })
    .map_err(|e| with_found(e, out.len()))?;
    Ok(out)
}

fn with_found(e: OracleError, n: usize) -> OracleError {
    match e {
        OracleError::BudgetExhausted { examined, .. } => OracleError::BudgetExhausted { examined, found: n },
        OracleError::TimeExhausted { examined, .. } => OracleError::TimeExhausted { examined, found: n },
    }
}

/// Decides `problem` by exhaustion. Each atom is assigned the first region
/// in enumeration order that solves it.
pub fn oracle_decide(ts: &TransitionSystem, ty: &NetType, problem: Problem, budget: Budget) -> Result<Decision, OracleError> {
    let atoms = ts.enumerate_atoms(problem.atom_kind());
    let mut owner: Vec<Option<usize>> = vec![None; atoms.len()];
    let mut open = atoms.len();
    let mut regions: Vec<Region> = Vec::new();
    if open > 0 {
        for_each_region(ts, ty, budget, |r| {
            let mut used = false;
            for (i, atom) in atoms.iter().enumerate() {
                if owner[i].is_none() && solves(r, atom, ty) {
                    owner[i] = Some(regions.len());
                    open -= 1;
                    used = true;
                }
            }
            if used {
                regions.push(r.clone());
            }
            if open == 0 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .map_err(|e| with_found(e, regions.len()))?;
    }
    let mut coverage = Vec::new();
    let mut unsolvable = Vec::new();
    for (atom, o) in atoms.into_iter().zip(owner) {
        match o {
            Some(i) => coverage.push((atom, i)),
            None => unsolvable.push(atom),
        }
    }
    Ok(Decision { holds: unsolvable.is_empty(), regions, coverage, unsolvable })
}

struct Search<'a> {
    ts: &'a TransitionSystem,
    ty: &'a NetType,
    budget: Budget,
    start: Instant,
    examined: u64,
    sig: Vec<TauEvent>,
    /// Outgoing arcs per state as (event, dst).
    out: Vec<Vec<(usize, usize)>>,
}

impl<'a> Search<'a> {
    fn new(ts: &'a TransitionSystem, ty: &'a NetType, budget: Budget) -> Self {
        let mut out = vec![Vec::new(); ts.num_states()];
        for a in ts.arc_list() {
            out[a.src].push((a.event, a.dst));
        }
        Search { ts, ty, budget, start: Instant::now(), examined: 0, sig: Vec::new(), out, }
    }

    fn charge(&mut self) -> Result<(), OracleError> {
        self.examined += 1;
        if self.examined > self.budget.max_candidates {
            return Err(OracleError::BudgetExhausted { examined: self.examined - 1, found: 0 });
        }
        if let Some(limit) = self.budget.time_limit {
            if self.examined % 1024 == 0 && self.start.elapsed() > limit {
                return Err(OracleError::TimeExhausted { examined: self.examined, found: 0 });
            }
        }
        Ok(())
    }

    /// Propagates the support along arcs whose events are already assigned.
    /// Returns `None` on a conflict.
    fn propagate(&self, sup_init: u32) -> Option<Vec<Option<u32>>> {
        let assigned = self.sig.len();
        let mut sup = vec![None; self.ts.num_states()];
        sup[self.ts.initial()] = Some(sup_init);
        let mut queue = VecDeque::from([self.ts.initial()]);
        while let Some(s) = queue.pop_front() {
            let v = sup[s].unwrap();
            for &(e, d) in &self.out[s] {
                if e >= assigned {
                    continue;
                }
                let w = self.ty.step(v, self.sig[e])?;
                match sup[d] {
                    Some(x) if x != w => return None,
                    Some(_) => {}
                    None => {
                        sup[d] = Some(w);
                        queue.push_back(d);
                    }
                }
            }
        }
        Some(sup)
    }

    fn descend(
        &mut self,
        depth: usize,
        sup_init: u32,
        f: &mut impl FnMut(&Region) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, OracleError> {
        if depth == self.ts.num_events() {
            self.charge()?;
            let Some(sup) = self.propagate(sup_init) else { return Ok(ControlFlow::Continue(())) };
            let sup: Vec<u32> = sup.into_iter().map(|v| v.expect("valid systems are reachable")).collect();
            return Ok(f(&Region { sup, sig: self.sig.clone() }));
        }
        for i in 0..self.ty.events().len() {
            let ev = self.ty.events()[i];
            self.sig.push(ev);
            let flow = if depth + 1 < self.ts.num_events() {
                self.charge()?;
                if self.propagate(sup_init).is_some() {
                    self.descend(depth + 1, sup_init, f)?
                } else {
                    ControlFlow::Continue(())
                }
            } else {
                self.descend(depth + 1, sup_init, f)?
            };
            self.sig.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}
