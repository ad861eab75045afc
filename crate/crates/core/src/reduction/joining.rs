//! Composing a union into one transition system, and carrying union regions
//! over to the composition.

use std::collections::HashSet;

use crate::net_type::TauEvent;
use crate::region::Region;
use crate::ts::{Arc, TransitionSystem};

use super::gadgets::Union;
use super::ReductionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinKind {
    /// `t_i -w_{i+1}-> q_{i+1} -y_{i+1}-> ι_{i+1}`, rooted at `ι_0`.
    Linear,
    /// `q_0 -w_1-> q_1 ... q_n` with `q_i -y_i-> ι_i`, rooted at `q_0`.
    Backbone,
}

/// A joined union. Union states and events keep their indices; connector
/// states and events are appended.
///
/// For [`JoinKind::Linear`], `q[k]`, `w[k]`, `y[k]` stand for `q_{k+1}`,
/// `w_{k+1}`, `y_{k+1}`. For [`JoinKind::Backbone`], `q[i]` and `y[i]` are
/// `q_i` and `y_i` while `w[k]` is `w_{k+1}`.
#[derive(Clone, Debug)]
pub struct Joined {
    pub kind: JoinKind,
    pub ts: TransitionSystem,
    pub q: Vec<usize>,
    pub w: Vec<usize>,
    pub y: Vec<usize>,
    /// Renamings forced by collisions with existing names.
    pub warnings: Vec<String>,
}

struct Fresh<'a> {
    taken: HashSet<String>,
    what: &'static str,
    warnings: &'a mut Vec<String>,
}

impl Fresh<'_> {
    fn take(&mut self, wanted: String) -> String {
        let mut name = wanted.clone();
        while self.taken.contains(&name) {
            name.push('+');
        }
        if name != wanted {
            self.warnings.push(format!("fresh {} `{wanted}` collides with an existing name, using `{name}`", self.what));
        }
        self.taken.insert(name.clone());
        name
    }
}

struct Parts {
    states: Vec<String>,
    events: Vec<String>,
    arcs: Vec<Arc>,
    warnings: Vec<String>,
}

impl Parts {
    fn new(u: &Union) -> Self {
        Parts {
            states: u.states().to_vec(),
            events: u.events().to_vec(),
            arcs: crate::ts::Carrier::arcs(u).to_vec(),
            warnings: Vec::new(),
        }
    }

    fn fresh(&mut self, states: Vec<String>, events: Vec<String>) -> (Vec<usize>, Vec<usize>) {
        let mut sf = Fresh { taken: self.states.iter().cloned().collect(), what: "state", warnings: &mut self.warnings };
        let sn: Vec<String> = states.into_iter().map(|s| sf.take(s)).collect();
        let mut ef = Fresh { taken: self.events.iter().cloned().collect(), what: "event", warnings: &mut self.warnings };
        let en: Vec<String> = events.into_iter().map(|e| ef.take(e)).collect();
        let s0 = self.states.len();
        let e0 = self.events.len();
        self.states.extend(sn);
        self.events.extend(en);
        ((s0..self.states.len()).collect(), (e0..self.events.len()).collect())
    }
}

/// The linear joining. Every member must be linear.
pub fn linear_joining(u: &Union) -> Result<Joined, ReductionError> {
    for m in u.members() {
        if !m.ts.is_linear() {
            return Err(ReductionError::NonLinear(m.ts.name().to_string()));
        }
    }
    let n = u.members().len();
    let mut p = Parts::new(u);
    let qs = (1..n).map(|i| format!("q{i}")).collect();
    let mut evs: Vec<String> = (1..n).map(|i| format!("w{i}")).collect();
    evs.extend((1..n).map(|i| format!("y{i}")));
    let (q, e) = p.fresh(qs, evs);
    let (w, y) = (e[..n - 1].to_vec(), e[n - 1..].to_vec());
    for k in 0..n - 1 {
        let t = u.terminal_of(k).expect("members are linear");
        p.arcs.push(Arc { src: t, event: w[k], dst: q[k] });
        p.arcs.push(Arc { src: q[k], event: y[k], dst: u.initial_of(k + 1) });
    }
    let ts = TransitionSystem::new_valid("lj", p.states, p.events, p.arcs, u.initial_of(0))
        .expect("linear joining of a union is valid");
    Ok(Joined { kind: JoinKind::Linear, ts, q, w, y, warnings: p.warnings })
}

/// The joining along a fresh backbone.
pub fn joining(u: &Union) -> Joined {
    let n = u.members().len();
    let mut p = Parts::new(u);
    let qs = (0..n).map(|i| format!("q{i}")).collect();
    let mut evs: Vec<String> = (1..n).map(|i| format!("w{i}")).collect();
    evs.extend((0..n).map(|i| format!("y{i}")));
    let (q, e) = p.fresh(qs, evs);
    let (w, y) = (e[..n - 1].to_vec(), e[n - 1..].to_vec());
    for i in 0..n {
        if i > 0 {
            p.arcs.push(Arc { src: q[i - 1], event: w[i - 1], dst: q[i] });
        }
        p.arcs.push(Arc { src: q[i], event: y[i], dst: u.initial_of(i) });
    }
    let ts = TransitionSystem::new_valid("j", p.states, p.events, p.arcs, q[0]).expect("joining of a union is valid");
    Joined { kind: JoinKind::Backbone, ts, q, w, y, warnings: p.warnings }
}

fn lift(r: &Region, j: &Joined, q_sup: u32) -> Region {
    let mut sup = r.sup.clone();
    sup.resize(j.ts.num_states(), q_sup);
    let mut sig = r.sig.clone();
    sig.resize(j.ts.num_events(), TauEvent::Pair(0, 0));
    Region { sup, sig }
}

/// Moves `from` to `to` with a pure event.
fn pure_move(from: u32, to: u32) -> TauEvent {
    if from >= to {
        TauEvent::Pair(from - to, 0)
    } else {
        TauEvent::Pair(0, to - from)
    }
}

/// Extends a union region to the linear joining: every `q` gets `z_sup`, the
/// support of the state whose atom is being carried over.
pub fn extend_linear(u: &Union, j: &Joined, r: &Region, z_sup: u32) -> Region {
    assert_eq!(j.kind, JoinKind::Linear);
    let mut out = lift(r, j, z_sup);
    for k in 0..j.q.len() {
        let t = u.terminal_of(k).expect("members are linear");
        out.sig[j.w[k]] = pure_move(r.sup[t], z_sup);
        out.sig[j.y[k]] = pure_move(z_sup, r.sup[u.initial_of(k + 1)]);
    }
    out
}

/// Extends a union region to the backbone joining. Backbone events get
/// `Group(0)`; `y_i` moves `z_sup` to `sup(ι_i)`, with `Group(0)` standing in
/// for the absent `(0, 0)`.
pub fn extend_backbone(u: &Union, j: &Joined, r: &Region, z_sup: u32) -> Region {
    assert_eq!(j.kind, JoinKind::Backbone);
    let mut out = lift(r, j, z_sup);
    for &w in &j.w {
        out.sig[w] = TauEvent::Group(0);
    }
    for (i, &y) in j.y.iter().enumerate() {
        let to = r.sup[u.initial_of(i)];
        out.sig[y] = if to == z_sup { TauEvent::Group(0) } else { pure_move(z_sup, to) };
    }
    out
}

/// Separates `y_i` (`i ≥ 1`) from every state but `q_i`: only `q_i` has support 0.
pub fn lj_y_region(j: &Joined, b: u32, i: usize) -> Region {
    assert_eq!(j.kind, JoinKind::Linear);
    let mut sup = vec![b; j.ts.num_states()];
    sup[j.q[i - 1]] = 0;
    let mut sig = vec![TauEvent::Pair(0, 0); j.ts.num_events()];
    sig[j.w[i - 1]] = TauEvent::Pair(b, 0);
    sig[j.y[i - 1]] = TauEvent::Pair(0, b);
    Region { sup, sig }
}

/// Separates `w_i` (`i ≥ 1`) from every state outside member `i-1`, which is
/// the only part with support 0.
pub fn lj_w_region(u: &Union, j: &Joined, b: u32, i: usize) -> Region {
    assert_eq!(j.kind, JoinKind::Linear);
    let mut sup = vec![b; j.ts.num_states()];
    for s in u.states_of(i - 1) {
        sup[s] = 0;
    }
    let mut sig = vec![TauEvent::Pair(0, 0); j.ts.num_events()];
    sig[j.w[i - 1]] = TauEvent::Pair(0, b);
    if i >= 2 {
        sig[j.y[i - 2]] = TauEvent::Pair(b, 0);
    }
    Region { sup, sig }
}

/// Separates `w_i` from a state `s` of member `i-1` other than its terminal
/// `t`, starting from a union region with `sup(s) ≠ sup(t)`.
pub fn lj_w_separating_region(u: &Union, j: &Joined, b: u32, r: &Region, i: usize, s: usize) -> Region {
    let t = u.terminal_of(i - 1).expect("members are linear");
    let (st, ss) = (r.sup[t], r.sup[s]);
    assert_ne!(st, ss, "the union region must separate s from the terminal");
    let mut out = extend_linear(u, j, r, ss);
    let iota = r.sup[u.initial_of(i)];
    let k = i - 1;
    if ss > st {
        out.sup[j.q[k]] = b;
        out.sig[j.w[k]] = TauEvent::Pair(0, b - st);
        out.sig[j.y[k]] = TauEvent::Pair(b - iota, 0);
    } else {
        out.sup[j.q[k]] = 0;
        out.sig[j.w[k]] = TauEvent::Pair(st, 0);
        out.sig[j.y[k]] = TauEvent::Pair(0, iota);
    }
    out
}

/// On the backbone joining, `q_i` alone has support 0: the backbone edge into
/// `q_i` drops from `b`, the edges leaving it climb back. Every other event
/// is `Group(0)`.
pub fn backbone_connector_region(j: &Joined, b: u32, i: usize) -> Region {
    assert_eq!(j.kind, JoinKind::Backbone);
    let mut sup = vec![b; j.ts.num_states()];
    sup[j.q[i]] = 0;
    let mut sig = vec![TauEvent::Group(0); j.ts.num_events()];
    sig[j.y[i]] = TauEvent::Pair(0, b);
    if i >= 1 {
        sig[j.w[i - 1]] = TauEvent::Pair(b, 0);
    }
    if i < j.w.len() {
        sig[j.w[i]] = TauEvent::Pair(0, b);
    }
    Region { sup, sig }
}
