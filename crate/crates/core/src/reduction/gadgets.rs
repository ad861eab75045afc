//! Gadget shapes and their union.

use indexmap::IndexSet;

use crate::region::AtomSource;
use crate::ts::{Arc, AtomKind, Carrier, SeparationAtom, TransitionSystem, TsBuilder};

/// Which drawn gadget a member instantiates, with its subscript.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    H0,
    H1,
    H2,
    H3,
    C(usize),
    D(usize),
    F(usize),
    G(usize),
    M(usize),
    T(usize),
}

impl GadgetKind {
    pub fn label(&self) -> String {
        match self {
            GadgetKind::H0 => "H0".into(),
            GadgetKind::H1 => "H1".into(),
            GadgetKind::H2 => "H2".into(),
            GadgetKind::H3 => "H3".into(),
            GadgetKind::C(j) => format!("C{j}"),
            GadgetKind::D(j) => format!("D{j}"),
            GadgetKind::F(j) => format!("F{j}"),
            GadgetKind::G(j) => format!("G{j}"),
            GadgetKind::M(i) => format!("M{i}"),
            GadgetKind::T(i) => format!("T{i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Member {
    pub kind: GadgetKind,
    pub ts: TransitionSystem,
}

/// A linear gadget `prefix0 -w0-> prefix1 ...` spelled as runs `(event, length)`.
pub(crate) fn linear(name: &str, prefix: &str, word: &[(String, usize)]) -> TransitionSystem {
    let mut tb = TsBuilder::new(name, format!("{prefix}0"));
    let mut at = 0;
    for (e, n) in word {
        tb.run(prefix, at, e, *n);
        at += n;
    }
    tb.build_valid().expect("gadget shapes are valid")
}

fn w(e: impl Into<String>, n: usize) -> (String, usize) {
    (e.into(), n)
}

fn x(v: usize) -> String {
    format!("X{v}")
}

pub fn h0(b: usize) -> Member {
    let word = [w("k", b), w("z", b), w("o0", 1), w("k", b), w("z", b), w("o1", b), w("k", b)];
    Member { kind: GadgetKind::H0, ts: linear("h0", "h0_", &word) }
}

pub fn h1(b: usize) -> Member {
    let word = [w("k", b), w("y0", 1), w("o0", 1), w("k", b), w("y1", 1), w("y0", 1), w("o1", 1), w("k", b)];
    Member { kind: GadgetKind::H1, ts: linear("h1", "h1_", &word) }
}

pub fn h2(b: usize) -> Member {
    let word = [w("k", b), w("o0", 1), w("k", b), w("o1", 1), w("k", b)];
    Member { kind: GadgetKind::H2, ts: linear("h2", "h2_", &word) }
}

/// Two branches from `h3_0_0`: `k^b` directly, and `u k^{b-1} z` through
/// the `h3_1_*` states, meeting at `h3_0_b`.
pub fn h3(b: usize) -> Member {
    let mut tb = TsBuilder::new("h3", "h3_0_0");
    tb.run("h3_0_", 0, "k", b);
    tb.arc("h3_0_0", "u", "h3_1_0");
    tb.run("h3_1_", 0, "k", b - 1);
    tb.arc(format!("h3_1_{}", b - 1), "z", format!("h3_0_{b}"));
    Member { kind: GadgetKind::H3, ts: tb.build_valid().expect("H3 is valid") }
}

pub fn c(j: usize, b: usize) -> Member {
    let word = [w("o0", 1), w(format!("k{j}"), 1), w("o1", b)];
    Member { kind: GadgetKind::C(j), ts: linear(&format!("c{j}"), &format!("c{j}_"), &word) }
}

pub fn d(j: usize) -> Member {
    let word = [w("o0", 1), w(format!("k{j}"), 1), w("o1", 1)];
    Member { kind: GadgetKind::D(j), ts: linear(&format!("d{j}"), &format!("d{j}_"), &word) }
}

pub fn f_pure(j: usize) -> Member {
    let word = [w("k0", 1), w(format!("z{j}"), 1)];
    Member { kind: GadgetKind::F(j), ts: linear(&format!("f{j}"), &format!("f{j}_"), &word) }
}

pub fn g_pure(j: usize) -> Member {
    let word = [w(format!("z{j}"), 1), w("o0", 1)];
    Member { kind: GadgetKind::G(j), ts: linear(&format!("g{j}"), &format!("g{j}_"), &word) }
}

pub fn m_gadget(i: usize, b: usize) -> Member {
    let word = [w("k1", 1), w(x(i), b)];
    Member { kind: GadgetKind::M(i), ts: linear(&format!("m{i}"), &format!("m{i}_"), &word) }
}

pub fn t_pure(i: usize, clause: [usize; 3], b: usize) -> Member {
    let word = [
        w("k2", 1),
        w(x(clause[0]), b),
        w(format!("z{}", 2 * i), 1),
        w(x(clause[1]), b),
        w(format!("z{}", 2 * i + 1), 1),
        w(x(clause[2]), b),
        w("k3", 1),
    ];
    Member { kind: GadgetKind::T(i), ts: linear(&format!("t{i}"), &format!("t{i}_"), &word) }
}

/// `f{j}_0_0 -k^b-> f{j}_0_b` next to `f{j}_0_0 -v{j}-> f{j}_1_0 -k^{b-1}-> f{j}_1_{b-1} -X{j}-> f{j}_0_b`.
pub fn f_group(j: usize, b: usize) -> Member {
    let p0 = format!("f{j}_0_");
    let p1 = format!("f{j}_1_");
    let mut tb = TsBuilder::new(format!("f{j}"), format!("{p0}0"));
    tb.run(&p0, 0, "k", b);
    tb.arc(format!("{p0}0"), format!("v{j}"), format!("{p1}0"));
    tb.run(&p1, 0, "k", b - 1);
    tb.arc(format!("{p1}{}", b - 1), x(j), format!("{p0}{b}"));
    Member { kind: GadgetKind::F(j), ts: tb.build_valid().expect("F is valid") }
}

pub fn g_group(j: usize, b: usize) -> Member {
    let word = [w("k", b), w(x(j), 1)];
    Member { kind: GadgetKind::G(j), ts: linear(&format!("g{j}"), &format!("g{j}_"), &word) }
}

pub fn t_group(i: usize, clause: [usize; 3], b: usize) -> Member {
    let word = [w("k", b), w(x(clause[0]), 1), w(x(clause[1]), 1), w(x(clause[2]), 1), w("z", 1), w("k", b)];
    Member { kind: GadgetKind::T(i), ts: linear(&format!("t{i}"), &format!("t{i}_"), &word) }
}

/// A union of members with pairwise disjoint states. States and events are
/// indexed globally: states member by member, events by first occurrence.
#[derive(Clone, Debug)]
pub struct Union {
    members: Vec<Member>,
    states: Vec<String>,
    events: Vec<String>,
    arcs: Vec<Arc>,
    /// First global state index of each member.
    offsets: Vec<usize>,
    member_of: Vec<usize>,
    /// `event_map[i][local]` is the global index of member `i`'s event.
    event_map: Vec<Vec<usize>>,
    delta: Vec<Option<usize>>,
}

impl Union {
    /// Panics if two members share a state name.
    pub fn new(members: Vec<Member>) -> Self {
        let mut states = IndexSet::new();
        let mut events = IndexSet::new();
        let mut arcs = Vec::new();
        let mut offsets = Vec::new();
        let mut member_of = Vec::new();
        let mut event_map = Vec::new();
        for (i, m) in members.iter().enumerate() {
            let off = states.len();
            offsets.push(off);
            for s in m.ts.states() {
                assert!(states.insert(s.clone()), "state {s} occurs in two members");
                member_of.push(i);
            }
            let map: Vec<usize> = m.ts.events().iter().map(|e| events.insert_full(e.clone()).0).collect();
            for a in m.ts.arc_list() {
                arcs.push(Arc { src: a.src + off, event: map[a.event], dst: a.dst + off });
            }
            event_map.push(map);
        }
        let ne = events.len();
        let mut delta = vec![None; states.len() * ne];
        for a in &arcs {
            delta[a.src * ne + a.event] = Some(a.dst);
        }
        Union {
            members,
            states: states.into_iter().collect(),
            events: events.into_iter().collect(),
            arcs,
            offsets,
            member_of,
            event_map,
            delta,
        }
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }
    pub fn states(&self) -> &[String] {
        &self.states
    }
    pub fn events(&self) -> &[String] {
        &self.events
    }
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
    pub fn event_index(&self, name: &str) -> Option<usize> {
        self.events.iter().position(|e| e == name)
    }
    pub fn member_of(&self, s: usize) -> usize {
        self.member_of[s]
    }
    /// Global index of member `i`'s initial state.
    pub fn initial_of(&self, i: usize) -> usize {
        self.offsets[i] + self.members[i].ts.initial()
    }
    /// Global index of member `i`'s terminal state, for linear members.
    pub fn terminal_of(&self, i: usize) -> Option<usize> {
        self.members[i].ts.terminal().map(|t| t + self.offsets[i])
    }
    /// Global states of member `i`.
    pub fn states_of(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.members[i].ts.num_states()
    }
    /// Global path of a linear member.
    pub fn path_of(&self, i: usize) -> Option<Vec<usize>> {
        let off = self.offsets[i];
        self.members[i].ts.linear_path().map(|p| p.into_iter().map(|s| s + off).collect())
    }
    pub fn has_event(&self, i: usize, e: usize) -> bool {
        self.event_map[i].contains(&e)
    }
    pub fn all_linear(&self) -> bool {
        self.members.iter().all(|m| m.ts.is_linear())
    }
    pub fn grade(&self) -> usize {
        self.members.iter().map(|m| m.ts.grade()).max().unwrap_or(0)
    }
    pub fn step(&self, s: usize, e: usize) -> Option<usize> {
        self.delta[s * self.events.len() + e]
    }
}

impl Carrier for Union {
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
        (0..self.members.len()).map(|i| self.initial_of(i)).collect()
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

/// State separation is only required inside a member; event/state
/// separation ranges over all states of the union.
impl AtomSource for Union {
    fn atoms(&self, kind: AtomKind) -> Vec<SeparationAtom> {
        let mut out = Vec::new();
        if kind != AtomKind::Essa {
            for i in 0..self.members.len() {
                let r = self.states_of(i);
                for s in r.clone() {
                    for t in s + 1..r.end {
                        out.push(SeparationAtom::Ssa(s, t));
                    }
                }
            }
        }
        if kind != AtomKind::Ssa {
            for e in 0..self.events.len() {
                for s in 0..self.states.len() {
                    if self.step(s, e).is_none() {
                        out.push(SeparationAtom::Essa { event: e, state: s });
                    }
                }
            }
        }
        out
    }
}
