//! Polynomial deciders via abstract regions.
//!
//! A spanning tree of the system assigns every state its Parikh vector `ψ_s`
//! over `Z_{b+1}`; each chord contributes one fundamental-cycle equation.
//! Abstract signatures are exactly the common null vectors of those
//! equations, and separation atoms become inhomogeneous extensions of that
//! base system.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modsolve::ModSystem;
use crate::net_type::{Family, NetType, TauEvent};
use crate::petri::PetriNet;
use crate::region::{solves, synthesized_net, validate_region, Decision, Problem, Region};
use crate::ts::{AtomKind, SeparationAtom, TransitionSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("{0} has no polynomial decider for this problem")]
    Unsupported(Family),
    #[error("arc {0} is a tree edge, not a chord")]
    NotAChord(usize),
    #[error(transparent)]
    Petri(#[from] crate::petri::PetriError),
}

/// Spanning tree rooted at `ι`, its chords, and the Parikh vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningData {
    pub b: u32,
    /// Index into the system's arc list of the tree edge entering each state.
    pub parent: Vec<Option<usize>>,
    /// Arc indices of non-tree transitions, in input order.
    pub chords: Vec<usize>,
    /// `psi[s][e]`, entries in `0..=b`.
    pub psi: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeOrder {
    /// Breadth-first, arcs in input order.
    Bfs,
    /// Depth-first, arcs in input order.
    Dfs,
}

/// Breadth-first spanning data.
pub fn build_spanning(ts: &TransitionSystem, b: u32) -> SpanningData {
    build_spanning_with(ts, b, TreeOrder::Bfs)
}

pub fn build_spanning_with(ts: &TransitionSystem, b: u32, order: TreeOrder) -> SpanningData {
    let n = ts.num_states();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in ts.arc_list().iter().enumerate() {
        out[a.src].push(i);
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[ts.initial()] = true;
    match order {
        TreeOrder::Bfs => {
            let mut queue = VecDeque::from([ts.initial()]);
            while let Some(s) = queue.pop_front() {
                for &i in &out[s] {
                    let d = ts.arc_list()[i].dst;
                    if !seen[d] {
                        seen[d] = true;
                        parent[d] = Some(i);
                        queue.push_back(d);
                    }
                }
            }
        }
        TreeOrder::Dfs => {
            let mut stack = vec![(ts.initial(), 0usize)];
            while let Some((s, k)) = stack.pop() {
                if k >= out[s].len() {
                    continue;
                }
                stack.push((s, k + 1));
                let i = out[s][k];
                let d = ts.arc_list()[i].dst;
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = Some(i);
                    stack.push((d, 0));
                }
            }
        }
    }
    let tree: std::collections::HashSet<usize> = parent.iter().flatten().copied().collect();
    let chords = (0..ts.arc_list().len()).filter(|i| !tree.contains(i)).collect();
    let psi = parikh(ts, b, &parent);
    SpanningData { b, parent, chords, psi }
}

fn parikh(ts: &TransitionSystem, b: u32, parent: &[Option<usize>]) -> Vec<Vec<u32>> {
    let n = ts.num_states();
    let mut psi: Vec<Option<Vec<u32>>> = vec![None; n];
    psi[ts.initial()] = Some(vec![0; ts.num_events()]);
    fn fill(s: usize, ts: &TransitionSystem, b: u32, parent: &[Option<usize>], psi: &mut Vec<Option<Vec<u32>>>) {
        let mut chain = vec![s];
        let mut cur = s;
        while psi[cur].is_none() {
            let a = ts.arc_list()[parent[cur].expect("every non-root state has a tree edge")];
            cur = a.src;
            chain.push(cur);
        }
        chain.pop();
        for &t in chain.iter().rev() {
            let a = ts.arc_list()[parent[t].unwrap()];
            let mut v = psi[a.src].clone().unwrap();
            v[a.event] = (v[a.event] + 1) % (b + 1);
            psi[t] = Some(v);
        }
    }
    for s in 0..n {
        fill(s, ts, b, parent, &mut psi);
    }
    psi.into_iter().map(|v| v.unwrap()).collect()
}

/// `ψ_t = ψ_s − ψ_{s'} + unit(e)` for a chord `t = s --e--> s'`.
pub fn fundamental_cycle(sd: &SpanningData, ts: &TransitionSystem, arc: usize) -> Result<Vec<u32>, PolyError> {
    if !sd.chords.contains(&arc) {
        return Err(PolyError::NotAChord(arc));
    }
    let a = ts.arc_list()[arc];
    let m = sd.b + 1;
    let mut v: Vec<u32> = sd.psi[a.src].iter().zip(&sd.psi[a.dst]).map(|(&x, &y)| (x + m - y) % m).collect();
    v[a.event] = (v[a.event] + 1) % m;
    Ok(v)
}

/// `M_{A'}`: one homogeneous row per chord; all-zero rows are dropped.
pub fn base_system(sd: &SpanningData, ts: &TransitionSystem) -> ModSystem {
    let mut sys = ModSystem::new(sd.b as u64 + 1, ts.num_events());
    for &c in &sd.chords {
        let v = fundamental_cycle(sd, ts, c).expect("listed chords are chords");
        let row: Vec<u64> = v.iter().map(|&x| x as u64).collect();
        sys.push_row_u(&row, 0);
    }
    sys.drop_zero_rows();
    sys
}

/// `sup(ι)` and an abstract signature `abs ∈ Z^n_{b+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractRegion {
    pub sup_init: u32,
    pub abs: Vec<u32>,
}

impl AbstractRegion {
    /// `sup(s) = sup(ι) + ψ_s·abs (mod b+1)`
    pub fn support(&self, sd: &SpanningData) -> Vec<u32> {
        let m = sd.b + 1;
        sd.psi.iter().map(|p| (self.sup_init + dot(p, &self.abs, m)) % m).collect()
    }

    /// The concrete region with `sig(e) = Group(abs(e))` everywhere.
    pub fn to_region(&self, sd: &SpanningData) -> Region {
        Region { sup: self.support(sd), sig: self.abs.iter().map(|&k| TauEvent::Group(k)).collect() }
    }

    /// Checks `sup(s') ≡ sup(s) + abs(e)` on every edge.
    pub fn is_valid(&self, sd: &SpanningData, ts: &TransitionSystem) -> bool {
        let m = sd.b + 1;
        let sup = self.support(sd);
        ts.arc_list().iter().all(|a| (sup[a.src] + self.abs[a.event]) % m == sup[a.dst])
    }
}

fn dot(p: &[u32], abs: &[u32], m: u32) -> u32 {
    p.iter().zip(abs).fold(0, |acc, (&x, &y)| (acc + x * y) % m)
}

fn diff(a: &[u32], b: &[u32], m: u32) -> Vec<i64> {
    a.iter().zip(b).map(|(&x, &y)| ((x + m - y) % m) as i64).collect()
}

/// Abstract view of a region of a group family: `abs(e) = n − m` for
/// `Pair(m, n)` and `k` for `Group(k)`; the support is kept via `sup(ι)`.
pub fn concrete_to_abstract(ts: &TransitionSystem, r: &Region, b: u32) -> AbstractRegion {
    let m = b + 1;
    let abs = r
        .sig
        .iter()
        .map(|&e| match e {
            TauEvent::Pair(x, y) => (y + m - x) % m,
            TauEvent::Group(k) => k % m,
        })
        .collect();
    AbstractRegion { sup_init: r.sup[ts.initial()], abs }
}

/// Per-system state shared by all atom decisions: spanning data and the base
/// system, the latter pre-reduced once since every atom system extends it.
pub struct PolySynth<'a> {
    ts: &'a TransitionSystem,
    b: u32,
    sd: SpanningData,
    base: ModSystem,
}

impl<'a> PolySynth<'a> {
    pub fn new(ts: &'a TransitionSystem, b: u32) -> Self {
        let sd = build_spanning(ts, b);
        let base = base_system(&sd, ts).reduced();
        PolySynth { ts, b, sd, base }
    }

    pub fn spanning(&self) -> &SpanningData {
        &self.sd
    }

    fn modulus(&self) -> u32 {
        self.b + 1
    }

    /// Separates `s` and `s'` with an all-group region, or proves it impossible.
    /// Tries `(ψ_{s'} − ψ_s)·abs = q` for `q = 1..b` with `sup(ι) = 0`.
    pub fn decide_ssa(&self, s: usize, t: usize) -> Option<Region> {
        let m = self.modulus();
        let row = diff(&self.sd.psi[t], &self.sd.psi[s], m);
        for q in 1..=self.b {
            let mut sys = self.base.clone();
            sys.push_row(&row, q as i64);
            if let Some(x) = sys.solve() {
                let ar = AbstractRegion { sup_init: 0, abs: x.iter().map(|&v| v as u32).collect() };
                let r = ar.to_region(&self.sd);
                let ty = NetType::new(Family::Zppt, self.b).expect("b > 0");
                assert!(validate_region(self.ts, &ty, &r).is_ok(), "SSA region must validate");
                assert!(solves(&r, &SeparationAtom::Ssa(s, t), &ty), "SSA region must solve its atom");
                return Some(r);
            }
        }
        None
    }

    /// The system for ESSA `(e, s)` under the choice `sig(e) = Pair(m, n)`,
    /// `sup(ι) = sup_init` and `sup(s_1) − sup(s) = q`, where `s_1` is the
    /// first source of `e` in state order.
    pub fn essa_system(&self, e: usize, s: usize, m: u32, n: u32, sup_init: u32, q: u32) -> ModSystem {
        let md = self.modulus();
        let sources = self.ts.sources_of(e);
        let s1 = sources[0];
        let mut sys = self.base.clone();
        sys.pin(e, (n as i64 - m as i64).rem_euclid(md as i64));
        let p1: Vec<i64> = self.sd.psi[s1].iter().map(|&x| x as i64).collect();
        sys.push_row(&p1, m as i64 - sup_init as i64);
        for &si in &sources[1..] {
            sys.push_row(&diff(&self.sd.psi[s1], &self.sd.psi[si], md), 0);
        }
        sys.push_row(&diff(&self.sd.psi[s1], &self.sd.psi[s], md), q as i64);
        sys
    }

    /// Concrete region from a solution: `sig(e) = Pair(m, n)`, every other
    /// event `Group(abs)`.
    pub fn concretize_essa(&self, e: usize, m: u32, n: u32, sup_init: u32, abs: &[u64]) -> Region {
        let ar = AbstractRegion { sup_init, abs: abs.iter().map(|&v| v as u32).collect() };
        let mut r = ar.to_region(&self.sd);
        r.sig[e] = TauEvent::Pair(m, n);
        r
    }

    /// ESSA `(e, s)` for `τ_RZPT^b`. Combinations are tried with `(m, n)` in
    /// lexicographic order, then `sup(ι)` ascending, then `q` ascending.
    pub fn decide_essa(&self, e: usize, s: usize) -> Option<Region> {
        assert!(self.ts.step(s, e).is_none(), "not an ESSA: event occurs at state");
        let ty = NetType::new(Family::Rzpt, self.b).expect("b > 0");
        for &pair in ty.events() {
            let TauEvent::Pair(m, n) = pair else { continue };
            for sup_init in 0..=self.b {
                for q in 1..=self.b {
                    let sys = self.essa_system(e, s, m, n, sup_init, q);
                    if let Some(x) = sys.solve() {
                        let r = self.concretize_essa(e, m, n, sup_init, &x);
                        assert!(validate_region(self.ts, &ty, &r).is_ok(), "ESSA region must validate");
                        assert!(
                            solves(&r, &SeparationAtom::Essa { event: e, state: s }, &ty),
                            "ESSA region must solve its atom"
                        );
                        return Some(r);
                    }
                }
            }
        }
        None
    }

    /// SSP for the group families. Regions found earlier are reused when they
    /// already separate an atom.
    pub fn decide_ssp(&self) -> Decision {
        let ty = NetType::new(Family::Zppt, self.b).expect("b > 0");
        self.sweep(AtomKind::Ssa, &ty, |atom| match atom {
            SeparationAtom::Ssa(s, t) => self.decide_ssa(s, t),
            _ => unreachable!(),
        })
    }

    /// ESSP for `τ_RZPT^b`.
    pub fn decide_essp(&self) -> Decision {
        let ty = NetType::new(Family::Rzpt, self.b).expect("b > 0");
        self.sweep(AtomKind::Essa, &ty, |atom| match atom {
            SeparationAtom::Essa { event, state } => self.decide_essa(event, state),
            _ => unreachable!(),
        })
    }

    fn sweep(&self, kind: AtomKind, ty: &NetType, mut decide: impl FnMut(SeparationAtom) -> Option<Region>) -> Decision {
        let mut regions: Vec<Region> = Vec::new();
        let mut coverage = Vec::new();
        for atom in self.ts.enumerate_atoms(kind) {
            if let Some(i) = regions.iter().position(|r| solves(r, &atom, ty)) {
                coverage.push((atom, i));
                continue;
            }
            match decide(atom) {
                Some(r) => {
                    coverage.push((atom, regions.len()));
                    regions.push(r);
                }
                None => return Decision { holds: false, regions, coverage, unsolvable: vec![atom] },
            }
        }
        Decision { holds: true, regions, coverage, unsolvable: Vec::new() }
    }
}

fn require_group(ty: &NetType) -> Result<(), PolyError> {
    if ty.family().has_group() {
        Ok(())
    } else {
        Err(PolyError::Unsupported(ty.family()))
    }
}

/// SSA decision for `τ ∈ {ZPT, ZPPT, RZPT}`.
pub fn decide_ssa(ts: &TransitionSystem, ty: &NetType, s: usize, t: usize) -> Result<Option<Region>, PolyError> {
    require_group(ty)?;
    Ok(PolySynth::new(ts, ty.bound()).decide_ssa(s, t))
}

/// SSP decision for `τ ∈ {ZPT, ZPPT, RZPT}`.
pub fn decide_ssp(ts: &TransitionSystem, ty: &NetType) -> Result<Decision, PolyError> {
    require_group(ty)?;
    Ok(PolySynth::new(ts, ty.bound()).decide_ssp())
}

/// ESSA decision for `τ_RZPT^b`.
pub fn decide_essa_rzpt(ts: &TransitionSystem, b: u32, e: usize, s: usize) -> Option<Region> {
    PolySynth::new(ts, b).decide_essa(e, s)
}

/// ESSP decision for `τ_RZPT^b`.
pub fn decide_essp_rzpt(ts: &TransitionSystem, b: u32) -> Decision {
    PolySynth::new(ts, b).decide_essp()
}

/// Result of [`synthesize_rzpt`].
#[derive(Clone, Debug)]
pub enum Synthesis {
    Net {
        net: PetriNet,
        /// For each place, the atom whose decision produced its region.
        place_atoms: Vec<SeparationAtom>,
        /// `iso[s]` is the reachability-graph state of `s`.
        iso: Vec<usize>,
    },
    Unsolvable {
        problem: Problem,
        atom: SeparationAtom,
    },
}

/// Decides `τ_RZPT^b`-solvability and, when it holds, returns the
/// synthesized net after checking its reachability graph against `ts`.
pub fn synthesize_rzpt(ts: &TransitionSystem, b: u32, cap: usize) -> Result<Synthesis, PolyError> {
    let ps = PolySynth::new(ts, b);
    let ssp = ps.decide_ssp();
    if !ssp.holds {
        return Ok(Synthesis::Unsolvable { problem: Problem::Ssp, atom: ssp.unsolvable[0] });
    }
    let essp = ps.decide_essp();
    if !essp.holds {
        return Ok(Synthesis::Unsolvable { problem: Problem::Essp, atom: essp.unsolvable[0] });
    }
    let mut regions: Vec<Region> = Vec::new();
    let mut place_atoms = Vec::new();
    for d in [&ssp, &essp] {
        for (i, r) in d.regions.iter().enumerate() {
            if regions.contains(r) {
                continue;
            }
            let atom = d.coverage.iter().find(|(_, k)| *k == i).map(|(a, _)| *a).expect("each region covers an atom");
            regions.push(r.clone());
            place_atoms.push(atom);
        }
    }
    let ty = NetType::new(Family::Rzpt, b).expect("b > 0");
    let net = synthesized_net(ts, &regions, &ty);
    let rg = net.reachability_graph(cap)?;
    let iso = ts.isomorphism(&rg.ts).expect("the net of an admissible set reproduces its system");
    Ok(Synthesis::Net { net, place_atoms, iso })
}
