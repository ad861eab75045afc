//! Explicit regions from the hardness proofs.

use std::collections::{HashMap, VecDeque};

use crate::net_type::{NetType, TauEvent};
use crate::region::{check_witness, solves, validate_region, AtomSource, Problem, Region};
use crate::ts::{AtomKind, Carrier, SeparationAtom};

use super::gadgets::{GadgetKind, Union};
use super::joining::{extend_linear, lj_w_region, lj_w_separating_region, lj_y_region, Joined};
use super::{build_union, Cm1in3Formula, GadgetUnion, ReductionError, Variant};

/// Propagates from every member root, writing 0 where a step is undefined so
/// that validation can name the offending edge.
fn propagate<C: Carrier + ?Sized>(c: &C, ty: &NetType, root_sup: &[u32], sig: &[TauEvent]) -> Region {
    let mut out = vec![Vec::new(); c.state_count()];
    for a in c.arcs() {
        out[a.src].push(*a);
    }
    let mut sup: Vec<Option<u32>> = vec![None; c.state_count()];
    let mut queue = VecDeque::new();
    for (&r, &v) in c.roots().iter().zip(root_sup) {
        sup[r] = Some(v);
        queue.push_back(r);
    }
    while let Some(s) = queue.pop_front() {
        let v = sup[s].unwrap();
        for a in &out[s] {
            if sup[a.dst].is_none() {
                sup[a.dst] = Some(ty.step(v, sig[a.event]).unwrap_or(0));
                queue.push_back(a.dst);
            }
        }
    }
    Region { sup: sup.into_iter().map(|v| v.unwrap_or(0)).collect(), sig: sig.to_vec() }
}

/// A region given by initial supports per gadget and signatures per event name.
fn template(
    u: &Union,
    ty: &NetType,
    name: &str,
    init: impl Fn(GadgetKind) -> u32,
    sig: impl Fn(&str) -> TauEvent,
) -> Result<Region, ReductionError> {
    let roots: Vec<u32> = u.members().iter().map(|m| init(m.kind)).collect();
    let sig: Vec<TauEvent> = u.events().iter().map(|e| sig(e)).collect();
    let r = propagate(u, ty, &roots, &sig);
    validate_region(u, ty, &r).map_err(|source| ReductionError::Template { name: name.to_string(), source })?;
    Ok(r)
}

fn x_index(e: &str) -> Option<usize> {
    e.strip_prefix('X').and_then(|v| v.parse().ok())
}

fn is_kj(e: &str) -> bool {
    matches!(e, "k0" | "k1" | "k2" | "k3")
}

/// The region solving α when `model` is a one-in-three model.
pub fn alpha_region(gu: &GadgetUnion, model: &[usize]) -> Result<Region, ReductionError> {
    if !gu.formula.is_model(model) {
        return Err(ReductionError::NotAModel);
    }
    let b = gu.b;
    let ty = gu.net_type();
    let in_m = |e: &str| x_index(e).is_some_and(|v| model.contains(&v));
    let p = TauEvent::Pair;
    let r = match gu.variant {
        Variant::PptEssp | Variant::Ssp => template(
            &gu.union,
            &ty,
            "alpha",
            |k| match k {
                GadgetKind::D(_) | GadgetKind::G(_) => b,
                _ => 0,
            },
            |e| match e {
                "k" => p(0, 1),
                "o0" | "o1" => p(b, 0),
                _ if is_kj(e) => p(0, b),
                _ if in_m(e) => p(1, 0),
                _ => p(0, 0),
            },
        )?,
        // o1 leaves C_j by b single steps, so it must consume one token.
        Variant::PtEssp => template(
            &gu.union,
            &ty,
            "alpha",
            |k| match k {
                GadgetKind::C(_) | GadgetKind::G(_) => b,
                _ => 0,
            },
            |e| match e {
                "z" => p(b, b),
                "k" => p(0, 1),
                "o0" => p(b, 0),
                "o1" => p(1, 0),
                _ if is_kj(e) => p(0, b),
                _ if in_m(e) => p(1, 0),
                _ => p(0, 0),
            },
        )?,
        Variant::ZEssp => template(
            &gu.union,
            &ty,
            "alpha",
            |_| 0,
            |e| {
                let g = TauEvent::Group;
                if e == "k" {
                    p(0, 1)
                } else if e == "u" || in_m(e) {
                    g(1)
                } else if let Some(j) = e.strip_prefix('v').and_then(|v| v.parse::<usize>().ok()) {
                    if model.contains(&j) {
                        g(0)
                    } else {
                        g(1)
                    }
                } else {
                    g(0)
                }
            },
        )?,
    };
    if !solves(&r, &gu.alpha, &ty) {
        return Err(ReductionError::NotSolved { name: "alpha".into(), atom: gu.alpha_label() });
    }
    Ok(r)
}

/// Builds the union for `phi` and returns it with its α region.
pub fn alpha_witness_region(
    phi: &Cm1in3Formula,
    model: &[usize],
    variant: Variant,
    b: u32,
) -> Result<(GadgetUnion, Region), ReductionError> {
    let gu = build_union(phi, variant, b)?;
    let r = alpha_region(&gu, model)?;
    Ok((gu, r))
}

/// Maximal runs of `e` on each linear member, as `(member, start, end)`
/// positions along the member's path.
fn runs(u: &Union, e: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..u.members().len() {
        let Some(path) = u.path_of(i) else { continue };
        let mut start = None;
        for (pos, w) in path.windows(2).enumerate() {
            let labeled = u.step(w[0], e) == Some(w[1]);
            match (labeled, start) {
                (true, None) => start = Some(pos),
                (false, Some(s)) => {
                    out.push((i, s, pos));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((i, s, path.len() - 1));
        }
    }
    out
}

/// `Some(c)` when every maximal run of `e` has length `c`.
pub fn consistency(u: &Union, e: usize) -> Option<usize> {
    let r = runs(u, e);
    let c = r.first().map(|&(_, s, t)| t - s)?;
    r.iter().all(|&(_, s, t)| t - s == c).then_some(c)
}

/// Exactly one run of `e` in every member that has `e`.
pub fn thinly_distributed(u: &Union, e: usize) -> bool {
    let r = runs(u, e);
    (0..u.members().len()).all(|i| r.iter().filter(|x| x.0 == i).count() == usize::from(u.has_event(i, e)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThinCase {
    /// `q` lies outside the members of `a`, or after its run.
    AfterOrOutside,
    /// `q` lies before the run of `a`, which the helper `x` enters.
    BeforeWithHelper,
}

fn precondition(msg: String) -> ReductionError {
    ReductionError::Precondition(msg)
}

fn check_consistent(u: &Union, b: u32, e: usize) -> Result<usize, ReductionError> {
    match consistency(u, e) {
        Some(c) if c == 1 || c == b as usize => Ok(c),
        _ => Err(precondition(format!("event {} is neither 1- nor b-consistent", u.events()[e]))),
    }
}

/// The atom-independent region of one case. `x` is required for the second case.
pub fn thin_event_template(u: &Union, b: u32, a: usize, case: ThinCase, x: Option<usize>) -> Result<Region, ReductionError> {
    if let Some(m) = u.members().iter().find(|m| !m.ts.is_linear()) {
        return Err(ReductionError::NonLinear(m.ts.name().to_string()));
    }
    for e in 0..u.events().len() {
        check_consistent(u, b, e)?;
    }
    let name = |e: usize| u.events()[e].clone();
    if !thinly_distributed(u, a) {
        return Err(precondition(format!("event {} is not thinly distributed", name(a))));
    }
    let ty = NetType::new(crate::net_type::Family::Ppt, b).expect("b >= 1");
    let bcons = b > 1 && consistency(u, a) == Some(b as usize);
    let mut sig = vec![TauEvent::Pair(0, 0); u.events().len()];
    sig[a] = if bcons { TauEvent::Pair(0, 1) } else { TauEvent::Pair(0, b) };
    let n = u.members().len();
    let roots: Vec<u32> = match case {
        ThinCase::AfterOrOutside => (0..n).map(|i| if u.has_event(i, a) { 0 } else { b }).collect(),
        ThinCase::BeforeWithHelper => {
            let x = x.ok_or_else(|| precondition("the second case needs a helper event".into()))?;
            if x == a {
                return Err(precondition("the helper must differ from the separated event".into()));
            }
            if !thinly_distributed(u, x) {
                return Err(precondition(format!("helper {} is not thinly distributed", name(x))));
            }
            if bcons && consistency(u, x) != Some(1) {
                return Err(precondition(format!("{} is b-consistent, so helper {} must be 1-consistent", name(a), name(x))));
            }
            let ra = runs(u, a);
            for (i, xs, _) in runs(u, x) {
                if ra.iter().any(|&(j, s, _)| j == i && s < xs) {
                    return Err(precondition(format!("helper {} occurs after {}", name(x), name(a))));
                }
            }
            let xb = b > 1 && consistency(u, x) == Some(b as usize);
            sig[x] = if xb { TauEvent::Pair(1, 0) } else { TauEvent::Pair(b, 0) };
            (0..n).map(|i| if u.has_event(i, a) && !u.has_event(i, x) { 0 } else { b }).collect()
        }
    };
    let r = propagate(u, &ty, &roots, &sig);
    validate_region(u, &ty, &r).map_err(|source| ReductionError::Template { name: format!("thin {}", name(a)), source })?;
    Ok(r)
}

/// A region solving the atom `(a, q)` through one of the two cases, after
/// checking the case's side conditions.
pub fn thin_event_region(
    u: &Union,
    b: u32,
    a: usize,
    q: usize,
    case: ThinCase,
    x: Option<usize>,
) -> Result<Region, ReductionError> {
    let atom = SeparationAtom::Essa { event: a, state: q };
    if !atom.is_well_formed(u) {
        return Err(precondition(format!("({}, {}) is not an event/state separation atom", u.events()[a], u.states()[q])));
    }
    let mq = u.member_of(q);
    let path = u.path_of(mq).ok_or_else(|| ReductionError::NonLinear(u.members()[mq].ts.name().to_string()))?;
    let pos = path.iter().position(|&s| s == q).expect("q lies on its member's path");
    let run = runs(u, a).into_iter().find(|r| r.0 == mq);
    match case {
        ThinCase::AfterOrOutside => {
            if let Some((_, start, _)) = run {
                if pos < start {
                    return Err(precondition("q occurs before a in its member".into()));
                }
            }
        }
        ThinCase::BeforeWithHelper => {
            let Some((_, start, _)) = run else {
                return Err(precondition("the second case needs a in q's member".into()));
            };
            if pos >= start {
                return Err(precondition("q does not occur before a".into()));
            }
            let x = x.ok_or_else(|| precondition("the second case needs a helper event".into()))?;
            if start == 0 || u.step(path[start - 1], x) != Some(path[start]) {
                return Err(precondition(format!("{} does not immediately precede {}", u.events()[x], u.events()[a])));
            }
        }
    }
    let r = thin_event_template(u, b, a, case, x)?;
    let ty = NetType::new(crate::net_type::Family::Ppt, b).expect("b >= 1");
    if !solves(&r, &atom, &ty) {
        return Err(ReductionError::NotSolved { name: "thin event".into(), atom: atom.label(u) });
    }
    Ok(r)
}

/// Every valid region of both cases, for every event and helper.
fn thin_event_pool(u: &Union, b: u32) -> Vec<(String, Region)> {
    let mut out = Vec::new();
    for a in 0..u.events().len() {
        if let Ok(r) = thin_event_template(u, b, a, ThinCase::AfterOrOutside, None) {
            out.push((format!("thin {}", u.events()[a]), r));
        }
        let mut helpers = Vec::new();
        for (i, start, _) in runs(u, a) {
            let path = u.path_of(i).expect("linear");
            if start > 0 {
                if let Some(x) = (0..u.events().len()).find(|&x| u.step(path[start - 1], x) == Some(path[start])) {
                    if !helpers.contains(&x) {
                        helpers.push(x);
                    }
                }
            }
        }
        for x in helpers {
            if let Ok(r) = thin_event_template(u, b, a, ThinCase::BeforeWithHelper, Some(x)) {
                out.push((format!("thin {} via {}", u.events()[a], u.events()[x]), r));
            }
        }
    }
    out
}

/// The regions handling the events of H1 that are not thinly distributed,
/// or whose atoms inside H1 precede them.
fn h1_regions(gu: &GadgetUnion, model: &[usize]) -> Vec<(String, Result<Region, ReductionError>)> {
    let b = gu.b;
    let ty = gu.net_type();
    let u = &gu.union;
    let p = TauEvent::Pair;
    let h1 = |k: GadgetKind| k == GadgetKind::H1;
    let in_m = |e: &str| x_index(e).is_some_and(|v| model.contains(&v));
    vec![
        ("alpha".into(), alpha_region(gu, model)),
        (
            "k outside H1".into(),
            template(u, &ty, "k outside H1", |k| if h1(k) { 0 } else { b }, |e| match e {
                "k" => p(0, 1),
                "y0" => p(b, 0),
                _ => p(0, 0),
            }),
        ),
        ("o0 after".into(), template(u, &ty, "o0 after", |_| 0, |e| if e == "o0" { p(0, b) } else { p(0, 0) })),
        (
            "o0 before".into(),
            template(u, &ty, "o0 before", |k| if h1(k) { b } else { 0 }, |e| match e {
                "o0" => p(0, b),
                "y0" => p(b, 0),
                _ => p(0, 0),
            }),
        ),
        (
            "y0 low".into(),
            template(u, &ty, "y0 low", |_| 0, |e| match e {
                "y0" => p(b, 0),
                "k" => p(0, 1),
                _ => p(0, 0),
            }),
        ),
        (
            "y0 middle".into(),
            template(u, &ty, "y0 middle", |k| if h1(k) { b } else { 0 }, |e| match e {
                "y0" => p(b, 0),
                "y1" => p(0, b),
                _ => p(0, 0),
            }),
        ),
        (
            "y1 high".into(),
            template(
                u,
                &ty,
                "y1 high",
                |k| matches!(k, GadgetKind::H1 | GadgetKind::D(_) | GadgetKind::G(_)) as u32 * b,
                |e| match e {
                    "o0" => p(b, 0),
                    "y1" => p(0, b),
                    _ => p(0, 0),
                },
            ),
        ),
        (
            "y1 low".into(),
            template(
                u,
                &ty,
                "y1 low",
                |k| matches!(k, GadgetKind::D(_) | GadgetKind::G(_)) as u32 * b,
                |e| match e {
                    "k" => p(0, 1),
                    "y1" | "o0" => p(b, 0),
                    _ => p(0, 0),
                },
            ),
        ),
        (
            "o1 after y1".into(),
            template(u, &ty, "o1 after y1", |k| if h1(k) { b } else { 0 }, |e| match e {
                "y1" => p(b, 0),
                "o1" => p(0, b),
                _ => p(0, 0),
            }),
        ),
        (
            "o1 mirrored".into(),
            template(
                u,
                &ty,
                "o1 mirrored",
                |k| match k {
                    GadgetKind::D(_) | GadgetKind::G(_) => 0,
                    _ => b,
                },
                |e| match e {
                    "y0" => p(b, 0),
                    "o0" | "o1" => p(0, b),
                    _ if is_kj(e) => p(b, 0),
                    _ if in_m(e) => p(0, 1),
                    _ => p(0, 0),
                },
            ),
        ),
    ]
}

/// An event/state separation witness for the linear joining of the
/// PPT_ESSP union, built from proof regions carried over to the joining.
#[derive(Clone, Debug)]
pub struct FullWitness {
    pub joined: Joined,
    /// Regions on the joined system, each with the atom it was added for.
    pub regions: Vec<(Region, SeparationAtom)>,
    /// Pool regions that failed validation on the union.
    pub rejected: Vec<(String, ReductionError)>,
    /// Atoms of the joined system no region solves. Empty on success.
    pub missing: Vec<SeparationAtom>,
}

impl FullWitness {
    pub fn is_complete(&self) -> bool {
        self.missing.is_empty()
    }
    pub fn region_list(&self) -> Vec<Region> {
        self.regions.iter().map(|(r, _)| r.clone()).collect()
    }
}

pub fn ppt_essp_witness(gu: &GadgetUnion, model: &[usize]) -> Result<FullWitness, ReductionError> {
    if gu.variant != Variant::PptEssp {
        return Err(precondition(format!("full witnesses exist for ppt-essp only, not {}", gu.variant)));
    }
    if !gu.formula.is_model(model) {
        return Err(ReductionError::NotAModel);
    }
    let b = gu.b;
    let ty = gu.net_type();
    let u = &gu.union;
    let joined = gu.join()?;
    let mut rejected = Vec::new();
    let mut pool: Vec<Region> = Vec::new();
    for (name, r) in h1_regions(gu, model) {
        match r {
            Ok(r) => pool.push(r),
            Err(e) => rejected.push((name, e)),
        }
    }
    pool.extend(thin_event_pool(u, b).into_iter().map(|(_, r)| r));

    let mut regions: Vec<(Region, SeparationAtom)> = Vec::new();
    let mut cache: HashMap<(usize, u32), usize> = HashMap::new();
    for atom in u.atoms(AtomKind::Essa) {
        let SeparationAtom::Essa { state: z, .. } = atom else { unreachable!() };
        let Some(i) = pool.iter().position(|r| solves(r, &atom, &ty)) else { continue };
        let key = (i, pool[i].sup[z]);
        if !cache.contains_key(&key) {
            cache.insert(key, regions.len());
            regions.push((extend_linear(u, &joined, &pool[i], key.1), atom));
        }
    }
    let n = u.members().len();
    for i in 1..n {
        let y = joined.y[i - 1];
        let w = joined.w[i - 1];
        let q = joined.q[i - 1];
        regions.push((lj_y_region(&joined, b, i), SeparationAtom::Essa { event: y, state: u.initial_of(0) }));
        regions.push((lj_w_region(u, &joined, b, i), SeparationAtom::Essa { event: w, state: q }));
        let t = u.terminal_of(i - 1).expect("linear");
        let mut made: HashMap<usize, usize> = HashMap::new();
        for s in u.states_of(i - 1).filter(|&s| s != t) {
            let atom = SeparationAtom::Essa { event: w, state: s };
            if regions.iter().any(|(r, _)| solves(r, &atom, &ty)) {
                continue;
            }
            let Some(k) = pool.iter().position(|r| r.sup[s] != r.sup[t]) else { continue };
            if made.contains_key(&k) {
                continue;
            }
            made.insert(k, regions.len());
            regions.push((lj_w_separating_region(u, &joined, b, &pool[k], i, s), atom));
        }
    }
    for (r, atom) in &regions {
        validate_region(&joined.ts, &ty, r).map_err(|source| ReductionError::Template {
            name: format!("extension for {}", atom.label(&joined.ts)),
            source,
        })?;
    }
    let list: Vec<Region> = regions.iter().map(|(r, _)| r.clone()).collect();
    let missing = match check_witness(&joined.ts, &ty, &list, Problem::Essp) {
        Ok(_) => Vec::new(),
        Err(m) => m,
    };
    Ok(FullWitness { joined, regions, rejected, missing })
}
