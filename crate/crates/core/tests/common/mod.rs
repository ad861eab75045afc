//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

use petrisynth_core::ts::{Arc, TransitionSystem, TsBuilder};
use rand::seq::SliceRandom;
use rand::Rng;

/// `s0 -a-> s1 -b-> s3` next to `s0 -b-> s2 -a-> s3`.
pub fn diamond() -> TransitionSystem {
    let mut tb = TsBuilder::new("diamond", "s0");
    tb.arc("s0", "a", "s1").arc("s1", "b", "s3").arc("s0", "b", "s2").arc("s2", "a", "s3");
    let ts = tb.build_valid().unwrap();
    // Pin the state order s0..s3.
    let order = ["s0", "s1", "s2", "s3"];
    reorder(&ts, &order)
}

/// A cycle of `n` states on the single event `a`.
pub fn cycle(n: usize) -> TransitionSystem {
    let mut tb = TsBuilder::new(format!("cycle{n}"), "s0");
    for i in 0..n {
        tb.arc(format!("s{i}"), "a", format!("s{}", (i + 1) % n));
    }
    tb.build_valid().unwrap()
}

/// Eight states `0..7` over `a, b, c, d` with chords `4 -c-> 2`,
/// `6 -c-> 0` and `7 -d-> 4` under breadth-first search.
pub fn eight_state() -> TransitionSystem {
    let mut tb = TsBuilder::new("eight", "0");
    for (s, e, t) in [
        ("0", "a", "1"),
        ("1", "b", "2"),
        ("2", "c", "3"),
        ("3", "c", "4"),
        ("4", "c", "2"),
        ("0", "c", "5"),
        ("5", "c", "6"),
        ("6", "a", "7"),
        ("6", "c", "0"),
        ("7", "d", "4"),
    ] {
        tb.arc(s, e, t);
    }
    let ts = tb.build_valid().unwrap();
    reorder(&ts, &["0", "1", "2", "3", "4", "5", "6", "7"])
}

pub fn chain(events: &[&str]) -> TransitionSystem {
    let mut tb = TsBuilder::new("chain", "s0");
    for (i, e) in events.iter().enumerate() {
        tb.arc(format!("s{i}"), *e, format!("s{}", i + 1));
    }
    tb.build_valid().unwrap()
}

pub fn single_state() -> TransitionSystem {
    TransitionSystem::new_valid("one", vec!["s0".into()], vec![], vec![], 0).unwrap()
}

/// Renames nothing; only permutes state indices into the given name order.
pub fn reorder(ts: &TransitionSystem, order: &[&str]) -> TransitionSystem {
    let pos: Vec<usize> = ts.states().iter().map(|s| order.iter().position(|o| o == s).unwrap()).collect();
    let arcs = ts.arc_list().iter().map(|a| Arc { src: pos[a.src], event: a.event, dst: pos[a.dst] }).collect();
    TransitionSystem::new_valid(
        ts.name(),
        order.iter().map(|s| s.to_string()).collect(),
        ts.events().to_vec(),
        arcs,
        pos[ts.initial()],
    )
    .unwrap()
}

/// A valid random system with `1..=max_states` states and at most
/// `max_events` events: a random spanning tree plus random extra arcs.
pub fn random_ts(rng: &mut impl Rng, max_states: usize, max_events: usize) -> TransitionSystem {
    loop {
        let n = rng.gen_range(1..=max_states);
        let k = rng.gen_range(1..=max_events);
        let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; k]; n];
        let mut arcs = Vec::new();
        let mut ok = true;
        for s in 1..n {
            let free: Vec<(usize, usize)> =
                (0..s).flat_map(|p| (0..k).map(move |e| (p, e))).filter(|&(p, e)| delta[p][e].is_none()).collect();
            let Some(&(p, e)) = free.choose(rng) else {
                ok = false;
                break;
            };
            delta[p][e] = Some(s);
            arcs.push(Arc { src: p, event: e, dst: s });
        }
        if !ok {
            continue;
        }
        let extra = rng.gen_range(0..=n * k / 2 + 1);
        for _ in 0..extra {
            let (s, e) = (rng.gen_range(0..n), rng.gen_range(0..k));
            if delta[s][e].is_none() {
                let t = rng.gen_range(0..n);
                delta[s][e] = Some(t);
                arcs.push(Arc { src: s, event: e, dst: t });
            }
        }
        if let Some(ts) = finish(n, k, arcs) {
            return ts;
        }
    }
}

/// A random chain of `1..=max_states` states over at most `max_events` events.
pub fn random_linear(rng: &mut impl Rng, max_states: usize, max_events: usize) -> TransitionSystem {
    loop {
        let n = rng.gen_range(2..=max_states);
        let k = rng.gen_range(1..=max_events);
        let arcs = (0..n - 1).map(|i| Arc { src: i, event: rng.gen_range(0..k), dst: i + 1 }).collect();
        if let Some(ts) = finish(n, k, arcs) {
            return ts;
        }
    }
}

/// Drops unused events and renumbers the rest; `None` when nothing is left
/// of a multi-state system.
fn finish(n: usize, k: usize, mut arcs: Vec<Arc>) -> Option<TransitionSystem> {
    let used: Vec<bool> = (0..k).map(|e| arcs.iter().any(|a| a.event == e)).collect();
    let remap: Vec<usize> = used.iter().scan(0, |c, &u| {
        let v = *c;
        if u {
            *c += 1;
        }
        Some(v)
    }).collect();
    for a in arcs.iter_mut() {
        a.event = remap[a.event];
    }
    let names = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];
    let events: Vec<String> = (0..used.iter().filter(|&&u| u).count()).map(|i| names[i].to_string()).collect();
    if n > 1 && events.is_empty() {
        return None;
    }
    let states = (0..n).map(|i| format!("s{i}")).collect();
    TransitionSystem::new_valid("random", states, events, arcs, 0).ok()
}
