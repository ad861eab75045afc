mod common;

use common::*;
use petrisynth_core::io::{
    parse_formula, parse_net, parse_ts, serialize_formula, serialize_net, serialize_ts, serialize_witness,
};
use petrisynth_core::net_type::{Family, NetType, TauEvent};
use petrisynth_core::reduction::Cm1in3Formula;
use petrisynth_core::region::Region;
use petrisynth_core::ts::SeparationAtom;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const DIAMOND_NET: &str = "\
.net n1
.family ppt
.bound 1
.place R1 1
.place R2 1
.transition a
.transition b
.flow R1 a 1,0
.flow R2 b 1,0
";

#[test]
fn system_round_trip() {
    let ts = diamond();
    let text = serialize_ts(&ts);
    assert_eq!(parse_ts(&text).unwrap(), ts);
    assert_eq!(serialize_ts(&parse_ts(&text).unwrap()), text);
}

#[test]
fn minimal_system_text() {
    let ts = parse_ts("# a comment\n.ts c3\n.initial s0\n.arc s0 a s1\n.arc s1 a s2 # trailing\n.arc s2 a s0\n").unwrap();
    assert!(ts.isomorphism(&cycle(3)).is_some());
    let one = parse_ts(".ts one\n.initial s0\n").unwrap();
    assert_eq!(one.num_states(), 1);
}

#[test]
fn system_errors() {
    let e = parse_ts(".ts x\n.initial s0\n.states s0 s1\n.arc s0 a s9\n").unwrap_err();
    assert_eq!(e.line, 4);
    assert!(e.reason.contains("undeclared state"));
    let e = parse_ts(".ts x\n.initial s0\n.arc s0 a s1\n.arc s0 a s0\n").unwrap_err();
    assert!(e.reason.contains("nondeterminism"));
    assert_eq!(e.line, 4);
    assert!(parse_ts(".initial s0\n").is_err());
    assert!(parse_ts(".ts x\n.initial s0\n.arc s0 a\n").is_err());
    assert!(parse_ts(".ts x\n.initial s0\n.bogus\n").is_err());
    assert!(parse_ts(".ts x\n.initial s0\n.arc s0 a/b s1\n").is_err());
    let e = parse_ts(".ts x\n.initial s0\n.states s0 u\n").unwrap_err();
    assert!(e.reason.contains("unreachable: u"));
}

#[test]
fn net_round_trip() {
    let net = parse_net(DIAMOND_NET).unwrap();
    assert_eq!(net.flow(0, 1), TauEvent::Pair(0, 0));
    assert_eq!(serialize_net(&net), DIAMOND_NET);
    assert_eq!(parse_net(&serialize_net(&net)).unwrap(), net);
    let rg = net.reachability_graph(100).unwrap();
    assert!(diamond().isomorphism(&rg.ts).is_some());
}

#[test]
fn group_nets_default_to_the_group_identity() {
    let net = parse_net(".net n2\n.family zppt\n.bound 2\n.place p0 0\n.transition a\n.transition b\n.flow p0 a g:1\n").unwrap();
    assert_eq!(net.flow(0, 1), TauEvent::Group(0));
    assert_eq!(parse_net(&serialize_net(&net)).unwrap(), net);
}

#[test]
fn net_errors() {
    let e = parse_net(".net x\n.family pt\n.bound 2\n.place p 3\n").unwrap_err();
    assert_eq!(e.line, 4);
    let e = parse_net(".net x\n.family ppt\n.bound 2\n.place p 0\n.transition t\n.flow p t 1,1\n").unwrap_err();
    assert!(e.reason.contains("foreign"));
    assert!(parse_net(".net x\n.family qq\n.bound 2\n").is_err());
    assert!(parse_net(".net x\n.family pt\n.bound 0\n").is_err());
    assert!(parse_net(".net x\n.family pt\n.bound 1\n.place p 0\n.transition t\n.flow p u 0,1\n").is_err());
    assert!(parse_net(".net x\n.family pt\n.bound 1\n.place p 0\n.transition t\n.flow p t 0,1\n.flow p t 1,0\n").is_err());
}

#[test]
fn formula_round_trip() {
    let phi = Cm1in3Formula::example();
    let text = serialize_formula(&phi);
    assert_eq!(parse_formula(&text).unwrap(), phi);
    assert!(parse_formula(".cnf3 6\n.clause 0 1 2\n").is_err());
    assert!(parse_formula(".clause 0 1 2\n").is_err());
}

#[test]
fn witness_listing() {
    let ts = cycle(3);
    let ty = NetType::new(Family::Zppt, 2).unwrap();
    let r = Region { sup: vec![0, 1, 2], sig: vec![TauEvent::Group(1)] };
    let text = serialize_witness(&ts, &ty, &[(r.clone(), Some(SeparationAtom::Ssa(0, 1))), (r, None)]);
    assert!(text.starts_with(".witness\n.family zppt\n.bound 2\n.region R0 (s0,s1)\n"));
    assert!(text.contains(".sup s2 2\n.sig a g:1\n.region R1\n"));
}

proptest! {
    #[test]
    fn random_systems_round_trip(seed in any::<u64>()) {
        let ts = random_ts(&mut StdRng::seed_from_u64(seed), 8, 4);
        let text = serialize_ts(&ts);
        let back = parse_ts(&text).unwrap();
        prop_assert_eq!(&back, &ts);
        prop_assert_eq!(serialize_ts(&back), text);
    }
}
