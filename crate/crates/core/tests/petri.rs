mod common;

use common::*;
use petrisynth_core::net_type::{Family, NetType, TauEvent};
use petrisynth_core::petri::{PetriError, PetriNet, Place, DEFAULT_CAP};
use petrisynth_core::region::{synthesized_net, Region};
use proptest::prelude::*;

fn place(name: &str, initial: u32) -> Place {
    Place { name: name.into(), initial }
}

/// Two places, each consumed by one of `a`, `b`.
fn diamond_net() -> PetriNet {
    PetriNet::new(
        "n1",
        NetType::new(Family::Ppt, 1).unwrap(),
        vec![place("R1", 1), place("R2", 1)],
        vec!["a".into(), "b".into()],
        vec![
            vec![TauEvent::Pair(1, 0), TauEvent::Pair(0, 0)],
            vec![TauEvent::Pair(0, 0), TauEvent::Pair(1, 0)],
        ],
    )
    .unwrap()
}

fn counter_net() -> PetriNet {
    PetriNet::new(
        "n2",
        NetType::new(Family::Zppt, 2).unwrap(),
        vec![place("p0", 0)],
        vec!["a".into()],
        vec![vec![TauEvent::Group(1)]],
    )
    .unwrap()
}

#[test]
fn firing() {
    let n1 = diamond_net();
    assert_eq!(n1.fire_named(&[1, 1], "a").unwrap(), Some(vec![0, 1]));
    assert_eq!(n1.fire_named(&[0, 1], "a").unwrap(), None);
    assert_eq!(n1.fire_named(&[1, 1], "x"), Err(PetriError::UnknownTransition("x".into())));
    assert!(matches!(n1.fire_named(&[1], "a"), Err(PetriError::MarkingLength { .. })));
    assert_eq!(counter_net().fire_named(&[0], "a").unwrap(), Some(vec![1]));
}

#[test]
fn reachability_graphs() {
    let rg = diamond_net().reachability_graph(DEFAULT_CAP).unwrap();
    assert!(rg.ts.is_valid());
    assert_eq!(rg.ts.states()[rg.ts.initial()], "11");
    assert!(diamond().isomorphism(&rg.ts).is_some());
    let rg = counter_net().reachability_graph(DEFAULT_CAP).unwrap();
    assert_eq!(rg.ts.states(), ["0", "1", "2"]);
    assert!(cycle(3).isomorphism(&rg.ts).is_some());
}

#[test]
fn empty_net_loops_on_one_state() {
    let net = PetriNet::new("e", NetType::new(Family::Pt, 1).unwrap(), vec![], vec!["t".into()], vec![]).unwrap();
    let rg = net.reachability_graph(10).unwrap();
    assert_eq!(rg.ts.states(), ["_"]);
    assert_eq!(rg.ts.step(0, 0), Some(0));
}

#[test]
fn cap_and_dead_transitions() {
    assert_eq!(counter_net().reachability_graph(2).unwrap_err(), PetriError::CapExceeded(2));
    let net = PetriNet::new(
        "d",
        NetType::new(Family::Ppt, 1).unwrap(),
        vec![place("p", 0)],
        vec!["dead".into()],
        vec![vec![TauEvent::Pair(1, 0)]],
    )
    .unwrap();
    let rg = net.reachability_graph(DEFAULT_CAP).unwrap();
    assert_eq!(rg.ts.num_events(), 0);
    assert_eq!(rg.warnings.len(), 1);
}

#[test]
fn construction_errors() {
    let ty = NetType::new(Family::Ppt, 1).unwrap();
    let e = PetriNet::new("x", ty.clone(), vec![place("p", 2)], vec!["a".into()], vec![vec![TauEvent::Pair(0, 0)]]);
    assert!(matches!(e, Err(PetriError::MarkingOutOfRange { .. })));
    let e = PetriNet::new("x", ty.clone(), vec![place("p", 0)], vec!["a".into()], vec![vec![TauEvent::Pair(1, 1)]]);
    assert!(matches!(e, Err(PetriError::ForeignFlow { .. })));
    let e = PetriNet::new("x", ty, vec![place("p", 0)], vec!["a".into()], vec![vec![]]);
    assert_eq!(e.unwrap_err(), PetriError::FlowShape);
}

#[test]
fn wide_markings_use_separators() {
    let net = PetriNet::new(
        "w",
        NetType::new(Family::Zppt, 10).unwrap(),
        vec![place("p", 10), place("q", 0)],
        vec!["a".into()],
        vec![vec![TauEvent::Group(1)], vec![TauEvent::Group(0)]],
    )
    .unwrap();
    assert_eq!(net.marking_name(&net.initial_marking()), "10.0");
}

#[test]
fn synthesized_net_from_regions() {
    let ts = diamond();
    let r1 = Region { sup: vec![1, 0, 1, 0], sig: vec![TauEvent::Pair(1, 0), TauEvent::Pair(0, 0)] };
    let net = synthesized_net(&ts, &[r1], &NetType::new(Family::Ppt, 1).unwrap());
    assert_eq!(net.places(), [place("p0", 1)]);
    assert_eq!(net.flow(0, 0), TauEvent::Pair(1, 0));
}

proptest! {
    #[test]
    fn random_nets_have_valid_bounded_graphs(
        b in 1u32..3,
        fi in 0usize..5,
        places in 1usize..4,
        seeds in proptest::collection::vec(any::<u32>(), 12 + 3),
    ) {
        let ty = NetType::new(Family::ALL[fi], b).unwrap();
        let evs = ty.events();
        let transitions: Vec<String> = (0..3).map(|t| format!("t{t}")).collect();
        let flow: Vec<Vec<TauEvent>> = (0..places)
            .map(|p| (0..3).map(|t| evs[seeds[p * 3 + t] as usize % evs.len()]).collect())
            .collect();
        let ps = (0..places).map(|p| place(&format!("p{p}"), seeds[12 + p] % (b + 1))).collect();
        let net = PetriNet::new("r", ty, ps, transitions, flow).unwrap();
        let rg = net.reachability_graph(DEFAULT_CAP).unwrap();
        prop_assert!(rg.ts.validate().is_empty());
        prop_assert!(rg.ts.num_states() <= ((b + 1) as usize).pow(places as u32));
    }
}
