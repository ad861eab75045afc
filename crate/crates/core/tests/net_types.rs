use petrisynth_core::net_type::{Family, NetType, NetTypeError, TauEvent};
use proptest::prelude::*;
use std::collections::HashSet;

fn ty(f: Family, b: u32) -> NetType {
    NetType::new(f, b).unwrap()
}

#[test]
fn event_counts() {
    for b in 1..=5u32 {
        let n = |f| ty(f, b).events().len() as u32;
        assert_eq!(n(Family::Pt), (b + 1) * (b + 1));
        assert_eq!(n(Family::Ppt), 2 * b + 1);
        assert_eq!(n(Family::Zpt), (b + 1) * (b + 1) + b);
        assert_eq!(n(Family::Zppt), 3 * b + 1);
        assert_eq!(n(Family::Rzpt), (b + 1) * (b + 1) + b);
    }
}

#[test]
fn small_event_sets() {
    let pt = ty(Family::Pt, 2);
    for k in 0..=2 {
        assert!(pt.contains(TauEvent::Pair(k, k)));
    }
    assert_eq!(ty(Family::Ppt, 1).events(), [TauEvent::Pair(0, 0), TauEvent::Pair(0, 1), TauEvent::Pair(1, 0)]);
    let zpt = ty(Family::Zpt, 2);
    assert_eq!(zpt.events().iter().filter(|e| matches!(e, TauEvent::Pair(..))).count(), 8);
    assert!(!zpt.contains(TauEvent::Pair(0, 0)));
    assert!((0..=2).all(|k| zpt.contains(TauEvent::Group(k))));
    assert!(!ty(Family::Pt, 2).contains(TauEvent::Group(1)));
}

#[test]
fn zero_bound_is_rejected() {
    for f in Family::ALL {
        assert_eq!(NetType::new(f, 0), Err(NetTypeError::ZeroBound));
    }
}

#[test]
fn transitions() {
    assert_eq!(ty(Family::Pt, 2).delta(1, TauEvent::Pair(1, 2)), Ok(Some(2)));
    assert_eq!(ty(Family::Zpt, 2).delta(2, TauEvent::Group(1)), Ok(Some(0)));
    assert_eq!(ty(Family::Rzpt, 2).delta(2, TauEvent::Pair(1, 2)), Ok(None));
    assert_eq!(ty(Family::Pt, 2).delta(2, TauEvent::Pair(0, 1)), Ok(None));
    assert!(matches!(ty(Family::Ppt, 2).delta(1, TauEvent::Pair(1, 1)), Err(NetTypeError::ForeignEvent { .. })));
    assert!(matches!(ty(Family::Pt, 2).delta(3, TauEvent::Pair(0, 0)), Err(NetTypeError::StateOutOfRange { .. })));
    for f in [Family::Zpt, Family::Zppt, Family::Rzpt] {
        for s in 0..=3 {
            assert_eq!(ty(f, 3).delta(s, TauEvent::Group(0)), Ok(Some(s)));
        }
    }
}

#[test]
fn accessors_and_text() {
    assert_eq!(TauEvent::Pair(1, 0).accessors(), (1, 0, 0));
    assert_eq!(TauEvent::Group(2).accessors(), (0, 0, 2));
    assert_eq!(TauEvent::Pair(0, 0).accessors(), (0, 0, 0));
    for e in [TauEvent::Pair(0, 1), TauEvent::Group(1), TauEvent::Pair(12, 3)] {
        assert_eq!(e.to_string().parse::<TauEvent>().unwrap(), e);
    }
    assert_eq!(TauEvent::Group(1).to_string(), "g:1");
    assert!("1;2".parse::<TauEvent>().is_err());
    assert_eq!("ZPPT".parse::<Family>().unwrap(), Family::Zppt);
    assert!("xpt".parse::<Family>().is_err());
}

#[test]
fn b_one_group_types_exist() {
    assert_eq!(ty(Family::Zppt, 1).events().len(), 4);
    assert_eq!(ty(Family::Rzpt, 1).events().len(), 5);
}

#[test]
fn pure_types_are_set_differences() {
    for b in 1..=4 {
        let mixed = |e: &TauEvent| matches!(e, TauEvent::Pair(m, n) if *m >= 1 && *n >= 1);
        let pt: HashSet<_> = ty(Family::Pt, b).events().iter().copied().filter(|e| !mixed(e)).collect();
        let ppt: HashSet<_> = ty(Family::Ppt, b).events().iter().copied().collect();
        assert_eq!(pt, ppt);
        let zpt: HashSet<_> = ty(Family::Zpt, b).events().iter().copied().filter(|e| !mixed(e)).collect();
        let zppt: HashSet<_> = ty(Family::Zppt, b).events().iter().copied().collect();
        assert_eq!(zpt, zppt);
    }
}

proptest! {
    #[test]
    fn results_stay_in_range(b in 1u32..6, fi in 0usize..5, s in 0u32..6) {
        let t = ty(Family::ALL[fi], b);
        prop_assume!(s <= b);
        for &e in t.events() {
            if let Some(x) = t.delta(s, e).unwrap() {
                prop_assert!(x <= b);
            }
        }
    }

    #[test]
    fn group_families_follow_the_modular_shape(b in 1u32..6, fi in 2usize..5, s in 0u32..6) {
        let t = ty(Family::ALL[fi], b);
        prop_assume!(s <= b);
        for &e in t.events() {
            if let Some(x) = t.delta(s, e).unwrap() {
                let (m, n, k) = e.accessors();
                prop_assert_eq!(x % (b + 1), (s + b + 1 - m + n + k) % (b + 1));
            }
        }
    }

    #[test]
    fn rzpt_pairs_occur_once(b in 1u32..6) {
        let t = ty(Family::Rzpt, b);
        for &e in t.events() {
            if let TauEvent::Pair(m, n) = e {
                let at: Vec<u32> = (0..=b).filter(|&s| t.step(s, e).is_some()).collect();
                prop_assert_eq!(&at, &vec![m]);
                prop_assert_eq!(t.step(m, e), Some(n));
            }
        }
    }
}
