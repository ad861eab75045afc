mod common;

use std::ops::ControlFlow;

use common::*;
use petrisynth_core::net_type::{Family, NetType, TauEvent};
use petrisynth_core::oracle::{enumerate_regions, for_each_region, oracle_decide, Budget, OracleError, BUDGET_ENV, DEFAULT_BUDGET};
use petrisynth_core::region::{check_witness, solves, validate_region, Problem, Region};
use petrisynth_core::ts::AtomKind;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn ty(f: Family, b: u32) -> NetType {
    NetType::new(f, b).unwrap()
}

#[test]
fn three_cycle_is_not_pt_separable() {
    let ts = cycle(3);
    let d = oracle_decide(&ts, &ty(Family::Pt, 2), Problem::Ssp, Budget::default()).unwrap();
    assert!(!d.holds);
    assert_eq!(d.unsolvable, ts.enumerate_atoms(AtomKind::Ssa));
    assert!(d.regions.is_empty());
    let d = oracle_decide(&ts, &ty(Family::Zppt, 2), Problem::Ssp, Budget::default()).unwrap();
    assert!(d.holds);
    assert_eq!(d.regions.len(), 1);
}

#[test]
fn diamond_is_ppt_solvable() {
    let ts = diamond();
    let t = ty(Family::Ppt, 1);
    let d = oracle_decide(&ts, &t, Problem::Solvability, Budget::default()).unwrap();
    assert!(d.holds);
    for (atom, i) in &d.coverage {
        assert!(solves(&d.regions[*i], atom, &t));
    }
    assert!(check_witness(&ts, &t, &d.regions, Problem::Solvability).is_ok());
}

/// Every `(sup(ι), sig)` pair, checked edge by edge.
fn naive_regions(ts: &petrisynth_core::TransitionSystem, t: &NetType) -> Vec<Region> {
    let k = t.events().len();
    let n = ts.num_events();
    let mut out = Vec::new();
    for sup_init in 0..=t.bound() {
        for mut c in 0..k.pow(n as u32) {
            let sig: Vec<TauEvent> = (0..n)
                .map(|_| {
                    let e = t.events()[c % k];
                    c /= k;
                    e
                })
                .collect();
            if let Some(r) = petrisynth_core::region::support_from_signature(ts, t, sup_init, &sig) {
                out.push(r);
            }
        }
    }
    out
}

#[test]
fn enumeration_is_complete_on_the_diamond() {
    let ts = diamond();
    for f in Family::ALL {
        for b in 1..=2 {
            let t = ty(f, b);
            let mut got = enumerate_regions(&ts, &t, Budget::default()).unwrap();
            let mut want = naive_regions(&ts, &t);
            got.sort_by(|a, b| (&a.sup, &a.sig).cmp(&(&b.sup, &b.sig)));
            want.sort_by(|a, b| (&a.sup, &a.sig).cmp(&(&b.sup, &b.sig)));
            assert_eq!(got, want, "{t}");
        }
    }
}

#[test]
fn budget_is_enforced() {
    let ts = eight_state();
    let e = enumerate_regions(&ts, &ty(Family::Pt, 2), Budget::candidates(50)).unwrap_err();
    assert!(matches!(e, OracleError::BudgetExhausted { examined: 50, .. }));
    let mut seen = 0;
    let n = for_each_region(&ts, &ty(Family::Zppt, 2), Budget::default(), |_| {
        seen += 1;
        ControlFlow::Break(())
    })
    .unwrap();
    assert_eq!(seen, 1);
    assert!(n >= 1);
}

#[test]
fn budget_from_environment() {
    std::env::set_var(BUDGET_ENV, "1234");
    assert_eq!(Budget::from_env().max_candidates, 1234);
    std::env::set_var(BUDGET_ENV, "lots");
    assert_eq!(Budget::from_env().max_candidates, DEFAULT_BUDGET);
    std::env::remove_var(BUDGET_ENV);
    assert_eq!(Budget::from_env(), Budget::default());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_matches_naive_search(seed in any::<u64>(), b in 1u32..3, fi in 0usize..5) {
        let ts = random_ts(&mut StdRng::seed_from_u64(seed), 4, 2);
        let t = ty(Family::ALL[fi], b);
        let got = enumerate_regions(&ts, &t, Budget::default()).unwrap();
        for r in &got {
            prop_assert!(validate_region(&ts, &t, r).is_ok());
        }
        prop_assert_eq!(got.len(), naive_regions(&ts, &t).len());
    }

    /// On linear systems an event/state separating set also separates states.
    #[test]
    fn essp_witnesses_of_chains_separate_states(seed in any::<u64>(), b in 1u32..3, fi in 0usize..5) {
        let ts = random_linear(&mut StdRng::seed_from_u64(seed), 6, 3);
        let t = ty(Family::ALL[fi], b);
        let d = oracle_decide(&ts, &t, Problem::Essp, Budget::default()).unwrap();
        if d.holds {
            prop_assert!(check_witness(&ts, &t, &d.regions, Problem::Ssp).is_ok());
        }
    }
}
