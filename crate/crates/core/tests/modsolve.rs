use petrisynth_core::modsolve::ModSystem;
use proptest::prelude::*;

const MODULI: [u64; 4] = [2, 3, 4, 6];

fn brute(sys: &ModSystem) -> bool {
    let m = sys.modulus();
    let n = sys.cols();
    let total = m.pow(n as u32);
    (0..total).any(|mut c| {
        let x: Vec<u64> = (0..n)
            .map(|_| {
                let v = c % m;
                c /= m;
                v
            })
            .collect();
        sys.verify(&x)
    })
}

fn system(m: u64, n: usize, rows: &[(Vec<u64>, u64)]) -> ModSystem {
    let mut s = ModSystem::new(m, n);
    for (c, r) in rows {
        s.push_row_u(c, *r);
    }
    s
}

fn agree(sys: &ModSystem) {
    let got = sys.solve();
    if let Some(x) = &got {
        assert!(sys.verify(x), "solution does not verify: {x:?} for {sys:?}");
    }
    assert_eq!(got.is_some(), brute(sys), "{sys:?}");
}

/// Every single-row system in one and two unknowns.
#[test]
fn all_small_single_rows() {
    for m in MODULI {
        for n in 1..=2 {
            let cells = m.pow(n as u32 + 1);
            for mut c in 0..cells {
                let mut row = Vec::new();
                for _ in 0..=n {
                    row.push(c % m);
                    c /= m;
                }
                let rhs = row.pop().unwrap();
                agree(&system(m, n, &[(row, rhs)]));
            }
        }
    }
}

/// Every two-row system in two unknowns over Z_4 and Z_6.
#[test]
fn all_two_row_systems_over_composite_moduli() {
    for m in [4u64, 6] {
        let cells = m.pow(6);
        for mut c in 0..cells {
            let mut v = Vec::new();
            for _ in 0..6 {
                v.push(c % m);
                c /= m;
            }
            agree(&system(m, 2, &[(v[0..2].to_vec(), v[2]), (v[3..5].to_vec(), v[5])]));
        }
    }
}

#[test]
fn known_cases() {
    // 2x = 1 has no solution mod 4, 2x = 2 does.
    assert!(system(4, 1, &[(vec![2], 1)]).solve().is_none());
    assert!(system(4, 1, &[(vec![2], 2)]).solve().is_some());
    // 3x = 3 mod 6 has x = 1, 3, 5.
    let x = system(6, 1, &[(vec![3], 3)]).solve().unwrap();
    assert_eq!(x[0] % 2, 1);
    // x + y = 1 and 2x + 2y = 0 mod 4.
    assert!(system(4, 2, &[(vec![1, 1], 1), (vec![2, 2], 0)]).solve().is_none());
}

#[test]
fn pinning_and_zero_rows() {
    let mut s = ModSystem::new(3, 3);
    s.push_row(&[0, 0, 0], 0);
    s.push_row(&[1, -1, 0], 0);
    s.pin(0, 2);
    s.drop_zero_rows();
    assert_eq!(s.row_count(), 2);
    let x = s.solve().unwrap();
    assert_eq!(&x[..2], &[2, 2]);
    assert_eq!(x[2], 0);
    assert_eq!(s.rows()[0], vec![1, 2, 0]);
}

#[test]
fn inconsistent_systems_keep_a_contradiction() {
    let s = system(6, 2, &[(vec![2, 4], 1)]);
    let r = s.reduced();
    assert!((0..r.row_count()).any(|i| r.rows()[i].iter().all(|&v| v == 0) && r.rhs()[i] != 0));
    let ok = system(6, 2, &[(vec![2, 4], 2)]).reduced();
    assert!((0..ok.row_count()).all(|i| ok.rows()[i].iter().any(|&v| v != 0)));
}

#[test]
fn free_variables_are_zero() {
    let x = system(5, 3, &[(vec![1, 0, 0], 3)]).solve().unwrap();
    assert_eq!(x, vec![3, 0, 0]);
}

fn row_strategy(n: usize) -> impl Strategy<Value = (Vec<u64>, u64)> {
    (proptest::collection::vec(0u64..12, n), 0u64..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn solver_matches_brute_force(mi in 0usize..4, n in 1usize..=3, rows in proptest::collection::vec(row_strategy(3), 0..=3)) {
        let m = MODULI[mi];
        let rows: Vec<(Vec<u64>, u64)> = rows.into_iter().map(|(c, r)| (c[..n].iter().map(|v| v % m).collect(), r % m)).collect();
        let sys = system(m, n, &rows);
        let got = sys.solve();
        if let Some(x) = &got {
            prop_assert!(sys.verify(x));
        }
        prop_assert_eq!(got.is_some(), brute(&sys));
        prop_assert_eq!(sys.reduced().solve().is_some(), got.is_some());
    }

    #[test]
    fn dependent_rows_change_nothing(mi in 0usize..4, rows in proptest::collection::vec(row_strategy(3), 1..=3), mult in proptest::collection::vec(0u64..6, 3)) {
        let m = MODULI[mi];
        let rows: Vec<(Vec<u64>, u64)> = rows.into_iter().map(|(c, r)| (c.iter().map(|v| v % m).collect(), r % m)).collect();
        let sys = system(m, 3, &rows);
        let mut combo = vec![0u64; 3];
        let mut rhs = 0;
        for (k, (c, r)) in rows.iter().enumerate() {
            for j in 0..3 {
                combo[j] = (combo[j] + mult[k] * c[j]) % m;
            }
            rhs = (rhs + mult[k] * r) % m;
        }
        let mut ext = sys.clone();
        ext.push_row_u(&combo, rhs);
        prop_assert_eq!(ext.solve().is_some(), sys.solve().is_some());
    }
}
